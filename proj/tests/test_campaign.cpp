#include "doctest.h"
#include "movcat/campaign.hpp"
#include "movcat/generate.hpp"
#include "support/oracles.hpp"

using namespace movcat;

TEST_SUITE("generate")
{
    TEST_CASE("instances are deterministic")
    {
        for (auto kind : {InstanceKind::poset, InstanceKind::monoid, InstanceKind::category, InstanceKind::copresheaf,
                          InstanceKind::system, InstanceKind::domination_pair})
            for (std::uint64_t seed = 0; seed < 30; ++seed)
                CHECK(serialize_document(generate_instance(kind, seed)) ==
                      serialize_document(generate_instance(kind, seed)));
    }

    TEST_CASE("caps are respected")
    {
        GenParams gp;
        gp.max_objects = 3;
        gp.max_morphisms = 7;
        for (std::uint64_t seed = 0; seed < 300; ++seed) {
            const auto c = generate_instance(InstanceKind::category, seed, gp).category("K");
            CHECK(c.object_count() <= 3);
            CHECK(c.morphism_count() <= 7);
        }
        for (std::uint64_t seed = 0; seed < 300; ++seed) {
            const auto doc = generate_instance(InstanceKind::copresheaf, seed);
            const auto & h = doc.copresheaf("H");
            for (std::uint32_t q = 0; q < h.base().object_count(); ++q)
                CHECK(h.fiber_size(ObjRef{q}) <= 3);
        }
    }

    TEST_CASE("parameters out of range")
    {
        GenParams gp;
        gp.max_objects = 0;
        CHECK_THROWS_AS(generate_instance(InstanceKind::poset, 0, gp), Error);
        gp.max_objects = 5;
        gp.max_morphisms = 2;
        CHECK_THROWS_AS(generate_instance(InstanceKind::poset, 0, gp), Error);
        CHECK_THROWS_AS(parse_instance_kind("lattice"), Error);
        CHECK(parse_instance_kind("domination-pair") == InstanceKind::domination_pair);
    }

    TEST_CASE("non-directed systems when requested")
    {
        GenParams gp;
        gp.index_shape = IndexShape::non_directed;
        for (std::uint64_t seed = 0; seed < 100; ++seed)
            CHECK_FALSE(generate_instance(InstanceKind::system, seed, gp).system("S").system.directed());
        gp.index_shape = IndexShape::directed;
        for (std::uint64_t seed = 0; seed < 100; ++seed)
            CHECK(generate_instance(InstanceKind::system, seed, gp).system("S").system.directed());
    }

    TEST_CASE("generated cones satisfy condition 1")
    {
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const auto doc = generate_instance(InstanceKind::system, seed);
            const auto & d = doc.system("S");
            REQUIRE(d.cone.has_value());
            CHECK(oracle::cond1(d.system, *d.cone));
        }
    }

    TEST_CASE("mix of category sources")
    {
        Rng rng(61);
        int posets = 0, monoids = 0, other = 0;
        for (int i = 0; i < 400; ++i) {
            const auto g = random_category(rng, GenParams{});
            posets += std::holds_alternative<FinitePoset>(g.source);
            monoids += std::holds_alternative<Monoid>(g.source);
            other += std::holds_alternative<FiniteCategory>(g.source);
        }
        CHECK(posets > 150);
        CHECK(monoids > 60);
        CHECK(other > 60);
    }

    TEST_CASE("join semilattices have all joins")
    {
        Rng rng(62);
        for (int i = 0; i < 100; ++i) {
            const auto p = random_join_semilattice(rng, 5);
            CHECK(p.size() <= 5);
            CHECK_NOTHROW(join_coproducts(poset_category(p)));
        }
    }
}

TEST_SUITE("campaign")
{
    TEST_CASE("clean campaigns")
    {
        for (auto name : {"product", "transfer", "coslice", "initial", "poset-oracle", "coproduct-coslice"}) {
            const auto r = run_campaign(name, 0, 39);
            CHECK_MESSAGE(r.clean(), name);
            CHECK(r.passes + r.failures.size() == r.instances);
            CHECK(r.instances == 40);
        }
    }

    TEST_CASE("negated law fails every instance")
    {
        CampaignParams p;
        p.negate_law = true;
        for (const auto & t : theorems()) {
            const auto r = run_campaign(t.name, 0, 9, p);
            CHECK(r.failures.size() == 10);
            CHECK(r.passes == 0);
        }
    }

    TEST_CASE("failures replay")
    {
        CampaignParams p;
        p.negate_law = true;
        const auto r = run_campaign("coslice", 3, 7, p);
        REQUIRE(r.failures.size() == 5);
        for (const auto & f : r.failures) {
            CHECK_FALSE(replay("coslice", f.document, p).holds);
            CHECK(f.document.find("# seed " + std::to_string(f.seed)) != std::string::npos);
        }
        // real failures of the backward SM law replay as failures
        const auto sm = run_campaign("sm-bridge", 0, 59);
        for (const auto & f : sm.failures)
            CHECK_FALSE(replay("sm-bridge", f.document).holds);
    }

    TEST_CASE("failures are sorted by seed")
    {
        CampaignParams p;
        p.negate_law = true;
        const auto r = run_campaign("initial", 10, 40, p);
        for (std::size_t i = 1; i < r.failures.size(); ++i)
            CHECK(r.failures[i - 1].seed < r.failures[i].seed);
    }

    TEST_CASE("reports are reproducible and thread-independent")
    {
        for (const auto & t : theorems()) {
            set_thread_count(1);
            const auto a = run_campaign(t.name, 0, 24, {}, Execution::serial).to_json();
            set_thread_count(4);
            const auto b = run_campaign(t.name, 0, 24, {}, Execution::parallel).to_json();
            set_thread_count(0);
            CHECK(a == b);
        }
    }

    TEST_CASE("unknown theorem")
    {
        CHECK_THROWS_AS(find_theorem("fermat"), Error);
        CHECK_THROWS_AS(run_campaign("fermat", 0, 1), Error);
    }

    TEST_CASE("wall time only on request")
    {
        CHECK(run_campaign("initial", 0, 2).to_json().find("wall_time") == std::string::npos);
        CampaignParams p;
        p.timing = true;
        CHECK(run_campaign("initial", 0, 2, p).to_json().find("wall_time_seconds") != std::string::npos);
    }

    TEST_CASE("instance text round-trips its params")
    {
        const auto & t = find_theorem("coproduct-coslice");
        const auto in = t.generate(5, {});
        const auto back = parse_instance(in.text(t.name, 5));
        CHECK(back.params == in.params);
        CHECK(back.document == in.document);
    }
}
