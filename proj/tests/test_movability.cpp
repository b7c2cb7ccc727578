#include "doctest.h"
#include "movcat/generate.hpp"
#include "movcat/search.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace movcat;

namespace {

FiniteCategory small_category(Rng & rng)
{
    GenParams gp;
    gp.max_objects = 4;
    gp.max_morphisms = 16;
    return random_category(rng, gp).category;
}

} // namespace

TEST_SUITE("movability")
{
    TEST_CASE("initial object gives movers at the initial object")
    {
        Rng rng(21);
        for (int i = 0; i < 50; ++i) {
            const auto k = adjoin_initial_object(small_category(rng));
            const auto r = check_strongly_movable(k);
            REQUIRE(r.holds());
            for (const auto & w : r.witness().objects)
                CHECK(w.mover == ObjRef{0});
        }
    }

    TEST_CASE("chain-3 movers are the minimum")
    {
        const auto c = poset_category(fixture::chain(3));
        const auto r = check_strongly_movable(c);
        REQUIRE(r.holds());
        for (const auto & w : r.witness().objects)
            CHECK(w.mover == ObjRef{0});
        CHECK(verify_strongly_movable(c, r.witness()).empty());
        CHECK(oracle::strongly_movable(c));
    }

    TEST_CASE("V-poset fails at its top")
    {
        const auto v = poset_category(fixture::v_poset());
        const auto r = check_strongly_movable(v);
        REQUIRE_FALSE(r.holds());
        CHECK(v.object_name(r.counterexample().object) == "c");
        CHECK_FALSE(oracle::strongly_movable(v));
        // every recorded defeat really has no lift
        for (const auto & d : r.counterexample().defeats) {
            bool lifts = false;
            for (auto u : oracle::arrows(v, d.mover, v.dom(d.p)))
                lifts = lifts || v.comp(d.p, u) == d.m;
            CHECK_FALSE(lifts);
        }
    }

    TEST_CASE("pointed sets and cyclic groups are strongly movable")
    {
        for (const auto & k : {fixture::pointed_sets({1, 2}), fixture::pointed_sets({1, 2, 3}),
                               fixture::cyclic_groups({1, 2, 3}), fixture::cyclic_groups({1, 2, 4})}) {
            const auto r = check_strongly_movable(k);
            REQUIRE(r.holds());
            CHECK(verify_strongly_movable(k, r.witness()).empty());
            CHECK(oracle::strongly_movable(k));
        }
    }

    TEST_CASE("agreement with the naive oracle")
    {
        Rng rng(1);
        for (int i = 0; i < 300; ++i) {
            const auto k = small_category(rng);
            const auto r = check_strongly_movable(k, Execution::serial);
            REQUIRE(r.holds() == oracle::strongly_movable(k));
            if (r.holds())
                CHECK(verify_strongly_movable(k, r.witness()).empty());
        }
    }

    TEST_CASE("relative movability")
    {
        Rng rng(2);
        for (int i = 0; i < 150; ++i) {
            const auto k = small_category(rng);
            const auto to_point = Functor::constant(k, fixture::terminal(), ObjRef{0});
            CHECK(check_movable_wrt(to_point).holds());

            const auto id = Functor::identity(k);
            const auto rel = check_movable_wrt(id);
            const auto strong = check_strongly_movable(k);
            CHECK(rel == strong);
            CHECK(oracle::movable_wrt(id) == strong.holds());
        }
    }

    TEST_CASE("relative movability against the oracle on random functors")
    {
        Rng rng(8);
        int checked = 0;
        for (int i = 0; i < 200 && checked < 100; ++i) {
            const auto k = small_category(rng);
            const auto l = small_category(rng);
            const auto fs = enumerate_functors(k, l, 64);
            if (fs.functors.empty())
                continue;
            const auto & phi = fs.functors[rng.below(fs.functors.size())];
            const auto r = check_movable_wrt(phi, Execution::serial);
            CHECK(r.holds() == oracle::movable_wrt(phi));
            if (r.holds())
                CHECK(verify_movable_wrt(phi, r.witness()).empty());
            ++checked;
        }
        CHECK(checked >= 50);
    }

    TEST_CASE("strong movability implies movability along any functor")
    {
        Rng rng(4);
        for (int i = 0; i < 120; ++i) {
            const auto k = small_category(rng);
            const auto r = check_strongly_movable(k);
            if (!r.holds())
                continue;
            const auto l = small_category(rng);
            const auto fs = enumerate_functors(k, l, 16);
            for (const auto & phi : fs.functors) {
                CHECK(check_movable_wrt(phi).holds());
                // pushing the strong witness along phi verifies
                const auto w = postcompose_transfer(Functor::identity(k), r.witness(), phi);
                CHECK(verify_movable_wrt(phi, w).empty());
            }
        }
    }

    TEST_CASE("postcompose transfer")
    {
        Rng rng(6);
        for (int i = 0; i < 100; ++i) {
            const auto k = small_category(rng);
            const auto l = small_category(rng);
            const auto fs = enumerate_functors(k, l, 8);
            for (const auto & phi : fs.functors) {
                const auto r = check_movable_wrt(phi);
                if (!r.holds())
                    continue;
                CHECK(postcompose_transfer(phi, r.witness(), Functor::identity(l)) == r.witness());
                const auto collapse = Functor::constant(l, fixture::terminal(), ObjRef{0});
                const auto w = postcompose_transfer(phi, r.witness(), collapse);
                for (const auto & o : w.objects)
                    for (const auto & [p, u] : o.lifts)
                        CHECK(u == MorRef{0});
                const auto l2 = small_category(rng);
                for (const auto & f : enumerate_functors(l, l2, 4).functors)
                    CHECK(verify_movable_wrt(compose_functors(f, phi),
                                             postcompose_transfer(phi, r.witness(), f))
                              .empty());
            }
        }
    }

    TEST_CASE("space movability")
    {
        Rng rng(9);
        for (int i = 0; i < 60; ++i) {
            const auto c = small_category(rng);
            const ObjRef p{static_cast<std::uint32_t>(rng.below(c.object_count()))};
            CHECK(space_movability(Copresheaf::representable(c, p)).holds());

            const auto h = random_copresheaf(rng, c, 3);
            const auto el = elements_category(h);
            CHECK(space_movability(h) == check_movable_wrt(el.forget));
            CHECK(space_movability(h).holds() == oracle::movable_wrt(el.forget));
        }
        const auto lam = fixture::lambda_copresheaf();
        CHECK(space_movability(lam).holds() == oracle::movable_wrt(elements_category(lam).forget));

        const auto single = Copresheaf::validate(fixture::terminal(), {{"x"}}, {{}});
        CHECK(space_movability(single).holds());
    }

    TEST_CASE("weak domination transfer")
    {
        const auto c2 = poset_category(fixture::chain(2));
        const auto c3 = poset_category(fixture::chain(3));

        const auto self = check_strongly_movable(c3).witness();
        const auto id = Functor::identity(c3);
        CHECK(weak_domination_transfer(id, id, NaturalTransformation::identity(id), self) == self);

        const auto d = find_functorial_domination(c2, c3);
        REQUIRE(d.status == SearchStatus::found);
        const auto w = weak_domination_transfer(d.f, d.g, NaturalTransformation::identity(Functor::identity(c2)),
                                                self);
        CHECK(verify_strongly_movable(c2, w).empty());
        CHECK(check_strongly_movable(c2).holds());
    }

    TEST_CASE("transfer on generated dominations")
    {
        int exercised = 0;
        for (std::uint64_t seed = 0; seed < 150; ++seed) {
            const auto doc = generate_instance(InstanceKind::domination_pair, seed);
            const auto k = doc.category("K");
            const auto l = doc.category("L");
            const auto wl = check_strongly_movable(l);
            const auto weak = find_weak_domination(k, l);
            if (weak.status != SearchStatus::found || !wl.holds())
                continue;
            const auto w = weak_domination_transfer(weak.f, weak.g, weak.phi, wl.witness());
            CHECK(oracle::strongly_movable(k));
            // re-check every equation independently
            for (std::uint32_t x = 0; x < k.object_count(); ++x) {
                const auto & o = w.objects[x];
                CHECK(k.cod(o.m) == ObjRef{x});
                for (const auto & [p, u] : o.lifts)
                    CHECK(k.comp(p, u) == o.m);
            }
            ++exercised;
        }
        CHECK(exercised >= 50);
    }

    TEST_CASE("product transport both ways")
    {
        const auto c2 = poset_category(fixture::chain(2));
        const auto c3 = poset_category(fixture::chain(3));
        const auto p = product_category({c2, c3});
        const auto w2 = check_strongly_movable(c2).witness();
        const auto w3 = check_strongly_movable(c3).witness();
        const auto wp = product_transport(p, {w2, w3});
        CHECK(verify_strongly_movable(p.category, wp).empty());
        CHECK(verify_strongly_movable(c2, factor_transport(p, wp, 0)).empty());
        CHECK(verify_strongly_movable(c3, factor_transport(p, wp, 1)).empty());

        const auto t = fixture::terminal();
        const auto pt = product_category({t, t});
        const auto wt = check_strongly_movable(t).witness();
        CHECK(product_transport(pt, {wt, wt}) == check_strongly_movable(pt.category).witness());

        const auto v = poset_category(fixture::v_poset());
        CHECK_FALSE(check_strongly_movable(product_category({v, c3}).category).holds());
    }

    TEST_CASE("product law on random factors")
    {
        Rng rng(12);
        for (int i = 0; i < 100; ++i) {
            const auto a = small_category(rng);
            const auto b = small_category(rng);
            const auto p = product_category({a, b});
            const bool both = oracle::strongly_movable(a) && oracle::strongly_movable(b);
            CHECK(check_strongly_movable(p.category).holds() == both);
        }
    }

    TEST_CASE("poset oracle")
    {
        CHECK(check_strongly_movable(poset_category(fixture::chain(3))).holds());
        CHECK_FALSE(check_strongly_movable(poset_category(fixture::v_poset())).holds());
        Rng rng(14);
        for (int i = 0; i < 300; ++i) {
            const auto p = random_poset(rng, rng.range(1, 5), 25);
            CHECK(check_strongly_movable(poset_category(p)).holds() == oracle::down_sets_have_minimum(p));
        }
    }

    TEST_CASE("serial and parallel results are identical")
    {
        Rng rng(15);
        for (int i = 0; i < 100; ++i) {
            const auto k = small_category(rng);
            CHECK(check_strongly_movable(k, Execution::serial) == check_strongly_movable(k, Execution::parallel));
        }
    }

    TEST_CASE("witnesses are lexicographically least")
    {
        Rng rng(16);
        for (int i = 0; i < 60; ++i) {
            const auto k = small_category(rng);
            const auto r = check_strongly_movable(k);
            if (!r.holds())
                continue;
            for (std::uint32_t x = 0; x < k.object_count(); ++x) {
                const auto & o = r.witness().objects[x];
                // no smaller (M, m) candidate admits all lifts
                for (std::uint32_t mo = 0; mo <= o.mover.index; ++mo)
                    for (auto m : oracle::arrows(k, ObjRef{mo}, ObjRef{x})) {
                        if (ObjRef{mo} == o.mover && m >= o.m)
                            break;
                        bool all = true;
                        for (std::uint32_t y = 0; y < k.object_count(); ++y)
                            for (auto p : oracle::arrows(k, ObjRef{y}, ObjRef{x})) {
                                bool lift = false;
                                for (auto u : oracle::arrows(k, ObjRef{mo}, ObjRef{y}))
                                    lift = lift || k.comp(p, u) == m;
                                all = all && lift;
                            }
                        CHECK_FALSE(all);
                    }
                for (const auto & [p, u] : o.lifts)
                    for (auto smaller : oracle::arrows(k, o.mover, k.dom(p))) {
                        if (smaller >= u)
                            break;
                        CHECK(k.comp(p, smaller) != o.m);
                    }
            }
        }
    }
}
