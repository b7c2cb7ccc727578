#include "doctest.h"
#include "movcat/generate.hpp"
#include "movcat/movability.hpp"
#include "movcat/systems.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace movcat;

namespace {

// p : B -> A; fork index 0 < 1, 0 < 2 with X0 = A, X1 = X2 = B.
const char * fork_text = R"(
category C { objects A B ; arrows p: B -> A ; }
poset I { elements i0 i1 i2 ; leq i0 i1 ; leq i0 i2 }
copresheaf H on C { at A = { q } ; at B = { b } ; act p { b => q } }
system S in C over I using copresheaf H {
  object i0 => A ; object i1 => B ; object i2 => B ;
  bond i0 i1 => p ; bond i0 i2 => p ;
  cone i0 => q ; cone i1 => b ; cone i2 => b ;
}
)";

// Discrete index over the V-poset, cone picks the two bottom elements of the
// Lambda copresheaf.
const char * lambda_text = R"(
poset V { elements a b c ; leq a c ; leq b c }
copresheaf L on V { at a = { x } ; at b = { y } ; at c = { z } ; act a_c { x => z } act b_c { y => z } }
poset I { elements i0 i1 }
system S in V over I using copresheaf L { object i0 => a ; object i1 => b ; cone i0 => x ; cone i1 => y ; }
)";

Document random_system(std::uint64_t seed, IndexShape shape)
{
    GenParams gp;
    gp.index_shape = shape;
    return generate_instance(InstanceKind::system, seed, gp);
}

} // namespace

TEST_SUITE("systems")
{
    TEST_CASE("validation")
    {
        const auto single = fixture::doc(R"(
poset P { elements x }
poset I { elements i }
system S in P over I { object i => x ; }
)");
        CHECK(single.system("S").system.directed());

        const auto fork = fixture::doc(fork_text);
        CHECK_FALSE(fork.system("S").system.directed());

        // p(0,2) must equal p(0,1) . p(1,2)
        const auto c = fixture::doc("category C { objects A B ; arrows f: A -> B ; arrows g: A -> B ; }").category("C");
        const auto chain = fixture::chain(3);
        std::vector<std::optional<MorRef>> bonds(9);
        const auto f = *c.find_morphism("f");
        const auto g = *c.find_morphism("g");
        bonds[0 * 3 + 1] = f;
        bonds[1 * 3 + 2] = FiniteCategory::identity(ObjRef{0});
        bonds[0 * 3 + 2] = g;
        try {
            InverseSystem::validate(c, chain, {ObjRef{1}, ObjRef{0}, ObjRef{0}}, bonds);
            FAIL("accepted");
        } catch (const ValidationError & e) {
            CHECK(e.has(ErrorKind::BondFunctorialityBroken));
        }
    }

    TEST_CASE("SM1 over directed indices uses the top")
    {
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const auto doc = random_system(seed, IndexShape::directed);
            const auto & d = doc.system("S");
            const auto r = check_sm1(d.system);
            REQUIRE(r.holds());
            CHECK(oracle::verify_sm(d.system, r.witness(), nullptr).empty());
            const auto s2 = check_sm2(d.system, *d.cone);
            REQUIRE(s2.holds());
            CHECK(oracle::verify_sm(d.system, s2.witness(), &*d.cone).empty());
        }
    }

    TEST_CASE("constant system")
    {
        const auto doc = fixture::doc(R"(
category C { objects A ; }
copresheaf H on C { at A = { x } ; }
poset I { elements i0 i1 i2 ; leq i0 i1 ; leq i0 i2 }
system S in C over I using copresheaf H { object i0 => A ; object i1 => A ; object i2 => A ;
  bond i0 i1 => id_A ; bond i0 i2 => id_A ; cone i0 => x ; cone i1 => x ; cone i2 => x ; }
)");
        const auto & d = doc.system("S");
        const auto r = check_sm2(d.system, *d.cone);
        REQUIRE(r.holds());
        for (const auto & iw : r.witness().per_index)
            for (const auto & st : iw.steps)
                CHECK(st.r == MorRef{0});
    }

    TEST_CASE("fork with a non-invertible bond fails SM1 at the bottom")
    {
        const auto doc = fixture::doc(fork_text);
        const auto & d = doc.system("S");
        const auto r = check_sm1(d.system);
        REQUIRE_FALSE(r.holds());
        CHECK(r.counterexample().index == 0);
        CHECK_FALSE(oracle::sm1(d.system));
    }

    TEST_CASE("fork with a faithful cone fails SM2")
    {
        // two distinct elements over B force r = id, which cannot map one to the other
        const auto doc = fixture::doc(R"(
category C { objects A B ; arrows p: B -> A ; }
poset I { elements i0 i1 i2 ; leq i0 i1 ; leq i0 i2 }
copresheaf H on C { at A = { q } ; at B = { b1 b2 } ; act p { b1 => q ; b2 => q } }
system S in C over I using copresheaf H {
  object i0 => A ; object i1 => B ; object i2 => B ;
  bond i0 i1 => p ; bond i0 i2 => p ;
  cone i0 => q ; cone i1 => b1 ; cone i2 => b2 ;
}
)");
        const auto & d = doc.system("S");
        CHECK_FALSE(check_sm2(d.system, *d.cone).holds());
        CHECK_FALSE(oracle::sm2(d.system, *d.cone));
    }

    TEST_CASE("SM2 with SM1 failing over a non-directed index")
    {
        // conditions 1 and 3 hold and SM2 holds, yet no index lies above both
        // branches of the fork, so SM1 fails
        const auto doc = fixture::doc(fork_text);
        const auto & d = doc.system("S");
        const auto rep = check_associated(d.system, *d.cone);
        CHECK(rep.cond1);
        CHECK(rep.cond3);
        CHECK(check_sm2(d.system, *d.cone).holds());
        CHECK(oracle::sm2(d.system, *d.cone));
        CHECK_FALSE(check_sm1(d.system).holds());
    }

    TEST_CASE("cone incompatibility is an error for SM2")
    {
        const auto doc = fixture::doc(R"(
category C { objects A B ; arrows p: B -> A ; }
poset I { elements i0 i1 ; leq i0 i1 }
copresheaf H on C { at A = { q r } ; at B = { b } ; act p { b => q } }
system S in C over I using copresheaf H { object i0 => A ; object i1 => B ; bond i0 i1 => p ;
  cone i0 => r ; cone i1 => b ; }
)");
        const auto & d = doc.system("S");
        const auto rep = check_associated(d.system, *d.cone);
        CHECK_FALSE(rep.cond1);
        REQUIRE(rep.cond1_failures.size() == 1);
        CHECK(rep.cond1_failures[0] == std::pair<std::size_t, std::size_t>{0, 1});
        try {
            check_sm2(d.system, *d.cone);
            FAIL("accepted");
        } catch (const Error & e) {
            CHECK(e.kind() == ErrorKind::ConeIncompatible);
        }
    }

    TEST_CASE("associated conditions")
    {
        // representable, single index at P, identity element
        const auto doc = fixture::doc(R"(
category C { objects P Q ; arrows f: P -> Q ; arrows g: P -> Q ; }
poset I { elements i }
copresheaf H on C { at P = { e } ; at Q = { f g } ; act f { e => f } act g { e => g } }
system S in C over I using copresheaf H { object i => P ; cone i => e ; }
)");
        const auto & d = doc.system("S");
        const auto rep = check_associated(d.system, *d.cone);
        CHECK(rep.associated());

        // a fresh element with no preimage breaks condition 2
        const auto bad = fixture::doc(R"(
category C { objects P Q ; arrows f: P -> Q ; }
poset I { elements i }
copresheaf H on C { at P = { e } ; at Q = { f stray } ; act f { e => f } }
system S in C over I using copresheaf H { object i => P ; cone i => e ; }
)");
        const auto & b = bad.system("S");
        const auto rb = check_associated(b.system, *b.cone);
        CHECK_FALSE(rb.cond2);
        REQUIRE(rb.cond2_failures.size() == 1);
        CHECK(rb.cond2_failures[0].second == 1);
    }

    TEST_CASE("condition (*)")
    {
        Rng rng(41);
        for (int i = 0; i < 30; ++i) {
            const auto c = random_category(rng, GenParams{}).category;
            const ObjRef p{static_cast<std::uint32_t>(rng.below(c.object_count()))};
            const auto h = Copresheaf::representable(c, p);
            const auto r = check_star(h);
            REQUIRE(r.holds());
            CHECK(oracle::verify_star(h, r.witness()).empty());
        }
        CHECK_FALSE(check_star(fixture::lambda_copresheaf()).holds());
        CHECK(check_star(Copresheaf::validate(fixture::terminal(), {{"x"}}, {{}})).holds());
    }

    TEST_CASE("Lambda triple is associated, SM2 holds, (*) fails")
    {
        const auto doc = fixture::doc(lambda_text);
        const auto & d = doc.system("S");
        CHECK(check_associated(d.system, *d.cone).associated());
        CHECK_FALSE(d.system.directed());
        CHECK(check_sm2(d.system, *d.cone).holds());
        CHECK_FALSE(check_star(d.cone->presheaf()).holds());
    }

    TEST_CASE("checkers agree with the naive oracles")
    {
        const IndexShape shapes[] = {IndexShape::any, IndexShape::non_directed, IndexShape::forked};
        for (std::uint64_t seed = 0; seed < 300; ++seed) {
            const auto doc = random_system(seed, shapes[seed % 3]);
            const auto & d = doc.system("S");
            const auto & cone = *d.cone;
            const auto sm1 = check_sm1(d.system, Execution::serial);
            REQUIRE(sm1.holds() == oracle::sm1(d.system));
            if (sm1.holds())
                CHECK(oracle::verify_sm(d.system, sm1.witness(), nullptr).empty());

            const auto rep = check_associated(d.system, cone);
            CHECK(rep.cond1 == oracle::cond1(d.system, cone));
            CHECK(rep.cond2 == oracle::cond2(d.system, cone));
            CHECK(rep.cond3 == oracle::cond3(d.system, cone));
            CHECK(rep.directed == d.system.directed());

            if (rep.cond1) {
                const auto sm2 = check_sm2(d.system, cone, Execution::serial);
                REQUIRE(sm2.holds() == oracle::sm2(d.system, cone));
                if (sm2.holds())
                    CHECK(oracle::verify_sm(d.system, sm2.witness(), &cone).empty());
                // forward direction
                if (sm1.holds())
                    CHECK(sm2.holds());
                CHECK(sm2 == check_sm2(d.system, cone, Execution::parallel));
            }
            CHECK(sm1 == check_sm1(d.system, Execution::parallel));
        }
    }

    TEST_CASE("(*) matches strong movability of the elements category")
    {
        for (std::uint64_t seed = 0; seed < 300; ++seed) {
            const auto doc = generate_instance(InstanceKind::copresheaf, seed);
            const auto & h = doc.copresheaf("H");
            const auto r = check_star(h, Execution::serial);
            CHECK(r.holds() == oracle::star(h));
            CHECK(r.holds() == check_strongly_movable(elements_category(h).category).holds());
            if (r.holds())
                CHECK(oracle::verify_star(h, r.witness()).empty());
            CHECK(r == check_star(h, Execution::parallel));
        }
    }

    TEST_CASE("generated forked indices are non-directed and reach SM1 failures")
    {
        int failures = 0;
        for (std::uint64_t seed = 0; seed < 60; ++seed) {
            const auto doc = random_system(seed, IndexShape::forked);
            const auto & d = doc.system("S");
            CHECK_FALSE(d.system.directed());
            failures += !check_sm1(d.system).holds();
        }
        // a forked bottom fails exactly when some bond out of it has no inverse
        CHECK(failures > 0);
    }
}
