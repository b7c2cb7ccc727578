#include "doctest.h"
#include "movcat/generate.hpp"
#include "movcat/movability.hpp"
#include "movcat/search.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace movcat;

namespace {

/// Every (obj_map, mor_map) assignment filtered by the functor laws.
std::size_t naive_functor_count(const FiniteCategory & k, const FiniteCategory & l)
{
    const auto nk = k.object_count(), mk = k.morphism_count();
    const auto nl = l.object_count(), ml = l.morphism_count();
    std::size_t count = 0;
    std::vector<std::uint32_t> om(nk, 0);
    while (true) {
        std::vector<std::uint32_t> mm(mk, 0);
        while (true) {
            bool ok = true;
            for (std::uint32_t f = 0; f < mk && ok; ++f) {
                const MorRef kf{f}, lf{mm[f]};
                ok = l.dom(lf).index == om[k.dom(kf).index] && l.cod(lf).index == om[k.cod(kf).index];
                if (ok && k.is_identity(kf))
                    ok = mm[f] == om[f];
            }
            for (std::uint32_t g = 0; g < mk && ok; ++g)
                for (std::uint32_t f = 0; f < mk && ok; ++f)
                    if (auto h = k.try_compose(MorRef{g}, MorRef{f}))
                        ok = l.comp(MorRef{mm[g]}, MorRef{mm[f]}).index == mm[h->index];
            count += ok;
            std::size_t i = 0;
            while (i < mk && ++mm[i] == ml)
                mm[i++] = 0;
            if (i == mk)
                break;
        }
        std::size_t i = 0;
        while (i < nk && ++om[i] == nl)
            om[i++] = 0;
        if (i == nk)
            break;
    }
    return count;
}

std::size_t naive_nat_trans_count(const Functor & f, const Functor & g)
{
    const auto & k = f.source();
    const auto & l = f.target();
    std::vector<std::vector<MorRef>> choices;
    for (std::uint32_t a = 0; a < k.object_count(); ++a)
        choices.push_back(oracle::arrows(l, f(ObjRef{a}), g(ObjRef{a})));
    std::size_t count = 0;
    std::vector<std::size_t> pick(choices.size(), 0);
    for (const auto & c : choices)
        if (c.empty())
            return 0;
    while (true) {
        bool ok = true;
        for (std::uint32_t h = 0; h < k.morphism_count() && ok; ++h) {
            const MorRef m{h};
            const auto a = k.dom(m).index, b = k.cod(m).index;
            ok = l.comp(g(m), choices[a][pick[a]]) == l.comp(choices[b][pick[b]], f(m));
        }
        count += ok;
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == choices[i].size())
            pick[i++] = 0;
        if (i == pick.size())
            break;
    }
    return count;
}

FiniteCategory tiny(Rng & rng)
{
    GenParams gp;
    gp.max_objects = 3;
    gp.max_morphisms = 8;
    for (;;) {
        auto c = random_category(rng, gp).category;
        if (c.morphism_count() <= 6)
            return c;
    }
}

} // namespace

TEST_SUITE("search")
{
    TEST_CASE("functors out of the terminal category")
    {
        const auto l = poset_category(fixture::v_poset());
        CHECK(enumerate_functors(fixture::terminal(), l).functors.size() == 3);
    }

    TEST_CASE("monotone self-maps of chain2")
    {
        const auto c2 = poset_category(fixture::chain(2));
        CHECK(enumerate_functors(c2, c2).functors.size() == 3);
    }

    TEST_CASE("budget zero truncates immediately")
    {
        const auto c2 = poset_category(fixture::chain(2));
        const auto e = enumerate_functors(c2, c2, 0);
        CHECK(e.functors.empty());
        CHECK(e.truncated);
    }

    TEST_CASE("exact budget is not truncation")
    {
        const auto c2 = poset_category(fixture::chain(2));
        const auto e = enumerate_functors(c2, c2, 3);
        CHECK(e.functors.size() == 3);
        CHECK_FALSE(e.truncated);
    }

    TEST_CASE("functor counts match the naive filter")
    {
        Rng rng(31);
        for (int i = 0; i < 60; ++i) {
            const auto k = tiny(rng);
            const auto l = tiny(rng);
            const auto e = enumerate_functors(k, l);
            CHECK(e.functors.size() == naive_functor_count(k, l));
            for (const auto & f : e.functors)
                CHECK_NOTHROW(Functor::validate(f.source(), f.target(), {f.obj_map().begin(), f.obj_map().end()},
                                                {f.mor_map().begin(), f.mor_map().end()}));
            CHECK(std::is_sorted(e.functors.begin(), e.functors.end(), [](const Functor & a, const Functor & b) {
                const auto ao = a.obj_map(), bo = b.obj_map();
                const auto am = a.mor_map(), bm = b.mor_map();
                return std::lexicographical_compare(ao.begin(), ao.end(), bo.begin(), bo.end()) ||
                       (std::equal(ao.begin(), ao.end(), bo.begin(), bo.end()) &&
                        std::lexicographical_compare(am.begin(), am.end(), bm.begin(), bm.end()));
            }));
        }
    }

    TEST_CASE("natural transformation counts match the naive filter")
    {
        Rng rng(32);
        const auto c2 = poset_category(fixture::chain(2));
        for (int i = 0; i < 40; ++i) {
            const auto k = tiny(rng);
            for (const auto & target : {c2, tiny(rng)}) {
                const auto fs = enumerate_functors(k, target, 6).functors;
                for (const auto & f : fs)
                    for (const auto & g : fs) {
                        const auto e = enumerate_nat_trans(f, g);
                        CHECK(e.transformations.size() == naive_nat_trans_count(f, g));
                        for (const auto & t : e.transformations)
                            CHECK_NOTHROW(NaturalTransformation::validate(
                                f, g, {t.components().begin(), t.components().end()}));
                    }
            }
        }
    }

    TEST_CASE("identity transformation and discrete targets")
    {
        const auto c3 = poset_category(fixture::chain(3));
        const auto id = Functor::identity(c3);
        const auto e = enumerate_nat_trans(id, id);
        CHECK(std::find(e.transformations.begin(), e.transformations.end(), NaturalTransformation::identity(id)) !=
              e.transformations.end());

        const auto d = poset_category(fixture::antichain(2));
        const auto f = Functor::constant(fixture::terminal(), d, ObjRef{0});
        const auto g = Functor::constant(fixture::terminal(), d, ObjRef{1});
        CHECK(enumerate_nat_trans(f, g).transformations.empty());
    }

    TEST_CASE("domination examples")
    {
        const auto c2 = poset_category(fixture::chain(2));
        const auto c3 = poset_category(fixture::chain(3));
        const auto v = poset_category(fixture::v_poset());

        const auto self = find_functorial_domination(c3, c3);
        REQUIRE(self.status == SearchStatus::found);
        CHECK(compose_functors(self.g, self.f) == Functor::identity(c3));

        const auto d = find_functorial_domination(c2, c3);
        REQUIRE(d.status == SearchStatus::found);
        CHECK(compose_functors(d.g, d.f) == Functor::identity(c2));

        CHECK(find_functorial_domination(v, c3).status == SearchStatus::none);
        for (std::size_t n = 1; n <= 4; ++n)
            CHECK(find_weak_domination(v, poset_category(fixture::chain(n))).status == SearchStatus::none);

        const auto w = find_weak_domination(v, v);
        REQUIRE(w.status == SearchStatus::found);
        CHECK(w.strict);
        CHECK(w.f == Functor::identity(v));
    }

    TEST_CASE("remark law and soundness of none")
    {
        Rng rng(33);
        for (int i = 0; i < 80; ++i) {
            const auto k = tiny(rng);
            const auto l = tiny(rng);
            const auto strict = find_functorial_domination(k, l);
            const auto weak = find_weak_domination(k, l);
            if (strict.status == SearchStatus::found)
                CHECK(weak.status == SearchStatus::found);

            // naive: any functor pair with a transformation G.F => 1
            bool exists = false;
            const auto fs = enumerate_functors(k, l).functors;
            const auto gs = enumerate_functors(l, k).functors;
            const auto id = Functor::identity(k);
            for (const auto & f : fs)
                for (const auto & g : gs)
                    exists = exists || naive_nat_trans_count(compose_functors(g, f), id) > 0;
            if (weak.status != SearchStatus::truncated)
                CHECK(exists == (weak.status == SearchStatus::found));
            if (weak.status == SearchStatus::found)
                CHECK_NOTHROW(NaturalTransformation::validate(compose_functors(weak.g, weak.f), id,
                                                              {weak.phi.components().begin(),
                                                               weak.phi.components().end()}));
        }
    }

    TEST_CASE("coproduct-coslice domination on the diamond")
    {
        auto doc = fixture::doc("poset D { elements bot a b top ; leq bot a ; leq bot b ; leq a top ; leq b top }\n");
        const auto c = doc.category("D");
        const auto des = join_coproducts(c);
        const auto t = coproduct_coslice_domination(des, *c.find_object("a"), *c.find_object("b"));
        CHECK_NOTHROW(NaturalTransformation::validate(compose_functors(t.g, t.f), Functor::identity(t.sum.category),
                                                      {t.phi.components().begin(), t.phi.components().end()}));

        const auto term = fixture::terminal();
        const auto tt = coproduct_coslice_domination(join_coproducts(term), ObjRef{0}, ObjRef{0});
        CHECK(tt.sum.category.object_count() == 1);

        CHECK_THROWS_AS(coproduct_coslice_domination(CoproductDesignation::validate(c, {}), ObjRef{1}, ObjRef{2}),
                        Error);
    }

    TEST_CASE("join designation requires joins")
    {
        CHECK_THROWS_AS(join_coproducts(poset_category(fixture::antichain(2))), Error);
    }

    TEST_CASE("composed coproduct law on random semilattices")
    {
        Rng rng(34);
        for (int i = 0; i < 40; ++i) {
            const auto p = random_join_semilattice(rng, 5);
            const auto c = poset_category(p);
            const auto des = join_coproducts(c);
            const ObjRef x1{static_cast<std::uint32_t>(rng.below(p.size()))};
            const ObjRef x2{static_cast<std::uint32_t>(rng.below(p.size()))};
            const auto t = coproduct_coslice_domination(des, x1, x2);
            const auto wl = product_transport(t.product, {check_strongly_movable(t.left.category).witness(),
                                                          check_strongly_movable(t.right.category).witness()});
            const auto wk = weak_domination_transfer(t.f, t.g, t.phi, wl);
            CHECK(verify_strongly_movable(t.sum.category, wk).empty());
        }
    }
}
