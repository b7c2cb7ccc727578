#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "movcat/category.hpp"
#include "movcat/dsl.hpp"

namespace fixture {

using namespace movcat;

inline Document doc(const std::string & text) { return parse_document(text); }

inline FinitePoset chain(std::size_t n)
{
    std::vector<std::string> names;
    std::vector<std::pair<std::size_t, std::size_t>> leq;
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back("c" + std::to_string(i));
        if (i > 0)
            leq.emplace_back(i - 1, i);
    }
    return FinitePoset::from_relation(names, leq);
}

/// a < c, b < c.
inline FinitePoset v_poset() { return FinitePoset::from_relation({"a", "b", "c"}, {{0, 2}, {1, 2}}); }

inline FinitePoset antichain(std::size_t n)
{
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i)
        names.push_back("x" + std::to_string(i));
    return FinitePoset::from_relation(names, {});
}

inline FiniteCategory terminal() { return poset_category(chain(1)); }

/// Singleton fibers on the V-poset, both arrows acting into the top fiber.
inline Copresheaf lambda_copresheaf()
{
    return doc("poset V { elements a b c ; leq a c ; leq b c }\n"
               "copresheaf L on V { at a = { x } ; at b = { y } ; at c = { z } ; act a_c { x => z } act b_c { y => z } }\n")
        .copresheaf("L");
}

inline Monoid z2() { return Monoid::validate({"e", "a"}, 0, {0, 1, 1, 0}); }

/// Category whose objects are finite sets {0..k-1} (k from `sizes`) and whose
/// arrows are the functions accepted by `keep`.
inline FiniteCategory concrete(const std::vector<std::size_t> & sizes, const std::string & prefix,
                               const std::function<bool(std::size_t, std::size_t, const std::vector<std::size_t> &)> & keep)
{
    CategoryBuilder b;
    for (auto k : sizes)
        b.add_object(prefix + std::to_string(k));
    struct Arrow {
        std::size_t dom, cod;
        std::vector<std::size_t> map;
        MorRef ref;
    };
    std::vector<Arrow> all;
    for (std::size_t d = 0; d < sizes.size(); ++d)
        for (std::size_t c = 0; c < sizes.size(); ++c) {
            std::vector<std::size_t> f(sizes[d], 0);
            while (true) {
                if (keep(sizes[d], sizes[c], f)) {
                    bool is_id = d == c;
                    for (std::size_t i = 0; i < f.size() && is_id; ++i)
                        is_id = f[i] == i;
                    Arrow a{d, c, f, FiniteCategory::identity(ObjRef{static_cast<std::uint32_t>(d)})};
                    if (!is_id) {
                        std::string name = prefix + "map" + std::to_string(d) + "_" + std::to_string(c) + "_";
                        for (auto v : f)
                            name += std::to_string(v);
                        a.ref = b.add_arrow(name, ObjRef{static_cast<std::uint32_t>(d)},
                                            ObjRef{static_cast<std::uint32_t>(c)});
                    }
                    all.push_back(std::move(a));
                }
                std::size_t i = 0;
                while (i < f.size() && ++f[i] == sizes[c])
                    f[i++] = 0;
                if (i == f.size())
                    break;
            }
        }
    auto find = [&](std::size_t d, std::size_t c, const std::vector<std::size_t> & m) {
        for (const auto & a : all)
            if (a.dom == d && a.cod == c && a.map == m)
                return a.ref;
        throw std::logic_error("composite not in the category");
    };
    for (const auto & f : all)
        for (const auto & g : all) {
            if (g.dom != f.cod)
                continue;
            std::vector<std::size_t> gf(f.map.size());
            for (std::size_t i = 0; i < gf.size(); ++i)
                gf[i] = g.map[f.map[i]];
            b.set_composite(g.ref, f.ref, find(f.dom, g.cod, gf));
        }
    return std::move(b).build();
}

/// Pointed sets {0..k-1}, base point 0, for the given sizes.
inline FiniteCategory pointed_sets(const std::vector<std::size_t> & sizes)
{
    return concrete(sizes, "S", [](std::size_t, std::size_t, const std::vector<std::size_t> & f) { return f[0] == 0; });
}

/// Cyclic groups Z/k and their homomorphisms.
inline FiniteCategory cyclic_groups(const std::vector<std::size_t> & orders)
{
    return concrete(orders, "Z", [](std::size_t n, std::size_t m, const std::vector<std::size_t> & f) {
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (f[(a + b) % n] != (f[a] + f[b]) % m)
                    return false;
        return true;
    });
}

} // namespace fixture
