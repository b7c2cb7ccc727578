#pragma once

// Independent reference evaluators used by the tests. They touch only the raw
// tables (dom, cod, comp over all morphism indices) and never the library's
// hom indexes or search code.

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "movcat/category.hpp"
#include "movcat/dsl.hpp"
#include "movcat/movability.hpp"
#include "movcat/systems.hpp"

namespace oracle {

using namespace movcat;

inline std::vector<MorRef> arrows(const FiniteCategory & c, ObjRef a, ObjRef b)
{
    std::vector<MorRef> out;
    for (std::uint32_t i = 0; i < c.morphism_count(); ++i)
        if (c.dom(MorRef{i}) == a && c.cod(MorRef{i}) == b)
            out.push_back(MorRef{i});
    return out;
}

inline std::vector<ObjRef> objects(const FiniteCategory & c)
{
    std::vector<ObjRef> out;
    for (std::uint32_t i = 0; i < c.object_count(); ++i)
        out.push_back(ObjRef{i});
    return out;
}

/// forall X exists M, m : M -> X forall Y, p : Y -> X exists u : M -> Y with p u = m,
/// the equation read through phi (identity when phi is null).
inline bool movable(const FiniteCategory & k, const FiniteCategory & l, const Functor * phi)
{
    auto ob = [&](ObjRef a) { return phi ? (*phi)(a) : a; };
    auto mo = [&](MorRef f) { return phi ? (*phi)(f) : f; };
    for (auto x : objects(k)) {
        bool exists_mover = false;
        for (auto m_obj : objects(k)) {
            for (auto m : arrows(k, m_obj, x)) {
                bool all_lift = true;
                for (auto y : objects(k)) {
                    for (auto p : arrows(k, y, x)) {
                        bool lifted = false;
                        for (auto u : arrows(l, ob(m_obj), ob(y)))
                            if (l.comp(mo(p), u) == mo(m))
                                lifted = true;
                        all_lift = all_lift && lifted;
                    }
                }
                exists_mover = exists_mover || all_lift;
            }
        }
        if (!exists_mover)
            return false;
    }
    return true;
}

inline bool strongly_movable(const FiniteCategory & k) { return movable(k, k, nullptr); }
inline bool movable_wrt(const Functor & phi) { return movable(phi.source(), phi.target(), &phi); }

/// Every principal down-set has a least element.
inline bool down_sets_have_minimum(const FinitePoset & p)
{
    const auto n = p.size();
    for (std::size_t x = 0; x < n; ++x) {
        std::vector<std::size_t> down;
        for (std::size_t y = 0; y < n; ++y)
            if (p.leq(y, x))
                down.push_back(y);
        const bool has_min = std::any_of(down.begin(), down.end(), [&](std::size_t m) {
            return std::all_of(down.begin(), down.end(), [&](std::size_t y) { return p.leq(m, y); });
        });
        if (!has_min)
            return false;
    }
    return true;
}

inline bool sm1(const InverseSystem & s)
{
    const auto & c = s.ambient();
    const auto n = s.size();
    for (std::size_t a = 0; a < n; ++a) {
        bool exists_a1 = false;
        for (std::size_t a1 = 0; a1 < n && !exists_a1; ++a1) {
            if (!s.leq(a, a1))
                continue;
            bool all_a2 = true;
            for (std::size_t a2 = 0; a2 < n && all_a2; ++a2) {
                if (!s.leq(a, a2))
                    continue;
                bool found = false;
                for (std::size_t up = 0; up < n && !found; ++up) {
                    if (!s.leq(a1, up) || !s.leq(a2, up))
                        continue;
                    for (auto r : arrows(c, s.object(a1), s.object(a2)))
                        if (s.bond(a, a1) == c.comp(s.bond(a, a2), r) &&
                            c.comp(r, s.bond(a1, up)) == s.bond(a2, up))
                            found = true;
                }
                all_a2 = found;
            }
            exists_a1 = all_a2;
        }
        if (!exists_a1)
            return false;
    }
    return true;
}

inline bool sm2(const InverseSystem & s, const SystemCone & cone)
{
    const auto & c = s.ambient();
    const auto & h = cone.presheaf();
    const auto n = s.size();
    for (std::size_t a = 0; a < n; ++a) {
        bool exists_a1 = false;
        for (std::size_t a1 = 0; a1 < n && !exists_a1; ++a1) {
            if (!s.leq(a, a1))
                continue;
            bool all_a2 = true;
            for (std::size_t a2 = 0; a2 < n && all_a2; ++a2) {
                if (!s.leq(a, a2))
                    continue;
                bool found = false;
                for (auto r : arrows(c, s.object(a1), s.object(a2)))
                    if (s.bond(a, a1) == c.comp(s.bond(a, a2), r) && h.act(r, cone.element(a1)) == cone.element(a2))
                        found = true;
                all_a2 = found;
            }
            exists_a1 = all_a2;
        }
        if (!exists_a1)
            return false;
    }
    return true;
}

inline bool cond1(const InverseSystem & s, const SystemCone & cone)
{
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = 0; b < s.size(); ++b)
            if (s.leq(a, b) && cone.presheaf().act(s.bond(a, b), cone.element(b)) != cone.element(a))
                return false;
    return true;
}

inline bool cond2(const InverseSystem & s, const SystemCone & cone)
{
    const auto & c = s.ambient();
    const auto & h = cone.presheaf();
    for (auto q : objects(c))
        for (std::uint32_t x = 0; x < h.fiber_size(q); ++x) {
            bool hit = false;
            for (std::size_t a = 0; a < s.size(); ++a)
                for (auto f : arrows(c, s.object(a), q))
                    hit = hit || h.act(f, cone.element(a)) == x;
            if (!hit)
                return false;
        }
    return true;
}

inline bool cond3(const InverseSystem & s, const SystemCone & cone)
{
    const auto & c = s.ambient();
    const auto & h = cone.presheaf();
    for (std::size_t a = 0; a < s.size(); ++a)
        for (auto q : objects(c))
            for (auto f : arrows(c, s.object(a), q))
                for (auto g : arrows(c, s.object(a), q)) {
                    if (h.act(f, cone.element(a)) != h.act(g, cone.element(a)))
                        continue;
                    bool merged = false;
                    for (std::size_t b = 0; b < s.size(); ++b)
                        merged = merged || (s.leq(a, b) && c.comp(f, s.bond(a, b)) == c.comp(g, s.bond(a, b)));
                    if (!merged)
                        return false;
                }
    return true;
}

/// Condition (*) read on the copresheaf directly.
inline bool star(const Copresheaf & h)
{
    const auto & c = h.base();
    for (auto q : objects(c))
        for (std::uint32_t x = 0; x < h.fiber_size(q); ++x) {
            bool exists = false;
            for (auto q1 : objects(c))
                for (std::uint32_t x1 = 0; x1 < h.fiber_size(q1); ++x1)
                    for (auto eta : arrows(c, q1, q)) {
                        if (h.act(eta, x1) != x)
                            continue;
                        bool all = true;
                        for (auto q2 : objects(c))
                            for (std::uint32_t x2 = 0; x2 < h.fiber_size(q2); ++x2)
                                for (auto eta1 : arrows(c, q2, q)) {
                                    if (h.act(eta1, x2) != x)
                                        continue;
                                    bool lift = false;
                                    for (auto eta2 : arrows(c, q1, q2))
                                        lift = lift || (c.comp(eta1, eta2) == eta && h.act(eta2, x1) == x2);
                                    all = all && lift;
                                }
                        exists = exists || all;
                    }
            if (!exists)
                return false;
        }
    return true;
}

/// Table isomorphism by backtracking over object bijections, then matching
/// morphisms inside each hom-set pair.
inline bool isomorphic(const FiniteCategory & a, const FiniteCategory & b)
{
    if (a.object_count() != b.object_count() || a.morphism_count() != b.morphism_count())
        return false;
    const auto n = a.object_count();
    std::vector<std::uint32_t> obj(n);
    std::vector<bool> used(n);

    auto try_morphisms = [&]() {
        std::vector<std::uint32_t> mor(a.morphism_count(), UINT32_MAX);
        std::vector<bool> taken(b.morphism_count());
        std::vector<MorRef> order;
        for (std::uint32_t i = 0; i < a.morphism_count(); ++i)
            order.push_back(MorRef{i});
        std::function<bool(std::size_t)> go = [&](std::size_t k) -> bool {
            if (k == order.size()) {
                for (std::uint32_t g = 0; g < a.morphism_count(); ++g)
                    for (std::uint32_t f = 0; f < a.morphism_count(); ++f) {
                        auto ab = a.try_compose(MorRef{g}, MorRef{f});
                        if (ab && b.comp(MorRef{mor[g]}, MorRef{mor[f]}).index != mor[ab->index])
                            return false;
                    }
                return true;
            }
            const auto f = order[k];
            const ObjRef d{obj[a.dom(f).index]}, cd{obj[a.cod(f).index]};
            for (auto t : arrows(b, d, cd)) {
                if (taken[t.index])
                    continue;
                if (a.is_identity(f) != b.is_identity(t))
                    continue;
                taken[t.index] = true;
                mor[f.index] = t.index;
                if (go(k + 1))
                    return true;
                taken[t.index] = false;
            }
            return false;
        };
        return go(0);
    };

    std::function<bool(std::size_t)> assign = [&](std::size_t i) -> bool {
        if (i == n)
            return try_morphisms();
        for (std::uint32_t j = 0; j < n; ++j) {
            if (used[j])
                continue;
            bool ok = true;
            for (std::size_t k = 0; k <= i && ok; ++k) {
                const ObjRef ai{static_cast<std::uint32_t>(i)}, ak{static_cast<std::uint32_t>(k)};
                const ObjRef bj{j}, bk{k == i ? j : obj[k]};
                ok = arrows(a, ai, ak).size() == arrows(b, bj, bk).size() &&
                     arrows(a, ak, ai).size() == arrows(b, bk, bj).size();
            }
            if (!ok)
                continue;
            used[j] = true;
            obj[i] = j;
            if (assign(i + 1))
                return true;
            used[j] = false;
        }
        return false;
    };
    return assign(0);
}

/// Re-checks every recorded equality of an SM witness.
inline std::string verify_sm(const InverseSystem & s, const SmWitness & w, const SystemCone * cone)
{
    const auto & c = s.ambient();
    if (w.per_index.size() != s.size())
        return "wrong number of indices";
    for (std::size_t a = 0; a < s.size(); ++a) {
        const auto & iw = w.per_index[a];
        const auto a1 = iw.chosen;
        if (!s.leq(a, a1))
            return "chosen index not above " + std::to_string(a);
        std::vector<bool> seen(s.size());
        for (const auto & st : iw.steps) {
            if (!s.leq(a, st.later))
                return "step index not above";
            seen[st.later] = true;
            if (c.dom(st.r) != s.object(a1) || c.cod(st.r) != s.object(st.later))
                return "r mistyped";
            if (c.comp(s.bond(a, st.later), st.r) != s.bond(a, a1))
                return "first equality fails";
            if (cone) {
                if (cone->presheaf().act(st.r, cone->element(a1)) != cone->element(st.later))
                    return "cone equality fails";
            } else {
                if (!st.upper || !s.leq(a1, *st.upper) || !s.leq(st.later, *st.upper))
                    return "upper index missing or not an upper bound";
                if (c.comp(st.r, s.bond(a1, *st.upper)) != s.bond(st.later, *st.upper))
                    return "second equality fails";
            }
        }
        for (std::size_t b = 0; b < s.size(); ++b)
            if (s.leq(a, b) && !seen[b])
                return "missing step";
    }
    return {};
}

inline std::string verify_star(const Copresheaf & h, const StarWitness & w)
{
    const auto & c = h.base();
    std::size_t total = 0;
    for (auto q : objects(c))
        total += h.fiber_size(q);
    if (w.entries.size() != total)
        return "wrong number of entries";
    for (const auto & e : w.entries) {
        if (c.dom(e.eta) != e.q1 || c.cod(e.eta) != e.q || h.act(e.eta, e.x1) != e.x)
            return "factorization wrong";
        std::size_t needed = 0;
        for (auto q2 : objects(c))
            for (std::uint32_t x2 = 0; x2 < h.fiber_size(q2); ++x2)
                for (auto eta1 : arrows(c, q2, e.q))
                    needed += h.act(eta1, x2) == e.x;
        if (e.lifts.size() != needed)
            return "lift count mismatch";
        for (const auto & l : e.lifts) {
            if (c.dom(l.eta1) != l.q2 || c.cod(l.eta1) != e.q || h.act(l.eta1, l.x2) != e.x)
                return "competitor wrong";
            if (c.dom(l.eta2) != e.q1 || c.cod(l.eta2) != l.q2)
                return "lift mistyped";
            if (c.comp(l.eta1, l.eta2) != e.eta || h.act(l.eta2, e.x1) != l.x2)
                return "lift equation fails";
        }
    }
    return {};
}

} // namespace oracle
