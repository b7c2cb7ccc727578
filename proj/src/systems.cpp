#include "movcat/systems.hpp"

#include <algorithm>

namespace movcat {

InverseSystem InverseSystem::validate(FiniteCategory ambient, FinitePoset index, std::vector<ObjRef> objects,
                                      std::vector<std::optional<MorRef>> bonds)
{
    ViolationList v;
    const auto n = index.size();
    if (objects.size() != n) {
        v.add(ErrorKind::SystemTypeError, "system has " + std::to_string(objects.size()) + " objects for " +
                                              std::to_string(n) + " indices");
        v.throw_if_any();
    }
    if (bonds.size() != n * n) {
        v.add(ErrorKind::SystemTypeError, "bond table has the wrong size");
        v.throw_if_any();
    }
    for (std::size_t a = 0; a < n; ++a)
        if (!ambient.valid(objects[a]))
            v.add(ErrorKind::SystemTypeError, "index " + index.name(a) + " names no object of the ambient category");
    v.throw_if_any();

    std::vector<MorRef> table(n * n, MorRef{0});
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const auto & bond = bonds[a * n + b];
            const auto where = " (" + index.name(a) + ", " + index.name(b) + ")";
            if (a == b) {
                const MorRef id = FiniteCategory::identity(objects[a]);
                if (bond && *bond != id)
                    v.add(ErrorKind::BondFunctorialityBroken, "bond" + where + " is not the identity");
                table[a * n + b] = id;
                continue;
            }
            if (!index.leq(a, b)) {
                if (bond)
                    v.add(ErrorKind::SystemTypeError, "bond" + where + " given for incomparable or reversed indices");
                continue;
            }
            if (!bond) {
                v.add(ErrorKind::SystemTypeError, "missing bond" + where);
                continue;
            }
            if (!ambient.valid(*bond) || ambient.dom(*bond) != objects[b] || ambient.cod(*bond) != objects[a]) {
                v.add(ErrorKind::SystemTypeError, "bond" + where + " must run from X_" + index.name(b) + " to X_" +
                                                      index.name(a));
                continue;
            }
            table[a * n + b] = *bond;
        }
    }
    v.throw_if_any();

    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                if (index.leq(a, b) && index.leq(b, c) &&
                    ambient.comp(table[a * n + b], table[b * n + c]) != table[a * n + c])
                    v.add(ErrorKind::BondFunctorialityBroken, "p(" + index.name(a) + "," + index.name(b) + ") . p(" +
                                                                  index.name(b) + "," + index.name(c) + ") != p(" +
                                                                  index.name(a) + "," + index.name(c) + ")");
    v.throw_if_any();

    InverseSystem s;
    s.ambient_ = std::move(ambient);
    s.index_ = std::move(index);
    s.objects_ = std::move(objects);
    s.bonds_ = std::move(table);
    return s;
}

SystemCone SystemCone::validate(const InverseSystem & s, Copresheaf h, std::vector<std::uint32_t> elements)
{
    ViolationList v;
    if (!(h.base() == s.ambient()))
        v.add(ErrorKind::SystemTypeError, "cone copresheaf lives on a different category");
    if (elements.size() != s.size())
        v.add(ErrorKind::SystemTypeError, "cone needs one element per index");
    v.throw_if_any();
    for (std::size_t a = 0; a < s.size(); ++a)
        if (elements[a] >= h.fiber_size(s.object(a)))
            v.add(ErrorKind::SystemTypeError, "cone element at " + s.index().name(a) + " is out of range");
    v.throw_if_any();

    SystemCone c;
    c.h_ = std::move(h);
    c.elements_ = std::move(elements);
    return c;
}

namespace {
    /// Runs `solve(i)` for every i, returning all witnesses or the first
    /// counterexample in index order.
    template <typename W, typename Cx, typename Solve>
    std::variant<std::vector<W>, Cx> for_all(std::size_t n, Execution exec, Solve solve)
    {
        std::vector<W> out;
        if (exec == Execution::serial) {
            for (std::size_t i = 0; i < n; ++i) {
                auto r = solve(i);
                if (auto * cx = std::get_if<Cx>(&r))
                    return std::move(*cx);
                out.push_back(std::move(std::get<W>(r)));
            }
            return out;
        }
        std::vector<std::optional<std::variant<W, Cx>>> results(n);
        const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < count; ++i)
            results[static_cast<std::size_t>(i)] = solve(static_cast<std::size_t>(i));
        for (auto & r : results) {
            if (auto * cx = std::get_if<Cx>(&*r))
                return std::move(*cx);
            out.push_back(std::move(std::get<W>(*r)));
        }
        return out;
    }

    template <typename Step>
    SmResult check_sm(const InverseSystem & s, Execution exec, Step step)
    {
        const auto & c = s.ambient();
        const auto n = s.size();
        auto solve = [&](std::size_t a) -> std::variant<SmIndexWitness, SmCounterexample> {
            SmCounterexample cx{a, {}};
            for (std::size_t a1 = 0; a1 < n; ++a1) {
                if (!s.leq(a, a1))
                    continue;
                SmIndexWitness w{a1, {}};
                bool ok = true;
                for (std::size_t a2 = 0; a2 < n && ok; ++a2) {
                    if (!s.leq(a, a2))
                        continue;
                    auto found = step(c, a, a1, a2);
                    if (!found) {
                        cx.defeats.emplace_back(a1, a2);
                        ok = false;
                    } else {
                        w.steps.push_back(*found);
                    }
                }
                if (ok)
                    return w;
            }
            return cx;
        };
        auto r = for_all<SmIndexWitness, SmCounterexample>(n, exec, solve);
        if (auto * cx = std::get_if<SmCounterexample>(&r))
            return {std::move(*cx)};
        return {SmWitness{std::move(std::get<0>(r))}};
    }

    bool cone_compatible(const InverseSystem & s, const SystemCone & cone,
                         std::vector<std::pair<std::size_t, std::size_t>> * failures)
    {
        const auto & h = cone.presheaf();
        bool ok = true;
        for (std::size_t a = 0; a < s.size(); ++a)
            for (std::size_t b = 0; b < s.size(); ++b)
                if (s.leq(a, b) && h.act(s.bond(a, b), cone.element(b)) != cone.element(a)) {
                    ok = false;
                    if (failures)
                        failures->emplace_back(a, b);
                }
        return ok;
    }
}

SmResult check_sm1(const InverseSystem & s, Execution exec)
{
    const auto n = s.size();
    return check_sm(s, exec, [&](const FiniteCategory & c, std::size_t a, std::size_t a1,
                                 std::size_t a2) -> std::optional<SmStep> {
        const MorRef target = s.bond(a, a1);
        const MorRef down = s.bond(a, a2);
        for (std::size_t top = 0; top < n; ++top) {
            if (!s.leq(a1, top) || !s.leq(a2, top))
                continue;
            for (MorRef r : c.hom(s.object(a1), s.object(a2)))
                if (c.comp(down, r) == target && c.comp(r, s.bond(a1, top)) == s.bond(a2, top))
                    return SmStep{a2, top, r};
        }
        return std::nullopt;
    });
}

SmResult check_sm2(const InverseSystem & s, const SystemCone & cone, Execution exec)
{
    if (!(cone.presheaf().base() == s.ambient()) || cone.elements().size() != s.size())
        throw Error(ErrorKind::SystemTypeError, "cone does not match the system");
    if (!cone_compatible(s, cone, nullptr))
        throw Error(ErrorKind::ConeIncompatible, "cone elements are not compatible with the bonds");
    const auto & h = cone.presheaf();
    return check_sm(s, exec, [&](const FiniteCategory & c, std::size_t a, std::size_t a1,
                                 std::size_t a2) -> std::optional<SmStep> {
        const MorRef target = s.bond(a, a1);
        const MorRef down = s.bond(a, a2);
        for (MorRef r : c.hom(s.object(a1), s.object(a2)))
            if (c.comp(down, r) == target && h.act(r, cone.element(a1)) == cone.element(a2))
                return SmStep{a2, std::nullopt, r};
        return std::nullopt;
    });
}

AssociatedReport check_associated(const InverseSystem & s, const SystemCone & cone)
{
    if (!(cone.presheaf().base() == s.ambient()) || cone.elements().size() != s.size())
        throw Error(ErrorKind::SystemTypeError, "cone does not match the system");
    const auto & c = s.ambient();
    const auto & h = cone.presheaf();
    const auto n = s.size();

    AssociatedReport rep;
    rep.directed = s.directed();
    rep.cond1 = cone_compatible(s, cone, &rep.cond1_failures);

    for (std::uint32_t qi = 0; qi < c.object_count(); ++qi) {
        ObjRef q{qi};
        for (std::uint32_t x = 0; x < h.fiber_size(q); ++x) {
            bool hit = false;
            for (std::size_t a = 0; a < n && !hit; ++a)
                for (MorRef f : c.hom(s.object(a), q))
                    if (h.act(f, cone.element(a)) == x) {
                        hit = true;
                        break;
                    }
            if (!hit)
                rep.cond2_failures.emplace_back(q, x);
        }
    }
    rep.cond2 = rep.cond2_failures.empty();

    for (std::size_t a = 0; a < n; ++a) {
        for (std::uint32_t qi = 0; qi < c.object_count(); ++qi) {
            ObjRef q{qi};
            auto maps = c.hom(s.object(a), q);
            for (std::size_t i = 0; i < maps.size(); ++i) {
                for (std::size_t j = i + 1; j < maps.size(); ++j) {
                    const MorRef f = maps[i], g = maps[j];
                    if (h.act(f, cone.element(a)) != h.act(g, cone.element(a)))
                        continue;
                    bool merged = false;
                    for (std::size_t b = 0; b < n && !merged; ++b)
                        merged = s.leq(a, b) && c.comp(f, s.bond(a, b)) == c.comp(g, s.bond(a, b));
                    if (!merged)
                        rep.cond3_failures.push_back({a, q, f, g});
                }
            }
        }
    }
    rep.cond3 = rep.cond3_failures.empty();
    return rep;
}

StarResult check_star(const Copresheaf & h, Execution exec)
{
    const auto & c = h.base();
    std::vector<std::pair<ObjRef, std::uint32_t>> elements;
    for (std::uint32_t qi = 0; qi < c.object_count(); ++qi)
        for (std::uint32_t x = 0; x < h.fiber_size(ObjRef{qi}); ++x)
            elements.emplace_back(ObjRef{qi}, x);

    auto solve = [&](std::size_t i) -> std::variant<StarEntry, StarCounterexample> {
        const auto [q, x] = elements[i];
        StarCounterexample cx{q, x, {}};
        for (const auto & [q1, x1] : elements) {
            for (MorRef eta : c.hom(q1, q)) {
                if (h.act(eta, x1) != x)
                    continue;
                StarEntry entry{q, x, q1, x1, eta, {}};
                bool ok = true;
                for (const auto & [q2, x2] : elements) {
                    for (MorRef eta1 : c.hom(q2, q)) {
                        if (h.act(eta1, x2) != x)
                            continue;
                        std::optional<MorRef> eta2;
                        for (MorRef cand : c.hom(q1, q2))
                            if (c.comp(eta1, cand) == eta && h.act(cand, x1) == x2) {
                                eta2 = cand;
                                break;
                            }
                        if (!eta2) {
                            cx.defeats.push_back({q1, x1, eta, q2, x2, eta1});
                            ok = false;
                            break;
                        }
                        entry.lifts.push_back({q2, x2, eta1, *eta2});
                    }
                    if (!ok)
                        break;
                }
                if (ok)
                    return entry;
            }
        }
        return cx;
    };

    auto r = for_all<StarEntry, StarCounterexample>(elements.size(), exec, solve);
    if (auto * cx = std::get_if<StarCounterexample>(&r))
        return {std::move(*cx)};
    return {StarWitness{std::move(std::get<0>(r))}};
}

} // namespace movcat
