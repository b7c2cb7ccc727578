#include "movcat/generate.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>

#include "movcat/search.hpp"

namespace movcat {

namespace {
    std::uint64_t splitmix(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::string element_name(std::size_t i)
    {
        if (i < 26)
            return std::string(1, static_cast<char>('a' + i));
        return "a" + std::to_string(i);
    }

    std::vector<std::string> letters(std::size_t n)
    {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < n; ++i)
            out.push_back(element_name(i));
        return out;
    }

    std::size_t leq_count(const FinitePoset & p)
    {
        std::size_t n = 0;
        for (std::size_t a = 0; a < p.size(); ++a)
            for (std::size_t b = 0; b < p.size(); ++b)
                n += p.leq(a, b);
        return n;
    }

    bool fits(const FiniteCategory & c, const GenParams & p)
    {
        return c.object_count() >= 1 && c.object_count() <= p.max_objects && c.morphism_count() <= p.max_morphisms;
    }
}

Rng::Rng(std::uint64_t seed) : engine_(splitmix(seed)) {}

void check_params(const GenParams & p)
{
    const auto & caps = default_limits();
    if (p.max_objects < 1 || p.max_objects > caps.max_objects)
        throw Error(ErrorKind::ParamsOutOfRange, "max_objects must lie in 1.." + std::to_string(caps.max_objects));
    if (p.max_morphisms < p.max_objects || p.max_morphisms > caps.max_morphisms)
        throw Error(ErrorKind::ParamsOutOfRange,
                    "max_morphisms must lie in max_objects.." + std::to_string(caps.max_morphisms));
    if (p.max_fiber < 1 || p.max_fiber > 64)
        throw Error(ErrorKind::ParamsOutOfRange, "max_fiber must lie in 1..64");
    if (p.index_shape == IndexShape::non_directed && p.max_objects < 2)
        throw Error(ErrorKind::ParamsOutOfRange, "a non-directed index needs max_objects >= 2");
    if (p.index_shape == IndexShape::forked && p.max_objects < 3)
        throw Error(ErrorKind::ParamsOutOfRange, "a forked index needs max_objects >= 3");
}

Entity GeneratedCategory::entity(const std::string & name) const
{
    return std::visit(
        [&](const auto & s) -> Entity {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, FinitePoset>)
                return {name, PosetDecl{s}};
            else if constexpr (std::is_same_v<T, Monoid>)
                return {name, MonoidDecl{s}};
            else
                return {name, CategoryDecl{s}};
        },
        source);
}

FinitePoset random_poset(Rng & rng, std::size_t n, std::size_t max_morphisms)
{
    auto names = letters(n);
    for (unsigned density = static_cast<unsigned>(rng.range(1, 3)); density > 0; --density) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (rng.chance(density, 4))
                    pairs.emplace_back(order[i], order[j]);
        auto p = FinitePoset::from_relation(names, pairs);
        if (leq_count(p) <= max_morphisms)
            return p;
    }
    return FinitePoset::from_relation(names, {});
}

FinitePoset random_index_poset(Rng & rng, std::size_t max_objects, IndexShape shape)
{
    const std::size_t unbounded = max_objects * max_objects;
    switch (shape) {
    case IndexShape::any:
        return random_poset(rng, rng.range(1, max_objects), unbounded);
    case IndexShape::directed: {
        const auto n = rng.range(1, max_objects);
        const auto top = rng.below(n);
        auto base = random_poset(rng, n, unbounded);
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b)
                if (a != b && b != top && a != top && base.leq(a, b))
                    pairs.emplace_back(a, b);
            pairs.emplace_back(a, top);
        }
        return FinitePoset::from_relation(letters(n), pairs);
    }
    case IndexShape::non_directed: {
        if (max_objects < 2)
            throw Error(ErrorKind::ParamsOutOfRange, "a non-directed index needs two elements");
        for (int attempt = 0; attempt < 32; ++attempt) {
            auto p = random_poset(rng, rng.range(2, max_objects), unbounded);
            if (!p.directed())
                return p;
        }
        return FinitePoset::from_relation(letters(2), {});
    }
    case IndexShape::forked: {
        if (max_objects < 3)
            throw Error(ErrorKind::ParamsOutOfRange, "a forked index needs three elements");
        const auto top = random_index_poset(rng, max_objects - 1, IndexShape::non_directed);
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t a = 0; a < top.size(); ++a) {
            pairs.emplace_back(0, a + 1);
            for (std::size_t b = 0; b < top.size(); ++b)
                if (top.leq(a, b))
                    pairs.emplace_back(a + 1, b + 1);
        }
        return FinitePoset::from_relation(letters(top.size() + 1), pairs);
    }
    }
    return FinitePoset::from_relation(letters(1), {});
}

Monoid random_monoid(Rng & rng, std::size_t max_elements)
{
    using Map = std::vector<std::uint8_t>;
    for (int attempt = 0; attempt < 32; ++attempt) {
        const auto k = rng.range(2, 3);
        const auto g = rng.range(1, 2);
        std::vector<Map> gens(g, Map(k));
        for (auto & m : gens)
            for (auto & v : m)
                v = static_cast<std::uint8_t>(rng.below(k));

        Map id(k);
        std::iota(id.begin(), id.end(), std::uint8_t{0});
        std::vector<Map> elems{id};
        std::map<Map, std::size_t> index{{id, 0}};
        for (std::size_t i = 0; i < elems.size() && elems.size() <= max_elements; ++i) {
            for (const auto & s : gens) {
                Map next(k);
                for (std::size_t x = 0; x < k; ++x)
                    next[x] = s[elems[i][x]];
                if (index.emplace(next, elems.size()).second)
                    elems.push_back(next);
            }
        }
        if (elems.size() > max_elements)
            continue;

        const auto n = elems.size();
        std::vector<std::string> names{"e"};
        for (std::size_t i = 1; i < n; ++i)
            names.push_back("m" + std::to_string(i));
        std::vector<std::size_t> table(n * n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                Map ab(k);
                for (std::size_t x = 0; x < k; ++x)
                    ab[x] = elems[a][elems[b][x]];
                table[a * n + b] = index.at(ab);
            }
        return Monoid::validate(std::move(names), 0, std::move(table));
    }
    return Monoid::validate({"e"}, 0, {0});
}

FiniteCategory random_free_acyclic(Rng & rng, std::size_t max_objects, std::size_t max_morphisms)
{
    for (int attempt = 0; attempt < 32; ++attempt) {
        const auto n = rng.range(1, std::min<std::size_t>(max_objects, 4));
        struct Edge {
            std::size_t from, to;
        };
        std::vector<Edge> edges;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (rng.chance(1, 2))
                    for (std::size_t c = rng.chance(1, 4) ? 2 : 1; c > 0; --c)
                        edges.push_back({i, j});

        // Paths listed by length, then lexicographically by edge sequence.
        std::vector<std::vector<std::size_t>> paths;
        for (std::size_t e = 0; e < edges.size(); ++e)
            paths.push_back({e});
        for (std::size_t i = 0; i < paths.size() && paths.size() + n <= max_morphisms + 1; ++i)
            for (std::size_t e = 0; e < edges.size(); ++e)
                if (edges[e].from == edges[paths[i].back()].to) {
                    auto p = paths[i];
                    p.push_back(e);
                    paths.push_back(std::move(p));
                }
        if (paths.size() + n > max_morphisms)
            continue;

        CategoryBuilder b(Limits{max_objects, max_morphisms});
        for (std::size_t i = 0; i < n; ++i)
            b.add_object("v" + std::to_string(i));
        std::map<std::vector<std::size_t>, MorRef> ref;
        for (const auto & p : paths) {
            std::string name;
            for (auto it = p.rbegin(); it != p.rend(); ++it)
                name += (name.empty() ? "e" : "_e") + std::to_string(*it);
            ref[p] = b.add_arrow(name, ObjRef{static_cast<std::uint32_t>(edges[p.front()].from)},
                                 ObjRef{static_cast<std::uint32_t>(edges[p.back()].to)});
        }
        for (const auto & first : paths)
            for (const auto & then : paths)
                if (edges[first.back()].to == edges[then.front()].from) {
                    auto joined = first;
                    joined.insert(joined.end(), then.begin(), then.end());
                    b.set_composite(ref.at(then), ref.at(first), ref.at(joined));
                }
        return std::move(b).build();
    }
    CategoryBuilder b;
    b.add_object("v0");
    return std::move(b).build();
}

namespace {
    /// Poset or monoid with at most `objects` objects and `morphisms` arrows.
    GeneratedCategory small_category(Rng & rng, std::size_t objects, std::size_t morphisms)
    {
        if (rng.chance(2, 3) || morphisms < 2) {
            auto p = random_poset(rng, rng.range(1, objects), morphisms);
            auto c = poset_category(p);
            return {p, c};
        }
        auto m = random_monoid(rng, std::min<std::size_t>(morphisms, 6));
        auto c = monoid_category(m);
        return {m, c};
    }

    std::optional<GeneratedCategory> composite_category(Rng & rng, const GenParams & p)
    {
        const Limits caps{p.max_objects, p.max_morphisms};
        try {
            switch (rng.below(4)) {
            case 0: {
                auto a = small_category(rng, 2, 4);
                auto b = small_category(rng, 2, 4);
                auto prod = product_category({a.category, b.category}, caps);
                return GeneratedCategory{prod.category, prod.category};
            }
            case 1: {
                auto base = small_category(rng, p.max_objects, p.max_morphisms);
                ObjRef apex{static_cast<std::uint32_t>(rng.below(base.category.object_count()))};
                auto co = coslice_category(base.category, apex, caps);
                return GeneratedCategory{co.category, co.category};
            }
            case 2: {
                auto base = small_category(rng, 3, 8);
                auto h = random_copresheaf(rng, base.category, p.max_fiber);
                auto el = elements_category(h, caps);
                return GeneratedCategory{el.category, el.category};
            }
            default: {
                auto c = random_free_acyclic(rng, p.max_objects, p.max_morphisms);
                return GeneratedCategory{c, c};
            }
            }
        } catch (const Error & e) {
            if (e.kind() != ErrorKind::SizeBoundExceeded)
                throw;
            return std::nullopt;
        }
    }
}

GeneratedCategory random_category(Rng & rng, const GenParams & p)
{
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::optional<GeneratedCategory> g;
        switch (rng.below(4)) {
        case 0:
        case 1: {
            auto poset = random_poset(rng, rng.range(1, p.max_objects), p.max_morphisms);
            g = GeneratedCategory{poset, poset_category(poset)};
            break;
        }
        case 2: {
            auto m = random_monoid(rng, p.max_morphisms);
            g = GeneratedCategory{m, monoid_category(m)};
            break;
        }
        default:
            g = composite_category(rng, p);
        }
        if (g && fits(g->category, p))
            return *g;
    }
    auto poset = FinitePoset::from_relation({"a"}, {});
    return {poset, poset_category(poset)};
}

Copresheaf random_copresheaf(Rng & rng, const FiniteCategory & c, std::size_t max_fiber)
{
    const auto n_obj = c.object_count();
    if (n_obj == 0)
        return Copresheaf::validate(c, {}, {});

    // Elements of the sum: (generator, arrow out of its apex).
    struct Element {
        std::size_t gen;
        MorRef arrow;
        ObjRef at;
    };
    std::vector<Element> elems;
    const auto gens = rng.range(1, 2);
    std::vector<std::vector<std::size_t>> id_of(gens, std::vector<std::size_t>(c.morphism_count(), SIZE_MAX));
    for (std::size_t g = 0; g < gens; ++g) {
        ObjRef apex{static_cast<std::uint32_t>(rng.below(n_obj))};
        for (MorRef f : c.out_of(apex)) {
            id_of[g][f.index] = elems.size();
            elems.push_back({g, f, c.cod(f)});
        }
    }
    auto act = [&](MorRef h, std::size_t x) { return id_of[elems[x].gen][c.comp(h, elems[x].arrow).index]; };

    std::vector<std::size_t> parent(elems.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](std::size_t x, std::size_t y) {
        x = find(x);
        y = find(y);
        if (x == y)
            return false;
        if (y < x)
            std::swap(x, y);
        parent[y] = x;
        return true;
    };
    auto close = [&] {
        for (bool changed = true; changed;) {
            changed = false;
            for (std::uint32_t hi = 0; hi < c.morphism_count(); ++hi) {
                MorRef h{hi};
                std::map<std::size_t, std::size_t> image;
                for (std::size_t x = 0; x < elems.size(); ++x) {
                    if (elems[x].at != c.dom(h))
                        continue;
                    auto [it, fresh] = image.emplace(find(x), act(h, x));
                    if (!fresh)
                        changed |= unite(it->second, act(h, x));
                }
            }
        }
    };
    auto classes_at = [&](ObjRef q) {
        std::vector<std::size_t> roots;
        for (std::size_t x = 0; x < elems.size(); ++x)
            if (elems[x].at == q && std::find(roots.begin(), roots.end(), find(x)) == roots.end())
                roots.push_back(find(x));
        return roots;
    };

    for (std::size_t merges = rng.below(3); merges > 0; --merges) {
        const auto x = rng.below(elems.size());
        std::vector<std::size_t> same;
        for (std::size_t y = 0; y < elems.size(); ++y)
            if (y != x && elems[y].at == elems[x].at)
                same.push_back(y);
        if (!same.empty())
            unite(x, rng.pick(same));
    }
    close();
    // Merging may shrink earlier fibers further, so rescan after each merge.
    for (bool again = true; again;) {
        again = false;
        for (std::uint32_t qi = 0; qi < n_obj && !again; ++qi) {
            auto roots = classes_at(ObjRef{qi});
            if (roots.size() <= max_fiber)
                continue;
            const auto i = rng.below(roots.size());
            auto j = rng.below(roots.size() - 1);
            if (j >= i)
                ++j;
            unite(roots[i], roots[j]);
            close();
            again = true;
        }
    }

    std::vector<std::vector<std::string>> fibers(n_obj);
    std::map<std::size_t, std::uint32_t> slot;
    for (std::uint32_t qi = 0; qi < n_obj; ++qi) {
        auto roots = classes_at(ObjRef{qi});
        for (std::size_t i = 0; i < roots.size(); ++i) {
            slot[roots[i]] = static_cast<std::uint32_t>(i);
            fibers[qi].push_back("x" + std::to_string(i));
        }
    }
    std::vector<std::vector<std::uint32_t>> action(c.morphism_count());
    for (std::uint32_t hi = 0; hi < c.morphism_count(); ++hi) {
        MorRef h{hi};
        action[hi].resize(fibers[c.dom(h).index].size());
        for (std::size_t x = 0; x < elems.size(); ++x)
            if (elems[x].at == c.dom(h))
                action[hi][slot.at(find(x))] = slot.at(find(act(h, x)));
    }
    return Copresheaf::validate(c, std::move(fibers), std::move(action));
}

InverseSystem random_system(Rng & rng, const FiniteCategory & c, const FinitePoset & index,
                            const std::vector<std::optional<ObjRef>> & pinned)
{
    const auto n = index.size();
    const auto op = poset_category(index.opposite());
    auto pin = [&](std::size_t a) { return a < pinned.size() ? pinned[a] : std::nullopt; };

    std::optional<Functor> chosen;
    for (int attempt = 0; attempt < 4 && !chosen; ++attempt) {
        FunctorConstraints constraints;
        constraints.allowed_objects.assign(n, std::vector<bool>(c.object_count(), attempt == 3));
        for (std::size_t a = 0; a < n; ++a) {
            auto & row = constraints.allowed_objects[a];
            if (auto p = pin(a)) {
                std::fill(row.begin(), row.end(), false);
                row[p->index] = true;
                continue;
            }
            if (attempt == 3)
                continue;
            for (std::size_t o = 0; o < row.size(); ++o)
                row[o] = rng.chance(1, 2);
            row[rng.below(row.size())] = true;
        }
        Budget budget{2048};
        std::size_t seen = 0;
        for_each_functor(
            op, c, budget,
            [&](const Functor & f) {
                if (rng.below(++seen) == 0)
                    chosen = f;
                return true;
            },
            constraints);
    }
    if (!chosen)
        throw Error(ErrorKind::ParamsOutOfRange, "no system of the requested shape exists");

    std::vector<ObjRef> objects(n);
    std::vector<std::optional<MorRef>> bonds(n * n);
    for (std::uint32_t a = 0; a < n; ++a) {
        objects[a] = (*chosen)(ObjRef{a});
        for (std::uint32_t b = 0; b < n; ++b)
            if (a != b && index.leq(a, b))
                bonds[a * n + b] = (*chosen)(op.hom(ObjRef{b}, ObjRef{a}).front());
    }
    return InverseSystem::validate(c, index, std::move(objects), std::move(bonds));
}

std::optional<SystemCone> random_cone(Rng & rng, const InverseSystem & s, const Copresheaf & h)
{
    const auto n = s.size();
    std::vector<std::size_t> order(n), above(n, 0);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            above[a] += a != b && s.leq(a, b);
    rng.shuffle(order);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return above[x] < above[y]; });

    std::vector<std::optional<std::uint32_t>> value(n);
    std::size_t nodes = 0;
    auto consistent = [&](std::size_t a, std::uint32_t x) {
        for (std::size_t b = 0; b < n; ++b) {
            if (!value[b] || b == a)
                continue;
            if (s.leq(a, b) && h.act(s.bond(a, b), *value[b]) != x)
                return false;
            if (s.leq(b, a) && h.act(s.bond(b, a), x) != *value[b])
                return false;
        }
        return true;
    };
    auto assign = [&](auto && self, std::size_t k) -> bool {
        if (k == n)
            return true;
        if (++nodes > 4096)
            return false;
        const auto a = order[k];
        std::vector<std::uint32_t> cands(h.fiber_size(s.object(a)));
        std::iota(cands.begin(), cands.end(), 0u);
        rng.shuffle(cands);
        for (auto x : cands) {
            if (!consistent(a, x))
                continue;
            value[a] = x;
            if (self(self, k + 1))
                return true;
            value[a].reset();
        }
        return false;
    };
    if (!assign(assign, 0))
        return std::nullopt;
    std::vector<std::uint32_t> elems;
    for (auto & v : value)
        elems.push_back(*v);
    return SystemCone::validate(s, h, std::move(elems));
}

FinitePoset random_join_semilattice(Rng & rng, std::size_t max_objects)
{
    for (int attempt = 0; attempt < 32; ++attempt) {
        const auto k = rng.range(1, 3);
        const std::size_t universe = std::size_t{1} << k;
        std::vector<unsigned> family;
        for (auto m = rng.range(1, universe); m > 0; --m) {
            auto s = static_cast<unsigned>(rng.below(universe));
            if (std::find(family.begin(), family.end(), s) == family.end())
                family.push_back(s);
        }
        for (bool grew = true; grew;) {
            grew = false;
            for (std::size_t i = 0; i < family.size(); ++i)
                for (std::size_t j = 0; j < i; ++j)
                    if (auto u = family[i] | family[j]; std::find(family.begin(), family.end(), u) == family.end()) {
                        family.push_back(u);
                        grew = true;
                    }
        }
        if (family.size() > max_objects)
            continue;
        std::sort(family.begin(), family.end());
        std::vector<std::string> names;
        for (auto s : family) {
            std::string nm = "s";
            for (std::size_t bit = 0; bit < k; ++bit)
                nm += (s >> bit & 1u) ? '1' : '0';
            names.push_back(nm);
        }
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t a = 0; a < family.size(); ++a)
            for (std::size_t b = 0; b < family.size(); ++b)
                if (a != b && (family[a] & ~family[b]) == 0)
                    pairs.emplace_back(a, b);
        return FinitePoset::from_relation(std::move(names), pairs);
    }
    return FinitePoset::from_relation({"s0"}, {});
}

InstanceKind parse_instance_kind(std::string_view name)
{
    for (auto k : {InstanceKind::poset, InstanceKind::monoid, InstanceKind::category, InstanceKind::copresheaf,
                   InstanceKind::system, InstanceKind::domination_pair})
        if (to_string(k) == name)
            return k;
    throw Error(ErrorKind::ParamsOutOfRange, "unknown instance kind '" + std::string(name) + "'");
}

std::string_view to_string(InstanceKind kind)
{
    switch (kind) {
    case InstanceKind::poset:
        return "poset";
    case InstanceKind::monoid:
        return "monoid";
    case InstanceKind::category:
        return "category";
    case InstanceKind::copresheaf:
        return "copresheaf";
    case InstanceKind::system:
        return "system";
    case InstanceKind::domination_pair:
        return "domination-pair";
    }
    return "?";
}

std::pair<GeneratedCategory, GeneratedCategory> random_domination_pair(Rng & rng, const GenParams & p)
{
    GenParams small = p;
    small.max_objects = std::min<std::size_t>(p.max_objects, 3);
    small.max_morphisms = std::min<std::size_t>(p.max_morphisms, 9);
    switch (rng.below(3)) {
    case 0:
        return {random_category(rng, small), random_category(rng, small)};
    case 1: {
        auto k = random_category(rng, small);
        auto t = small_category(rng, 2, 3);
        try {
            auto prod = product_category({k.category, t.category}, Limits{p.max_objects * 2, p.max_morphisms * 2});
            return {k, GeneratedCategory{prod.category, prod.category}};
        } catch (const Error & e) {
            if (e.kind() != ErrorKind::SizeBoundExceeded)
                throw;
            return {k, k};
        }
    }
    default: {
        GenParams inner = small;
        inner.max_objects = std::max<std::size_t>(1, small.max_objects - 1);
        inner.max_morphisms = std::max(inner.max_objects, small.max_morphisms / 2);
        auto base = random_category(rng, inner);
        auto k = adjoin_initial_object(base.category);
        auto point = FinitePoset::from_relation({"t"}, {});
        return {GeneratedCategory{k, k}, GeneratedCategory{point, poset_category(point)}};
    }
    }
}

Document random_system_document(Rng & rng, const GenParams & params)
{
    Document doc;
    GenParams small = params;
    small.max_objects = std::min<std::size_t>(params.max_objects, 4);
    small.max_morphisms = std::min<std::size_t>(params.max_morphisms, 16);
    auto c = random_category(rng, small);
    auto h = random_copresheaf(rng, c.category, params.max_fiber);
    auto index = random_index_poset(rng, std::min<std::size_t>(params.max_objects, 4), params.index_shape);
    std::optional<InverseSystem> system;
    std::optional<SystemCone> cone;
    for (int attempt = 0; attempt < 16 && !cone; ++attempt) {
        system = random_system(rng, c.category, index);
        cone = random_cone(rng, *system, h);
    }
    if (!cone) {
        // Constant system at an object with a nonempty fiber always has a cone.
        std::uint32_t q = 0;
        while (h.fiber_size(ObjRef{q}) == 0)
            ++q;
        const auto n = index.size();
        std::vector<std::optional<MorRef>> bonds(n * n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (a != b && index.leq(a, b))
                    bonds[a * n + b] = FiniteCategory::identity(ObjRef{q});
        system = InverseSystem::validate(c.category, index, std::vector<ObjRef>(n, ObjRef{q}), bonds);
        cone = SystemCone::validate(*system, h, std::vector<std::uint32_t>(n, 0));
    }
    doc.add(c.entity("C"));
    doc.add({"I", PosetDecl{index}});
    doc.add({"H", CopresheafDecl{"C", h}});
    doc.add({"S", SystemDecl{"C", "I", std::string("H"), *system, cone}});
    return doc;
}

Document generate_instance(InstanceKind kind, std::uint64_t seed, const GenParams & params)
{
    check_params(params);
    Rng rng(seed * 8 + static_cast<std::uint64_t>(kind) + 1);
    Document doc;
    switch (kind) {
    case InstanceKind::poset:
        doc.add({"P", PosetDecl{random_poset(rng, rng.range(1, params.max_objects), params.max_morphisms)}});
        break;
    case InstanceKind::monoid:
        doc.add({"M", MonoidDecl{random_monoid(rng, params.max_morphisms)}});
        break;
    case InstanceKind::category:
        doc.add(random_category(rng, params).entity("K"));
        break;
    case InstanceKind::copresheaf: {
        auto c = random_category(rng, params);
        doc.add(c.entity("C"));
        doc.add({"H", CopresheafDecl{"C", random_copresheaf(rng, c.category, params.max_fiber)}});
        break;
    }
    case InstanceKind::system:
        doc = random_system_document(rng, params);
        break;
    case InstanceKind::domination_pair: {
        auto [k, l] = random_domination_pair(rng, params);
        doc.add(k.entity("K"));
        doc.add(l.entity("L"));
        break;
    }
    }
    return doc;
}

} // namespace movcat
