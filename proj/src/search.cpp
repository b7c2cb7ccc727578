#include "movcat/search.hpp"

#include <array>

namespace movcat {

namespace {

    class FunctorEnumerator {
    public:
        FunctorEnumerator(const FiniteCategory & k, const FiniteCategory & l, Budget & budget,
                          const std::function<bool(const Functor &)> & visit, const FunctorConstraints & constraints)
            : k_(k), l_(l), budget_(budget), visit_(visit), constraints_(constraints),
              n_obj_(k.object_count()), n_mor_(k.morphism_count()), om_(n_obj_), mm_(n_mor_),
              closing_(n_obj_), checks_(n_mor_)
        {
            for (std::uint32_t fi = static_cast<std::uint32_t>(n_obj_); fi < n_mor_; ++fi) {
                MorRef f{fi};
                closing_[std::max(k.dom(f).index, k.cod(f).index)].push_back(f);
                for (MorRef g : k.out_of(k.cod(f))) {
                    if (k.is_identity(g))
                        continue;
                    MorRef h = k.comp(g, f);
                    auto pos = std::max({g.index, f.index, h.index});
                    checks_[pos].push_back({g, f, h});
                }
            }
        }

        void run() { assign_object(0); }

    private:
        bool object_allowed(std::size_t i, ObjRef t) const
        {
            return constraints_.allowed_objects.empty() || constraints_.allowed_objects[i][t.index];
        }

        const std::optional<MorRef> * pin(std::size_t f) const
        {
            return constraints_.pinned_morphisms.empty() ? nullptr : &constraints_.pinned_morphisms[f];
        }

        void assign_object(std::size_t i)
        {
            if (i == n_obj_) {
                for (std::size_t a = 0; a < n_obj_; ++a) {
                    mm_[a] = FiniteCategory::identity(om_[a]);
                    if (auto p = pin(a); p && *p && **p != mm_[a])
                        return;
                }
                assign_arrow(n_obj_);
                return;
            }
            for (std::uint32_t t = 0; t < l_.object_count() && !stopped_; ++t) {
                if (!object_allowed(i, ObjRef{t}))
                    continue;
                om_[i] = ObjRef{t};
                bool ok = true;
                for (MorRef f : closing_[i]) {
                    auto d = om_[k_.dom(f).index], c = om_[k_.cod(f).index];
                    if (l_.hom(d, c).empty()) {
                        ok = false;
                        break;
                    }
                    if (auto p = pin(f.index); p && *p && (l_.dom(**p) != d || l_.cod(**p) != c)) {
                        ok = false;
                        break;
                    }
                }
                if (ok)
                    assign_object(i + 1);
            }
        }

        void assign_arrow(std::size_t j)
        {
            if (j == n_mor_) {
                emit();
                return;
            }
            MorRef f{static_cast<std::uint32_t>(j)};
            auto candidates = l_.hom(om_[k_.dom(f).index], om_[k_.cod(f).index]);
            const auto * p = pin(j);
            for (MorRef c : candidates) {
                if (stopped_)
                    return;
                if (p && *p && **p != c)
                    continue;
                mm_[j] = c;
                bool ok = true;
                for (const auto & [g, ff, h] : checks_[j])
                    if (l_.comp(mm_[g.index], mm_[ff.index]) != mm_[h.index]) {
                        ok = false;
                        break;
                    }
                if (ok)
                    assign_arrow(j + 1);
            }
        }

        void emit()
        {
            if (!budget_.take()) {
                stopped_ = true;
                return;
            }
            if (!visit_(Functor::trusted(k_, l_, om_, mm_)))
                stopped_ = true;
        }

        const FiniteCategory & k_;
        const FiniteCategory & l_;
        Budget & budget_;
        const std::function<bool(const Functor &)> & visit_;
        const FunctorConstraints & constraints_;
        std::size_t n_obj_;
        std::size_t n_mor_;
        std::vector<ObjRef> om_;
        std::vector<MorRef> mm_;
        std::vector<std::vector<MorRef>> closing_;
        std::vector<std::vector<std::array<MorRef, 3>>> checks_;
        bool stopped_ = false;
    };

    class NatTransEnumerator {
    public:
        NatTransEnumerator(const Functor & f, const Functor & g, Budget & budget,
                           const std::function<bool(const NaturalTransformation &)> & visit)
            : f_(f), g_(g), src_(f.source()), tgt_(f.target()), budget_(budget), visit_(visit),
              components_(src_.object_count()), closing_(src_.object_count())
        {
            for (std::uint32_t mi = static_cast<std::uint32_t>(src_.object_count()); mi < src_.morphism_count(); ++mi) {
                MorRef m{mi};
                closing_[std::max(src_.dom(m).index, src_.cod(m).index)].push_back(m);
            }
        }

        void run() { assign(0); }

    private:
        void assign(std::size_t a)
        {
            if (a == components_.size()) {
                if (!budget_.take()) {
                    stopped_ = true;
                    return;
                }
                if (!visit_(NaturalTransformation::trusted(f_, g_, components_)))
                    stopped_ = true;
                return;
            }
            ObjRef obj{static_cast<std::uint32_t>(a)};
            for (MorRef c : tgt_.hom(f_(obj), g_(obj))) {
                if (stopped_)
                    return;
                components_[a] = c;
                bool ok = true;
                for (MorRef m : closing_[a]) {
                    auto d = src_.dom(m), e = src_.cod(m);
                    if (tgt_.comp(g_(m), components_[d.index]) != tgt_.comp(components_[e.index], f_(m))) {
                        ok = false;
                        break;
                    }
                }
                if (ok)
                    assign(a + 1);
            }
        }

        const Functor & f_;
        const Functor & g_;
        const FiniteCategory & src_;
        const FiniteCategory & tgt_;
        Budget & budget_;
        const std::function<bool(const NaturalTransformation &)> & visit_;
        std::vector<MorRef> components_;
        std::vector<std::vector<MorRef>> closing_;
        bool stopped_ = false;
    };

    /// Pins G on the image of F so that G . F = 1_K; false if F is not injective.
    bool retraction_constraints(const Functor & f, FunctorConstraints & c)
    {
        const auto & k = f.source();
        const auto & l = f.target();
        c.allowed_objects.assign(l.object_count(), std::vector<bool>(k.object_count(), true));
        c.pinned_morphisms.assign(l.morphism_count(), std::nullopt);
        std::vector<bool> seen(l.object_count(), false);
        for (std::uint32_t x = 0; x < k.object_count(); ++x) {
            auto y = f(ObjRef{x});
            if (seen[y.index])
                return false;
            seen[y.index] = true;
            c.allowed_objects[y.index].assign(k.object_count(), false);
            c.allowed_objects[y.index][x] = true;
        }
        for (std::uint32_t m = 0; m < k.morphism_count(); ++m) {
            auto img = f(MorRef{m});
            if (c.pinned_morphisms[img.index])
                return false;
            c.pinned_morphisms[img.index] = MorRef{m};
        }
        return true;
    }

    DominationResult strict_search(const FiniteCategory & k, const FiniteCategory & l, Budget & budget)
    {
        DominationResult result;
        for_each_functor(k, l, budget, [&](const Functor & f) {
            FunctorConstraints c;
            if (!retraction_constraints(f, c))
                return true;
            for_each_functor(
                l, k, budget,
                [&](const Functor & g) {
                    result = {SearchStatus::found, f, g};
                    return false;
                },
                c);
            return result.status != SearchStatus::found;
        });
        if (result.status != SearchStatus::found)
            result.status = budget.truncated ? SearchStatus::truncated : SearchStatus::none;
        return result;
    }

}

void for_each_functor(const FiniteCategory & k, const FiniteCategory & l, Budget & budget,
                      const std::function<bool(const Functor &)> & visit, const FunctorConstraints & constraints)
{
    FunctorEnumerator e(k, l, budget, visit, constraints);
    e.run();
}

FunctorEnumeration enumerate_functors(const FiniteCategory & k, const FiniteCategory & l, std::size_t budget)
{
    Budget b{budget};
    FunctorEnumeration out;
    for_each_functor(k, l, b, [&](const Functor & f) {
        out.functors.push_back(f);
        return true;
    });
    out.truncated = b.truncated;
    return out;
}

void for_each_nat_trans(const Functor & f, const Functor & g, Budget & budget,
                        const std::function<bool(const NaturalTransformation &)> & visit)
{
    if (!(f.source() == g.source()) || !(f.target() == g.target()))
        throw Error(ErrorKind::SourceTargetMismatch, "functors are not parallel");
    NatTransEnumerator e(f, g, budget, visit);
    e.run();
}

NatTransEnumeration enumerate_nat_trans(const Functor & f, const Functor & g, std::size_t budget)
{
    Budget b{budget};
    NatTransEnumeration out;
    for_each_nat_trans(f, g, b, [&](const NaturalTransformation & t) {
        out.transformations.push_back(t);
        return true;
    });
    out.truncated = b.truncated;
    return out;
}

DominationResult find_functorial_domination(const FiniteCategory & k, const FiniteCategory & l, std::size_t budget)
{
    Budget b{budget};
    auto r = strict_search(k, l, b);
    if (r.status == SearchStatus::found && !(compose_functors(r.g, r.f) == Functor::identity(k)))
        throw Error(ErrorKind::VerificationFailed, "reported pair does not compose to the identity");
    return r;
}

WeakDominationResult find_weak_domination(const FiniteCategory & k, const FiniteCategory & l, std::size_t budget)
{
    Budget b{budget};
    WeakDominationResult result;
    const auto id_k = Functor::identity(k);

    auto strict = strict_search(k, l, b);
    if (strict.status == SearchStatus::found) {
        auto gf = compose_functors(strict.g, strict.f);
        std::vector<MorRef> comps;
        for (std::uint32_t x = 0; x < k.object_count(); ++x)
            comps.push_back(FiniteCategory::identity(ObjRef{x}));
        result = {SearchStatus::found, strict.f, strict.g, NaturalTransformation::validate(gf, id_k, comps), true};
        return result;
    }

    for_each_functor(k, l, b, [&](const Functor & f) {
        // G(F X) needs some arrow into X for the component at X to exist.
        FunctorConstraints c;
        c.allowed_objects.assign(l.object_count(), std::vector<bool>(k.object_count(), true));
        for (std::uint32_t x = 0; x < k.object_count(); ++x) {
            auto & row = c.allowed_objects[f(ObjRef{x}).index];
            for (std::uint32_t z = 0; z < k.object_count(); ++z)
                if (k.hom(ObjRef{z}, ObjRef{x}).empty())
                    row[z] = false;
        }
        for_each_functor(
            l, k, b,
            [&](const Functor & g) {
                auto gf = compose_functors(g, f);
                for_each_nat_trans(gf, id_k, b, [&](const NaturalTransformation & phi) {
                    std::vector<MorRef> comps(phi.components().begin(), phi.components().end());
                    result = {SearchStatus::found, f, g, NaturalTransformation::validate(gf, id_k, std::move(comps)),
                              gf == id_k};
                    return false;
                });
                return result.status != SearchStatus::found;
            },
            c);
        return result.status != SearchStatus::found;
    });
    if (result.status != SearchStatus::found)
        result.status = b.truncated ? SearchStatus::truncated : SearchStatus::none;
    return result;
}

// ---------------------------------------------------------------------------

CoproductDesignation CoproductDesignation::validate(FiniteCategory c, std::vector<Declared> pairs)
{
    ViolationList v;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto & p = pairs[i];
        for (std::size_t j = 0; j < i; ++j)
            if (pairs[j].left == p.left && pairs[j].right == p.right)
                v.add(ErrorKind::DuplicateName, "pair declared twice");
        if (!c.valid(p.left) || !c.valid(p.right) || !c.valid(p.entry.object) || !c.valid(p.entry.inj1) ||
            !c.valid(p.entry.inj2)) {
            v.add(ErrorKind::BadRef, "coproduct reference out of range");
            continue;
        }
        const auto label = c.object_name(p.left) + " + " + c.object_name(p.right);
        const auto s = p.entry.object;
        if (c.dom(p.entry.inj1) != p.left || c.cod(p.entry.inj1) != s || c.dom(p.entry.inj2) != p.right ||
            c.cod(p.entry.inj2) != s) {
            v.add(ErrorKind::UniversalPropertyFails, label + ": injections have the wrong type");
            continue;
        }
        for (std::uint32_t q = 0; q < c.object_count(); ++q) {
            ObjRef target{q};
            for (MorRef f : c.hom(p.left, target))
                for (MorRef g : c.hom(p.right, target)) {
                    std::size_t count = 0;
                    for (MorRef h : c.hom(s, target))
                        if (c.comp(h, p.entry.inj1) == f && c.comp(h, p.entry.inj2) == g)
                            ++count;
                    if (count != 1)
                        v.add(ErrorKind::UniversalPropertyFails,
                              label + ": " + std::to_string(count) + " copairings of " + c.morphism_name(f) + ", " +
                                  c.morphism_name(g));
                }
        }
    }
    v.throw_if_any();
    CoproductDesignation d;
    d.category_ = std::move(c);
    d.declared_ = std::move(pairs);
    return d;
}

std::optional<CoproductEntry> CoproductDesignation::find(ObjRef a, ObjRef b) const
{
    for (const auto & d : declared_)
        if (d.left == a && d.right == b)
            return d.entry;
    for (const auto & d : declared_)
        if (d.left == b && d.right == a)
            return CoproductEntry{d.entry.object, d.entry.inj2, d.entry.inj1};
    return std::nullopt;
}

MorRef CoproductDesignation::copair(ObjRef a, ObjRef b, MorRef f, MorRef g) const
{
    const auto & c = category_;
    auto entry = find(a, b);
    if (!entry)
        throw Error(ErrorKind::NoDesignatedCoproducts, c.object_name(a) + " + " + c.object_name(b));
    if (c.dom(f) != a || c.dom(g) != b || c.cod(f) != c.cod(g))
        throw Error(ErrorKind::NotComposable, "copairing needs arrows out of the summands into one object");
    for (MorRef h : c.hom(entry->object, c.cod(f)))
        if (c.comp(h, entry->inj1) == f && c.comp(h, entry->inj2) == g)
            return h;
    throw Error(ErrorKind::UniversalPropertyFails, "no copairing of " + c.morphism_name(f) + ", " + c.morphism_name(g));
}

CoproductDesignation join_coproducts(const FiniteCategory & thin)
{
    const auto n = static_cast<std::uint32_t>(thin.object_count());
    auto le = [&](std::uint32_t a, std::uint32_t b) { return !thin.hom(ObjRef{a}, ObjRef{b}).empty(); };
    std::vector<CoproductDesignation::Declared> pairs;
    for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = a; b < n; ++b) {
            std::optional<std::uint32_t> join;
            for (std::uint32_t u = 0; u < n && !join; ++u) {
                if (!le(a, u) || !le(b, u))
                    continue;
                bool least = true;
                for (std::uint32_t w = 0; w < n && least; ++w)
                    if (le(a, w) && le(b, w) && !le(u, w))
                        least = false;
                if (least)
                    join = u;
            }
            if (!join)
                throw Error(ErrorKind::NoDesignatedCoproducts,
                            thin.object_name(ObjRef{a}) + " and " + thin.object_name(ObjRef{b}) + " have no join");
            ObjRef j{*join};
            pairs.push_back({ObjRef{a}, ObjRef{b}, {j, thin.hom(ObjRef{a}, j)[0], thin.hom(ObjRef{b}, j)[0]}});
        }
    return CoproductDesignation::validate(thin, std::move(pairs));
}

CoproductDomination coproduct_coslice_domination(const CoproductDesignation & d, ObjRef x1, ObjRef x2)
{
    const auto & c = d.category();
    auto sum = d.find(x1, x2);
    if (!sum)
        throw Error(ErrorKind::NoDesignatedCoproducts, "no designated coproduct for the apex pair");

    auto k = coslice_category(c, sum->object);
    auto c1 = coslice_category(c, x1);
    auto c2 = coslice_category(c, x2);
    auto l = product_category({c1.category, c2.category});
    const auto & kc = k.category;
    const auto & lc = l.category;

    std::vector<ObjRef> f_obj;
    std::vector<MorRef> f_mor;
    for (std::uint32_t o = 0; o < kc.object_count(); ++o) {
        MorRef f = k.underlying[o];
        std::array<ObjRef, 2> parts{c1.object_of(c.comp(f, sum->inj1)), c2.object_of(c.comp(f, sum->inj2))};
        f_obj.push_back(l.object_of(parts));
    }
    for (std::uint32_t mi = 0; mi < kc.morphism_count(); ++mi) {
        MorRef m{mi};
        MorRef eta = k.forget(m);
        MorRef from = k.underlying[kc.dom(m).index];
        std::array<MorRef, 2> parts{c1.morphism_of(eta, c1.object_of(c.comp(from, sum->inj1))),
                                    c2.morphism_of(eta, c2.object_of(c.comp(from, sum->inj2)))};
        f_mor.push_back(l.morphism_of(parts));
    }

    auto entry = [&](ObjRef a, ObjRef b) {
        auto e = d.find(a, b);
        if (!e)
            throw Error(ErrorKind::NoDesignatedCoproducts, c.object_name(a) + " + " + c.object_name(b));
        return *e;
    };

    std::vector<ObjRef> g_obj;
    std::vector<MorRef> g_mor;
    for (std::uint32_t o = 0; o < lc.object_count(); ++o) {
        const auto & parts = l.object_components[o];
        MorRef f1 = c1.underlying[parts[0].index];
        MorRef f2 = c2.underlying[parts[1].index];
        auto q = entry(c.cod(f1), c.cod(f2));
        g_obj.push_back(k.object_of(d.copair(x1, x2, c.comp(q.inj1, f1), c.comp(q.inj2, f2))));
    }
    for (std::uint32_t mi = 0; mi < lc.morphism_count(); ++mi) {
        MorRef m{mi};
        const auto & parts = l.morphism_components[mi];
        MorRef eta1 = c1.forget(parts[0]);
        MorRef eta2 = c2.forget(parts[1]);
        auto r = entry(c.cod(eta1), c.cod(eta2));
        MorRef sum_map = d.copair(c.dom(eta1), c.dom(eta2), c.comp(r.inj1, eta1), c.comp(r.inj2, eta2));
        g_mor.push_back(k.morphism_of(sum_map, g_obj[lc.dom(m).index]));
    }

    CoproductDomination out{k, c1, c2, l, {}, {}, {}};
    try {
        out.f = Functor::validate(kc, lc, std::move(f_obj), std::move(f_mor));
        out.g = Functor::validate(lc, kc, std::move(g_obj), std::move(g_mor));
        auto gf = compose_functors(out.g, out.f);
        std::vector<MorRef> fold;
        for (std::uint32_t o = 0; o < kc.object_count(); ++o) {
            ObjRef q = c.cod(k.underlying[o]);
            MorRef id = FiniteCategory::identity(q);
            fold.push_back(k.morphism_of(d.copair(q, q, id, id), gf(ObjRef{o})));
        }
        out.phi = NaturalTransformation::validate(gf, Functor::identity(kc), std::move(fold));
    }
    catch (const ValidationError & e) {
        throw Error(ErrorKind::UniversalPropertyFails, std::string("construction does not validate: ") + e.what());
    }
    return out;
}

} // namespace movcat
