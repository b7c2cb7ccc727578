#include "movcat/movability.hpp"

#include <algorithm>
#include <optional>

namespace movcat {

MorRef ObjectWitness::lift(MorRef p) const
{
    auto it = std::lower_bound(lifts.begin(), lifts.end(), p,
                               [](const std::pair<MorRef, MorRef> & e, MorRef key) { return e.first < key; });
    if (it == lifts.end() || it->first != p)
        throw Error(ErrorKind::BadRef, "no lift recorded for arrow #" + std::to_string(p.index));
    return it->second;
}

namespace {
    struct IdentityImage {
        ObjRef operator()(ObjRef a) const { return a; }
        MorRef operator()(MorRef f) const { return f; }
    };

    struct FunctorImage {
        const Functor & phi;
        ObjRef operator()(ObjRef a) const { return phi.obj_map()[a.index]; }
        MorRef operator()(MorRef f) const { return phi.mor_map()[f.index]; }
    };

    using ObjectOutcome = std::variant<ObjectWitness, Counterexample>;

    /// Least (M, m) serving X, or the defeat of every candidate.
    template <typename Image>
    ObjectOutcome solve_object(const FiniteCategory & k, const FiniteCategory & l, const Image & image, ObjRef x)
    {
        Counterexample cx{x, {}};
        const auto n = static_cast<std::uint32_t>(k.object_count());
        for (std::uint32_t mi = 0; mi < n; ++mi) {
            ObjRef mover{mi};
            for (MorRef m : k.hom(mover, x)) {
                const MorRef target = image(m);
                ObjectWitness w{mover, m, {}};
                bool ok = true;
                for (std::uint32_t yi = 0; yi < n && ok; ++yi) {
                    ObjRef y{yi};
                    auto candidates = l.hom(image(mover), image(y));
                    for (MorRef p : k.hom(y, x)) {
                        const MorRef pp = image(p);
                        auto u = std::find_if(candidates.begin(), candidates.end(),
                                              [&](MorRef c) { return l.comp(pp, c) == target; });
                        if (u == candidates.end()) {
                            cx.defeats.push_back({mover, m, p});
                            ok = false;
                            break;
                        }
                        w.lifts.emplace_back(p, *u);
                    }
                }
                if (ok) {
                    std::sort(w.lifts.begin(), w.lifts.end());
                    return w;
                }
            }
        }
        return cx;
    }

    template <typename Image>
    MovabilityResult solve(const FiniteCategory & k, const FiniteCategory & l, const Image & image, Execution exec)
    {
        const auto n = static_cast<std::int64_t>(k.object_count());
        MovabilityWitness witness;
        if (exec == Execution::serial) {
            for (std::int64_t i = 0; i < n; ++i) {
                auto r = solve_object(k, l, image, ObjRef{static_cast<std::uint32_t>(i)});
                if (auto * cx = std::get_if<Counterexample>(&r))
                    return {std::move(*cx)};
                witness.objects.push_back(std::move(std::get<ObjectWitness>(r)));
            }
            return {std::move(witness)};
        }

        std::vector<std::optional<ObjectOutcome>> outcomes(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < n; ++i)
            outcomes[static_cast<std::size_t>(i)] = solve_object(k, l, image, ObjRef{static_cast<std::uint32_t>(i)});

        for (auto & o : outcomes) {
            if (auto * cx = std::get_if<Counterexample>(&*o))
                return {std::move(*cx)};
            witness.objects.push_back(std::move(std::get<ObjectWitness>(*o)));
        }
        return {std::move(witness)};
    }

    template <typename Image>
    std::string verify(const FiniteCategory & k, const FiniteCategory & l, const Image & image,
                       const MovabilityWitness & w)
    {
        if (w.objects.size() != k.object_count())
            return "witness covers " + std::to_string(w.objects.size()) + " of " +
                   std::to_string(k.object_count()) + " objects";
        for (std::uint32_t xi = 0; xi < k.object_count(); ++xi) {
            ObjRef x{xi};
            const auto & ow = w.objects[xi];
            const auto where = " at " + k.object_name(x);
            if (!k.valid(ow.mover) || !k.valid(ow.m) || k.dom(ow.m) != ow.mover || k.cod(ow.m) != x)
                return "m_X is not an arrow M(X) -> X" + where;
            std::size_t expected = 0;
            for (MorRef p : k.into(x)) {
                ++expected;
                auto it = std::lower_bound(ow.lifts.begin(), ow.lifts.end(), std::make_pair(p, MorRef{0}));
                if (it == ow.lifts.end() || it->first != p)
                    return "missing lift for " + k.morphism_name(p) + where;
                MorRef u = it->second;
                if (!l.valid(u) || l.dom(u) != image(ow.mover) || l.cod(u) != image(k.dom(p)))
                    return "lift for " + k.morphism_name(p) + " has the wrong type" + where;
                if (l.comp(image(p), u) != image(ow.m))
                    return "lift for " + k.morphism_name(p) + " does not satisfy p . u = m_X" + where;
            }
            if (ow.lifts.size() != expected)
                return "extra lifts recorded" + where;
        }
        return {};
    }

    void require(const std::string & problem, const char * what)
    {
        if (!problem.empty())
            throw Error(ErrorKind::VerificationFailed, std::string(what) + ": " + problem);
    }
}

MovabilityResult check_strongly_movable(const FiniteCategory & k, Execution exec)
{
    return solve(k, k, IdentityImage{}, exec);
}

MovabilityResult check_movable_wrt(const Functor & phi, Execution exec)
{
    return solve(phi.source(), phi.target(), FunctorImage{phi}, exec);
}

MovabilityResult space_movability(const Copresheaf & h, Execution exec)
{
    auto el = elements_category(h);
    return check_movable_wrt(el.forget, exec);
}

std::string verify_strongly_movable(const FiniteCategory & k, const MovabilityWitness & w)
{
    return verify(k, k, IdentityImage{}, w);
}

std::string verify_movable_wrt(const Functor & phi, const MovabilityWitness & w)
{
    return verify(phi.source(), phi.target(), FunctorImage{phi}, w);
}

MovabilityWitness postcompose_transfer(const Functor & phi, const MovabilityWitness & w, const Functor & f)
{
    require(verify_movable_wrt(phi, w), "input witness");
    auto composite = compose_functors(f, phi);
    MovabilityWitness out = w;
    for (auto & ow : out.objects)
        for (auto & [p, u] : ow.lifts)
            u = f(u);
    require(verify_movable_wrt(composite, out), "postcompose_transfer");
    return out;
}

MovabilityWitness weak_domination_transfer(const Functor & f, const Functor & g, const NaturalTransformation & phi,
                                           const MovabilityWitness & witness_l)
{
    const auto & k = f.source();
    const auto & l = f.target();
    if (!(g.source() == l) || !(g.target() == k))
        throw Error(ErrorKind::SourceTargetMismatch, "G must go back from the target of F to its source");
    if (!(phi.from() == compose_functors(g, f)) || !(phi.to() == Functor::identity(k)))
        throw Error(ErrorKind::SourceTargetMismatch, "transformation must run from G.F to the identity");
    require(verify_strongly_movable(l, witness_l), "witness of the dominating category");

    MovabilityWitness out;
    for (std::uint32_t xi = 0; xi < k.object_count(); ++xi) {
        ObjRef x{xi};
        const auto & wl = witness_l.at(f(x));
        ObjectWitness ow;
        ow.mover = g(wl.mover);
        ow.m = k.comp(phi(x), g(wl.m));
        for (MorRef p : k.into(x)) {
            MorRef v = wl.lift(f(p));
            ow.lifts.emplace_back(p, k.comp(phi(k.dom(p)), g(v)));
        }
        out.objects.push_back(std::move(ow));
    }
    require(verify_strongly_movable(k, out), "weak_domination_transfer");
    return out;
}

MovabilityWitness product_transport(const ProductCategory & product, const std::vector<MovabilityWitness> & factors)
{
    const auto k = product.factors.size();
    if (factors.size() != k)
        throw Error(ErrorKind::VerificationFailed, "one witness per factor required");
    for (std::size_t i = 0; i < k; ++i)
        require(verify_strongly_movable(product.factors[i], factors[i]), "factor witness");

    const auto & cat = product.category;
    MovabilityWitness out;
    std::vector<ObjRef> mover(k);
    std::vector<MorRef> m(k), u(k);
    for (std::uint32_t xi = 0; xi < cat.object_count(); ++xi) {
        const auto & xs = product.object_components[xi];
        for (std::size_t i = 0; i < k; ++i) {
            mover[i] = factors[i].at(xs[i]).mover;
            m[i] = factors[i].at(xs[i]).m;
        }
        ObjectWitness ow{product.object_of(mover), product.morphism_of(m), {}};
        for (MorRef p : cat.into(ObjRef{xi})) {
            const auto & ps = product.morphism_components[p.index];
            for (std::size_t i = 0; i < k; ++i)
                u[i] = factors[i].at(xs[i]).lift(ps[i]);
            ow.lifts.emplace_back(p, product.morphism_of(u));
        }
        out.objects.push_back(std::move(ow));
    }
    require(verify_strongly_movable(cat, out), "product_transport");
    return out;
}

MovabilityWitness factor_transport(const ProductCategory & product, const MovabilityWitness & w, std::size_t i0)
{
    const auto k = product.factors.size();
    if (i0 >= k)
        throw Error(ErrorKind::BadRef, "factor index out of range");
    require(verify_strongly_movable(product.category, w), "product witness");
    const auto & factor = product.factors[i0];
    for (std::size_t i = 0; i < k; ++i)
        if (i != i0 && product.factors[i].object_count() == 0)
            throw Error(ErrorKind::VerificationFailed, "another factor is empty");

    MovabilityWitness out;
    std::vector<ObjRef> xs(k, ObjRef{0});
    std::vector<MorRef> ps(k);
    for (std::uint32_t xi = 0; xi < factor.object_count(); ++xi) {
        ObjRef x{xi};
        xs[i0] = x;
        const auto & pw = w.at(product.object_of(xs));
        ObjectWitness ow{product.object_components[pw.mover.index][i0], product.morphism_components[pw.m.index][i0],
                         {}};
        for (std::size_t i = 0; i < k; ++i)
            ps[i] = FiniteCategory::identity(xs[i]);
        for (MorRef p : factor.into(x)) {
            ps[i0] = p;
            MorRef u = pw.lift(product.morphism_of(ps));
            ow.lifts.emplace_back(p, product.morphism_components[u.index][i0]);
        }
        out.objects.push_back(std::move(ow));
    }
    require(verify_strongly_movable(factor, out), "factor_transport");
    return out;
}

} // namespace movcat
