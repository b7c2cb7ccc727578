#pragma once

#include <string>
#include <variant>
#include <vector>

#include "movcat/category.hpp"
#include "movcat/parallel.hpp"

namespace movcat {

/// Mover data for one object X: M(X), m_X : M(X) -> X, and for every
/// p : Y -> X the chosen lift u. For strong movability u lives in K with
/// p . u = m_X; relative to a functor Phi it lives in L with
/// Phi(p) . u = Phi(m_X).
struct ObjectWitness {
    ObjRef mover;
    MorRef m;
    /// (p, u) pairs sorted by p.
    std::vector<std::pair<MorRef, MorRef>> lifts;

    /// Throws Error{BadRef} if p has no recorded lift.
    MorRef lift(MorRef p) const;

    friend bool operator==(const ObjectWitness &, const ObjectWitness &) = default;
};

struct MovabilityWitness {
    /// Indexed by object.
    std::vector<ObjectWitness> objects;

    const ObjectWitness & at(ObjRef x) const { return objects.at(x.index); }

    friend bool operator==(const MovabilityWitness &, const MovabilityWitness &) = default;
};

/// One rejected candidate (M, m) together with the first p : Y -> X that has no lift.
struct Defeat {
    ObjRef mover;
    MorRef m;
    MorRef p;

    friend bool operator==(const Defeat &, const Defeat &) = default;
};

struct Counterexample {
    ObjRef object;
    /// One entry per candidate, in search order.
    std::vector<Defeat> defeats;

    friend bool operator==(const Counterexample &, const Counterexample &) = default;
};

struct MovabilityResult {
    std::variant<MovabilityWitness, Counterexample> value;

    bool holds() const noexcept { return value.index() == 0; }
    explicit operator bool() const noexcept { return holds(); }
    const MovabilityWitness & witness() const { return std::get<MovabilityWitness>(value); }
    const Counterexample & counterexample() const { return std::get<Counterexample>(value); }

    friend bool operator==(const MovabilityResult &, const MovabilityResult &) = default;
};

/// Exhaustive decision of strong movability. The witness takes the
/// lexicographically least (M(X), m_X) per object and the least lift per p;
/// on failure the counterexample is for the least failing object.
MovabilityResult check_strongly_movable(const FiniteCategory & k, Execution exec = Execution::parallel);

/// Movability of phi.source() relative to phi.target() and phi.
MovabilityResult check_movable_wrt(const Functor & phi, Execution exec = Execution::parallel);

/// Movability of the category of elements of h relative to the base and the
/// forgetful functor.
MovabilityResult space_movability(const Copresheaf & h, Execution exec = Execution::parallel);

/// Re-checks every equation of a witness. Returns an empty string when it
/// verifies, otherwise a description of the first failure.
std::string verify_strongly_movable(const FiniteCategory & k, const MovabilityWitness & w);
std::string verify_movable_wrt(const Functor & phi, const MovabilityWitness & w);

/// Pushes a witness for (K, L, phi) through f : L -> L'. Throws Error{VerificationFailed}.
MovabilityWitness postcompose_transfer(const Functor & phi, const MovabilityWitness & w, const Functor & f);

/// Given phi : G.F => 1_K and a strong witness for L, builds one for K with
/// M(X) = G(M(F X)), m_X = phi(X) . G(m_{F X}), u = phi(Y) . G(v).
/// Throws Error{VerificationFailed} or Error{SourceTargetMismatch}.
MovabilityWitness weak_domination_transfer(const Functor & f, const Functor & g, const NaturalTransformation & phi,
                                           const MovabilityWitness & witness_l);

/// Componentwise witness of the product from witnesses of the factors.
MovabilityWitness product_transport(const ProductCategory & product, const std::vector<MovabilityWitness> & factors);

/// Witness of factor i0 recovered from a witness of the product; the other
/// components are pinned to object 0 and padded with identities.
MovabilityWitness factor_transport(const ProductCategory & product, const MovabilityWitness & w, std::size_t i0);

} // namespace movcat
