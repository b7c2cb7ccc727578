#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "movcat/category.hpp"
#include "movcat/parallel.hpp"

namespace movcat {

/// Objects X_a indexed by a finite poset with bonds p(a, a') : X_a' -> X_a
/// for a <= a'. The index poset need not be directed; directed() reports it.
class InverseSystem {
public:
    InverseSystem() = default;

    /// `bonds` is row-major n*n; entry (a, b) is read when a < b in the index
    /// order and must be empty otherwise (the diagonal may hold the identity).
    /// Throws ValidationError{SystemTypeError | BondFunctorialityBroken}.
    static InverseSystem validate(FiniteCategory ambient, FinitePoset index, std::vector<ObjRef> objects,
                                  std::vector<std::optional<MorRef>> bonds);

    const FiniteCategory & ambient() const noexcept { return ambient_; }
    const FinitePoset & index() const noexcept { return index_; }
    std::size_t size() const noexcept { return objects_.size(); }
    ObjRef object(std::size_t a) const { return objects_.at(a); }
    /// p(a, b) : X_b -> X_a, requires a <= b.
    MorRef bond(std::size_t a, std::size_t b) const { return bonds_.at(a * size() + b); }
    bool leq(std::size_t a, std::size_t b) const { return index_.leq(a, b); }
    bool directed() const noexcept { return index_.directed(); }

    friend bool operator==(const InverseSystem &, const InverseSystem &) = default;

private:
    FiniteCategory ambient_;
    FinitePoset index_;
    std::vector<ObjRef> objects_;
    std::vector<MorRef> bonds_; // identity on the diagonal, unused where a !<= b
};

/// Elements p_a of H(X_a) standing in for the projections from the apex.
class SystemCone {
public:
    SystemCone() = default;

    /// Type check only; condition 1 is reported by check_associated.
    /// Throws ValidationError{SystemTypeError}.
    static SystemCone validate(const InverseSystem & s, Copresheaf h, std::vector<std::uint32_t> elements);

    const Copresheaf & presheaf() const noexcept { return h_; }
    std::uint32_t element(std::size_t a) const { return elements_.at(a); }
    const std::vector<std::uint32_t> & elements() const noexcept { return elements_; }

    friend bool operator==(const SystemCone &, const SystemCone &) = default;

private:
    Copresheaf h_;
    std::vector<std::uint32_t> elements_;
};

struct SmStep {
    std::size_t later;                // a''
    std::optional<std::size_t> upper; // a*, SM1 only
    MorRef r;                         // X_a' -> X_a''

    friend bool operator==(const SmStep &, const SmStep &) = default;
};

struct SmIndexWitness {
    std::size_t chosen; // a'
    std::vector<SmStep> steps;

    friend bool operator==(const SmIndexWitness &, const SmIndexWitness &) = default;
};

struct SmWitness {
    /// Indexed by a.
    std::vector<SmIndexWitness> per_index;

    friend bool operator==(const SmWitness &, const SmWitness &) = default;
};

struct SmCounterexample {
    std::size_t index; // a
    /// (a', first a'' defeating it) per candidate a'.
    std::vector<std::pair<std::size_t, std::size_t>> defeats;

    friend bool operator==(const SmCounterexample &, const SmCounterexample &) = default;
};

struct SmResult {
    std::variant<SmWitness, SmCounterexample> value;

    bool holds() const noexcept { return value.index() == 0; }
    explicit operator bool() const noexcept { return holds(); }
    const SmWitness & witness() const { return std::get<SmWitness>(value); }
    const SmCounterexample & counterexample() const { return std::get<SmCounterexample>(value); }

    friend bool operator==(const SmResult &, const SmResult &) = default;
};

/// For all a there is a' >= a such that for all a'' >= a there are
/// a* >= a', a'' and r : X_a' -> X_a'' with p(a, a') = p(a, a'') . r and
/// r . p(a', a*) = p(a'', a*). One a* serves both equalities.
SmResult check_sm1(const InverseSystem & s, Execution exec = Execution::parallel);

/// As SM1 with the second equality read through the cone:
/// H(r)(p_a') = p_a''. Throws Error{ConeIncompatible} if condition 1 fails.
SmResult check_sm2(const InverseSystem & s, const SystemCone & cone, Execution exec = Execution::parallel);

struct AssociatedReport {
    struct Cond3Failure {
        std::size_t index;
        ObjRef q;
        MorRef f;
        MorRef g;
        friend bool operator==(const Cond3Failure &, const Cond3Failure &) = default;
    };

    bool directed = true;
    bool cond1 = true;
    bool cond2 = true;
    bool cond3 = true;
    std::vector<std::pair<std::size_t, std::size_t>> cond1_failures;      // (a, a')
    std::vector<std::pair<ObjRef, std::uint32_t>> cond2_failures;         // (Q, x)
    std::vector<Cond3Failure> cond3_failures;

    /// Conditions 1-3; directedness is reported separately.
    bool associated() const noexcept { return cond1 && cond2 && cond3; }
};

AssociatedReport check_associated(const InverseSystem & s, const SystemCone & cone);

struct StarLift {
    ObjRef q2;       // Q''
    std::uint32_t x2; // f''
    MorRef eta1;     // eta' : Q'' -> Q
    MorRef eta2;     // eta'' : Q' -> Q''

    friend bool operator==(const StarLift &, const StarLift &) = default;
};

struct StarEntry {
    ObjRef q;
    std::uint32_t x;
    ObjRef q1;        // Q'
    std::uint32_t x1; // f'
    MorRef eta;       // Q' -> Q
    std::vector<StarLift> lifts;

    friend bool operator==(const StarEntry &, const StarEntry &) = default;
};

struct StarWitness {
    /// One entry per element (Q, x), in (Q, x) order.
    std::vector<StarEntry> entries;

    friend bool operator==(const StarWitness &, const StarWitness &) = default;
};

struct StarDefeat {
    ObjRef q1;
    std::uint32_t x1;
    MorRef eta;
    ObjRef q2;
    std::uint32_t x2;
    MorRef eta1;

    friend bool operator==(const StarDefeat &, const StarDefeat &) = default;
};

struct StarCounterexample {
    ObjRef q;
    std::uint32_t x;
    std::vector<StarDefeat> defeats;

    friend bool operator==(const StarCounterexample &, const StarCounterexample &) = default;
};

struct StarResult {
    std::variant<StarWitness, StarCounterexample> value;

    bool holds() const noexcept { return value.index() == 0; }
    explicit operator bool() const noexcept { return holds(); }
    const StarWitness & witness() const { return std::get<StarWitness>(value); }
    const StarCounterexample & counterexample() const { return std::get<StarCounterexample>(value); }

    friend bool operator==(const StarResult &, const StarResult &) = default;
};

/// Condition (*) evaluated directly on the copresheaf: for every x in H(Q)
/// there are x' in H(Q') and eta : Q' -> Q with H(eta)(x') = x such that every
/// other factorization (x'', eta') of x admits eta'' : Q' -> Q'' with
/// eta' . eta'' = eta and H(eta'')(x') = x''.
StarResult check_star(const Copresheaf & h, Execution exec = Execution::parallel);

} // namespace movcat
