#pragma once

#include <functional>
#include <optional>
#include <tuple>
#include <vector>

#include "movcat/category.hpp"

namespace movcat {

inline constexpr std::size_t default_budget = 1'000'000;

/// Counts emitted candidates. `truncated` is set when a candidate was found
/// after the budget ran out, so an untruncated search was exhaustive.
struct Budget {
    std::size_t remaining = default_budget;
    bool truncated = false;

    bool take()
    {
        if (remaining == 0) {
            truncated = true;
            return false;
        }
        --remaining;
        return true;
    }
};

/// Optional restrictions on the functors visited.
struct FunctorConstraints {
    /// Per source object, the allowed target objects. Empty means unrestricted.
    std::vector<std::vector<bool>> allowed_objects;
    /// Per source morphism, a fixed image. Empty means unrestricted.
    std::vector<std::optional<MorRef>> pinned_morphisms;
};

/// Visits every functor K -> L in lexicographic (obj_map, mor_map) order,
/// pruning on typing, identities and composition as assignments complete.
/// `visit` returns false to stop early.
void for_each_functor(const FiniteCategory & k, const FiniteCategory & l, Budget & budget,
                      const std::function<bool(const Functor &)> & visit, const FunctorConstraints & constraints = {});

struct FunctorEnumeration {
    std::vector<Functor> functors;
    bool truncated = false;
};

FunctorEnumeration enumerate_functors(const FiniteCategory & k, const FiniteCategory & l,
                                      std::size_t budget = default_budget);

/// Visits every natural transformation F => G, components chosen in object
/// order, each naturality square checked once both of its components exist.
void for_each_nat_trans(const Functor & f, const Functor & g, Budget & budget,
                        const std::function<bool(const NaturalTransformation &)> & visit);

struct NatTransEnumeration {
    std::vector<NaturalTransformation> transformations;
    bool truncated = false;
};

NatTransEnumeration enumerate_nat_trans(const Functor & f, const Functor & g, std::size_t budget = default_budget);

enum class SearchStatus { found, none, truncated };

struct DominationResult {
    SearchStatus status = SearchStatus::none;
    Functor f;
    Functor g;
};

/// F : K -> L and G : L -> K with G . F = 1_K; F outer, G inner with G pinned
/// on the image of F.
DominationResult find_functorial_domination(const FiniteCategory & k, const FiniteCategory & l,
                                            std::size_t budget = default_budget);

struct WeakDominationResult {
    SearchStatus status = SearchStatus::none;
    Functor f;
    Functor g;
    NaturalTransformation phi;
    /// G . F = 1_K exactly.
    bool strict = false;
};

/// F, G and phi : G . F => 1_K. Strict pairs are tried first; otherwise the
/// lexicographically first triple (F, then G, then phi) is reported.
WeakDominationResult find_weak_domination(const FiniteCategory & k, const FiniteCategory & l,
                                          std::size_t budget = default_budget);

// ---------------------------------------------------------------------------

struct CoproductEntry {
    ObjRef object;
    MorRef inj1;
    MorRef inj2;

    friend bool operator==(const CoproductEntry &, const CoproductEntry &) = default;
};

/// Explicitly chosen binary coproducts in a finite category. A pair declared
/// as (a, b) also serves (b, a) with the injections swapped.
class CoproductDesignation {
public:
    struct Declared {
        ObjRef left;
        ObjRef right;
        CoproductEntry entry;
        friend bool operator==(const Declared &, const Declared &) = default;
    };

    CoproductDesignation() = default;

    /// Checks injection typing and the universal property exhaustively.
    /// Throws ValidationError{UniversalPropertyFails}.
    static CoproductDesignation validate(FiniteCategory c, std::vector<Declared> pairs);

    const FiniteCategory & category() const noexcept { return category_; }
    const std::vector<Declared> & declared() const noexcept { return declared_; }

    std::optional<CoproductEntry> find(ObjRef a, ObjRef b) const;
    /// Unique h : a+b -> q with h . inj1 = f and h . inj2 = g.
    /// Throws Error{NoDesignatedCoproducts} if (a, b) has no designation.
    MorRef copair(ObjRef a, ObjRef b, MorRef f, MorRef g) const;

    friend bool operator==(const CoproductDesignation &, const CoproductDesignation &) = default;

private:
    FiniteCategory category_;
    std::vector<Declared> declared_;
};

/// The designated coproduct of a join-semilattice's thin category: a+b = a v b.
/// Throws Error{NoDesignatedCoproducts} if some pair has no join.
CoproductDesignation join_coproducts(const FiniteCategory & thin);

struct CoproductDomination {
    CosliceCategory sum;    // K: under x1 + x2
    CosliceCategory left;   // under x1
    CosliceCategory right;  // under x2
    ProductCategory product; // L = left x right
    Functor f;               // restriction along the injections
    Functor g;               // copairing into designated coproducts
    NaturalTransformation phi; // fold maps, G . F => 1_K
};

/// Builds and validates the weak domination of the coslice under x1 + x2 by
/// the product of the coslices under x1 and x2.
/// Throws Error{NoDesignatedCoproducts} or Error{UniversalPropertyFails}.
CoproductDomination coproduct_coslice_domination(const CoproductDesignation & d, ObjRef x1, ObjRef x2);

} // namespace movcat
