#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "movcat/error.hpp"

namespace movcat {

struct ObjRef {
    std::uint32_t index = 0;
    friend auto operator<=>(ObjRef, ObjRef) = default;
};

struct MorRef {
    std::uint32_t index = 0;
    friend auto operator<=>(MorRef, MorRef) = default;
};

/// Caps guarding the exponential constructions. Exceeding one is an error.
struct Limits {
    std::size_t max_objects = 64;
    std::size_t max_morphisms = 4096;
};

/// Process-wide default caps; the CLI may adjust them at startup.
Limits & default_limits();

struct Morphism {
    std::string name;
    ObjRef dom;
    ObjRef cod;
    friend bool operator==(const Morphism &, const Morphism &) = default;
};

/// A finite category stored as a full composition table.
///
/// Layout is canonical: morphism i for i < object_count() is the identity of
/// object i, named "id_<object>". Non-identity morphisms follow in
/// construction order. Values are immutable and share their tables, so
/// copies are cheap and safe to read from several threads.
class FiniteCategory {
public:
    /// The empty category.
    FiniteCategory();

    std::size_t object_count() const noexcept;
    std::size_t morphism_count() const noexcept;

    const std::string & object_name(ObjRef a) const;
    const Morphism & morphism(MorRef f) const;
    const std::string & morphism_name(MorRef f) const { return morphism(f).name; }
    ObjRef dom(MorRef f) const { return morphism(f).dom; }
    ObjRef cod(MorRef f) const { return morphism(f).cod; }

    static MorRef identity(ObjRef a) noexcept { return MorRef{a.index}; }
    bool is_identity(MorRef f) const noexcept { return f.index < object_count(); }

    /// comp(g, f) = g after f; nullopt when cod(f) != dom(g).
    std::optional<MorRef> try_compose(MorRef g, MorRef f) const;
    /// Throws Error{NotComposable}.
    MorRef compose(MorRef g, MorRef f) const;
    /// Precondition: cod(f) == dom(g).
    MorRef comp(MorRef g, MorRef f) const noexcept;

    /// Morphisms a -> b in ascending ref order.
    std::span<const MorRef> hom(ObjRef a, ObjRef b) const;
    /// Morphisms with codomain b, ascending.
    std::span<const MorRef> into(ObjRef b) const;
    /// Morphisms with domain a, ascending.
    std::span<const MorRef> out_of(ObjRef a) const;

    std::optional<ObjRef> find_object(std::string_view name) const;
    std::optional<MorRef> find_morphism(std::string_view name) const;

    bool valid(ObjRef a) const noexcept { return a.index < object_count(); }
    bool valid(MorRef f) const noexcept { return f.index < morphism_count(); }

    /// Structural equality of names and tables.
    friend bool operator==(const FiniteCategory & a, const FiniteCategory & b);

    struct Data;

private:
    explicit FiniteCategory(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
    std::shared_ptr<const Data> data_;

    friend class CategoryBuilder;
};

/// Index-based construction of a FiniteCategory.
///
/// All objects must be added before the first arrow. Identities are implicit;
/// composites with an identity are completed from the identity laws, every
/// other composable pair needs an explicit set_composite.
class CategoryBuilder {
public:
    explicit CategoryBuilder(Limits limits = default_limits());

    ObjRef add_object(std::string name);
    MorRef add_arrow(std::string name, ObjRef dom, ObjRef cod);
    void set_composite(MorRef g, MorRef f, MorRef result);

    /// Derived constructions may produce colliding names; with this set the
    /// builder suffixes later duplicates instead of rejecting them.
    void dedupe_names(bool on) { dedupe_ = on; }

    std::size_t object_count() const noexcept { return objects_.size(); }
    std::size_t morphism_count() const noexcept { return objects_.size() + arrows_.size(); }

    /// Validates every axiom; throws ValidationError listing all violations.
    FiniteCategory build() &&;

private:
    Limits limits_;
    bool dedupe_ = false;
    bool arrows_started_ = false;
    std::vector<std::string> objects_;
    std::vector<Morphism> arrows_;
    std::vector<std::pair<std::pair<MorRef, MorRef>, MorRef>> composites_;
};

/// Name-based category tables as they come from a document.
struct RawCategory {
    struct Arrow {
        std::string name;
        std::string dom;
        std::string cod;
    };
    struct Composite {
        std::string g;
        std::string f;
        std::string result;
    };
    std::vector<std::string> objects;
    std::vector<Arrow> arrows;
    std::vector<Composite> composites;
};

FiniteCategory validate_category(const RawCategory & raw, Limits limits = default_limits());

std::vector<MorRef> hom(const FiniteCategory & c, ObjRef a, ObjRef b);
MorRef compose(const FiniteCategory & c, MorRef g, MorRef f);

// ---------------------------------------------------------------------------

class Functor {
public:
    /// The empty functor between empty categories.
    Functor() = default;

    /// Checks typing, identities and composition; throws ValidationError.
    static Functor validate(FiniteCategory source, FiniteCategory target, std::vector<ObjRef> obj_map,
                            std::vector<MorRef> mor_map);
    /// Skips the law checks. For constructions whose laws hold by design.
    static Functor trusted(FiniteCategory source, FiniteCategory target, std::vector<ObjRef> obj_map,
                           std::vector<MorRef> mor_map);

    static Functor identity(const FiniteCategory & c);
    static Functor constant(const FiniteCategory & source, const FiniteCategory & target, ObjRef value);

    const FiniteCategory & source() const noexcept { return source_; }
    const FiniteCategory & target() const noexcept { return target_; }

    ObjRef operator()(ObjRef a) const { return obj_map_.at(a.index); }
    MorRef operator()(MorRef f) const { return mor_map_.at(f.index); }

    std::span<const ObjRef> obj_map() const noexcept { return obj_map_; }
    std::span<const MorRef> mor_map() const noexcept { return mor_map_; }

    friend bool operator==(const Functor &, const Functor &) = default;

private:
    Functor(FiniteCategory s, FiniteCategory t, std::vector<ObjRef> om, std::vector<MorRef> mm)
        : source_(std::move(s)), target_(std::move(t)), obj_map_(std::move(om)), mor_map_(std::move(mm)) {}

    FiniteCategory source_;
    FiniteCategory target_;
    std::vector<ObjRef> obj_map_;
    std::vector<MorRef> mor_map_;
};

/// Returns G after F. Throws Error{SourceTargetMismatch}.
Functor compose_functors(const Functor & g, const Functor & f);

class NaturalTransformation {
public:
    NaturalTransformation() = default;

    /// Component at A must be a morphism from(A) -> to(A); every naturality
    /// square must commute. Throws ValidationError.
    static NaturalTransformation validate(Functor from, Functor to, std::vector<MorRef> components);
    static NaturalTransformation trusted(Functor from, Functor to, std::vector<MorRef> components);
    static NaturalTransformation identity(const Functor & f);

    const Functor & from() const noexcept { return from_; }
    const Functor & to() const noexcept { return to_; }
    MorRef operator()(ObjRef a) const { return components_.at(a.index); }
    std::span<const MorRef> components() const noexcept { return components_; }

    friend bool operator==(const NaturalTransformation &, const NaturalTransformation &) = default;

private:
    NaturalTransformation(Functor f, Functor g, std::vector<MorRef> c)
        : from_(std::move(f)), to_(std::move(g)), components_(std::move(c)) {}

    Functor from_;
    Functor to_;
    std::vector<MorRef> components_;
};

// ---------------------------------------------------------------------------

/// A finite partial order stored as a boolean matrix.
class FinitePoset {
public:
    FinitePoset() = default;

    /// Applies reflexive-transitive closure to `leq`, then checks antisymmetry.
    static FinitePoset from_relation(std::vector<std::string> names,
                                     const std::vector<std::pair<std::size_t, std::size_t>> & leq);
    /// Validates an explicit matrix (row-major, size n*n).
    static FinitePoset from_matrix(std::vector<std::string> names, std::vector<bool> matrix);

    std::size_t size() const noexcept { return names_.size(); }
    const std::string & name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string> & names() const noexcept { return names_; }
    bool leq(std::size_t a, std::size_t b) const { return leq_[a * size() + b]; }
    /// Every pair has an upper bound.
    bool directed() const noexcept { return directed_; }
    std::optional<std::size_t> find(std::string_view name) const;

    FinitePoset opposite() const;

    friend bool operator==(const FinitePoset &, const FinitePoset &) = default;

private:
    FinitePoset(std::vector<std::string> names, std::vector<bool> leq);

    std::vector<std::string> names_;
    std::vector<bool> leq_;
    bool directed_ = true;
};

/// Multiplication table with a two-sided unit.
class Monoid {
public:
    /// Table is row-major: table[a * n + b] = a * b. Throws Error{NotAMonoid}.
    static Monoid validate(std::vector<std::string> elements, std::size_t unit, std::vector<std::size_t> table);

    std::size_t size() const noexcept { return elements_.size(); }
    const std::vector<std::string> & elements() const noexcept { return elements_; }
    std::size_t unit() const noexcept { return unit_; }
    std::size_t mul(std::size_t a, std::size_t b) const { return table_[a * size() + b]; }

    friend bool operator==(const Monoid &, const Monoid &) = default;

private:
    Monoid() = default;
    std::vector<std::string> elements_;
    std::size_t unit_ = 0;
    std::vector<std::size_t> table_;
};

/// Finite set-valued functor on a finite category.
class Copresheaf {
public:
    /// fibers[q] names the elements of H(q); action[f][i] is the image of
    /// element i of H(dom f) in H(cod f). Identity actions may be left empty
    /// and are filled in. Throws ValidationError{InvalidCopresheaf}.
    static Copresheaf validate(FiniteCategory base, std::vector<std::vector<std::string>> fibers,
                               std::vector<std::vector<std::uint32_t>> action);

    /// H(q) = hom(p, q), acting by post-composition; elements carry arrow names.
    static Copresheaf representable(const FiniteCategory & base, ObjRef p);

    const FiniteCategory & base() const noexcept { return base_; }
    std::size_t fiber_size(ObjRef q) const { return fibers_.at(q.index).size(); }
    const std::vector<std::string> & fiber(ObjRef q) const { return fibers_.at(q.index); }
    const std::string & element_name(ObjRef q, std::uint32_t x) const { return fibers_.at(q.index).at(x); }
    std::optional<std::uint32_t> find_element(ObjRef q, std::string_view name) const;
    std::uint32_t act(MorRef f, std::uint32_t x) const { return action_[f.index][x]; }

    friend bool operator==(const Copresheaf &, const Copresheaf &) = default;

public:
    /// The empty copresheaf on the empty category.
    Copresheaf() = default;

private:
    FiniteCategory base_;
    std::vector<std::vector<std::string>> fibers_;
    std::vector<std::vector<std::uint32_t>> action_;
};

// ---------------------------------------------------------------------------
// Canonical constructions

/// Thin category: one arrow a -> b iff a <= b.
FiniteCategory poset_category(const FinitePoset & p);

/// One-object category on a single object "pt"; non-unit elements keep their names.
FiniteCategory monoid_category(const Monoid & m);

struct ProductCategory {
    FiniteCategory category;
    std::vector<FiniteCategory> factors;
    std::vector<Functor> projections;
    /// Per product object/morphism, its component refs.
    std::vector<std::vector<ObjRef>> object_components;
    std::vector<std::vector<MorRef>> morphism_components;

    ObjRef object_of(std::span<const ObjRef> components) const;
    MorRef morphism_of(std::span<const MorRef> components) const;

    std::vector<MorRef> mor_lookup;
};

/// Componentwise product. Throws Error{SizeBoundExceeded}.
ProductCategory product_category(const std::vector<FiniteCategory> & factors, Limits limits = default_limits());

/// Category of objects under `apex`: objects are arrows out of the apex, an
/// arrow from f'' to f' is each eta with eta . f'' = f'.
struct CosliceCategory {
    FiniteCategory category;
    FiniteCategory base;
    ObjRef apex;
    Functor forget;
    /// underlying[o] is the base arrow apex -> cod represented by object o.
    std::vector<MorRef> underlying;

    ObjRef object_of(MorRef arrow_from_apex) const;
    /// Coslice morphism given by eta starting at object `from`.
    MorRef morphism_of(MorRef eta, ObjRef from) const;

    std::vector<std::uint32_t> object_lookup;
    std::vector<std::uint32_t> morphism_lookup;
};

CosliceCategory coslice_category(const FiniteCategory & c, ObjRef apex, Limits limits = default_limits());

/// Category of elements: objects (q, x in H(q)), an arrow (q'', x'') -> (q', x')
/// is each eta: q'' -> q' whose action sends x'' to x'.
struct ElementsCategory {
    FiniteCategory category;
    Copresheaf presheaf;
    Functor forget;
    std::vector<std::pair<ObjRef, std::uint32_t>> object_elements;

    ObjRef object_of(ObjRef q, std::uint32_t x) const;
    MorRef morphism_of(MorRef eta, std::uint32_t x) const;

    std::vector<std::uint32_t> fiber_offset;
    std::vector<std::uint32_t> morphism_offset;
};

ElementsCategory elements_category(const Copresheaf & h, Limits limits = default_limits());

/// C with a fresh object placed first that has exactly one arrow to every object.
FiniteCategory adjoin_initial_object(const FiniteCategory & c, const std::string & name = "init");

/// Objects with exactly one arrow to every object, ascending.
std::vector<ObjRef> initial_objects(const FiniteCategory & c);

} // namespace movcat
