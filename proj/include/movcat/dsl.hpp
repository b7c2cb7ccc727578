#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "movcat/category.hpp"
#include "movcat/search.hpp"
#include "movcat/systems.hpp"

namespace movcat {

struct CategoryDecl {
    FiniteCategory category;
    friend bool operator==(const CategoryDecl &, const CategoryDecl &) = default;
};

struct PosetDecl {
    FinitePoset poset;
    friend bool operator==(const PosetDecl &, const PosetDecl &) = default;
};

struct MonoidDecl {
    Monoid monoid;
    friend bool operator==(const MonoidDecl &, const MonoidDecl &) = default;
};

struct FunctorDecl {
    std::string source;
    std::string target;
    Functor functor;
    friend bool operator==(const FunctorDecl &, const FunctorDecl &) = default;
};

struct NatTransDecl {
    std::string from;
    std::string to;
    NaturalTransformation transformation;
    friend bool operator==(const NatTransDecl &, const NatTransDecl &) = default;
};

struct CopresheafDecl {
    std::string base;
    Copresheaf presheaf;
    friend bool operator==(const CopresheafDecl &, const CopresheafDecl &) = default;
};

struct SystemDecl {
    std::string ambient;
    std::string index;
    std::optional<std::string> presheaf;
    InverseSystem system;
    std::optional<SystemCone> cone;
    friend bool operator==(const SystemDecl &, const SystemDecl &) = default;
};

/// Unnamed in the text; identified by the category it designates on.
struct CoproductsDecl {
    std::string base;
    CoproductDesignation designation;
    friend bool operator==(const CoproductsDecl &, const CoproductsDecl &) = default;
};

using Declaration = std::variant<CategoryDecl, PosetDecl, MonoidDecl, FunctorDecl, NatTransDecl, CopresheafDecl,
                                 SystemDecl, CoproductsDecl>;

struct Entity {
    std::string name; // empty for coproducts
    Declaration decl;
    friend bool operator==(const Entity &, const Entity &) = default;
};

/// Ordered named entities; every reference points to an earlier entity.
class Document {
public:
    /// Checks name uniqueness, that references resolve to earlier entities of
    /// the right kind, and that the stored values agree with them.
    /// Throws Error{DuplicateName | UnresolvedReference | SourceTargetMismatch}.
    void add(Entity e);

    const std::vector<Entity> & entities() const noexcept { return entities_; }
    const Entity * find(std::string_view name) const;

    /// Categories, posets and monoids all resolve to a category.
    /// Throws Error{UnresolvedReference}.
    FiniteCategory category(std::string_view name) const;
    bool is_category(std::string_view name) const;
    const FinitePoset & poset(std::string_view name) const;
    const Functor & functor(std::string_view name) const;
    const NaturalTransformation & nat_trans(std::string_view name) const;
    const Copresheaf & copresheaf(std::string_view name) const;
    const SystemDecl & system(std::string_view name) const;
    /// The designation declared on category `base`, if any.
    const CoproductDesignation * coproducts_on(std::string_view base) const;

    friend bool operator==(const Document & a, const Document & b) { return a.entities_ == b.entities_; }

private:
    std::vector<Entity> entities_;
    std::vector<FiniteCategory> categories_; // parallel to entities_, empty when not category-valued
};

/// Parses and validates. Throws SyntaxError, ReferenceError or ValidationError
/// (the latter with details prefixed by the entity and its line).
Document parse_document(std::string_view text);

/// Canonical text: entities in document order, members in ref order, one
/// declaration per line.
std::string serialize_document(const Document & doc);

/// Canonical text of a single entity.
std::string serialize_entity(const Entity & e);

/// True for [A-Za-z_][A-Za-z0-9_]*.
bool is_identifier(std::string_view s);

} // namespace movcat
