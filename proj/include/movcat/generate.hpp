#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "movcat/dsl.hpp"

namespace movcat {

/// Portable draws: modulo reduction and a hand-rolled shuffle, so a seed means
/// the same instance on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next() { return engine_(); }
    /// Uniform-ish in [0, n); 0 when n == 0.
    std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }
    /// Inclusive range.
    std::size_t range(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
    bool chance(unsigned num, unsigned den) { return below(den) < num; }

    template <typename T>
    void shuffle(std::vector<T> & v)
    {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

    template <typename T>
    const T & pick(const std::vector<T> & v)
    {
        return v[below(v.size())];
    }

private:
    std::mt19937_64 engine_;
};

/// forked: a non-directed poset under a fresh bottom, so some up-set is not directed.
enum class IndexShape { any, directed, non_directed, forked };

struct GenParams {
    std::size_t max_objects = 5;
    std::size_t max_morphisms = 24;
    std::size_t max_fiber = 3;
    IndexShape index_shape = IndexShape::any;
};

/// Throws Error{ParamsOutOfRange} unless 1 <= caps <= global limits.
void check_params(const GenParams & p);

/// A generated category together with the presentation it came from.
struct GeneratedCategory {
    std::variant<FiniteCategory, FinitePoset, Monoid> source;
    FiniteCategory category;

    /// Entity declaring the presentation under `name`.
    Entity entity(const std::string & name) const;
};

/// n elements a, b, c, ...; each pair of a random linear order is related
/// with a random density, then closed. Stays within `max_morphisms` arrows.
FinitePoset random_poset(Rng & rng, std::size_t n, std::size_t max_morphisms);
/// Poset of the requested shape with 1..max_objects elements.
FinitePoset random_index_poset(Rng & rng, std::size_t max_objects, IndexShape shape);
/// Monoid of self-maps of a 2- or 3-element set generated by 1-2 random maps.
Monoid random_monoid(Rng & rng, std::size_t max_elements);
/// Free category on a random acyclic quiver (arrows are paths).
FiniteCategory random_free_acyclic(Rng & rng, std::size_t max_objects, std::size_t max_morphisms);
/// 50% posets, 25% monoids, 25% products, coslices, elements or free categories.
GeneratedCategory random_category(Rng & rng, const GenParams & p);
/// Quotient of a sum of 1-2 representables by a random congruence, with every
/// fiber cut down to at most `max_fiber` elements.
Copresheaf random_copresheaf(Rng & rng, const FiniteCategory & c, std::size_t max_fiber);

/// A random functor index^op -> C as a system. `pinned` fixes X at given indices.
InverseSystem random_system(Rng & rng, const FiniteCategory & c, const FinitePoset & index,
                            const std::vector<std::optional<ObjRef>> & pinned = {});
/// A random cone compatible with the bonds, if any exists.
std::optional<SystemCone> random_cone(Rng & rng, const InverseSystem & s, const Copresheaf & h);

/// Union-closed family of subsets of a small set, ordered by inclusion.
FinitePoset random_join_semilattice(Rng & rng, std::size_t max_objects);

/// Random pair, K <= K x T, or K with an initial object against the terminal
/// category, in equal shares.
std::pair<GeneratedCategory, GeneratedCategory> random_domination_pair(Rng & rng, const GenParams & p);

/// Entities C (ambient), I (index), H (copresheaf) and S (system with a
/// compatible cone), index shaped per `params.index_shape`.
Document random_system_document(Rng & rng, const GenParams & params);

enum class InstanceKind { poset, monoid, category, copresheaf, system, domination_pair };

/// Throws Error{ParamsOutOfRange} for an unknown name.
InstanceKind parse_instance_kind(std::string_view name);
std::string_view to_string(InstanceKind kind);

/// Deterministic in (kind, seed, params).
Document generate_instance(InstanceKind kind, std::uint64_t seed, const GenParams & params = {});

} // namespace movcat
