#include "movcat/category.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

namespace movcat {

Limits & default_limits()
{
    static Limits limits;
    return limits;
}

struct FiniteCategory::Data {
    std::vector<std::string> objects;
    std::vector<Morphism> morphisms;
    std::vector<std::int32_t> comp; // row g, column f
    std::vector<std::vector<MorRef>> homs;
    std::vector<std::vector<MorRef>> into;
    std::vector<std::vector<MorRef>> out;
    std::unordered_map<std::string, std::uint32_t> object_index;
    std::unordered_map<std::string, std::uint32_t> morphism_index;
};

namespace {
    std::shared_ptr<const FiniteCategory::Data> empty_data()
    {
        static const auto data = std::make_shared<const FiniteCategory::Data>();
        return data;
    }

    std::string mor_label(const std::vector<Morphism> & ms, MorRef f)
    {
        return f.index < ms.size() ? ms[f.index].name : "#" + std::to_string(f.index);
    }

    void make_unique(std::vector<std::string> & names, std::set<std::string> & taken, std::size_t from)
    {
        for (std::size_t i = from; i < names.size(); ++i) {
            if (taken.insert(names[i]).second)
                continue;
            for (int k = 2;; ++k) {
                auto candidate = names[i] + "_" + std::to_string(k);
                if (taken.insert(candidate).second) {
                    names[i] = std::move(candidate);
                    break;
                }
            }
        }
    }
}

FiniteCategory::FiniteCategory() : data_(empty_data()) {}

std::size_t FiniteCategory::object_count() const noexcept { return data_->objects.size(); }
std::size_t FiniteCategory::morphism_count() const noexcept { return data_->morphisms.size(); }

const std::string & FiniteCategory::object_name(ObjRef a) const { return data_->objects.at(a.index); }
const Morphism & FiniteCategory::morphism(MorRef f) const { return data_->morphisms.at(f.index); }

std::optional<MorRef> FiniteCategory::try_compose(MorRef g, MorRef f) const
{
    if (!valid(g) || !valid(f))
        return std::nullopt;
    auto r = data_->comp[static_cast<std::size_t>(g.index) * morphism_count() + f.index];
    if (r < 0)
        return std::nullopt;
    return MorRef{static_cast<std::uint32_t>(r)};
}

MorRef FiniteCategory::compose(MorRef g, MorRef f) const
{
    auto r = try_compose(g, f);
    if (!r) {
        std::string gl = valid(g) ? morphism_name(g) : "#" + std::to_string(g.index);
        std::string fl = valid(f) ? morphism_name(f) : "#" + std::to_string(f.index);
        throw Error(ErrorKind::NotComposable, gl + " . " + fl);
    }
    return *r;
}

MorRef FiniteCategory::comp(MorRef g, MorRef f) const noexcept
{
    return MorRef{static_cast<std::uint32_t>(data_->comp[static_cast<std::size_t>(g.index) * morphism_count() + f.index])};
}

std::span<const MorRef> FiniteCategory::hom(ObjRef a, ObjRef b) const
{
    return data_->homs.at(static_cast<std::size_t>(a.index) * object_count() + b.index);
}

std::span<const MorRef> FiniteCategory::into(ObjRef b) const { return data_->into.at(b.index); }
std::span<const MorRef> FiniteCategory::out_of(ObjRef a) const { return data_->out.at(a.index); }

std::optional<ObjRef> FiniteCategory::find_object(std::string_view name) const
{
    auto it = data_->object_index.find(std::string(name));
    if (it == data_->object_index.end())
        return std::nullopt;
    return ObjRef{it->second};
}

std::optional<MorRef> FiniteCategory::find_morphism(std::string_view name) const
{
    auto it = data_->morphism_index.find(std::string(name));
    if (it == data_->morphism_index.end())
        return std::nullopt;
    return MorRef{it->second};
}

bool operator==(const FiniteCategory & a, const FiniteCategory & b)
{
    if (a.data_ == b.data_)
        return true;
    return a.data_->objects == b.data_->objects && a.data_->morphisms == b.data_->morphisms &&
           a.data_->comp == b.data_->comp;
}

std::vector<MorRef> hom(const FiniteCategory & c, ObjRef a, ObjRef b)
{
    auto h = c.hom(a, b);
    return {h.begin(), h.end()};
}

MorRef compose(const FiniteCategory & c, MorRef g, MorRef f) { return c.compose(g, f); }

// ---------------------------------------------------------------------------

CategoryBuilder::CategoryBuilder(Limits limits) : limits_(limits) {}

ObjRef CategoryBuilder::add_object(std::string name)
{
    if (arrows_started_)
        throw std::logic_error("CategoryBuilder: objects must precede arrows");
    objects_.push_back(std::move(name));
    return ObjRef{static_cast<std::uint32_t>(objects_.size() - 1)};
}

MorRef CategoryBuilder::add_arrow(std::string name, ObjRef dom, ObjRef cod)
{
    arrows_started_ = true;
    arrows_.push_back({std::move(name), dom, cod});
    return MorRef{static_cast<std::uint32_t>(objects_.size() + arrows_.size() - 1)};
}

void CategoryBuilder::set_composite(MorRef g, MorRef f, MorRef result)
{
    composites_.push_back({{g, f}, result});
}

FiniteCategory CategoryBuilder::build() &&
{
    const std::size_t n_obj = objects_.size();
    const std::size_t n_mor = n_obj + arrows_.size();
    if (n_obj > limits_.max_objects || n_mor > limits_.max_morphisms)
        throw Error(ErrorKind::SizeBoundExceeded, std::to_string(n_obj) + " objects, " + std::to_string(n_mor) +
                                                      " morphisms exceeds cap " + std::to_string(limits_.max_objects) +
                                                      "/" + std::to_string(limits_.max_morphisms));

    ViolationList violations;
    auto data = std::make_shared<FiniteCategory::Data>();

    {
        std::set<std::string> taken;
        data->objects = std::move(objects_);
        if (dedupe_)
            make_unique(data->objects, taken, 0);
        else
            for (const auto & o : data->objects)
                if (!taken.insert(o).second)
                    violations.add(ErrorKind::DuplicateName, "object " + o);
    }

    data->morphisms.reserve(n_mor);
    for (std::uint32_t i = 0; i < n_obj; ++i)
        data->morphisms.push_back({"id_" + data->objects[i], ObjRef{i}, ObjRef{i}});
    for (auto & a : arrows_) {
        if (a.dom.index >= n_obj || a.cod.index >= n_obj) {
            violations.add(ErrorKind::BadRef, "arrow " + a.name);
            a.dom = a.cod = ObjRef{0};
        }
        data->morphisms.push_back(std::move(a));
    }
    {
        std::vector<std::string> names;
        names.reserve(n_mor);
        for (const auto & m : data->morphisms)
            names.push_back(m.name);
        std::set<std::string> taken;
        if (dedupe_) {
            make_unique(names, taken, 0);
            for (std::size_t i = 0; i < n_mor; ++i)
                data->morphisms[i].name = std::move(names[i]);
        }
        else {
            for (const auto & nm : names)
                if (!taken.insert(nm).second)
                    violations.add(ErrorKind::DuplicateName, "arrow " + nm);
        }
    }
    violations.throw_if_any();

    const auto & ms = data->morphisms;
    auto label = [&](MorRef f) { return mor_label(ms, f); };
    data->comp.assign(n_mor * n_mor, -1);
    auto slot = [&](MorRef g, MorRef f) -> std::int32_t & { return data->comp[g.index * n_mor + f.index]; };

    for (const auto & [pair, h] : composites_) {
        auto [g, f] = pair;
        if (g.index >= n_mor || f.index >= n_mor || h.index >= n_mor) {
            violations.add(ErrorKind::BadRef, "composite " + label(g) + " . " + label(f) + " = " + label(h));
            continue;
        }
        if (ms[f.index].cod != ms[g.index].dom) {
            violations.add(ErrorKind::IllegalComposite, label(g) + " . " + label(f) + " (not composable)");
            continue;
        }
        if (ms[h.index].dom != ms[f.index].dom || ms[h.index].cod != ms[g.index].cod) {
            violations.add(ErrorKind::IllegalComposite,
                           label(g) + " . " + label(f) + " = " + label(h) + " (wrong dom/cod)");
            continue;
        }
        if (g.index < n_obj && h != f) {
            violations.add(ErrorKind::IdentityLawBroken, label(f) + " (" + label(g) + " . " + label(f) + " = " +
                                                             label(h) + ")");
            continue;
        }
        if (f.index < n_obj && h != g) {
            violations.add(ErrorKind::IdentityLawBroken, label(g) + " (" + label(g) + " . " + label(f) + " = " +
                                                             label(h) + ")");
            continue;
        }
        auto & cell = slot(g, f);
        if (cell >= 0 && cell != static_cast<std::int32_t>(h.index)) {
            violations.add(ErrorKind::IllegalComposite, label(g) + " . " + label(f) + " defined twice");
            continue;
        }
        cell = static_cast<std::int32_t>(h.index);
    }

    for (std::uint32_t i = 0; i < n_mor; ++i) {
        MorRef f{i};
        slot(MorRef{ms[i].cod.index}, f) = static_cast<std::int32_t>(i);
        slot(f, MorRef{ms[i].dom.index}) = static_cast<std::int32_t>(i);
    }

    data->out.assign(n_obj, {});
    data->into.assign(n_obj, {});
    data->homs.assign(n_obj * n_obj, {});
    for (std::uint32_t i = 0; i < n_mor; ++i) {
        const auto & m = ms[i];
        data->out[m.dom.index].push_back(MorRef{i});
        data->into[m.cod.index].push_back(MorRef{i});
        data->homs[m.dom.index * n_obj + m.cod.index].push_back(MorRef{i});
    }

    for (std::uint32_t fi = 0; fi < n_mor; ++fi)
        for (MorRef g : data->out[ms[fi].cod.index])
            if (slot(g, MorRef{fi}) < 0)
                violations.add(ErrorKind::MissingComposite, label(g) + " . " + label(MorRef{fi}));
    violations.throw_if_any();

    for (std::uint32_t fi = 0; fi < n_mor; ++fi) {
        MorRef f{fi};
        for (MorRef g : data->out[ms[fi].cod.index]) {
            MorRef gf{static_cast<std::uint32_t>(slot(g, f))};
            for (MorRef h : data->out[ms[g.index].cod.index]) {
                MorRef hg{static_cast<std::uint32_t>(slot(h, g))};
                if (slot(h, gf) != slot(hg, f))
                    violations.add(ErrorKind::AssocBroken, label(h) + ", " + label(g) + ", " + label(f));
            }
        }
    }
    violations.throw_if_any();

    for (std::uint32_t i = 0; i < n_obj; ++i)
        data->object_index.emplace(data->objects[i], i);
    for (std::uint32_t i = 0; i < n_mor; ++i)
        data->morphism_index.emplace(ms[i].name, i);

    return FiniteCategory(std::move(data));
}

FiniteCategory validate_category(const RawCategory & raw, Limits limits)
{
    CategoryBuilder b(limits);
    std::unordered_map<std::string, ObjRef> objs;
    ViolationList violations;
    for (const auto & o : raw.objects) {
        auto ref = b.add_object(o);
        if (!objs.emplace(o, ref).second)
            violations.add(ErrorKind::DuplicateName, "object " + o);
    }
    std::unordered_map<std::string, MorRef> mors;
    for (std::uint32_t i = 0; i < raw.objects.size(); ++i)
        mors.emplace("id_" + raw.objects[i], MorRef{i});
    for (const auto & a : raw.arrows) {
        auto d = objs.find(a.dom);
        auto c = objs.find(a.cod);
        if (d == objs.end() || c == objs.end()) {
            violations.add(ErrorKind::UnresolvedReference, "arrow " + a.name + ": " + a.dom + " -> " + a.cod);
            continue;
        }
        auto ref = b.add_arrow(a.name, d->second, c->second);
        if (!mors.emplace(a.name, ref).second)
            violations.add(ErrorKind::DuplicateName, "arrow " + a.name);
    }
    violations.throw_if_any();
    for (const auto & c : raw.composites) {
        auto g = mors.find(c.g), f = mors.find(c.f), h = mors.find(c.result);
        if (g == mors.end() || f == mors.end() || h == mors.end()) {
            violations.add(ErrorKind::UnresolvedReference, "compose " + c.g + " " + c.f + " = " + c.result);
            continue;
        }
        b.set_composite(g->second, f->second, h->second);
    }
    violations.throw_if_any();
    return std::move(b).build();
}

// ---------------------------------------------------------------------------

Functor Functor::trusted(FiniteCategory source, FiniteCategory target, std::vector<ObjRef> obj_map,
                         std::vector<MorRef> mor_map)
{
    return Functor(std::move(source), std::move(target), std::move(obj_map), std::move(mor_map));
}

Functor Functor::validate(FiniteCategory source, FiniteCategory target, std::vector<ObjRef> obj_map,
                          std::vector<MorRef> mor_map)
{
    ViolationList v;
    if (obj_map.size() != source.object_count() || mor_map.size() != source.morphism_count())
        v.add(ErrorKind::BadRef, "map sizes do not match source category");
    v.throw_if_any();
    for (auto o : obj_map)
        if (!target.valid(o))
            v.add(ErrorKind::BadRef, "object image #" + std::to_string(o.index));
    for (auto m : mor_map)
        if (!target.valid(m))
            v.add(ErrorKind::BadRef, "arrow image #" + std::to_string(m.index));
    v.throw_if_any();

    bool typed = true;
    for (std::uint32_t i = 0; i < source.morphism_count(); ++i) {
        MorRef f{i};
        MorRef img = mor_map[i];
        if (target.dom(img) != obj_map[source.dom(f).index] || target.cod(img) != obj_map[source.cod(f).index]) {
            v.add(ErrorKind::DomCodBroken, source.morphism_name(f) + " |-> " + target.morphism_name(img));
            typed = false;
        }
    }
    for (std::uint32_t a = 0; a < source.object_count(); ++a)
        if (mor_map[a] != FiniteCategory::identity(obj_map[a]))
            v.add(ErrorKind::IdentityNotPreserved, source.object_name(ObjRef{a}));
    if (typed) {
        for (std::uint32_t fi = 0; fi < source.morphism_count(); ++fi) {
            MorRef f{fi};
            for (MorRef g : source.out_of(source.cod(f))) {
                MorRef lhs = mor_map[source.comp(g, f).index];
                MorRef rhs = target.comp(mor_map[g.index], mor_map[fi]);
                if (lhs != rhs)
                    v.add(ErrorKind::CompositionNotPreserved,
                          source.morphism_name(g) + " . " + source.morphism_name(f));
            }
        }
    }
    v.throw_if_any();
    return trusted(std::move(source), std::move(target), std::move(obj_map), std::move(mor_map));
}

Functor Functor::identity(const FiniteCategory & c)
{
    std::vector<ObjRef> om(c.object_count());
    std::vector<MorRef> mm(c.morphism_count());
    for (std::uint32_t i = 0; i < om.size(); ++i)
        om[i] = ObjRef{i};
    for (std::uint32_t i = 0; i < mm.size(); ++i)
        mm[i] = MorRef{i};
    return trusted(c, c, std::move(om), std::move(mm));
}

Functor Functor::constant(const FiniteCategory & source, const FiniteCategory & target, ObjRef value)
{
    if (!target.valid(value))
        throw Error(ErrorKind::BadRef, "constant functor value");
    std::vector<ObjRef> om(source.object_count(), value);
    std::vector<MorRef> mm(source.morphism_count(), FiniteCategory::identity(value));
    return trusted(source, target, std::move(om), std::move(mm));
}

Functor compose_functors(const Functor & g, const Functor & f)
{
    if (!(f.target() == g.source()))
        throw Error(ErrorKind::SourceTargetMismatch, "target of inner functor differs from source of outer");
    std::vector<ObjRef> om;
    std::vector<MorRef> mm;
    om.reserve(f.obj_map().size());
    mm.reserve(f.mor_map().size());
    for (auto o : f.obj_map())
        om.push_back(g(o));
    for (auto m : f.mor_map())
        mm.push_back(g(m));
    return Functor::trusted(f.source(), g.target(), std::move(om), std::move(mm));
}

NaturalTransformation NaturalTransformation::trusted(Functor from, Functor to, std::vector<MorRef> components)
{
    return NaturalTransformation(std::move(from), std::move(to), std::move(components));
}

NaturalTransformation NaturalTransformation::validate(Functor from, Functor to, std::vector<MorRef> components)
{
    if (!(from.source() == to.source()) || !(from.target() == to.target()))
        throw Error(ErrorKind::SourceTargetMismatch, "natural transformation between non-parallel functors");
    const auto & src = from.source();
    const auto & tgt = from.target();
    ViolationList v;
    if (components.size() != src.object_count())
        v.add(ErrorKind::ComponentTypeError, "component count differs from object count");
    v.throw_if_any();
    for (std::uint32_t a = 0; a < src.object_count(); ++a) {
        MorRef c = components[a];
        if (!tgt.valid(c) || tgt.dom(c) != from(ObjRef{a}) || tgt.cod(c) != to(ObjRef{a}))
            v.add(ErrorKind::ComponentTypeError, "at " + src.object_name(ObjRef{a}));
    }
    v.throw_if_any();
    for (std::uint32_t fi = src.object_count(); fi < src.morphism_count(); ++fi) {
        MorRef f{fi};
        auto a = src.dom(f), b = src.cod(f);
        if (tgt.comp(to(f), components[a.index]) != tgt.comp(components[b.index], from(f)))
            v.add(ErrorKind::NaturalitySquareBroken, src.object_name(a) + ", " + src.morphism_name(f));
    }
    v.throw_if_any();
    return trusted(std::move(from), std::move(to), std::move(components));
}

NaturalTransformation NaturalTransformation::identity(const Functor & f)
{
    std::vector<MorRef> comps;
    for (auto o : f.obj_map())
        comps.push_back(FiniteCategory::identity(o));
    return trusted(f, f, std::move(comps));
}

// ---------------------------------------------------------------------------

namespace {
    void check_names(const std::vector<std::string> & names, ErrorKind kind, ViolationList & v)
    {
        std::set<std::string> seen;
        for (const auto & n : names)
            if (!seen.insert(n).second)
                v.add(kind, "duplicate element " + n);
    }
}

FinitePoset::FinitePoset(std::vector<std::string> names, std::vector<bool> leq)
    : names_(std::move(names)), leq_(std::move(leq))
{
    const auto n = names_.size();
    for (std::size_t a = 0; a < n && directed_; ++a)
        for (std::size_t b = a + 1; b < n && directed_; ++b) {
            bool bound = false;
            for (std::size_t c = 0; c < n && !bound; ++c)
                bound = leq_[a * n + c] && leq_[b * n + c];
            directed_ = bound;
        }
}

FinitePoset FinitePoset::from_relation(std::vector<std::string> names,
                                       const std::vector<std::pair<std::size_t, std::size_t>> & leq)
{
    const auto n = names.size();
    ViolationList v;
    check_names(names, ErrorKind::DuplicateName, v);
    std::vector<bool> m(n * n, false);
    for (std::size_t i = 0; i < n; ++i)
        m[i * n + i] = true;
    for (auto [a, b] : leq) {
        if (a >= n || b >= n) {
            v.add(ErrorKind::BadRef, "leq pair out of range");
            continue;
        }
        m[a * n + b] = true;
    }
    v.throw_if_any();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (m[i * n + k])
                for (std::size_t j = 0; j < n; ++j)
                    if (m[k * n + j])
                        m[i * n + j] = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (m[i * n + j] && m[j * n + i])
                v.add(ErrorKind::InvalidPoset, "antisymmetry: " + names[i] + " <= " + names[j] + " <= " + names[i]);
    v.throw_if_any();
    return FinitePoset(std::move(names), std::move(m));
}

FinitePoset FinitePoset::from_matrix(std::vector<std::string> names, std::vector<bool> matrix)
{
    const auto n = names.size();
    ViolationList v;
    check_names(names, ErrorKind::DuplicateName, v);
    if (matrix.size() != n * n)
        v.add(ErrorKind::InvalidPoset, "matrix size");
    v.throw_if_any();
    for (std::size_t i = 0; i < n; ++i) {
        if (!matrix[i * n + i])
            v.add(ErrorKind::InvalidPoset, "reflexivity at " + names[i]);
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && matrix[i * n + j] && matrix[j * n + i])
                v.add(ErrorKind::InvalidPoset, "antisymmetry: " + names[i] + ", " + names[j]);
            for (std::size_t k = 0; k < n; ++k)
                if (matrix[i * n + j] && matrix[j * n + k] && !matrix[i * n + k])
                    v.add(ErrorKind::InvalidPoset, "transitivity: " + names[i] + ", " + names[j] + ", " + names[k]);
        }
    }
    v.throw_if_any();
    return FinitePoset(std::move(names), std::move(matrix));
}

std::optional<std::size_t> FinitePoset::find(std::string_view name) const
{
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - names_.begin());
}

FinitePoset FinitePoset::opposite() const
{
    const auto n = size();
    std::vector<bool> m(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m[i * n + j] = leq_[j * n + i];
    return FinitePoset(names_, std::move(m));
}

Monoid Monoid::validate(std::vector<std::string> elements, std::size_t unit, std::vector<std::size_t> table)
{
    const auto n = elements.size();
    ViolationList v;
    check_names(elements, ErrorKind::NotAMonoid, v);
    if (n == 0)
        v.add(ErrorKind::NotAMonoid, "no elements");
    if (table.size() != n * n)
        v.add(ErrorKind::NotAMonoid, "table is not total");
    if (unit >= n)
        v.add(ErrorKind::NotAMonoid, "unit out of range");
    for (auto x : table)
        if (x >= n) {
            v.add(ErrorKind::NotAMonoid, "product out of range");
            break;
        }
    v.throw_if_any();
    auto mul = [&](std::size_t a, std::size_t b) { return table[a * n + b]; };
    for (std::size_t a = 0; a < n; ++a)
        if (mul(unit, a) != a || mul(a, unit) != a)
            v.add(ErrorKind::NotAMonoid, "unit law at " + elements[a]);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                if (mul(mul(a, b), c) != mul(a, mul(b, c)))
                    v.add(ErrorKind::NotAMonoid,
                          "associativity at " + elements[a] + ", " + elements[b] + ", " + elements[c]);
    v.throw_if_any();
    Monoid m;
    m.elements_ = std::move(elements);
    m.unit_ = unit;
    m.table_ = std::move(table);
    return m;
}

// ---------------------------------------------------------------------------

Copresheaf Copresheaf::validate(FiniteCategory base, std::vector<std::vector<std::string>> fibers,
                                std::vector<std::vector<std::uint32_t>> action)
{
    ViolationList v;
    if (fibers.size() != base.object_count() || action.size() != base.morphism_count()) {
        v.add(ErrorKind::InvalidCopresheaf, "table sizes do not match base category");
        v.throw_if_any();
    }
    for (std::uint32_t q = 0; q < fibers.size(); ++q) {
        std::set<std::string> seen;
        for (const auto & x : fibers[q])
            if (!seen.insert(x).second)
                v.add(ErrorKind::DuplicateName, "element " + x + " at " + base.object_name(ObjRef{q}));
    }
    for (std::uint32_t fi = 0; fi < base.morphism_count(); ++fi) {
        MorRef f{fi};
        auto & act = action[fi];
        const auto nd = fibers[base.dom(f).index].size();
        const auto nc = fibers[base.cod(f).index].size();
        if (base.is_identity(f)) {
            if (act.empty()) {
                act.resize(nd);
                std::iota(act.begin(), act.end(), 0u);
            }
            for (std::uint32_t x = 0; x < act.size(); ++x)
                if (act[x] != x) {
                    v.add(ErrorKind::InvalidCopresheaf, "identity " + base.morphism_name(f) + " moves an element");
                    break;
                }
        }
        if (act.size() != nd) {
            v.add(ErrorKind::InvalidCopresheaf, "action of " + base.morphism_name(f) + " is not total");
            continue;
        }
        for (auto y : act)
            if (y >= nc) {
                v.add(ErrorKind::InvalidCopresheaf, "action of " + base.morphism_name(f) + " leaves its codomain");
                break;
            }
    }
    v.throw_if_any();
    for (std::uint32_t fi = 0; fi < base.morphism_count(); ++fi) {
        MorRef f{fi};
        for (MorRef g : base.out_of(base.cod(f))) {
            const auto & gf = action[base.comp(g, f).index];
            for (std::uint32_t x = 0; x < action[fi].size(); ++x)
                if (gf[x] != action[g.index][action[fi][x]]) {
                    v.add(ErrorKind::InvalidCopresheaf,
                          "functoriality at " + base.morphism_name(g) + " . " + base.morphism_name(f));
                    break;
                }
        }
    }
    v.throw_if_any();
    Copresheaf h;
    h.base_ = std::move(base);
    h.fibers_ = std::move(fibers);
    h.action_ = std::move(action);
    return h;
}

Copresheaf Copresheaf::representable(const FiniteCategory & base, ObjRef p)
{
    const auto n = base.object_count();
    std::vector<std::vector<std::string>> fibers(n);
    std::vector<std::uint32_t> position(base.morphism_count(), 0);
    for (std::uint32_t q = 0; q < n; ++q) {
        auto h = base.hom(p, ObjRef{q});
        for (std::uint32_t i = 0; i < h.size(); ++i) {
            fibers[q].push_back(base.morphism_name(h[i]));
            position[h[i].index] = i;
        }
    }
    std::vector<std::vector<std::uint32_t>> action(base.morphism_count());
    for (std::uint32_t fi = 0; fi < base.morphism_count(); ++fi) {
        MorRef f{fi};
        for (MorRef x : base.hom(p, base.dom(f)))
            action[fi].push_back(position[base.comp(f, x).index]);
    }
    Copresheaf h;
    h.base_ = base;
    h.fibers_ = std::move(fibers);
    h.action_ = std::move(action);
    return h;
}

std::optional<std::uint32_t> Copresheaf::find_element(ObjRef q, std::string_view name) const
{
    const auto & f = fibers_.at(q.index);
    auto it = std::find(f.begin(), f.end(), name);
    if (it == f.end())
        return std::nullopt;
    return static_cast<std::uint32_t>(it - f.begin());
}

// ---------------------------------------------------------------------------

FiniteCategory poset_category(const FinitePoset & p)
{
    const auto n = p.size();
    CategoryBuilder b;
    b.dedupe_names(true);
    for (std::size_t i = 0; i < n; ++i)
        b.add_object(p.name(i));
    std::vector<MorRef> arrow(n * n);
    for (std::uint32_t i = 0; i < n; ++i) {
        arrow[i * n + i] = MorRef{i};
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && p.leq(i, j))
                arrow[i * n + j] =
                    b.add_arrow(p.name(i) + "_" + p.name(j), ObjRef{i}, ObjRef{static_cast<std::uint32_t>(j)});
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (i != j && j != k && p.leq(i, j) && p.leq(j, k))
                    b.set_composite(arrow[j * n + k], arrow[i * n + j], arrow[i * n + k]);
    return std::move(b).build();
}

FiniteCategory monoid_category(const Monoid & m)
{
    CategoryBuilder b;
    b.add_object("pt");
    std::vector<MorRef> ref(m.size());
    for (std::size_t e = 0; e < m.size(); ++e)
        ref[e] = e == m.unit() ? MorRef{0} : b.add_arrow(m.elements()[e], ObjRef{0}, ObjRef{0});
    for (std::size_t g = 0; g < m.size(); ++g)
        for (std::size_t f = 0; f < m.size(); ++f)
            if (g != m.unit() && f != m.unit())
                b.set_composite(ref[g], ref[f], ref[m.mul(g, f)]);
    return std::move(b).build();
}

namespace {
    std::string join_names(const std::vector<std::string> & parts)
    {
        std::string out;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i)
                out += '_';
            out += parts[i];
        }
        return out;
    }

    /// Mixed-radix index, first component most significant.
    template <typename Ref>
    std::size_t radix_index(std::span<const Ref> parts, const std::vector<std::size_t> & radix)
    {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < parts.size(); ++i)
            idx = idx * radix[i] + parts[i].index;
        return idx;
    }
}

ObjRef ProductCategory::object_of(std::span<const ObjRef> components) const
{
    std::vector<std::size_t> radix;
    for (const auto & f : factors)
        radix.push_back(f.object_count());
    return ObjRef{static_cast<std::uint32_t>(radix_index(components, radix))};
}

MorRef ProductCategory::morphism_of(std::span<const MorRef> components) const
{
    std::vector<std::size_t> radix;
    for (const auto & f : factors)
        radix.push_back(f.morphism_count());
    return mor_lookup.at(radix_index(components, radix));
}

ProductCategory product_category(const std::vector<FiniteCategory> & factors, Limits limits)
{
    if (factors.empty())
        throw Error(ErrorKind::ParamsOutOfRange, "product of no factors");
    const auto k = factors.size();
    std::size_t n_obj = 1, n_mor = 1;
    for (const auto & f : factors) {
        n_obj *= f.object_count();
        n_mor *= f.morphism_count();
        if (n_obj > limits.max_objects || n_mor > limits.max_morphisms)
            throw Error(ErrorKind::SizeBoundExceeded, "product exceeds cap " + std::to_string(limits.max_objects) +
                                                          "/" + std::to_string(limits.max_morphisms));
    }

    ProductCategory out;
    out.factors = factors;
    CategoryBuilder b(limits);
    b.dedupe_names(true);

    std::vector<ObjRef> tuple(k);
    for (std::size_t idx = 0; idx < n_obj; ++idx) {
        std::size_t rest = idx;
        for (std::size_t i = k; i-- > 0;) {
            tuple[i] = ObjRef{static_cast<std::uint32_t>(rest % factors[i].object_count())};
            rest /= factors[i].object_count();
        }
        std::vector<std::string> parts;
        for (std::size_t i = 0; i < k; ++i)
            parts.push_back(factors[i].object_name(tuple[i]));
        b.add_object(join_names(parts));
        out.object_components.push_back(tuple);
    }
    out.morphism_components.resize(n_obj);
    out.mor_lookup.assign(n_mor, MorRef{});

    std::vector<std::size_t> obj_radix;
    for (const auto & f : factors)
        obj_radix.push_back(f.object_count());

    std::vector<MorRef> mt(k);
    for (std::size_t idx = 0; idx < n_mor; ++idx) {
        std::size_t rest = idx;
        for (std::size_t i = k; i-- > 0;) {
            mt[i] = MorRef{static_cast<std::uint32_t>(rest % factors[i].morphism_count())};
            rest /= factors[i].morphism_count();
        }
        bool identity = true;
        std::vector<ObjRef> dom(k), cod(k);
        for (std::size_t i = 0; i < k; ++i) {
            identity = identity && factors[i].is_identity(mt[i]);
            dom[i] = factors[i].dom(mt[i]);
            cod[i] = factors[i].cod(mt[i]);
        }
        auto d = ObjRef{static_cast<std::uint32_t>(radix_index<ObjRef>(dom, obj_radix))};
        if (identity) {
            out.mor_lookup[idx] = FiniteCategory::identity(d);
            out.morphism_components[d.index] = mt;
            continue;
        }
        auto c = ObjRef{static_cast<std::uint32_t>(radix_index<ObjRef>(cod, obj_radix))};
        std::vector<std::string> parts;
        for (std::size_t i = 0; i < k; ++i)
            parts.push_back(factors[i].morphism_name(mt[i]));
        out.mor_lookup[idx] = b.add_arrow(join_names(parts), d, c);
        out.morphism_components.push_back(mt);
    }

    for (std::size_t fi = n_obj; fi < n_mor; ++fi) {
        const auto fc = out.morphism_components[fi];
        std::vector<ObjRef> cod(k);
        for (std::size_t i = 0; i < k; ++i)
            cod[i] = factors[i].cod(fc[i]);
        for (std::size_t gi = n_obj; gi < n_mor; ++gi) {
            const auto & gc = out.morphism_components[gi];
            bool ok = true;
            for (std::size_t i = 0; i < k && ok; ++i)
                ok = factors[i].dom(gc[i]) == cod[i];
            if (!ok)
                continue;
            std::vector<MorRef> h(k);
            for (std::size_t i = 0; i < k; ++i)
                h[i] = factors[i].comp(gc[i], fc[i]);
            b.set_composite(MorRef{static_cast<std::uint32_t>(gi)}, MorRef{static_cast<std::uint32_t>(fi)},
                            out.morphism_of(h));
        }
    }
    out.category = std::move(b).build();

    for (std::size_t i = 0; i < k; ++i) {
        std::vector<ObjRef> om;
        std::vector<MorRef> mm;
        for (const auto & t : out.object_components)
            om.push_back(t[i]);
        for (const auto & t : out.morphism_components)
            mm.push_back(t[i]);
        out.projections.push_back(Functor::trusted(out.category, factors[i], std::move(om), std::move(mm)));
    }
    return out;
}

ObjRef CosliceCategory::object_of(MorRef arrow_from_apex) const
{
    auto o = object_lookup.at(arrow_from_apex.index);
    if (o == UINT32_MAX)
        throw Error(ErrorKind::BadRef, "arrow does not start at the apex");
    return ObjRef{o};
}

MorRef CosliceCategory::morphism_of(MorRef eta, ObjRef from) const
{
    auto m = morphism_lookup.at(static_cast<std::size_t>(eta.index) * category.object_count() + from.index);
    if (m == UINT32_MAX)
        throw Error(ErrorKind::NotComposable, "eta does not start at the codomain of the object");
    return MorRef{m};
}

CosliceCategory coslice_category(const FiniteCategory & c, ObjRef apex, Limits limits)
{
    CosliceCategory out;
    out.base = c;
    out.apex = apex;
    out.object_lookup.assign(c.morphism_count(), UINT32_MAX);

    CategoryBuilder b(limits);
    b.dedupe_names(true);
    for (MorRef f : c.out_of(apex)) {
        out.object_lookup[f.index] = static_cast<std::uint32_t>(out.underlying.size());
        out.underlying.push_back(f);
        b.add_object(c.morphism_name(f));
    }
    const auto n_obj = out.underlying.size();
    out.morphism_lookup.assign(c.morphism_count() * n_obj, UINT32_MAX);

    std::vector<std::pair<MorRef, ObjRef>> labels; // (eta, from) per coslice morphism
    for (std::uint32_t o = 0; o < n_obj; ++o) {
        labels.push_back({FiniteCategory::identity(c.cod(out.underlying[o])), ObjRef{o}});
        out.morphism_lookup[static_cast<std::size_t>(c.cod(out.underlying[o]).index) * n_obj + o] = o;
    }
    for (std::uint32_t ei = c.object_count(); ei < c.morphism_count(); ++ei) {
        MorRef eta{ei};
        for (std::uint32_t o = 0; o < n_obj; ++o) {
            MorRef f = out.underlying[o];
            if (c.cod(f) != c.dom(eta))
                continue;
            ObjRef to = out.object_of(c.comp(eta, f));
            MorRef m = b.add_arrow(c.morphism_name(eta) + "_" + c.morphism_name(f), ObjRef{o}, to);
            out.morphism_lookup[static_cast<std::size_t>(ei) * n_obj + o] = m.index;
            labels.push_back({eta, ObjRef{o}});
        }
    }
    if (n_obj > limits.max_objects || labels.size() > limits.max_morphisms)
        throw Error(ErrorKind::SizeBoundExceeded, "coslice exceeds cap");
    // Composites are fixed by composing the underlying etas.
    auto morphism_at = [&](MorRef eta, ObjRef from) {
        return MorRef{out.morphism_lookup[static_cast<std::size_t>(eta.index) * n_obj + from.index]};
    };
    for (std::size_t fi = n_obj; fi < labels.size(); ++fi) {
        auto [eta1, from1] = labels[fi];
        ObjRef mid = out.object_of(c.comp(eta1, out.underlying[from1.index]));
        for (std::size_t gi = n_obj; gi < labels.size(); ++gi) {
            auto [eta2, from2] = labels[gi];
            if (from2 != mid)
                continue;
            b.set_composite(MorRef{static_cast<std::uint32_t>(gi)}, MorRef{static_cast<std::uint32_t>(fi)},
                            morphism_at(c.comp(eta2, eta1), from1));
        }
    }
    out.category = std::move(b).build();

    std::vector<ObjRef> om;
    std::vector<MorRef> mm;
    for (auto f : out.underlying)
        om.push_back(c.cod(f));
    for (auto [eta, from] : labels)
        mm.push_back(eta);
    out.forget = Functor::trusted(out.category, c, std::move(om), std::move(mm));
    return out;
}

ObjRef ElementsCategory::object_of(ObjRef q, std::uint32_t x) const
{
    return ObjRef{fiber_offset.at(q.index) + x};
}

MorRef ElementsCategory::morphism_of(MorRef eta, std::uint32_t x) const
{
    const auto & base = presheaf.base();
    if (base.is_identity(eta))
        return FiniteCategory::identity(object_of(base.dom(eta), x));
    return MorRef{morphism_offset.at(eta.index) + x};
}

ElementsCategory elements_category(const Copresheaf & h, Limits limits)
{
    const auto & c = h.base();
    ElementsCategory out;
    out.presheaf = h;
    CategoryBuilder b(limits);
    b.dedupe_names(true);

    std::vector<std::string> object_names;
    std::uint32_t next = 0;
    for (std::uint32_t q = 0; q < c.object_count(); ++q) {
        out.fiber_offset.push_back(next);
        for (std::uint32_t x = 0; x < h.fiber_size(ObjRef{q}); ++x) {
            object_names.push_back(c.object_name(ObjRef{q}) + "_" + h.element_name(ObjRef{q}, x));
            out.object_elements.push_back({ObjRef{q}, x});
            ++next;
        }
    }
    std::size_t n_mor = next;
    for (std::uint32_t ei = c.object_count(); ei < c.morphism_count(); ++ei)
        n_mor += h.fiber_size(c.dom(MorRef{ei}));
    if (next > limits.max_objects || n_mor > limits.max_morphisms)
        throw Error(ErrorKind::SizeBoundExceeded, "category of elements exceeds cap");
    for (const auto & nm : object_names)
        b.add_object(nm);

    out.morphism_offset.assign(c.morphism_count(), 0);
    std::vector<std::pair<MorRef, std::uint32_t>> labels; // (eta, element of dom eta)
    for (std::uint32_t o = 0; o < next; ++o)
        labels.push_back({FiniteCategory::identity(out.object_elements[o].first), out.object_elements[o].second});
    for (std::uint32_t ei = c.object_count(); ei < c.morphism_count(); ++ei) {
        MorRef eta{ei};
        auto d = c.dom(eta);
        out.morphism_offset[ei] = static_cast<std::uint32_t>(labels.size());
        for (std::uint32_t x = 0; x < h.fiber_size(d); ++x) {
            auto from = out.object_of(d, x);
            auto to = out.object_of(c.cod(eta), h.act(eta, x));
            b.add_arrow(c.morphism_name(eta) + "_" + object_names[from.index], from, to);
            labels.push_back({eta, x});
        }
    }
    for (std::size_t fi = next; fi < labels.size(); ++fi) {
        auto [eta1, x] = labels[fi];
        auto mid = c.cod(eta1);
        auto y = h.act(eta1, x);
        for (MorRef eta2 : c.out_of(mid)) {
            if (c.is_identity(eta2))
                continue;
            b.set_composite(out.morphism_of(eta2, y), MorRef{static_cast<std::uint32_t>(fi)},
                            out.morphism_of(c.comp(eta2, eta1), x));
        }
    }
    out.category = std::move(b).build();

    std::vector<ObjRef> om;
    std::vector<MorRef> mm;
    for (auto [q, x] : out.object_elements)
        om.push_back(q);
    for (auto [eta, x] : labels)
        mm.push_back(eta);
    out.forget = Functor::trusted(out.category, c, std::move(om), std::move(mm));
    return out;
}

FiniteCategory adjoin_initial_object(const FiniteCategory & c, const std::string & name)
{
    CategoryBuilder b;
    b.dedupe_names(true);
    const auto n = c.object_count();
    b.add_object(name);
    for (std::uint32_t q = 0; q < n; ++q)
        b.add_object(c.object_name(ObjRef{q}));
    auto shift = [](ObjRef q) { return ObjRef{q.index + 1}; };
    std::vector<MorRef> from_init(n + 1);
    from_init[0] = MorRef{0};
    for (std::uint32_t q = 0; q < n; ++q)
        from_init[q + 1] = b.add_arrow(name + "_" + c.object_name(ObjRef{q}), ObjRef{0}, shift(ObjRef{q}));
    // shifted[m] is the image of c's morphism m
    std::vector<MorRef> shifted(c.morphism_count());
    for (std::uint32_t q = 0; q < n; ++q)
        shifted[q] = MorRef{q + 1};
    for (std::uint32_t fi = n; fi < c.morphism_count(); ++fi) {
        MorRef f{fi};
        shifted[fi] = b.add_arrow(c.morphism_name(f), shift(c.dom(f)), shift(c.cod(f)));
    }
    for (std::uint32_t fi = n; fi < c.morphism_count(); ++fi) {
        MorRef f{fi};
        b.set_composite(shifted[fi], from_init[c.dom(f).index + 1], from_init[c.cod(f).index + 1]);
        for (MorRef g : c.out_of(c.cod(f)))
            if (!c.is_identity(g))
                b.set_composite(shifted[g.index], shifted[fi], shifted[c.comp(g, f).index]);
    }
    return std::move(b).build();
}

std::vector<ObjRef> initial_objects(const FiniteCategory & c)
{
    std::vector<ObjRef> out;
    for (std::uint32_t a = 0; a < c.object_count(); ++a) {
        bool initial = true;
        for (std::uint32_t b = 0; b < c.object_count() && initial; ++b)
            initial = c.hom(ObjRef{a}, ObjRef{b}).size() == 1;
        if (initial)
            out.push_back(ObjRef{a});
    }
    return out;
}

} // namespace movcat
