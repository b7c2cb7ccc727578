#include "movcat/campaign.hpp"

#include <chrono>
#include <sstream>

#include "json.hpp"
#include "movcat/movability.hpp"
#include "movcat/systems.hpp"

namespace movcat {

std::string Instance::text(std::string_view theorem, std::uint64_t seed) const
{
    std::ostringstream os;
    os << "# theorem " << theorem << "\n# seed " << seed << "\n";
    for (const auto & [k, v] : params)
        os << "# param " << k << ' ' << v << "\n";
    os << serialize_document(document);
    return os.str();
}

Instance parse_instance(std::string_view text)
{
    Instance out;
    std::istringstream is{std::string(text)};
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string hash, word, key, value;
        if (ls >> hash >> word >> key >> value && hash == "#" && word == "param")
            out.params[key] = value;
    }
    out.document = parse_document(text);
    return out;
}

namespace {
    GenParams capped(const GenParams & p, std::size_t objects, std::size_t morphisms)
    {
        GenParams q = p;
        q.max_objects = std::min(p.max_objects, objects);
        q.max_morphisms = std::max(q.max_objects, std::min(p.max_morphisms, morphisms));
        return q;
    }

    const std::string & param(const Instance & in, const std::string & key)
    {
        auto it = in.params.find(key);
        if (it == in.params.end())
            throw Error(ErrorKind::ParamsOutOfRange, "instance lacks param '" + key + "'");
        return it->second;
    }

    ObjRef object_param(const Instance & in, const FiniteCategory & c, const std::string & key)
    {
        const auto & name = param(in, key);
        auto r = c.find_object(name);
        if (!r)
            throw ReferenceError(0, 0, "object '" + name + "' named by param " + key);
        return *r;
    }

    void tag(LawOutcome & o, bool cond, const char * yes, const char * no)
    {
        o.tags.emplace_back(cond ? yes : no);
    }

    // -- product -------------------------------------------------------------

    Instance product_generate(std::uint64_t seed, const CampaignParams & p)
    {
        Rng rng(seed);
        auto caps = capped(p.gen, 4, 16);
        Instance in;
        in.document.add(random_category(rng, caps).entity("K1"));
        in.document.add(random_category(rng, caps).entity("K2"));
        return in;
    }

    LawOutcome product_evaluate(const Instance & in, const CampaignParams &)
    {
        const auto k1 = in.document.category("K1");
        const auto k2 = in.document.category("K2");
        const auto prod = product_category({k1, k2});
        const auto r1 = check_strongly_movable(k1, Execution::serial);
        const auto r2 = check_strongly_movable(k2, Execution::serial);
        const auto r = check_strongly_movable(prod.category, Execution::serial);

        LawOutcome o;
        o.holds = r.holds() == (r1.holds() && r2.holds());
        o.nonvacuous = r1.holds() && r2.holds();
        tag(o, r.holds(), "product_movable", "product_not_movable");
        if (!o.holds) {
            o.detail = std::string("product verdict ") + (r.holds() ? "movable" : "not movable") + " but factors " +
                       (r1.holds() ? "movable" : "not movable") + ", " + (r2.holds() ? "movable" : "not movable");
            return o;
        }
        if (r1.holds() && r2.holds())
            product_transport(prod, {r1.witness(), r2.witness()});
        if (r.holds()) {
            factor_transport(prod, r.witness(), 0);
            factor_transport(prod, r.witness(), 1);
        }
        return o;
    }

    // -- transfer ------------------------------------------------------------

    Instance transfer_generate(std::uint64_t seed, const CampaignParams & p)
    {
        Rng rng(seed);
        auto [k, l] = random_domination_pair(rng, p.gen);
        Instance in;
        in.document.add(k.entity("K"));
        in.document.add(l.entity("L"));
        return in;
    }

    LawOutcome transfer_evaluate(const Instance & in, const CampaignParams & p)
    {
        const auto k = in.document.category("K");
        const auto l = in.document.category("L");
        const auto strict = find_functorial_domination(k, l, p.budget);
        const auto weak = find_weak_domination(k, l, p.budget);
        const auto rl = check_strongly_movable(l, Execution::serial);

        LawOutcome o;
        tag(o, strict.status == SearchStatus::found, "strict_found", "strict_not_found");
        tag(o, weak.status == SearchStatus::found, "weak_found", "weak_not_found");
        if (strict.status == SearchStatus::truncated || weak.status == SearchStatus::truncated)
            o.tags.emplace_back("truncated");
        tag(o, rl.holds(), "target_movable", "target_not_movable");

        if (strict.status == SearchStatus::found && weak.status != SearchStatus::found) {
            o.holds = false;
            o.detail = "functorial domination found but no weak domination";
            return o;
        }
        if (!rl.holds())
            return o;
        if (strict.status == SearchStatus::found) {
            const auto id = Functor::identity(k);
            weak_domination_transfer(strict.f, strict.g, NaturalTransformation::identity(id), rl.witness());
            o.nonvacuous = true;
        }
        if (weak.status == SearchStatus::found) {
            weak_domination_transfer(weak.f, weak.g, weak.phi, rl.witness());
            o.nonvacuous = true;
            if (!check_strongly_movable(k, Execution::serial).holds()) {
                o.holds = false;
                o.detail = "transferred witness verifies but the checker rejects K";
            }
        }
        return o;
    }

    // -- coslice -------------------------------------------------------------

    Instance coslice_generate(std::uint64_t seed, const CampaignParams & p)
    {
        Rng rng(seed);
        auto c = random_category(rng, p.gen);
        Instance in;
        in.document.add(c.entity("C"));
        in.params["apex"] = c.category.object_name(ObjRef{static_cast<std::uint32_t>(rng.below(c.category.object_count()))});
        return in;
    }

    LawOutcome coslice_evaluate(const Instance & in, const CampaignParams &)
    {
        const auto c = in.document.category("C");
        const auto co = coslice_category(c, object_param(in, c, "apex"));
        const auto r = check_strongly_movable(co.category, Execution::serial);
        LawOutcome o;
        o.nonvacuous = true;
        o.holds = r.holds();
        tag(o, check_strongly_movable(c, Execution::serial).holds(), "base_movable", "base_not_movable");
        if (!r.holds())
            o.detail = "coslice under " + param(in, "apex") + " is not strongly movable at object " +
                       co.category.object_name(r.counterexample().object);
        return o;
    }

    // -- initial -------------------------------------------------------------

    Instance initial_generate(std::uint64_t seed, const CampaignParams & p)
    {
        Rng rng(seed);
        auto caps = p.gen;
        caps.max_objects = std::max<std::size_t>(1, p.gen.max_objects - 1);
        caps.max_morphisms = std::max(caps.max_objects, p.gen.max_morphisms - p.gen.max_objects);
        Instance in;
        in.document.add(random_category(rng, caps).entity("C"));
        return in;
    }

    LawOutcome initial_evaluate(const Instance & in, const CampaignParams &)
    {
        const auto c = in.document.category("C");
        const auto k = adjoin_initial_object(c);
        const auto inits = initial_objects(k);
        const auto r = check_strongly_movable(k, Execution::serial);
        LawOutcome o;
        o.nonvacuous = true;
        tag(o, check_strongly_movable(c, Execution::serial).holds(), "base_movable", "base_not_movable");
        if (inits.empty()) {
            o.holds = false;
            o.detail = "adjoined object is not initial";
        } else if (!r.holds()) {
            o.holds = false;
            o.detail = "not strongly movable at " + k.object_name(r.counterexample().object);
        } else {
            for (const auto & w : r.witness().objects)
                if (std::find(inits.begin(), inits.end(), w.mover) == inits.end()) {
                    o.holds = false;
                    o.detail = "mover " + k.object_name(w.mover) + " is not initial";
                    break;
                }
        }
        return o;
    }

    // -- poset-oracle --------------------------------------------------------

    Instance poset_generate(std::uint64_t seed, const CampaignParams & p)
    {
        Rng rng(seed);
        Instance in;
        in.document.add({"P", PosetDecl{random_poset(rng, rng.range(1, p.gen.max_objects), p.gen.max_morphisms)}});
        return in;
    }

    /// Every principal down-set has a least element.
    bool down_sets_have_minimum(const FinitePoset & p)
    {
        for (std::size_t x = 0; x < p.size(); ++x) {
            bool found = false;
            for (std::size_t m = 0; m < p.size() && !found; ++m) {
                if (!p.leq(m, x))
                    continue;
                found = true;
                for (std::size_t y = 0; y < p.size() && found; ++y)
                    if (p.leq(y, x) && !p.leq(m, y))
                        found = false;
            }
            if (!found)
                return false;
        }
        return true;
    }

    LawOutcome poset_evaluate(const Instance & in, const CampaignParams &)
    {
        const auto & p = in.document.poset("P");
        const bool movable = check_strongly_movable(poset_category(p), Execution::serial).holds();
        const bool oracle = down_sets_have_minimum(p);
        LawOutcome o;
        o.nonvacuous = true;
        o.holds = movable == oracle;
        tag(o, movable, "movable", "not_movable");
        if (!o.holds)
            o.detail = std::string("checker says ") + (movable ? "movable" : "not movable") + ", down-set oracle says " +
                       (oracle ? "movable" : "not movable");
        return o;
    }

    // -- sm-bridge -----------------------------------------------------------

    Instance sm_generate(std::uint64_t seed, const CampaignParams & p)
    {
        Rng rng(seed);
        auto gen = p.gen;
        const IndexShape shapes[] = {IndexShape::any, IndexShape::non_directed, IndexShape::forked};
        gen.index_shape = shapes[rng.below(3)];
        if (gen.index_shape == IndexShape::forked && gen.max_objects < 3)
            gen.index_shape = IndexShape::non_directed;
        if (gen.index_shape == IndexShape::non_directed && gen.max_objects < 2)
            gen.index_shape = IndexShape::any;
        Instance in;
        in.document = random_system_document(rng, gen);
        return in;
    }

    LawOutcome sm_evaluate(const Instance & in, const CampaignParams &)
    {
        const auto & d = in.document.system("S");
        if (!d.cone)
            throw Error(ErrorKind::SystemTypeError, "system S has no cone");
        const auto rep = check_associated(d.system, *d.cone);
        const bool sm1 = check_sm1(d.system, Execution::serial).holds();
        const bool sm2 = rep.cond1 && check_sm2(d.system, *d.cone, Execution::serial).holds();

        LawOutcome o;
        tag(o, sm1, "sm1_holds", "sm1_fails");
        tag(o, sm2, "sm2_holds", "sm2_fails");
        tag(o, rep.directed, "directed", "non_directed");
        if (rep.cond3)
            o.tags.emplace_back("cond3");
        const bool forward_hyp = sm1 && rep.cond1;
        const bool backward_hyp = sm2 && rep.cond1 && rep.cond3;
        o.nonvacuous = forward_hyp || backward_hyp;
        if (forward_hyp && !sm2) {
            o.holds = false;
            o.detail = "SM1 and condition 1 hold but SM2 fails";
        } else if (backward_hyp && !sm1) {
            o.holds = false;
            o.detail = std::string("SM2 and conditions 1, 3 hold but SM1 fails (index ") +
                       (rep.directed ? "directed" : "not directed") + ")";
            o.tags.emplace_back(rep.directed ? "backward_fails_directed" : "backward_fails_non_directed");
        }
        return o;
    }

    // -- star-bridge ---------------------------------------------------------

    Instance star_generate(std::uint64_t seed, const CampaignParams & p)
    {
        Rng rng(seed);
        auto caps = capped(p.gen, 4, 16);
        auto c = random_category(rng, caps);
        const auto & cat = c.category;
        Instance in;
        in.document.add(c.entity("C"));

        if (rng.chance(1, 2)) {
            // Associated by construction: H = hom(P, -) and a directed system
            // with X_top = P, cone e(a) = p(a, top).
            const ObjRef apex{static_cast<std::uint32_t>(rng.below(cat.object_count()))};
            const auto h = Copresheaf::representable(cat, apex);
            const auto index = random_index_poset(rng, std::min<std::size_t>(p.gen.max_objects, 4), IndexShape::directed);
            std::size_t top = 0;
            for (std::size_t a = 0; a < index.size(); ++a) {
                bool is_top = true;
                for (std::size_t b = 0; b < index.size(); ++b)
                    is_top = is_top && index.leq(b, a);
                if (is_top)
                    top = a;
            }
            std::vector<std::optional<ObjRef>> pins(index.size());
            pins[top] = apex;
            const auto s = random_system(rng, cat, index, pins);
            std::vector<std::uint32_t> elems;
            for (std::size_t a = 0; a < index.size(); ++a) {
                auto fiber = cat.hom(apex, s.object(a));
                elems.push_back(static_cast<std::uint32_t>(
                    std::find(fiber.begin(), fiber.end(), s.bond(a, top)) - fiber.begin()));
            }
            auto cone = SystemCone::validate(s, h, std::move(elems));
            in.document.add({"H", CopresheafDecl{"C", h}});
            in.document.add({"I", PosetDecl{index}});
            in.document.add({"S", SystemDecl{"C", "I", std::string("H"), s, cone}});
            return in;
        }

        auto h = random_copresheaf(rng, cat, p.gen.max_fiber);
        auto index = random_index_poset(rng, std::min<std::size_t>(p.gen.max_objects, 4), IndexShape::any);
        in.document.add({"H", CopresheafDecl{"C", h}});
        in.document.add({"I", PosetDecl{index}});
        for (int attempt = 0; attempt < 16; ++attempt) {
            auto s = random_system(rng, cat, index);
            if (auto cone = random_cone(rng, s, h)) {
                in.document.add({"S", SystemDecl{"C", "I", std::string("H"), s, cone}});
                break;
            }
        }
        return in;
    }

    LawOutcome star_evaluate(const Instance & in, const CampaignParams &)
    {
        const auto & h = in.document.copresheaf("H");
        const bool star = check_star(h, Execution::serial).holds();
        const bool elements = check_strongly_movable(elements_category(h).category, Execution::serial).holds();

        LawOutcome o;
        o.nonvacuous = true;
        tag(o, star, "star_holds", "star_fails");
        if (star != elements) {
            o.holds = false;
            o.detail = std::string("condition (*) ") + (star ? "holds" : "fails") +
                       " but the elements category is " + (elements ? "" : "not ") + "strongly movable";
            return o;
        }
        if (!in.document.find("S"))
            return o;
        const auto & d = in.document.system("S");
        const auto rep = check_associated(d.system, *d.cone);
        if (!rep.associated())
            return o;
        o.tags.emplace_back(rep.directed ? "associated_directed" : "associated_non_directed");
        const bool sm2 = check_sm2(d.system, *d.cone, Execution::serial).holds();
        if (sm2 != star) {
            o.holds = false;
            o.detail = std::string("associated system: SM2 ") + (sm2 ? "holds" : "fails") + " but condition (*) " +
                       (star ? "holds" : "fails") + " (index " + (rep.directed ? "directed" : "not directed") + ")";
        }
        return o;
    }

    // -- coproduct-coslice ---------------------------------------------------

    Instance coproduct_generate(std::uint64_t seed, const CampaignParams & p)
    {
        Rng rng(seed);
        const auto poset = random_join_semilattice(rng, p.gen.max_objects);
        const auto c = poset_category(poset);
        Instance in;
        in.document.add({"P", PosetDecl{poset}});
        in.document.add({"", CoproductsDecl{"P", join_coproducts(c)}});
        const auto x1 = rng.below(poset.size());
        in.params["x1"] = poset.name(x1);
        auto x2 = rng.below(poset.size());
        if (poset.size() > 1 && rng.chance(3, 4))
            x2 = (x1 + 1 + rng.below(poset.size() - 1)) % poset.size();
        in.params["x2"] = poset.name(x2);
        return in;
    }

    LawOutcome coproduct_evaluate(const Instance & in, const CampaignParams &)
    {
        const auto c = in.document.category("P");
        const auto * d = in.document.coproducts_on("P");
        if (!d)
            throw Error(ErrorKind::NoDesignatedCoproducts, "no coproducts declared on P");
        const auto x1 = object_param(in, c, "x1");
        const auto x2 = object_param(in, c, "x2");
        const auto t = coproduct_coslice_domination(*d, x1, x2);
        NaturalTransformation::validate(compose_functors(t.g, t.f), Functor::identity(t.sum.category),
                                        {t.phi.components().begin(), t.phi.components().end()});

        const auto r1 = check_strongly_movable(t.left.category, Execution::serial);
        const auto r2 = check_strongly_movable(t.right.category, Execution::serial);
        LawOutcome o;
        o.nonvacuous = true;
        if (!r1.holds() || !r2.holds()) {
            o.holds = false;
            o.detail = "a coslice factor is not strongly movable";
            return o;
        }
        const auto wl = product_transport(t.product, {r1.witness(), r2.witness()});
        const auto wk = weak_domination_transfer(t.f, t.g, t.phi, wl);
        if (auto problem = verify_strongly_movable(t.sum.category, wk); !problem.empty()) {
            o.holds = false;
            o.detail = problem;
        }
        tag(o, x1 == x2, "equal_apexes", "distinct_apexes");
        return o;
    }
}

const std::vector<Theorem> & theorems()
{
    static const std::vector<Theorem> all{
        {"product", product_generate, product_evaluate},
        {"transfer", transfer_generate, transfer_evaluate},
        {"coslice", coslice_generate, coslice_evaluate},
        {"initial", initial_generate, initial_evaluate},
        {"poset-oracle", poset_generate, poset_evaluate},
        {"sm-bridge", sm_generate, sm_evaluate},
        {"star-bridge", star_generate, star_evaluate},
        {"coproduct-coslice", coproduct_generate, coproduct_evaluate},
    };
    return all;
}

const Theorem & find_theorem(std::string_view name)
{
    for (const auto & t : theorems())
        if (t.name == name)
            return t;
    throw Error(ErrorKind::UnknownTheorem, "unknown theorem '" + std::string(name) + "'");
}

namespace {
    LawOutcome guarded(const Instance & in, const Theorem & t, const CampaignParams & params)
    {
        LawOutcome o;
        try {
            o = t.evaluate(in, params);
        } catch (const std::exception & e) {
            o = LawOutcome{};
            o.holds = false;
            o.detail = std::string("exception: ") + e.what();
        }
        if (params.negate_law) {
            o.holds = !o.holds;
            if (!o.holds && o.detail.empty())
                o.detail = "law negated by test hook";
        }
        return o;
    }
}

LawOutcome run_instance(const Theorem & t, std::uint64_t seed, const CampaignParams & params,
                        std::string * document_text)
{
    Instance in;
    try {
        in = t.generate(seed, params);
    } catch (const std::exception & e) {
        LawOutcome o;
        o.holds = params.negate_law;
        o.detail = std::string("generator failed: ") + e.what();
        return o;
    }
    auto o = guarded(in, t, params);
    if (!o.holds && document_text)
        *document_text = in.text(t.name, seed);
    return o;
}

CampaignReport run_campaign(std::string_view theorem, std::uint64_t first, std::uint64_t last,
                            const CampaignParams & params, Execution exec)
{
    const auto & t = find_theorem(theorem);
    check_params(params.gen);
    if (last < first)
        throw Error(ErrorKind::ParamsOutOfRange, "empty seed range");

    const auto start = std::chrono::steady_clock::now();
    const auto count = static_cast<std::int64_t>(last - first + 1);
    std::vector<LawOutcome> outcomes(static_cast<std::size_t>(count));
    std::vector<std::string> texts(static_cast<std::size_t>(count));
    if (exec == Execution::serial) {
        for (std::int64_t i = 0; i < count; ++i)
            outcomes[i] = run_instance(t, first + static_cast<std::uint64_t>(i), params, &texts[i]);
    } else {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < count; ++i)
            outcomes[i] = run_instance(t, first + static_cast<std::uint64_t>(i), params, &texts[i]);
    }

    CampaignReport r;
    r.theorem = std::string(t.name);
    r.first_seed = first;
    r.last_seed = last;
    r.params = params;
    r.instances = outcomes.size();
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto & o = outcomes[i];
        if (o.holds)
            ++r.passes;
        else
            r.failures.push_back({first + i, o.detail, std::move(texts[i])});
        r.nonvacuous += o.nonvacuous;
        for (const auto & tg : o.tags)
            ++r.tallies[tg];
    }
    if (params.timing)
        r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::string CampaignReport::to_json() const
{
    nlohmann::json j;
    j["theorem"] = theorem;
    j["seeds"] = {{"first", first_seed}, {"last", last_seed}};
    j["params"] = {{"max_objects", params.gen.max_objects},
                   {"max_morphisms", params.gen.max_morphisms},
                   {"max_fiber", params.gen.max_fiber},
                   {"budget", params.budget},
                   {"negate_law", params.negate_law}};
    j["instances"] = instances;
    j["passes"] = passes;
    j["failure_count"] = failures.size();
    j["nonvacuous"] = nonvacuous;
    j["tallies"] = tallies;
    j["failures"] = nlohmann::json::array();
    for (const auto & f : failures)
        j["failures"].push_back({{"seed", f.seed}, {"detail", f.detail}, {"document", f.document}});
    if (wall_seconds)
        j["wall_time_seconds"] = *wall_seconds;
    return j.dump(2) + "\n";
}

std::string CampaignReport::summary() const
{
    std::ostringstream os;
    os << theorem << " seeds " << first_seed << ".." << last_seed << ": " << passes << "/" << instances
       << " pass, " << failures.size() << " fail, " << nonvacuous << " nonvacuous";
    if (wall_seconds)
        os << ", " << *wall_seconds << " s";
    return os.str();
}

LawOutcome replay(std::string_view theorem, std::string_view text, const CampaignParams & params)
{
    const auto & t = find_theorem(theorem);
    return guarded(parse_instance(text), t, params);
}

} // namespace movcat
