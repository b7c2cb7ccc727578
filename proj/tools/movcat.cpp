#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "movcat/campaign.hpp"
#include "movcat/movability.hpp"

using namespace movcat;

namespace {

constexpr int exit_holds = 0;
constexpr int exit_fails = 1;
constexpr int exit_input = 2;

std::string read_file(const std::string & path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::BadRef, "cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_output(const std::string & path, const std::string & text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorKind::BadRef, "cannot write '" + path + "'");
    out << text;
}

Document load(const std::string & path) { return parse_document(read_file(path)); }

bool is_category_decl(const Entity & e)
{
    return std::holds_alternative<CategoryDecl>(e.decl) || std::holds_alternative<PosetDecl>(e.decl) ||
           std::holds_alternative<MonoidDecl>(e.decl);
}

const Entity & require(const Document & doc, const std::string & name)
{
    const auto * e = doc.find(name);
    if (!e)
        throw ReferenceError(0, 0, "entity '" + name + "'");
    return *e;
}

/// "path" or "path:NAME"; without a name the file must hold exactly one category.
Entity load_category_entity(const std::string & spec)
{
    std::string path = spec, name;
    if (auto colon = spec.rfind(':'); colon != std::string::npos && is_identifier(spec.substr(colon + 1))) {
        path = spec.substr(0, colon);
        name = spec.substr(colon + 1);
    }
    const auto doc = load(path);
    if (!name.empty()) {
        const auto & e = require(doc, name);
        if (!is_category_decl(e))
            throw Error(ErrorKind::BadRef, "'" + name + "' is not a category");
        return e;
    }
    const Entity * found = nullptr;
    for (const auto & e : doc.entities())
        if (is_category_decl(e)) {
            if (found)
                throw Error(ErrorKind::BadRef, "'" + path + "' declares several categories; use path:NAME");
            found = &e;
        }
    if (!found)
        throw Error(ErrorKind::BadRef, "'" + path + "' declares no category");
    return *found;
}

void print_witness(std::ostream & os, const FiniteCategory & k, const FiniteCategory & lifts_in,
                   const MovabilityWitness & w)
{
    for (std::uint32_t x = 0; x < w.objects.size(); ++x) {
        const auto & o = w.objects[x];
        os << k.object_name(ObjRef{x}) << ": mover " << lifts_in.object_name(o.mover) << " via "
           << lifts_in.morphism_name(o.m) << "\n";
        for (const auto & [p, u] : o.lifts)
            os << "  " << k.morphism_name(p) << " <- " << lifts_in.morphism_name(u) << "\n";
    }
}

void print_counterexample(std::ostream & os, const FiniteCategory & k, const FiniteCategory & lifts_in,
                          const Counterexample & c)
{
    os << "# fails at object " << k.object_name(c.object) << "\n";
    for (const auto & d : c.defeats)
        os << "# candidate " << lifts_in.object_name(d.mover) << " via " << lifts_in.morphism_name(d.m)
           << ": no lift of " << k.morphism_name(d.p) << "\n";
}

struct CapsOptions {
    std::size_t max_objects = GenParams{}.max_objects;
    std::size_t max_morphisms = GenParams{}.max_morphisms;
    std::size_t max_fiber = GenParams{}.max_fiber;

    void attach(CLI::App * app)
    {
        app->add_option("--max-objects", max_objects, "Objects per generated category");
        app->add_option("--max-morphisms", max_morphisms, "Morphisms per generated category");
        app->add_option("--max-fiber", max_fiber, "Elements per copresheaf fiber");
    }

    GenParams params() const
    {
        GenParams p;
        p.max_objects = max_objects;
        p.max_morphisms = max_morphisms;
        p.max_fiber = max_fiber;
        return p;
    }
};

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string & s)
{
    auto dots = s.find("..");
    try {
        if (dots == std::string::npos) {
            auto v = std::stoull(s);
            return {v, v};
        }
        return {std::stoull(s.substr(0, dots)), std::stoull(s.substr(dots + 2))};
    } catch (const std::logic_error &) {
        throw Error(ErrorKind::ParamsOutOfRange, "bad seed range '" + s + "', expected A..B");
    }
}

// -- commands ----------------------------------------------------------------

struct CheckCmd {
    std::string file, entity, property = "strong-movable", via;

    int run() const
    {
        const auto doc = load(file);
        const auto & e = require(doc, entity);
        if (property == "strong-movable") {
            const auto k = doc.category(entity);
            const auto r = check_strongly_movable(k);
            if (r.holds()) {
                std::cout << entity << " is strongly movable\n";
                print_witness(std::cout, k, k, r.witness());
                return exit_holds;
            }
            print_counterexample(std::cout, k, k, r.counterexample());
            std::cout << serialize_document(doc);
            return exit_fails;
        }
        if (property != "movable")
            throw Error(ErrorKind::BadRef, "unknown property '" + property + "'");

        MovabilityResult r;
        FiniteCategory k, l;
        if (!via.empty()) {
            const auto & phi = doc.functor(via);
            k = phi.source();
            l = phi.target();
            if (k != doc.category(entity))
                throw Error(ErrorKind::SourceTargetMismatch, "functor " + via + " does not start at " + entity);
            r = check_movable_wrt(phi);
        } else if (std::holds_alternative<CopresheafDecl>(e.decl)) {
            const auto & h = doc.copresheaf(entity);
            k = elements_category(h).category;
            l = h.base();
            r = space_movability(h);
        } else {
            throw Error(ErrorKind::BadRef, "--property movable needs --via FUNCTOR or a copresheaf entity");
        }
        if (r.holds()) {
            std::cout << entity << " is movable\n";
            print_witness(std::cout, k, l, r.witness());
            return exit_holds;
        }
        print_counterexample(std::cout, k, l, r.counterexample());
        std::cout << serialize_document(doc);
        return exit_fails;
    }
};

struct SearchCmd {
    std::string k_spec, l_spec;
    bool weak = false;
    std::size_t budget = default_budget;

    int run() const
    {
        auto k = load_category_entity(k_spec);
        auto l = load_category_entity(l_spec);
        k.name = "K";
        l.name = "L";
        Document out;
        out.add(k);
        out.add(l);
        const auto kc = out.category("K");
        const auto lc = out.category("L");

        SearchStatus status;
        if (weak) {
            const auto r = find_weak_domination(kc, lc, budget);
            status = r.status;
            if (status == SearchStatus::found) {
                out.add({"F", FunctorDecl{"K", "L", r.f}});
                out.add({"G", FunctorDecl{"L", "K", r.g}});
                out.add({"GF", FunctorDecl{"K", "K", compose_functors(r.g, r.f)}});
                out.add({"IdK", FunctorDecl{"K", "K", Functor::identity(kc)}});
                out.add({"phi", NatTransDecl{"GF", "IdK", r.phi}});
                std::cout << "# weak domination found" << (r.strict ? " (strict)" : "") << "\n";
            }
        } else {
            const auto r = find_functorial_domination(kc, lc, budget);
            status = r.status;
            if (status == SearchStatus::found) {
                out.add({"F", FunctorDecl{"K", "L", r.f}});
                out.add({"G", FunctorDecl{"L", "K", r.g}});
                std::cout << "# functorial domination found\n";
            }
        }
        if (status == SearchStatus::none)
            std::cout << "# no " << (weak ? "weak " : "") << "domination exists (exhaustive)\n";
        else if (status == SearchStatus::truncated)
            std::cout << "# search budget exhausted before a domination was found\n";
        std::cout << serialize_document(out);
        return status == SearchStatus::found ? exit_holds : exit_fails;
    }
};

struct BuildCmd {
    std::string construction, file, output, name;
    std::vector<std::string> entities;
    std::string apex;

    int run() const
    {
        const auto doc = load(file);
        FiniteCategory built;
        if (construction == "product") {
            if (entities.empty())
                throw Error(ErrorKind::BadRef, "product needs at least one --entity");
            std::vector<FiniteCategory> factors;
            for (const auto & e : entities)
                factors.push_back(doc.category(e));
            built = product_category(factors).category;
        } else if (construction == "coslice") {
            if (entities.size() != 1 || apex.empty())
                throw Error(ErrorKind::BadRef, "coslice needs one --entity and --apex");
            const auto c = doc.category(entities[0]);
            const auto x = c.find_object(apex);
            if (!x)
                throw ReferenceError(0, 0, "object '" + apex + "'");
            built = coslice_category(c, *x).category;
        } else if (construction == "elements") {
            if (entities.size() != 1)
                throw Error(ErrorKind::BadRef, "elements needs one --entity naming a copresheaf");
            built = elements_category(doc.copresheaf(entities[0])).category;
        } else {
            throw Error(ErrorKind::BadRef, "unknown construction '" + construction + "'");
        }
        Document out;
        out.add({name, CategoryDecl{built}});
        write_output(output, serialize_document(out));
        return exit_holds;
    }
};

struct SystemCmd {
    std::string file, entity;
    bool sm1 = false, sm2 = false, associated = false, star = false;

    int run() const
    {
        const auto doc = load(file);
        const auto & d = doc.system(entity);
        const bool all = !sm1 && !sm2 && !associated && !star;
        bool ok = true;
        auto need_cone = [&](const char * what) {
            if (!d.cone)
                throw Error(ErrorKind::SystemTypeError, std::string(what) + " needs a system with a cone");
        };

        if (all || sm1) {
            const bool h = check_sm1(d.system).holds();
            std::cout << "SM1: " << (h ? "holds" : "fails") << "\n";
            ok = ok && h;
        }
        if ((all && d.cone) || associated) {
            need_cone("--associated");
            const auto r = check_associated(d.system, *d.cone);
            std::cout << "directed: " << (r.directed ? "yes" : "no") << "\n"
                      << "condition 1: " << (r.cond1 ? "holds" : "fails") << "\n"
                      << "condition 2: " << (r.cond2 ? "holds" : "fails") << "\n"
                      << "condition 3: " << (r.cond3 ? "holds" : "fails") << "\n";
            ok = ok && r.associated();
        }
        if ((all && d.cone) || sm2) {
            need_cone("--sm2");
            bool h = false;
            try {
                h = check_sm2(d.system, *d.cone).holds();
                std::cout << "SM2: " << (h ? "holds" : "fails") << "\n";
            } catch (const Error & e) {
                if (e.kind() != ErrorKind::ConeIncompatible)
                    throw;
                std::cout << "SM2: fails (" << e.what() << ")\n";
            }
            ok = ok && h;
        }
        if ((all && d.cone) || star) {
            need_cone("--star");
            const bool h = check_star(d.cone->presheaf()).holds();
            std::cout << "star: " << (h ? "holds" : "fails") << "\n";
            ok = ok && h;
        }
        if (!ok)
            std::cout << serialize_document(doc);
        return ok ? exit_holds : exit_fails;
    }
};

struct CampaignCmd {
    std::string theorem, seeds = "0..99";
    bool json = false, timing = false;
    int threads = 0;
    std::size_t budget = default_budget;
    CapsOptions caps;

    int run() const
    {
        const auto [first, last] = parse_seed_range(seeds);
        CampaignParams p;
        p.gen = caps.params();
        p.budget = budget;
        p.timing = timing;
        set_thread_count(threads);
        const auto r = run_campaign(theorem, first, last, p);
        if (json) {
            std::cout << r.to_json();
        } else {
            std::cout << r.summary() << "\n";
            for (const auto & [t, n] : r.tallies)
                std::cout << "  " << t << ": " << n << "\n";
            for (const auto & f : r.failures)
                std::cout << "\n# failure at seed " << f.seed << ": " << f.detail << "\n" << f.document;
        }
        return r.clean() ? exit_holds : exit_fails;
    }
};

struct ReplayCmd {
    std::string file, theorem;
    std::size_t budget = default_budget;

    int run() const
    {
        const auto text = read_file(file);
        std::string name = theorem;
        if (name.empty()) {
            std::istringstream is(text);
            std::string line;
            while (std::getline(is, line))
                if (line.rfind("# theorem ", 0) == 0) {
                    name = line.substr(10);
                    break;
                }
        }
        if (name.empty())
            throw Error(ErrorKind::UnknownTheorem, "no '# theorem' line; pass --theorem");
        CampaignParams p;
        p.budget = budget;
        const auto o = replay(name, text, p);
        std::cout << name << ": " << (o.holds ? "law holds" : "law fails");
        if (!o.detail.empty())
            std::cout << " (" << o.detail << ")";
        std::cout << "\n";
        return o.holds ? exit_holds : exit_fails;
    }
};

struct GenerateCmd {
    std::string kind, output;
    std::uint64_t seed = 0;
    std::string index_shape = "any";
    CapsOptions caps;

    int run() const
    {
        auto p = caps.params();
        const std::map<std::string, IndexShape> shapes{{"any", IndexShape::any},
                                                       {"directed", IndexShape::directed},
                                                       {"non-directed", IndexShape::non_directed},
                                                       {"forked", IndexShape::forked}};
        p.index_shape = shapes.at(index_shape);
        write_output(output, serialize_document(generate_instance(parse_instance_kind(kind), seed, p)));
        return exit_holds;
    }
};

} // namespace

int main(int argc, char ** argv)
{
    CLI::App app{"movcat: finite categories, movability and domination"};
    app.require_subcommand(1);
    std::size_t limit_objects = default_limits().max_objects;
    std::size_t limit_morphisms = default_limits().max_morphisms;
    app.add_option("--limit-objects", limit_objects, "Largest category any construction may build");
    app.add_option("--limit-morphisms", limit_morphisms, "Most morphisms any construction may build");

    CheckCmd check;
    auto * c = app.add_subcommand("check", "Decide (strong) movability of an entity");
    c->add_option("file", check.file)->required();
    c->add_option("--entity", check.entity)->required();
    c->add_option("--property", check.property)->check(CLI::IsMember({"strong-movable", "movable"}));
    c->add_option("--via", check.via, "Functor for relative movability");

    SearchCmd search;
    auto * s = app.add_subcommand("search", "Search for structure between categories");
    s->require_subcommand(1);
    auto * sd = s->add_subcommand("domination", "Find F, G with G.F = 1 (or G.F => 1 with --weak)");
    sd->add_option("K", search.k_spec, "path[:NAME]")->required();
    sd->add_option("L", search.l_spec, "path[:NAME]")->required();
    sd->add_flag("--weak", search.weak);
    sd->add_option("--budget", search.budget);

    BuildCmd build;
    auto * b = app.add_subcommand("build", "Build a derived category");
    b->add_option("construction", build.construction)->required()->check(
        CLI::IsMember({"product", "coslice", "elements"}));
    b->add_option("file", build.file)->required();
    b->add_option("--entity", build.entities, "Input entity (repeat for product factors)");
    b->add_option("--apex", build.apex, "Coslice apex object");
    b->add_option("--name", build.name, "Name of the output category")->default_val("Built");
    b->add_option("-o,--output", build.output, "Output file (default stdout)");

    SystemCmd sys;
    auto * y = app.add_subcommand("system", "Inverse-system conditions");
    y->require_subcommand(1);
    auto * yc = y->add_subcommand("check", "Evaluate SM1, SM2, conditions 1-3 and (*)");
    yc->add_option("file", sys.file)->required();
    yc->add_option("--entity", sys.entity)->required();
    yc->add_flag("--sm1", sys.sm1);
    yc->add_flag("--sm2", sys.sm2);
    yc->add_flag("--associated", sys.associated);
    yc->add_flag("--star", sys.star);

    CampaignCmd camp;
    auto * k = app.add_subcommand("campaign", "Run a randomized law campaign");
    k->add_option("theorem", camp.theorem)->required();
    k->add_option("--seeds", camp.seeds, "Inclusive range A..B");
    k->add_flag("--json", camp.json);
    k->add_flag("--timing", camp.timing, "Report wall time");
    k->add_option("--threads", camp.threads, "Worker threads (0 = default)");
    k->add_option("--budget", camp.budget, "Search budget per instance");
    camp.caps.attach(k);

    ReplayCmd rep;
    auto * r = app.add_subcommand("replay", "Re-evaluate a law on a failure document");
    r->add_option("file", rep.file)->required();
    r->add_option("--theorem", rep.theorem, "Overrides the '# theorem' line");
    r->add_option("--budget", rep.budget);

    GenerateCmd gen;
    auto * g = app.add_subcommand("generate", "Write a random instance");
    g->add_option("kind", gen.kind)->required();
    g->add_option("--seed", gen.seed);
    g->add_option("--index", gen.index_shape, "Index shape for systems")
        ->check(CLI::IsMember({"any", "directed", "non-directed", "forked"}));
    g->add_option("-o,--output", gen.output);
    gen.caps.attach(g);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success & e) {
        return app.exit(e);
    } catch (const CLI::ParseError & e) {
        app.exit(e);
        return exit_input;
    }

    try {
        default_limits().max_objects = limit_objects;
        default_limits().max_morphisms = limit_morphisms;
        if (c->parsed())
            return check.run();
        if (sd->parsed())
            return search.run();
        if (b->parsed())
            return build.run();
        if (yc->parsed())
            return sys.run();
        if (k->parsed())
            return camp.run();
        if (r->parsed())
            return rep.run();
        if (g->parsed())
            return gen.run();
    } catch (const std::exception & e) {
        std::cerr << "movcat: " << e.what() << "\n";
        return exit_input;
    }
    return exit_input;
}
