#include "movcat/dsl.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>
#include <map>
#include <sstream>

namespace movcat {

bool is_identifier(std::string_view s)
{
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
        return false;
    return std::all_of(s.begin() + 1, s.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

// ---------------------------------------------------------------------------
// Document

namespace {
    template <typename T>
    const T * decl_as(const Entity * e)
    {
        return e ? std::get_if<T>(&e->decl) : nullptr;
    }

    [[noreturn]] void unresolved(std::string_view kind, std::string_view name)
    {
        throw ReferenceError(0, 0, std::string(kind) + " '" + std::string(name) + "'");
    }

    [[noreturn]] void mismatch(const std::string & what)
    {
        throw Error(ErrorKind::SourceTargetMismatch, what);
    }
}

const Entity * Document::find(std::string_view name) const
{
    if (name.empty())
        return nullptr;
    for (const auto & e : entities_)
        if (e.name == name)
            return &e;
    return nullptr;
}

bool Document::is_category(std::string_view name) const
{
    if (name.empty())
        return false;
    for (std::size_t i = 0; i < entities_.size(); ++i)
        if (entities_[i].name == name)
            return std::holds_alternative<CategoryDecl>(entities_[i].decl) ||
                   std::holds_alternative<PosetDecl>(entities_[i].decl) ||
                   std::holds_alternative<MonoidDecl>(entities_[i].decl);
    return false;
}

FiniteCategory Document::category(std::string_view name) const
{
    for (std::size_t i = 0; i < entities_.size(); ++i)
        if (!name.empty() && entities_[i].name == name && is_category(name))
            return categories_[i];
    unresolved("category", name);
}

const FinitePoset & Document::poset(std::string_view name) const
{
    if (auto * d = decl_as<PosetDecl>(find(name)))
        return d->poset;
    unresolved("poset", name);
}

const Functor & Document::functor(std::string_view name) const
{
    if (auto * d = decl_as<FunctorDecl>(find(name)))
        return d->functor;
    unresolved("functor", name);
}

const NaturalTransformation & Document::nat_trans(std::string_view name) const
{
    if (auto * d = decl_as<NatTransDecl>(find(name)))
        return d->transformation;
    unresolved("natural transformation", name);
}

const Copresheaf & Document::copresheaf(std::string_view name) const
{
    if (auto * d = decl_as<CopresheafDecl>(find(name)))
        return d->presheaf;
    unresolved("copresheaf", name);
}

const SystemDecl & Document::system(std::string_view name) const
{
    if (auto * d = decl_as<SystemDecl>(find(name)))
        return *d;
    unresolved("system", name);
}

const CoproductDesignation * Document::coproducts_on(std::string_view base) const
{
    for (const auto & e : entities_)
        if (auto * d = std::get_if<CoproductsDecl>(&e.decl); d && d->base == base)
            return &d->designation;
    return nullptr;
}

void Document::add(Entity e)
{
    const bool is_coproducts = std::holds_alternative<CoproductsDecl>(e.decl);
    if (is_coproducts) {
        if (!e.name.empty())
            throw Error(ErrorKind::DuplicateName, "coproduct designations are unnamed");
    } else {
        if (!is_identifier(e.name))
            throw Error(ErrorKind::BadRef, "entity name '" + e.name + "' is not an identifier");
        if (find(e.name))
            throw Error(ErrorKind::DuplicateName, "entity '" + e.name + "' declared twice");
    }

    FiniteCategory as_category;
    std::visit(
        [&](const auto & d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, CategoryDecl>) {
                as_category = d.category;
            } else if constexpr (std::is_same_v<T, PosetDecl>) {
                as_category = poset_category(d.poset);
            } else if constexpr (std::is_same_v<T, MonoidDecl>) {
                as_category = monoid_category(d.monoid);
            } else if constexpr (std::is_same_v<T, FunctorDecl>) {
                if (!(category(d.source) == d.functor.source()) || !(category(d.target) == d.functor.target()))
                    mismatch("functor " + e.name + " does not run between " + d.source + " and " + d.target);
            } else if constexpr (std::is_same_v<T, NatTransDecl>) {
                if (!(functor(d.from) == d.transformation.from()) || !(functor(d.to) == d.transformation.to()))
                    mismatch("transformation " + e.name + " does not run from " + d.from + " to " + d.to);
            } else if constexpr (std::is_same_v<T, CopresheafDecl>) {
                if (!(category(d.base) == d.presheaf.base()))
                    mismatch("copresheaf " + e.name + " is not on " + d.base);
            } else if constexpr (std::is_same_v<T, SystemDecl>) {
                if (!(category(d.ambient) == d.system.ambient()))
                    mismatch("system " + e.name + " is not in " + d.ambient);
                if (!(poset(d.index) == d.system.index()))
                    mismatch("system " + e.name + " is not over " + d.index);
                if (d.cone && !d.presheaf)
                    mismatch("system " + e.name + " has a cone but no copresheaf");
                if (d.presheaf) {
                    const auto & h = copresheaf(*d.presheaf);
                    if (!(h.base() == d.system.ambient()))
                        mismatch("copresheaf " + *d.presheaf + " is not on " + d.ambient);
                    if (d.cone && !(d.cone->presheaf() == h))
                        mismatch("cone of " + e.name + " is not valued in " + *d.presheaf);
                }
            } else if constexpr (std::is_same_v<T, CoproductsDecl>) {
                if (!(category(d.base) == d.designation.category()))
                    mismatch("coproducts are not on " + d.base);
                if (coproducts_on(d.base))
                    throw Error(ErrorKind::DuplicateName, "coproducts on " + d.base + " declared twice");
            }
        },
        e.decl);

    entities_.push_back(std::move(e));
    categories_.push_back(std::move(as_category));
}

// ---------------------------------------------------------------------------
// Lexer

namespace {
    struct Token {
        enum Kind { Ident, Punct, End } kind;
        std::string text;
        int line;
        int col;
    };

    std::string describe(const Token & t)
    {
        if (t.kind == Token::End)
            return "end of input";
        return "'" + t.text + "'";
    }

    std::vector<Token> tokenize(std::string_view src)
    {
        std::vector<Token> out;
        int line = 1, col = 1;
        std::size_t i = 0;
        auto advance = [&](std::size_t n) {
            for (std::size_t k = 0; k < n; ++k, ++i) {
                if (src[i] == '\n') {
                    ++line;
                    col = 1;
                } else {
                    ++col;
                }
            }
        };
        while (i < src.size()) {
            const char c = src[i];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance(1);
            } else if (c == '#') {
                while (i < src.size() && src[i] != '\n')
                    advance(1);
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t j = i + 1;
                while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                    ++j;
                out.push_back({Token::Ident, std::string(src.substr(i, j - i)), line, col});
                advance(j - i);
            } else if ((c == '-' || c == '=') && i + 1 < src.size() && src[i + 1] == '>') {
                out.push_back({Token::Punct, std::string(src.substr(i, 2)), line, col});
                advance(2);
            } else if (std::string_view("{};:=,").find(c) != std::string_view::npos) {
                out.push_back({Token::Punct, std::string(1, c), line, col});
                advance(1);
            } else {
                std::string shown = std::isprint(static_cast<unsigned char>(c))
                                        ? "'" + std::string(1, c) + "'"
                                        : "byte 0x" + [&] {
                                              std::ostringstream os;
                                              os << std::hex << (static_cast<unsigned>(c) & 0xffu);
                                              return os.str();
                                          }();
                throw SyntaxError(line, col, "identifier or punctuation", shown);
            }
        }
        out.push_back({Token::End, "", line, col});
        return out;
    }

    // -----------------------------------------------------------------------
    // Parser

    class Parser {
    public:
        explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

        Document run()
        {
            while (peek().kind != Token::End) {
                const Token kw = expect_ident("declaration keyword");
                if (kw.text == "poset")
                    parse_poset(kw);
                else if (kw.text == "monoid")
                    parse_monoid(kw);
                else if (kw.text == "category")
                    parse_category(kw);
                else if (kw.text == "functor")
                    parse_functor(kw);
                else if (kw.text == "nattrans")
                    parse_nattrans(kw);
                else if (kw.text == "copresheaf")
                    parse_copresheaf(kw);
                else if (kw.text == "system")
                    parse_system(kw);
                else if (kw.text == "coproducts")
                    parse_coproducts(kw);
                else
                    throw SyntaxError(kw.line, kw.col,
                                      "one of poset, monoid, category, functor, nattrans, copresheaf, system, "
                                      "coproducts",
                                      describe(kw));
            }
            return std::move(doc_);
        }

    private:
        std::vector<Token> toks_;
        std::size_t pos_ = 0;
        Document doc_;

        const Token & peek() const { return toks_[pos_]; }
        Token next() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }

        bool at_punct(std::string_view p) const { return peek().kind == Token::Punct && peek().text == p; }
        bool at_keyword(std::string_view k) const { return peek().kind == Token::Ident && peek().text == k; }

        Token expect_ident(const std::string & what)
        {
            if (peek().kind != Token::Ident)
                throw SyntaxError(peek().line, peek().col, what, describe(peek()));
            return next();
        }

        Token expect(std::string_view p)
        {
            if (!at_punct(p))
                throw SyntaxError(peek().line, peek().col, "'" + std::string(p) + "'", describe(peek()));
            return next();
        }

        Token expect_keyword(std::string_view k)
        {
            if (!at_keyword(k))
                throw SyntaxError(peek().line, peek().col, "'" + std::string(k) + "'", describe(peek()));
            return next();
        }

        /// ';' separates clauses; it may be dropped before '}'.
        void end_clause()
        {
            if (at_punct(";")) {
                next();
                return;
            }
            if (!at_punct("}"))
                throw SyntaxError(peek().line, peek().col, "';' or '}'", describe(peek()));
        }

        /// Identifiers up to the next ';' or '}'.
        std::vector<Token> ident_list()
        {
            std::vector<Token> out;
            while (peek().kind == Token::Ident)
                out.push_back(next());
            return out;
        }

        /// Next clause keyword, or nullopt at the closing brace (consumed).
        std::optional<Token> clause(const std::string & expected)
        {
            if (at_punct("}")) {
                next();
                return std::nullopt;
            }
            return expect_ident(expected);
        }

        [[noreturn]] static void bad_clause(const Token & t, const std::string & expected)
        {
            throw SyntaxError(t.line, t.col, expected, describe(t));
        }

        [[noreturn]] static void unknown(const Token & t, std::string_view kind)
        {
            throw ReferenceError(t.line, t.col, std::string(kind) + " '" + t.text + "'");
        }

        /// Rethrows validator errors with the entity and its line attached.
        template <typename F>
        auto in_context(const Token & name, F && f)
        {
            const auto prefix = "in " + name.text + " (line " + std::to_string(name.line) + "): ";
            try {
                return f();
            } catch (const ValidationError & e) {
                auto vs = e.violations();
                for (auto & v : vs)
                    v.detail = prefix + v.detail;
                throw ValidationError(std::move(vs));
            } catch (const SyntaxError &) {
                throw;
            } catch (const ReferenceError &) {
                throw;
            } catch (const Error & e) {
                throw Error(e.kind(), prefix + e.what());
            }
        }

        void add(const Token & name, Entity e)
        {
            in_context(name, [&] {
                doc_.add(std::move(e));
                return 0;
            });
        }

        FiniteCategory category_ref(const Token & t)
        {
            if (!doc_.is_category(t.text))
                unknown(t, "category");
            return doc_.category(t.text);
        }

        static ObjRef object_ref(const FiniteCategory & c, const Token & t)
        {
            auto r = c.find_object(t.text);
            if (!r)
                unknown(t, "object");
            return *r;
        }

        static MorRef arrow_ref(const FiniteCategory & c, const Token & t)
        {
            auto r = c.find_morphism(t.text);
            if (!r)
                unknown(t, "arrow");
            return *r;
        }

        static std::size_t index_of(const std::vector<std::string> & names, const Token & t, std::string_view kind)
        {
            auto it = std::find(names.begin(), names.end(), t.text);
            if (it == names.end())
                unknown(t, kind);
            return static_cast<std::size_t>(it - names.begin());
        }

        static std::vector<std::string> texts(const std::vector<Token> & ts)
        {
            std::vector<std::string> out;
            for (const auto & t : ts)
                out.push_back(t.text);
            return out;
        }

        static void check_unique(const std::vector<std::string> & names, std::string_view kind, ViolationList & v)
        {
            for (std::size_t i = 0; i < names.size(); ++i)
                for (std::size_t j = 0; j < i; ++j)
                    if (names[i] == names[j]) {
                        v.add(ErrorKind::DuplicateName, std::string(kind) + " '" + names[i] + "' declared twice");
                        break;
                    }
        }

        // poset NAME { elements id+ ; (leq id id ;)* }
        void parse_poset(const Token &)
        {
            const Token name = expect_ident("poset name");
            expect("{");
            std::vector<std::string> elements;
            std::vector<std::pair<Token, Token>> leqs;
            while (auto kw = clause("'elements' or 'leq'")) {
                if (kw->text == "elements") {
                    for (auto & t : ident_list())
                        elements.push_back(t.text);
                } else if (kw->text == "leq") {
                    Token a = expect_ident("element");
                    Token b = expect_ident("element");
                    leqs.emplace_back(a, b);
                } else {
                    bad_clause(*kw, "'elements' or 'leq'");
                }
                end_clause();
            }
            std::vector<std::pair<std::size_t, std::size_t>> pairs;
            for (auto & [a, b] : leqs)
                pairs.emplace_back(index_of(elements, a, "element"), index_of(elements, b, "element"));
            auto poset = in_context(name, [&] {
                ViolationList v;
                check_unique(elements, "element", v);
                v.throw_if_any();
                return FinitePoset::from_relation(elements, pairs);
            });
            add(name, {name.text, PosetDecl{std::move(poset)}});
        }

        // monoid NAME { elements id+ ; unit id ; (mul id id = id ;)* }
        void parse_monoid(const Token &)
        {
            const Token name = expect_ident("monoid name");
            expect("{");
            std::vector<std::string> elements;
            std::optional<Token> unit;
            std::vector<std::array<Token, 3>> muls;
            while (auto kw = clause("'elements', 'unit' or 'mul'")) {
                if (kw->text == "elements") {
                    for (auto & t : ident_list())
                        elements.push_back(t.text);
                } else if (kw->text == "unit") {
                    unit = expect_ident("element");
                } else if (kw->text == "mul") {
                    Token a = expect_ident("element");
                    Token b = expect_ident("element");
                    expect("=");
                    Token c = expect_ident("element");
                    muls.push_back({a, b, c});
                } else {
                    bad_clause(*kw, "'elements', 'unit' or 'mul'");
                }
                end_clause();
            }
            if (!unit)
                throw SyntaxError(name.line, name.col, "a 'unit' clause in monoid " + name.text, "none");
            const auto n = elements.size();
            const auto u = index_of(elements, *unit, "element");
            constexpr auto unset = std::numeric_limits<std::size_t>::max();
            std::vector<std::size_t> table(n * n, unset);
            std::vector<std::array<std::size_t, 3>> resolved;
            for (auto & m : muls)
                resolved.push_back({index_of(elements, m[0], "element"), index_of(elements, m[1], "element"),
                                    index_of(elements, m[2], "element")});
            auto monoid = in_context(name, [&] {
                ViolationList v;
                check_unique(elements, "element", v);
                v.throw_if_any();
                for (std::size_t a = 0; a < n; ++a) {
                    table[u * n + a] = a;
                    table[a * n + u] = a;
                }
                for (auto [a, b, c] : resolved) {
                    auto & slot = table[a * n + b];
                    if (slot != unset && slot != c)
                        v.add(ErrorKind::NotAMonoid, "conflicting products for " + elements[a] + " " + elements[b]);
                    slot = c;
                }
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = 0; b < n; ++b)
                        if (table[a * n + b] == unset)
                            v.add(ErrorKind::NotAMonoid, "no product given for " + elements[a] + " " + elements[b]);
                v.throw_if_any();
                return Monoid::validate(elements, u, table);
            });
            add(name, {name.text, MonoidDecl{std::move(monoid)}});
        }

        // category NAME { objects id+ ; (arrows f: A -> B ;)* (compose g f = h ;)* }
        void parse_category(const Token &)
        {
            const Token name = expect_ident("category name");
            expect("{");
            std::vector<Token> objects;
            std::vector<std::array<Token, 3>> arrows;
            std::vector<std::array<Token, 3>> composites;
            while (auto kw = clause("'objects', 'arrows' or 'compose'")) {
                if (kw->text == "objects") {
                    for (auto & t : ident_list())
                        objects.push_back(t);
                } else if (kw->text == "arrows") {
                    Token f = expect_ident("arrow name");
                    expect(":");
                    Token a = expect_ident("object");
                    expect("->");
                    Token b = expect_ident("object");
                    arrows.push_back({f, a, b});
                } else if (kw->text == "compose") {
                    Token g = expect_ident("arrow");
                    Token f = expect_ident("arrow");
                    expect("=");
                    Token h = expect_ident("arrow");
                    composites.push_back({g, f, h});
                } else {
                    bad_clause(*kw, "'objects', 'arrows' or 'compose'");
                }
                end_clause();
            }

            RawCategory raw;
            raw.objects = texts(objects);
            for (auto & [f, a, b] : arrows) {
                index_of(raw.objects, a, "object");
                index_of(raw.objects, b, "object");
                raw.arrows.push_back({f.text, a.text, b.text});
            }
            auto known_arrow = [&](const Token & t) {
                for (auto & a : raw.arrows)
                    if (a.name == t.text)
                        return;
                for (auto & o : raw.objects)
                    if (t.text == "id_" + o)
                        return;
                unknown(t, "arrow");
            };
            for (auto & [g, f, h] : composites) {
                known_arrow(g);
                known_arrow(f);
                known_arrow(h);
                raw.composites.push_back({g.text, f.text, h.text});
            }
            auto c = in_context(name, [&] { return validate_category(raw); });
            add(name, {name.text, CategoryDecl{std::move(c)}});
        }

        // functor NAME : SRC -> TGT { (object a => b ;)* (arrow f => g ;)* }
        void parse_functor(const Token &)
        {
            const Token name = expect_ident("functor name");
            expect(":");
            const Token src_tok = expect_ident("source category");
            expect("->");
            const Token tgt_tok = expect_ident("target category");
            const auto src = category_ref(src_tok);
            const auto tgt = category_ref(tgt_tok);
            expect("{");
            std::vector<std::optional<ObjRef>> om(src.object_count());
            std::vector<std::optional<MorRef>> mm(src.morphism_count());
            while (auto kw = clause("'object' or 'arrow'")) {
                Token a = expect_ident(kw->text == "arrow" ? "arrow" : "object");
                expect("=>");
                Token b = expect_ident(kw->text == "arrow" ? "arrow" : "object");
                if (kw->text == "object")
                    om[object_ref(src, a).index] = object_ref(tgt, b);
                else if (kw->text == "arrow")
                    mm[arrow_ref(src, a).index] = arrow_ref(tgt, b);
                else
                    bad_clause(*kw, "'object' or 'arrow'");
                end_clause();
            }
            auto f = in_context(name, [&] {
                ViolationList v;
                std::vector<ObjRef> objs;
                std::vector<MorRef> mors;
                for (std::uint32_t i = 0; i < om.size(); ++i) {
                    if (!om[i])
                        v.add(ErrorKind::BadRef, "object " + src.object_name(ObjRef{i}) + " has no image");
                    objs.push_back(om[i].value_or(ObjRef{0}));
                }
                for (std::uint32_t i = 0; i < mm.size(); ++i) {
                    if (!mm[i] && i < om.size() && om[i])
                        mm[i] = FiniteCategory::identity(*om[i]);
                    if (!mm[i] && i >= om.size())
                        v.add(ErrorKind::BadRef, "arrow " + src.morphism_name(MorRef{i}) + " has no image");
                    mors.push_back(mm[i].value_or(MorRef{0}));
                }
                v.throw_if_any();
                return Functor::validate(src, tgt, std::move(objs), std::move(mors));
            });
            add(name, {name.text, FunctorDecl{src_tok.text, tgt_tok.text, std::move(f)}});
        }

        // nattrans NAME : F => G { (at A = f ;)* }
        void parse_nattrans(const Token &)
        {
            const Token name = expect_ident("transformation name");
            expect(":");
            const Token from_tok = expect_ident("functor");
            expect("=>");
            const Token to_tok = expect_ident("functor");
            if (!decl_as<FunctorDecl>(doc_.find(from_tok.text)))
                unknown(from_tok, "functor");
            if (!decl_as<FunctorDecl>(doc_.find(to_tok.text)))
                unknown(to_tok, "functor");
            const Functor from = doc_.functor(from_tok.text);
            const Functor to = doc_.functor(to_tok.text);
            expect("{");
            std::vector<std::optional<MorRef>> comps(from.source().object_count());
            while (auto kw = clause("'at'")) {
                if (kw->text != "at")
                    bad_clause(*kw, "'at'");
                Token a = expect_ident("object");
                expect("=");
                Token f = expect_ident("arrow");
                comps[object_ref(from.source(), a).index] = arrow_ref(from.target(), f);
                end_clause();
            }
            auto t = in_context(name, [&] {
                ViolationList v;
                std::vector<MorRef> cs;
                for (std::uint32_t i = 0; i < comps.size(); ++i) {
                    if (!comps[i])
                        v.add(ErrorKind::ComponentTypeError,
                              "no component at " + from.source().object_name(ObjRef{i}));
                    cs.push_back(comps[i].value_or(MorRef{0}));
                }
                v.throw_if_any();
                return NaturalTransformation::validate(from, to, std::move(cs));
            });
            add(name, {name.text, NatTransDecl{from_tok.text, to_tok.text, std::move(t)}});
        }

        // copresheaf NAME on C { (at A = { x y } ;)* (act f { x => y ; ... })* }
        void parse_copresheaf(const Token &)
        {
            const Token name = expect_ident("copresheaf name");
            expect_keyword("on");
            const Token base_tok = expect_ident("category");
            const auto base = category_ref(base_tok);
            expect("{");
            std::vector<std::vector<std::string>> fibers(base.object_count());
            std::vector<std::vector<std::pair<Token, Token>>> acts(base.morphism_count());
            std::vector<bool> act_seen(base.morphism_count(), false);
            std::vector<bool> fiber_seen(base.object_count(), false);
            while (auto kw = clause("'at' or 'act'")) {
                if (kw->text == "at") {
                    Token q = expect_ident("object");
                    const auto qi = object_ref(base, q).index;
                    if (fiber_seen[qi])
                        throw ValidationError({{ErrorKind::DuplicateName, "in " + name.text + ": fiber at " +
                                                                              q.text + " given twice (line " +
                                                                              std::to_string(q.line) + ")"}});
                    fiber_seen[qi] = true;
                    expect("=");
                    expect("{");
                    fibers[qi] = texts(ident_list());
                    expect("}");
                    end_clause();
                } else if (kw->text == "act") {
                    Token f = expect_ident("arrow");
                    const auto fi = arrow_ref(base, f).index;
                    if (act_seen[fi])
                        throw ValidationError({{ErrorKind::InvalidCopresheaf, "in " + name.text + ": action of " +
                                                                                  f.text + " given twice (line " +
                                                                                  std::to_string(f.line) + ")"}});
                    act_seen[fi] = true;
                    expect("{");
                    while (!at_punct("}")) {
                        Token x = expect_ident("element");
                        expect("=>");
                        Token y = expect_ident("element");
                        acts[fi].emplace_back(x, y);
                        end_clause();
                    }
                    expect("}");
                    if (at_punct(";"))
                        next();
                } else {
                    bad_clause(*kw, "'at' or 'act'");
                }
            }

            std::vector<std::vector<std::uint32_t>> action(base.morphism_count());
            constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
            ViolationList v;
            for (std::uint32_t fi = 0; fi < base.morphism_count(); ++fi) {
                MorRef f{fi};
                const auto & dom_fiber = fibers[base.dom(f).index];
                const auto & cod_fiber = fibers[base.cod(f).index];
                if (!act_seen[fi]) {
                    if (!base.is_identity(f) && !dom_fiber.empty())
                        v.add(ErrorKind::InvalidCopresheaf, "no action given for " + base.morphism_name(f));
                    continue;
                }
                action[fi].assign(dom_fiber.size(), unset);
                for (auto & [x, y] : acts[fi]) {
                    const auto xi = index_of(dom_fiber, x, "element");
                    const auto yi = static_cast<std::uint32_t>(index_of(cod_fiber, y, "element"));
                    if (action[fi][xi] != unset && action[fi][xi] != yi)
                        v.add(ErrorKind::InvalidCopresheaf,
                              "action of " + base.morphism_name(f) + " sends " + x.text + " twice");
                    action[fi][xi] = yi;
                }
                for (std::size_t xi = 0; xi < dom_fiber.size(); ++xi)
                    if (action[fi][xi] == unset)
                        v.add(ErrorKind::InvalidCopresheaf,
                              "action of " + base.morphism_name(f) + " misses " + dom_fiber[xi]);
            }
            auto h = in_context(name, [&] {
                v.throw_if_any();
                return Copresheaf::validate(base, fibers, action);
            });
            add(name, {name.text, CopresheafDecl{base_tok.text, std::move(h)}});
        }

        // system NAME in C over P [using copresheaf H] { object i => A ; bond i j => f ; cone i => x ; }
        void parse_system(const Token &)
        {
            const Token name = expect_ident("system name");
            expect_keyword("in");
            const Token amb_tok = expect_ident("category");
            const auto ambient = category_ref(amb_tok);
            expect_keyword("over");
            const Token idx_tok = expect_ident("poset");
            if (!decl_as<PosetDecl>(doc_.find(idx_tok.text)))
                unknown(idx_tok, "poset");
            const FinitePoset index = doc_.poset(idx_tok.text);
            std::optional<Token> h_tok;
            if (at_keyword("using")) {
                next();
                expect_keyword("copresheaf");
                h_tok = expect_ident("copresheaf");
                if (!decl_as<CopresheafDecl>(doc_.find(h_tok->text)))
                    unknown(*h_tok, "copresheaf");
            }
            expect("{");
            const auto n = index.size();
            std::vector<std::optional<ObjRef>> objects(n);
            std::vector<std::optional<MorRef>> bonds(n * n);
            std::vector<std::pair<std::size_t, Token>> cone_toks;
            while (auto kw = clause("'object', 'bond' or 'cone'")) {
                if (kw->text == "object") {
                    Token i = expect_ident("index");
                    expect("=>");
                    Token a = expect_ident("object");
                    objects[index_of(index.names(), i, "index")] = object_ref(ambient, a);
                } else if (kw->text == "bond") {
                    Token i = expect_ident("index");
                    Token j = expect_ident("index");
                    expect("=>");
                    Token f = expect_ident("arrow");
                    bonds[index_of(index.names(), i, "index") * n + index_of(index.names(), j, "index")] =
                        arrow_ref(ambient, f);
                } else if (kw->text == "cone") {
                    if (!h_tok)
                        throw SyntaxError(kw->line, kw->col, "'using copresheaf' in the header of " + name.text,
                                          "cone clause");
                    Token i = expect_ident("index");
                    expect("=>");
                    Token x = expect_ident("element");
                    cone_toks.emplace_back(index_of(index.names(), i, "index"), x);
                } else {
                    bad_clause(*kw, "'object', 'bond' or 'cone'");
                }
                end_clause();
            }

            auto system = in_context(name, [&] {
                ViolationList v;
                std::vector<ObjRef> objs;
                for (std::size_t a = 0; a < n; ++a) {
                    if (!objects[a])
                        v.add(ErrorKind::SystemTypeError, "index " + index.name(a) + " has no object");
                    objs.push_back(objects[a].value_or(ObjRef{0}));
                }
                v.throw_if_any();
                return InverseSystem::validate(ambient, index, std::move(objs), bonds);
            });

            std::optional<SystemCone> cone;
            if (!cone_toks.empty()) {
                const auto & h = doc_.copresheaf(h_tok->text);
                constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
                std::vector<std::uint32_t> elems(n, unset);
                for (auto & [a, x] : cone_toks) {
                    if (!(h.base() == ambient))
                        break;
                    elems[a] = static_cast<std::uint32_t>(index_of(h.fiber(system.object(a)), x, "element"));
                }
                cone = in_context(name, [&] {
                    ViolationList v;
                    for (std::size_t a = 0; a < n; ++a)
                        if (elems[a] == unset && h.base() == ambient)
                            v.add(ErrorKind::SystemTypeError, "no cone element at " + index.name(a));
                    v.throw_if_any();
                    return SystemCone::validate(system, h, elems);
                });
            }
            std::optional<std::string> h_name;
            if (h_tok)
                h_name = h_tok->text;
            add(name, {name.text, SystemDecl{amb_tok.text, idx_tok.text, h_name, std::move(system), std::move(cone)}});
        }

        // coproducts on C { (pair A B => S with inj1 f inj2 g ;)* }
        void parse_coproducts(const Token & kw0)
        {
            expect_keyword("on");
            const Token base_tok = expect_ident("category");
            const auto c = category_ref(base_tok);
            expect("{");
            std::vector<CoproductDesignation::Declared> pairs;
            while (auto kw = clause("'pair'")) {
                if (kw->text != "pair")
                    bad_clause(*kw, "'pair'");
                Token a = expect_ident("object");
                Token b = expect_ident("object");
                expect("=>");
                Token s = expect_ident("object");
                expect_keyword("with");
                expect_keyword("inj1");
                Token i1 = expect_ident("arrow");
                expect_keyword("inj2");
                Token i2 = expect_ident("arrow");
                pairs.push_back({object_ref(c, a), object_ref(c, b),
                                 CoproductEntry{object_ref(c, s), arrow_ref(c, i1), arrow_ref(c, i2)}});
                end_clause();
            }
            const Token label{Token::Ident, "coproducts on " + base_tok.text, kw0.line, kw0.col};
            auto d = in_context(label, [&] { return CoproductDesignation::validate(c, pairs); });
            add(label, {"", CoproductsDecl{base_tok.text, std::move(d)}});
        }
    };

    // -----------------------------------------------------------------------
    // Serializer

    const std::string & ident(const std::string & s)
    {
        if (!is_identifier(s))
            throw Error(ErrorKind::BadRef, "cannot serialize '" + s + "': not an identifier");
        return s;
    }

    void write_category(std::ostream & os, const std::string & name, const FiniteCategory & c)
    {
        os << "category " << ident(name) << " {\n  objects";
        for (std::uint32_t i = 0; i < c.object_count(); ++i)
            os << ' ' << ident(c.object_name(ObjRef{i}));
        os << " ;\n";
        for (std::uint32_t i = static_cast<std::uint32_t>(c.object_count()); i < c.morphism_count(); ++i) {
            const auto & m = c.morphism(MorRef{i});
            os << "  arrows " << ident(m.name) << ": " << c.object_name(m.dom) << " -> " << c.object_name(m.cod)
               << " ;\n";
        }
        for (std::uint32_t g = static_cast<std::uint32_t>(c.object_count()); g < c.morphism_count(); ++g)
            for (MorRef f : c.into(c.dom(MorRef{g})))
                if (!c.is_identity(f))
                    os << "  compose " << c.morphism_name(MorRef{g}) << ' ' << c.morphism_name(f) << " = "
                       << c.morphism_name(c.comp(MorRef{g}, f)) << " ;\n";
        os << "}\n";
    }

    void write_poset(std::ostream & os, const std::string & name, const FinitePoset & p)
    {
        os << "poset " << ident(name) << " {\n  elements";
        for (const auto & e : p.names())
            os << ' ' << ident(e);
        os << " ;\n";
        for (std::size_t a = 0; a < p.size(); ++a)
            for (std::size_t b = 0; b < p.size(); ++b)
                if (a != b && p.leq(a, b))
                    os << "  leq " << p.name(a) << ' ' << p.name(b) << " ;\n";
        os << "}\n";
    }

    void write_monoid(std::ostream & os, const std::string & name, const Monoid & m)
    {
        os << "monoid " << ident(name) << " {\n  elements";
        for (const auto & e : m.elements())
            os << ' ' << ident(e);
        os << " ;\n  unit " << m.elements()[m.unit()] << " ;\n";
        for (std::size_t a = 0; a < m.size(); ++a)
            for (std::size_t b = 0; b < m.size(); ++b)
                if (a != m.unit() && b != m.unit())
                    os << "  mul " << m.elements()[a] << ' ' << m.elements()[b] << " = "
                       << m.elements()[m.mul(a, b)] << " ;\n";
        os << "}\n";
    }

    void write_functor(std::ostream & os, const std::string & name, const FunctorDecl & d)
    {
        const auto & f = d.functor;
        const auto & s = f.source();
        const auto & t = f.target();
        os << "functor " << ident(name) << " : " << ident(d.source) << " -> " << ident(d.target) << " {\n";
        for (std::uint32_t i = 0; i < s.object_count(); ++i)
            os << "  object " << s.object_name(ObjRef{i}) << " => " << t.object_name(f(ObjRef{i})) << " ;\n";
        for (std::uint32_t i = static_cast<std::uint32_t>(s.object_count()); i < s.morphism_count(); ++i)
            os << "  arrow " << s.morphism_name(MorRef{i}) << " => " << t.morphism_name(f(MorRef{i})) << " ;\n";
        os << "}\n";
    }

    void write_nattrans(std::ostream & os, const std::string & name, const NatTransDecl & d)
    {
        const auto & t = d.transformation;
        const auto & s = t.from().source();
        os << "nattrans " << ident(name) << " : " << ident(d.from) << " => " << ident(d.to) << " {\n";
        for (std::uint32_t i = 0; i < s.object_count(); ++i)
            os << "  at " << s.object_name(ObjRef{i}) << " = " << t.from().target().morphism_name(t(ObjRef{i}))
               << " ;\n";
        os << "}\n";
    }

    void write_copresheaf(std::ostream & os, const std::string & name, const CopresheafDecl & d)
    {
        const auto & h = d.presheaf;
        const auto & c = h.base();
        os << "copresheaf " << ident(name) << " on " << ident(d.base) << " {\n";
        for (std::uint32_t q = 0; q < c.object_count(); ++q) {
            os << "  at " << c.object_name(ObjRef{q}) << " = {";
            for (const auto & x : h.fiber(ObjRef{q}))
                os << ' ' << ident(x);
            os << " } ;\n";
        }
        for (std::uint32_t fi = static_cast<std::uint32_t>(c.object_count()); fi < c.morphism_count(); ++fi) {
            MorRef f{fi};
            const auto n = h.fiber_size(c.dom(f));
            if (n == 0)
                continue;
            os << "  act " << c.morphism_name(f) << " {";
            for (std::uint32_t x = 0; x < n; ++x)
                os << ' ' << h.element_name(c.dom(f), x) << " => " << h.element_name(c.cod(f), h.act(f, x)) << " ;";
            os << " }\n";
        }
        os << "}\n";
    }

    void write_system(std::ostream & os, const std::string & name, const SystemDecl & d)
    {
        const auto & s = d.system;
        const auto & c = s.ambient();
        const auto & p = s.index();
        os << "system " << ident(name) << " in " << ident(d.ambient) << " over " << ident(d.index);
        if (d.presheaf)
            os << " using copresheaf " << ident(*d.presheaf);
        os << " {\n";
        for (std::size_t a = 0; a < s.size(); ++a)
            os << "  object " << p.name(a) << " => " << c.object_name(s.object(a)) << " ;\n";
        for (std::size_t a = 0; a < s.size(); ++a)
            for (std::size_t b = 0; b < s.size(); ++b)
                if (a != b && s.leq(a, b))
                    os << "  bond " << p.name(a) << ' ' << p.name(b) << " => " << c.morphism_name(s.bond(a, b))
                       << " ;\n";
        if (d.cone)
            for (std::size_t a = 0; a < s.size(); ++a)
                os << "  cone " << p.name(a) << " => "
                   << d.cone->presheaf().element_name(s.object(a), d.cone->element(a)) << " ;\n";
        os << "}\n";
    }

    void write_coproducts(std::ostream & os, const CoproductsDecl & d)
    {
        const auto & c = d.designation.category();
        os << "coproducts on " << ident(d.base) << " {\n";
        for (const auto & p : d.designation.declared())
            os << "  pair " << c.object_name(p.left) << ' ' << c.object_name(p.right) << " => "
               << c.object_name(p.entry.object) << " with inj1 " << c.morphism_name(p.entry.inj1) << " inj2 "
               << c.morphism_name(p.entry.inj2) << " ;\n";
        os << "}\n";
    }
}

Document parse_document(std::string_view text)
{
    return Parser(text).run();
}

std::string serialize_entity(const Entity & e)
{
    std::ostringstream os;
    std::visit(
        [&](const auto & d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, CategoryDecl>)
                write_category(os, e.name, d.category);
            else if constexpr (std::is_same_v<T, PosetDecl>)
                write_poset(os, e.name, d.poset);
            else if constexpr (std::is_same_v<T, MonoidDecl>)
                write_monoid(os, e.name, d.monoid);
            else if constexpr (std::is_same_v<T, FunctorDecl>)
                write_functor(os, e.name, d);
            else if constexpr (std::is_same_v<T, NatTransDecl>)
                write_nattrans(os, e.name, d);
            else if constexpr (std::is_same_v<T, CopresheafDecl>)
                write_copresheaf(os, e.name, d);
            else if constexpr (std::is_same_v<T, SystemDecl>)
                write_system(os, e.name, d);
            else
                write_coproducts(os, d);
        },
        e.decl);
    return os.str();
}

std::string serialize_document(const Document & doc)
{
    std::string out;
    for (const auto & e : doc.entities())
        out += serialize_entity(e);
    return out;
}

} // namespace movcat
