#include "doctest.h"
#include "movcat/generate.hpp"
#include "support/fixtures.hpp"

using namespace movcat;

TEST_SUITE("dsl")
{
    TEST_CASE("V-poset entity")
    {
        const auto doc = parse_document("poset V { elements a b c ; leq a c ; leq b c }");
        const auto & v = doc.poset("V");
        CHECK(v == fixture::v_poset());
    }

    TEST_CASE("category with implicit identities")
    {
        const auto doc = parse_document("category K { objects A B ; arrows f: A -> B ; }");
        const auto k = doc.category("K");
        CHECK(k.object_count() == 2);
        CHECK(k.morphism_count() == 3);
    }

    TEST_CASE("antisymmetry violation")
    {
        CHECK_THROWS_AS(parse_document("poset P { elements a b c ; leq a b ; leq b c ; leq a c ; leq c a }"),
                        ValidationError);
    }

    TEST_CASE("syntax errors carry positions")
    {
        try {
            parse_document("poset P {\n  elements a b ;\n  leq a -> b ; }");
            FAIL("accepted");
        } catch (const SyntaxError & e) {
            CHECK(e.line() == 3);
            CHECK(e.column() >= 1);
        }
        try {
            parse_document("poset P { elements a ; } $");
            FAIL("accepted");
        } catch (const SyntaxError & e) {
            CHECK(e.line() == 1);
            CHECK(e.column() == 26);
        }
        CHECK_THROWS_AS(parse_document("category K { objects A ; arrows f: A -> }"), SyntaxError);
    }

    TEST_CASE("unresolved references")
    {
        try {
            parse_document("functor F : A -> B { }");
            FAIL("accepted");
        } catch (const ReferenceError & e) {
            CHECK(e.kind() == ErrorKind::UnresolvedReference);
            CHECK(e.line() == 1);
        }
        try {
            parse_document("poset P { elements a ; leq a z }");
            FAIL("accepted");
        } catch (const ReferenceError & e) {
            CHECK(e.column() == 30);
        }
    }

    TEST_CASE("duplicate names")
    {
        try {
            parse_document("poset P { elements a }\nposet P { elements b }");
            FAIL("accepted");
        } catch (const Error & e) {
            CHECK(e.kind() == ErrorKind::DuplicateName);
        }
    }

    TEST_CASE("monoid, functor and natural transformation")
    {
        const auto doc = parse_document(R"(
monoid Z2 { elements e a ; unit e ; mul a a = e ; }
poset C2 { elements x y ; leq x y }
functor F : C2 -> C2 { object x => x ; object y => x ; arrow x_y => id_x ; }
functor Id : C2 -> C2 { object x => x ; object y => y ; arrow x_y => x_y ; }
nattrans phi : F => Id { at x = id_x ; at y = x_y ; }
)");
        CHECK(doc.category("Z2").morphism_count() == 2);
        CHECK(doc.nat_trans("phi").components().size() == 2);
    }

    TEST_CASE("incomplete monoid table")
    {
        CHECK_THROWS_AS(parse_document("monoid M { elements e a b ; unit e ; mul a a = b ; }"), Error);
    }

    TEST_CASE("cone without a copresheaf header is a syntax error")
    {
        CHECK_THROWS_AS(parse_document(R"(
poset P { elements x }
poset I { elements i }
system S in P over I { object i => x ; cone i => e ; }
)"),
                        SyntaxError);
    }

    TEST_CASE("comments and optional semicolons")
    {
        const auto doc = parse_document("# leading\nposet P { elements a b ; # trailing\n leq a b ; }\n");
        CHECK(doc.poset("P").leq(0, 1));
    }

    TEST_CASE("canonical serialization of the V-poset")
    {
        const auto doc = parse_document("poset V { elements a b c ; leq b c ; leq a c }");
        CHECK(serialize_document(doc) == "poset V {\n  elements a b c ;\n  leq a c ;\n  leq b c ;\n}\n");
    }

    TEST_CASE("coproduct designation")
    {
        const auto doc = parse_document(R"(
poset D { elements bot a b top ; leq bot a ; leq bot b ; leq a top ; leq b top }
coproducts on D { pair a b => top with inj1 a_top inj2 b_top ; }
)");
        REQUIRE(doc.coproducts_on("D") != nullptr);
        CHECK(doc.coproducts_on("D")->find(ObjRef{2}, ObjRef{1}).has_value());
        CHECK(parse_document(serialize_document(doc)) == doc);

        // bot is not a coproduct of a and b
        CHECK_THROWS_AS(parse_document(R"(
poset D { elements bot a b top ; leq bot a ; leq bot b ; leq a top ; leq b top }
coproducts on D { pair a b => bot with inj1 a_top inj2 b_top ; }
)"),
                        Error);
    }

    TEST_CASE("round trip over generated documents")
    {
        const InstanceKind kinds[] = {InstanceKind::poset,      InstanceKind::monoid, InstanceKind::category,
                                      InstanceKind::copresheaf, InstanceKind::system, InstanceKind::domination_pair};
        for (std::uint64_t seed = 0; seed < 1200; ++seed) {
            const auto doc = generate_instance(kinds[seed % 6], seed);
            const auto text = serialize_document(doc);
            const auto back = parse_document(text);
            REQUIRE(back == doc);
            CHECK(serialize_document(back) == text);
        }
    }

    TEST_CASE("parser never accepts what validators reject")
    {
        // one-character mutations of a valid document either fail to parse or
        // parse into something that re-serializes and re-parses
        const std::string base = serialize_document(generate_instance(InstanceKind::system, 5));
        Rng rng(51);
        const std::string alphabet = "abxy_;{}=>-:# 01\n";
        for (int i = 0; i < 400; ++i) {
            auto text = base;
            text[rng.below(text.size())] = alphabet[rng.below(alphabet.size())];
            try {
                const auto doc = parse_document(text);
                CHECK(parse_document(serialize_document(doc)) == doc);
            } catch (const SyntaxError & e) {
                CHECK(e.line() >= 1);
            } catch (const ReferenceError & e) {
                CHECK(e.line() >= 1);
            } catch (const Error &) {
            }
        }
    }
}
