#include "imog/dsl.hpp"
#include "imog/validate.hpp"

#include "../support/fixtures.hpp"
#include "../support/generators.hpp"
#include "../support/oracles.hpp"

#include <doctest.h>

#include <filesystem>

using namespace imog;

namespace {

std::vector<Diagnostic> check_all(const Model& m)
{
    auto d = resolve(m);
    auto v = validate(m);
    d.insert(d.end(), v.begin(), v.end());
    return d;
}

std::vector<Diagnostic> of_code(const std::vector<Diagnostic>& d, const std::string& code)
{
    std::vector<Diagnostic> out;
    for (const auto& x : d)
        if (x.code == code)
            out.push_back(x);
    return out;
}

Model src(const std::string& body) { return fx::parse_ok("model \"m\" {\n" + body + "\n}"); }

} // namespace

TEST_SUITE("validate") {

TEST_CASE("the shipped fixture is free of errors")
{
    const Model m = fx::model("fixtures/escooter.imog");
    const auto d = check_all(m);
    CHECK(count_errors(d) == 0);
    CHECK(count_code(d, "W-202") == 2);
    CHECK(count_code(d, "W-203") == 2);
    CHECK(count_code(d, "W-204") == 1);
    CHECK(count_code(d, "I-201") == 0);
}

TEST_CASE("R-101 unresolved targets")
{
    const auto d = check_all(src("functional { feature F \"F\" { mandatory G } }"));
    REQUIRE(of_code(d, "R-101").size() == 1);
    CHECK(of_code(d, "R-101")[0].elements == std::vector<ElementId>{ElementId("G")});
    // dangling knowledge references are left to the store check
    CHECK(count_code(resolve(src("structural { block B \"B\" level system { kbref K_x } }")), "R-101") == 0);
}

TEST_CASE("R-102 edge rows")
{
    int illegal = 0;
    for (const auto& entry : std::filesystem::directory_iterator(fx::path("fixtures/edges"))) {
        const std::string name = entry.path().filename().string();
        const Model m = fx::model("fixtures/edges/" + name);
        const auto d = resolve(m);
        INFO(name);
        if (name.rfind("illegal_", 0) == 0) {
            ++illegal;
            CHECK(count_code(d, "R-102") == 1);
            CHECK(d.size() == 1);
        } else {
            CHECK(d.empty());
        }
    }
    CHECK(illegal == 9);
}

TEST_CASE("kind tables")
{
    CHECK(allowed_source(RelationKind::Allocate, ElementKind::Function));
    CHECK_FALSE(allowed_source(RelationKind::Allocate, ElementKind::Block));
    CHECK(allowed_target(RelationKind::KbRef, ElementKind::KnowledgeEntry));
    CHECK(allowed_source(RelationKind::KbRef, ElementKind::Variant));
    CHECK(allowed_target(RelationKind::Constrains, ElementKind::Block));
    CHECK_FALSE(allowed_target(RelationKind::Constrains, ElementKind::Goal));
    CHECK(allowed_source(RelationKind::References, ElementKind::Goal));
}

TEST_CASE("R-201 several parents and cycles")
{
    const auto two = validate(src("functional { feature A \"A\" { mandatory C } feature B \"B\" { optional C } feature C \"C\" }"));
    CHECK(count_code(two, "R-201") == 1);
    const auto cyc = validate(src("functional { feature R \"R\" feature A \"A\" { mandatory B } feature B \"B\" { mandatory A } }"));
    const auto r201 = of_code(cyc, "R-201");
    REQUIRE(r201.size() == 1);
    CHECK(r201[0].elements == std::vector<ElementId>{ElementId("A"), ElementId("B")});
}

TEST_CASE("R-202 several roots, not in views")
{
    const Model m = src("functional { feature A \"A\" feature B \"B\" }");
    CHECK(count_code(validate(m), "R-202") == 1);
    CHECK(count_code(validate(m, {true}), "R-202") == 0);
}

TEST_CASE("R-203 level order of containment")
{
    const auto d = validate(src("structural { block S \"S\" level component block C \"C\" level context contains S { C } }"));
    CHECK(count_code(d, "R-203") == 1);
    CHECK(count_code(validate(src("structural { block S \"S\" level system block C \"C\" level system contains S { C } }")),
                     "R-203") == 0);
}

TEST_CASE("W-201 variation point inside an or-group")
{
    const auto d = validate(src(
        "functional { feature F \"F\" { orgroup [1..2] { V G } alternative V \"V\" { A B } } feature G \"G\" feature A \"A\" feature B \"B\" }"));
    CHECK(count_code(d, "W-201") == 1);
    CHECK(count_code(d, "R-201") == 0);
}

TEST_CASE("coverage warnings")
{
    const Model m = src(R"(strategy { goal G "G" }
functional { feature F "F" }
quality { requirement R "R" on F }
structural { block B "B" level system })");
    const auto d = validate(m);
    CHECK(count_code(d, "W-202") == 1);
    CHECK(count_code(d, "W-203") == 1);
    CHECK(count_code(d, "W-204") == 1);
    CHECK(count_code(d, "W-205") == 1);
    CHECK(count_code(d, "I-201") == 1);
    const auto view = validate(m, {true});
    CHECK(count_code(view, "W-202") == 0);
    CHECK(count_code(view, "W-203") == 0);
}

TEST_CASE("empty model has five empty perspectives")
{
    CHECK(count_code(validate(Model("x")), "I-201") == 5);
}

TEST_CASE("rule table oracle on generated models")
{
    gen::Rng rng(2024);
    for (int i = 0; i < 300; ++i) {
        const Model m = gen::rule_model(rng);
        REQUIRE(resolve(m).empty());
        const bool partial = i % 3 == 0;
        const auto got = oracle::findings(validate(m, {partial}));
        const auto want = oracle::RuleTable(m).expected(partial);
        INFO(print(m));
        INFO("got\n" << oracle::describe(got) << "want\n" << oracle::describe(want));
        CHECK(got == want);
    }
}

}
