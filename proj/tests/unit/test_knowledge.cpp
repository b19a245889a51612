#include "imog/dsl.hpp"
#include "imog/errors.hpp"
#include "imog/knowledge.hpp"

#include "../support/fixtures.hpp"
#include "../support/generators.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace imog;

namespace {

const Clock fixed_clock{std::chrono::system_clock::time_point(std::chrono::seconds(1767225600))};  // 2026-01-01

std::vector<KnowledgeEntry> scan(const std::vector<KnowledgeEntry>& all, const KnowledgeQuery& q)
{
    std::vector<KnowledgeEntry> out;
    for (const auto& e : all) {
        bool keep = true;
        if (q.type)
            keep = keep && e.type == *q.type;
        if (q.max_year)
            keep = keep && e.year_available <= *q.max_year;
        if (q.property_key)
            keep = keep && find_property(e.properties, *q.property_key) != nullptr;
        if (keep)
            out.push_back(e);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id.str() < b.id.str(); });
    return out;
}

} // namespace

TEST_SUITE("knowledge") {

TEST_CASE("clock")
{
    CHECK(fixed_clock.timestamp() == "2026-01-01T00:00:00Z");
    CHECK(fixed_clock.year() == 2026);
    ::setenv("SOURCE_DATE_EPOCH", "0", 1);
    CHECK(Clock::from_environment().timestamp() == "1970-01-01T00:00:00Z");
    ::unsetenv("SOURCE_DATE_EPOCH");
}

TEST_CASE("entry line format")
{
    KnowledgeEntry e{ElementId("K_x"), "Cell \"21700\"", "technology", 2025,
                     {{"energy_density", Number{180, "Wh/kg"}}, {"note", std::string("a b")}, {"safe", true}},
                     {"E-Scooter", "2026-01-01T00:00:00Z"}};
    const std::string line = format_entry(e);
    CHECK(line ==
          R"(entry K_x name="Cell \"21700\"" type=technology year=2025 prop.energy_density=180Wh/kg prop.note="a b" prop.safe=true provenance="E-Scooter@2026-01-01T00:00:00Z")");
    CHECK(parse_entry(line) == e);
    e.provenance.model = "a@b";
    CHECK(parse_entry(format_entry(e)).provenance.model == "a@b");
}

TEST_CASE("corrupt lines")
{
    const char* bad[] = {
        "entri K name=\"n\" type=t year=2000 provenance=\"m@t\"",
        "entry 1K name=\"n\" type=t year=2000 provenance=\"m@t\"",
        "entry K name=\"n\" type=t year=1899 provenance=\"m@t\"",
        "entry K name=\"n\" type=t year=20x0 provenance=\"m@t\"",
        "entry K name=\"n\" type=t provenance=\"m@t\"",
        "entry K name=\"n\" year=2000 provenance=\"m@t\"",
        "entry K type=t year=2000 provenance=\"m@t\"",
        "entry K name=\"n\" type=t year=2000",
        "entry K name=\"n\" type=t year=2000 provenance=\"no at sign\"",
        "entry K name=\"n type=t year=2000 provenance=\"m@t\"",
        "entry K name=\"n\" type=t year=2000 colour=red provenance=\"m@t\"",
        "entry K name=\"n\" type=t year=2000 prop.a=1 prop.a=2 provenance=\"m@t\"",
    };
    for (const char* line : bad) {
        INFO(line);
        CHECK_THROWS_AS(parse_entry(line, "s", 3), StoreCorrupt);
    }
    try {
        parse_entry(bad[2], "kb.imogkb", 7);
    } catch (const StoreCorrupt& e) {
        CHECK(e.line() == 7);
        CHECK(std::string(e.what()).rfind("kb.imogkb:7:", 0) == 0);
    }
}

TEST_CASE("store text")
{
    const auto entries = parse_store(fx::read("fixtures/kb/sensors.imogkb"));
    REQUIRE(entries.size() == 4);
    CHECK(entries[0].id == ElementId("K_cell_sodium"));
    CHECK(format_store(entries) == format_store(parse_store(format_store(entries))));
    CHECK_THROWS_AS(parse_store("entry K name=\"a\" type=t year=2000 provenance=\"m@t\"\n"
                                "entry K name=\"b\" type=t year=2001 provenance=\"m@t\"\n"),
                    StoreCorrupt);
    CHECK_THROWS_AS(load(fx::path("fixtures/kb/corrupt.imogkb")), StoreCorrupt);
    CHECK(load(fx::path("fixtures/kb/missing.imogkb")).empty());
}

TEST_CASE("save and load a generated store")
{
    fx::TempDir tmp;
    const std::string path = tmp.file("kb.imogkb");
    gen::Rng rng(11);
    auto entries = gen::entries(rng, 100);
    CHECK(save(path, entries) == 100);
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    CHECK(load(path) == entries);
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));

    // merge by id, later wins
    auto changed = entries[3];
    changed.name = "changed";
    KnowledgeEntry extra = entries[0];
    extra.id = ElementId("Z_new");
    CHECK(save(path, {changed, extra}) == 101);
    const auto again = load(path);
    CHECK(again[3].name == "changed");
    CHECK(again.back().id == ElementId("Z_new"));
}

TEST_CASE("query matches a linear scan")
{
    gen::Rng rng(12);
    const auto entries = gen::entries(rng, 100);
    for (int i = 0; i < 200; ++i) {
        KnowledgeQuery q;
        if (gen::coin(rng))
            q.type = gen::choose(rng, std::vector<std::string>{"sensor", "regulation", "technology", "component", "x"});
        if (gen::coin(rng))
            q.max_year = gen::pick(rng, 1890, 2070);
        if (gen::coin(rng, 0.2))
            q.property_key = "weight";
        CHECK(query(entries, q) == scan(entries, q));
    }
}

TEST_CASE("extract")
{
    const Model m = fx::model("fixtures/escooter.imog");
    const auto r = extract(m, {ElementId("B_battery"), ElementId("V_battery_lfp"), ElementId("B_frame"),
                               ElementId("R_cell_temp")},
                           fixed_clock);
    std::string text;
    for (const auto& e : r.entries)
        text += format_entry(e) + "\n";
    CHECK(text == fx::read("expected/escooter_extract.txt"));
    CHECK(r.diagnostics.size() == 3);
    CHECK(count_code(r.diagnostics, "W-401") == 3);
    CHECK(r.entries[0].type == "energy_storage");
    CHECK(r.entries[0].year_available == 2027);
    CHECK_THROWS_AS(extract(m, {ElementId("G_mobility")}, fixed_clock), KindNotExtractable);
    CHECK_THROWS_AS(extract(m, {ElementId("F_root")}, fixed_clock), KindNotExtractable);
    CHECK_THROWS_AS(extract(m, {ElementId("nope")}, fixed_clock), UnknownElement);
    // every extracted entry survives the store
    for (const auto& e : r.entries)
        CHECK(parse_entry(format_entry(e)) == e);
}

TEST_CASE("inline entries and target year")
{
    const Model m = fx::model("fixtures/escooter.imog");
    const auto inl = inline_entries(m);
    REQUIRE(inl.size() == 4);
    CHECK(inl[0].id == ElementId("K_cell_lfp"));
    CHECK(inl[0].type == "technology");
    CHECK(inl[0].year_available == 2025);
    CHECK(target_year(m) == 2030);
    CHECK_FALSE(target_year(Model("x")).has_value());
}

TEST_CASE("kbref checks")
{
    const Model m = fx::model("fixtures/escooter.imog");
    CHECK(check_kbrefs(m, {}).empty());

    const Model late = fx::parse_ok(R"(model "m" {
  strategy { goal G "G" { target_year: 2025 } }
  structural {
    block B "B" level system { kbref K_sensor_lidar kbref K_sensor_imu kbref K_missing }
  }
})");
    const auto store = load(fx::path("fixtures/kb/sensors.imogkb"));
    const auto d = check_kbrefs(late, store);
    CHECK(count_code(d, "R-401") == 1);
    CHECK(count_code(d, "I-401") == 1);
    for (const auto& x : d)
        if (x.code == "I-401")
            CHECK(x.elements.back() == ElementId("K_sensor_lidar"));
}

}
