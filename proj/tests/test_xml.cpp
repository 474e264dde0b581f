#include <doctest.h>

#include <cstring>
#include <random>

#include "phytoken/errors.hpp"
#include "phytoken/generator.hpp"
#include "phytoken/xml.hpp"
#include "support.hpp"

using namespace phytoken;

namespace {

std::string minimal_text() { return test::slurp(test::data_dir() / "minimal.xml"); }

// Replaces the first occurrence of `from` in the minimal document.
std::string minimal_with(const std::string& from, const std::string& to) {
  std::string s = minimal_text();
  const auto at = s.find(from);
  REQUIRE(at != std::string::npos);
  return s.replace(at, from.size(), to);
}

template <typename E>
std::string error_of(const std::string& text) {
  try {
    parse_xml(text);
  } catch (const E& e) {
    return e.what();
  }
  FAIL("expected an exception");
  return {};
}

}  // namespace

TEST_CASE("minimal document parses to the expected tree") {
  const PlantDoc doc = parse_xml(minimal_text());
  CHECK(doc.plant_age == 0);
  const Shoot& s = doc.root_shoot;
  CHECK(s.type == ShootType::unifoliate);
  REQUIRE(s.phytomers.size() == 1);
  CHECK(s.phytomers[0].internode.length == 0.1);
  REQUIRE(s.phytomers[0].petioles.size() == 1);
  CHECK(s.phytomers[0].petioles[0].pitch == 90.0);
  REQUIRE(s.phytomers[0].petioles[0].leaves.size() == 1);
  CHECK(s.phytomers[0].petioles[0].leaves[0].scale == 0.1);
}

TEST_CASE("canonical fixtures serialize back byte for byte") {
  for (const char* name : {"minimal.xml", "branched.xml"}) {
    const std::string text = test::slurp(test::data_dir() / name);
    CHECK(serialize_xml(parse_xml(text)) == text);
  }
}

TEST_CASE("three-shoot fixture topology") {
  const PlantDoc doc = parse_xml(test::slurp(test::data_dir() / "branched.xml"));
  const OrganCounts c = count_organs(doc);
  CHECK(c.total_shoots() == 3);
  CHECK(c.total_phytomers() == 7);
  CHECK(c.total_petioles() == 8);
  CHECK(c.total_leaves() == 20);
  CHECK(c.shoots == std::array<std::int64_t, 4>{1, 1, 1, 0});
}

TEST_CASE("generated documents round trip exactly") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const PlantDoc doc = generate_plant(seed, static_cast<int>(seed % 40));
    const std::string text = serialize_xml(doc);
    const PlantDoc back = parse_xml(text);
    REQUIRE(back == doc);
    CHECK(serialize_xml(back) == text);
  }
}

TEST_CASE("format_decimal is shortest round trip and reads as a float") {
  CHECK(format_decimal(0.0) == "0.0");
  CHECK(format_decimal(-0.0) == "-0.0");
  CHECK(format_decimal(1.0) == "1.0");
  CHECK(format_decimal(-125.0) == "-125.0");
  CHECK(format_decimal(0.0004) == "0.0004");
  CHECK(format_decimal(0.1) == "0.1");
  CHECK(format_decimal(1e-7) == "1e-07");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-400.0, 400.0);
  for (int i = 0; i < 10000; ++i) {
    const double v = i % 2 ? d(rng) : d(rng) * 1e-5;
    CHECK(std::strtod(format_decimal(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("malformed XML reports line and column") {
  try {
    parse_xml("<plant age=\"0\" base_x=\"0\" base_y=\"0\" base_z=\"0\">\n  <shoot>\n</plant>\n");
    FAIL("expected XmlParseError");
  } catch (const XmlParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).rfind("xml:3:", 0) == 0);
  }
  CHECK_THROWS_AS(parse_xml(""), XmlParseError);
}

TEST_CASE("schema violations name the offending element") {
  CHECK(error_of<ValidationError>(minimal_with("<plant age=\"0\"", "<plant age=\"40\"")).find("age") !=
        std::string::npos);
  CHECK(error_of<ValidationError>(minimal_with("pos=\"3\"", "pos=\"7\"")).find("leaf") != std::string::npos);
  CHECK(error_of<ValidationError>(minimal_with("length=\"0.1\"", "length=\"-0.1\"")).find("internode") !=
        std::string::npos);
  CHECK(error_of<ValidationError>(minimal_with("type=\"1\"", "type=\"2\"")).find("shoot") != std::string::npos);
  CHECK(error_of<ValidationError>(minimal_with("order=\"0\"", "order=\"1\"")).find("shoot") != std::string::npos);
  CHECK_THROWS_AS(parse_xml(minimal_with("scale=\"0.1\"", "scale=\"0.1\" colour=\"green\"")), ValidationError);
  CHECK_THROWS_AS(parse_xml(minimal_with("yaw=\"0.0\" roll=\"0.0\"/>", "yaw=\"0.0\"/>")), ValidationError);
  CHECK_THROWS_AS(parse_xml(minimal_with("pitch=\"0.0\" phyllotactic", "pitch=\"abc\" phyllotactic")),
                  ValidationError);
  CHECK_THROWS_AS(parse_xml(minimal_with("<phytomer>", "<phytomer>stray text")), ValidationError);
}

TEST_CASE("structural invariants") {
  // A petiole with two leaves.
  const std::string leaf = "<leaf pos=\"3\" scale=\"0.1\" pitch=\"0.0\" yaw=\"0.0\" roll=\"0.0\"/>";
  CHECK_THROWS_AS(parse_xml(minimal_with(leaf, leaf + leaf)), ValidationError);
  // A phytomer without a petiole.
  const std::string text = minimal_text();
  const auto from = text.find("      <petiole");
  const auto to = text.find("</petiole>") + std::strlen("</petiole>\n");
  std::string stripped = text;
  stripped.erase(from, to - from);
  CHECK_THROWS_AS(parse_xml(stripped), ValidationError);
  // No internode.
  CHECK_THROWS_AS(parse_xml(minimal_with("<internode length=\"0.1\" radius=\"0.002\" pitch=\"0.0\" phyllotactic=\"0.0\"/>",
                                         "")),
                  ValidationError);
}

TEST_CASE("validate rejects documents built in code") {
  PlantDoc doc = test::single_phytomer(0.1, 90.0, 0.0);
  CHECK_NOTHROW(validate(doc));
  doc.root_shoot.phytomers[0].petioles[0].radius = 0.0;
  CHECK_THROWS_AS(validate(doc), ValidationError);

  PlantDoc deep = test::single_phytomer(0.1, 90.0, 0.0);
  Shoot* parent = &deep.root_shoot;
  for (int order = 1; order <= 4; ++order) {
    Shoot child = test::single_phytomer(0.1, 90.0, 0.0).root_shoot;
    child.id = order;
    child.order = order;
    parent->phytomers[0].child_shoots.push_back(child);
    parent = &parent->phytomers[0].child_shoots[0];
  }
  try {
    validate(deep);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("order") != std::string::npos);
  }
}
