#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "phytoken/errors.hpp"
#include "phytoken/grid.hpp"

using namespace phytoken;

TEST_CASE("grid has 199 strictly increasing values matching the literal recipe") {
  const auto& g = default_grid();
  const auto expected = oracle::grid_values();
  REQUIRE(g.size() == 199);
  REQUIRE(expected.size() == 199);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(g.values()[i] == expected[i]);
    if (i > 0) CHECK(g.values()[i - 1] < g.values()[i]);
  }
}

TEST_CASE("anchor ids") {
  CHECK(encode_value(-40.0) == 24);
  CHECK(encode_value(360.0) == 222);
  CHECK(encode_value(0.0) == 40);
  CHECK(decode_token(41) == 0.0001);
  CHECK(decode_token(77) == 1.0);
  CHECK(decode_token(78) == 2.5);
  CHECK(decode_token(79) == 3.0);
  CHECK(decode_token(80) == 5.0);
  CHECK(decode_token(86) == 20.0);
}

TEST_CASE("decode then encode is the identity on parameter ids") {
  for (TokenId id = kFirstParameterId; id <= kLastParameterId; ++id) {
    CHECK(encode_value(decode_token(id)) == id);
  }
}

TEST_CASE("nearest value with ties to the smaller and clamping") {
  CHECK(decode_token(encode_value(137.3)) == 137.5);
  CHECK(decode_token(encode_value(1.75)) == 1.0);  // midway between 1.0 and 2.5
  CHECK(decode_token(encode_value(4.0)) == 3.0);   // midway between 3.0 and 5.0
  CHECK(encode_value(-1000.0) == 24);
  CHECK(encode_value(1e9) == 222);
  CHECK(decode_token(encode_value(0.00004)) == 0.0);
  CHECK(decode_token(encode_value(0.00006)) == 0.0001);
}

TEST_CASE("encode agrees with a linear scan") {
  const auto grid = oracle::grid_values();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> wide(-60.0, 380.0);
  std::uniform_real_distribution<double> small(0.0, 1.2);
  for (int i = 0; i < 20000; ++i) {
    const double v = i % 2 ? wide(rng) : small(rng);
    REQUIRE(encode_value(v) == oracle::encode(v, grid));
  }
  for (double v : grid) CHECK(encode_value(v) == oracle::encode(v, grid));
}

TEST_CASE("quantization error stays within the half-gap bound") {
  const auto& g = default_grid();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-40.0, 360.0);
  for (int i = 0; i < 20000; ++i) {
    const double v = i % 3 ? d(rng) : d(rng) / 400.0;
    CHECK(std::abs(g.decode(g.encode(v)) - v) <= g.quantization_bound(v));
  }
  CHECK(g.quantization_bound(360.0) == 0.0);
  CHECK(g.quantization_bound(100.0) == 1.25);
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(encode_value(std::nan("")), DomainError);
  CHECK_THROWS_AS(encode_value(INFINITY), DomainError);
  CHECK_THROWS_AS(decode_token(23), DomainError);
  CHECK_THROWS_AS(decode_token(223), DomainError);
}

TEST_CASE("grid dump lists id and value per line") {
  const std::string dump = dump_grid(default_grid());
  std::istringstream in(dump);
  std::string line;
  int count = 0;
  int id = 0;
  double value = 0;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    fields >> id >> value;
    CHECK(id == 24 + count);
    CHECK(value == decode_token(id));
    ++count;
  }
  CHECK(count == 199);
  CHECK(dump.rfind("24 -40\n", 0) == 0);
}
