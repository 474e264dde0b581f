#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "phytoken/parameters.hpp"
#include "phytoken/plant.hpp"
#include "phytoken/rng.hpp"

namespace phytoken {

struct Distribution {
  enum class Kind { constant, uniform, normal };

  Kind kind = Kind::constant;
  double a = 0.0;  // constant value, uniform lower bound, or normal mean
  double b = 0.0;  // uniform upper bound or normal standard deviation

  static Distribution constant(double c) { return {Kind::constant, c, 0.0}; }
  static Distribution uniform(double lo, double hi) { return {Kind::uniform, lo, hi}; }
  static Distribution normal(double mean, double sigma) { return {Kind::normal, mean, sigma}; }

  double sample(KeyedStream& stream) const;

  // [a, b] for uniform, mean +/- 3 sigma for normal, [c, c] for constant.
  std::pair<double, double> support() const;

  // "Constant(0.9)", "Uniform(145, 215)", "Normal(45, 20)".
  std::string to_string() const;

  bool operator==(const Distribution&) const = default;
};

// Parses the to_string() form. Throws DomainError.
Distribution parse_distribution(std::string_view text);

// One row of the parameter table. Rows without a leaf-arrangement split carry
// the same distribution in both slots.
struct ParameterRow {
  std::optional<Distribution> unifoliate;
  std::optional<Distribution> trifoliate;
  std::string units;

  bool operator==(const ParameterRow&) const = default;
};

struct GrowthControls {
  double phytomer_emergence_interval_days = 2.5;
  double lateral_bud_break_probability = 0.25;
  double lateral_bud_break_age_days = 5.0;
  int max_order = kMaxBranchingOrder;
  int max_phytomers_per_shoot = 15;
  // Internodes elongate logistically from their initial size to these targets.
  double internode_target_length = 0.04;
  double internode_target_radius = 0.004;
  double elongation_rate_per_day = 0.8;
  double elongation_midpoint_days = 5.0;

  bool operator==(const GrowthControls&) const = default;
};

struct GeneratorConfig {
  std::string rng = "splitmix64";
  std::map<std::string, ParameterRow, std::less<>> parameters;
  GrowthControls growth;

  // Throws DomainError when the row or the context slot is missing.
  const Distribution& distribution(std::string_view name, ShootType context) const;

  // Throws DomainError on inverted bounds, negative sigma, non-positive
  // interval, probabilities outside [0, 1], or a missing required row.
  void validate() const;

  bool operator==(const GeneratorConfig&) const = default;
};

// Cowpea defaults. Unifoliate petioles are straight and unscaled:
// curvature Constant(0), leaflet_scale Constant(1).
GeneratorConfig default_generator_config();

// INI text: [generator] rng, [growth] controls, [parameters] rows of the form
//   name = Distribution(args) units
//   name.unifoliate = ...    name.trifoliate = ...
// Support of a parameter row for the selected contexts: the union of the
// slots' support() intervals. Throws DomainError for an unknown row.
std::pair<double, double> parameter_support(const GeneratorConfig& cfg, std::string_view name,
                                            ContextFilter filter);

GeneratorConfig load_generator_config(const std::filesystem::path& path);
GeneratorConfig parse_generator_config(std::string_view text);
std::string format_generator_config(const GeneratorConfig& cfg);

}  // namespace phytoken
