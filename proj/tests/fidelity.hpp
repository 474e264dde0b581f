#pragma once

// Kolmogorov-Smirnov check of sampled parameters against the configured
// distributions, shared by the unit tests and the acceptance binary.

#include <string>
#include <vector>

#include "oracles.hpp"
#include "phytoken/generator.hpp"
#include "phytoken/parameters.hpp"

namespace fidelity {

struct KsRow {
  std::string name;
  phytoken::ShootType context;
  phytoken::Distribution dist;
  std::size_t samples = 0;
  double statistic = 0.0;
};

inline double cdf(const phytoken::Distribution& d, double x) {
  return d.kind == phytoken::Distribution::Kind::uniform ? oracle::uniform_cdf(x, d.a, d.b)
                                                         : oracle::normal_cdf(x, d.a, d.b);
}

// One row per non-constant distribution slot that the generator draws from.
// Plants use seeds [first, first + count) at their sampled ages; plant_age
// uses the continuous draw.
inline std::vector<KsRow> ks_table(std::uint64_t first, std::uint64_t count,
                                   const phytoken::GeneratorConfig& cfg = phytoken::default_generator_config()) {
  using namespace phytoken;
  std::vector<PlantDoc> plants;
  for (std::uint64_t s = first; s < first + count; ++s) plants.push_back(generate_plant(s, sample_plant_age(s, cfg), cfg));

  std::vector<KsRow> rows;
  for (const auto& [name, row] : cfg.parameters) {
    const std::pair<ShootType, ContextFilter> slots[] = {{ShootType::unifoliate, ContextFilter::unifoliate},
                                                         {ShootType::trifoliate, ContextFilter::trifoliate}};
    for (const auto& [context, filter] : slots) {
      const Distribution& d = cfg.distribution(name, context);
      if (d.kind == Distribution::Kind::constant) continue;
      if (name == "plant_age" && context == ShootType::trifoliate) continue;
      std::vector<double> values;
      if (name == "plant_age") {
        for (std::uint64_t s = first; s < first + count; ++s) values.push_back(plant_age_draw(s, cfg));
      } else {
        for (const PlantDoc& doc : plants) collect_parameter(doc, name, filter, values);
      }
      // Rows shared by both arrangements are checked once over all shoots.
      if (row.unifoliate == row.trifoliate) {
        if (context == ShootType::trifoliate) continue;
        if (name != "plant_age") {
          values.clear();
          for (const PlantDoc& doc : plants) collect_parameter(doc, name, ContextFilter::all, values);
        }
      }
      if (values.empty()) continue;
      rows.push_back({name, context, d, values.size(), oracle::ks_statistic(values, [&](double x) { return cdf(d, x); })});
    }
  }
  return rows;
}

}  // namespace fidelity
