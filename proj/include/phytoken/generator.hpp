#pragma once

#include <cstdint>

#include "phytoken/generator_config.hpp"
#include "phytoken/plant.hpp"

namespace phytoken {

// Grows one cowpea plant to `age` days.
//
// Day 0 holds the unifoliate root shoot: one phytomer with two single-leaf
// petioles. The main trifoliate shoot (order 1) attaches at that phytomer and
// emerges one emergence interval later, adding a phytomer per interval. Each
// trifoliate phytomer carries one petiole with three leaflets, and its
// axillary bud breaks into a shoot one order higher with the configured
// probability once the node is old enough. Internodes elongate logistically;
// petioles and leaves appear at full size.
//
// Every draw comes from a stream keyed by (seed, organ path, parameter), so
// the plant for (seed, age) contains the plant for (seed, age - 1) with the
// same sampled values. Throws DomainError for age outside [0, 39] or an
// invalid configuration.
PlantDoc generate_plant(std::uint64_t seed, int age,
                        const GeneratorConfig& cfg = default_generator_config());

// Logistic growth fraction in [0, 1], 0 at node age 0.
double elongation_fraction(double node_age_days, const GrowthControls& growth);

// Continuous plant_age draw for this seed.
double plant_age_draw(std::uint64_t seed, const GeneratorConfig& cfg = default_generator_config());

// plant_age_draw rounded to whole days and clamped to [0, 39].
int sample_plant_age(std::uint64_t seed, const GeneratorConfig& cfg = default_generator_config());

}  // namespace phytoken
