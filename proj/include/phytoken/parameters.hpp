#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phytoken/plant.hpp"

namespace phytoken {

// Restricts collected values to organs on shoots of one leaf arrangement.
enum class ContextFilter { all, unifoliate, trifoliate };

// The architectural parameter vocabulary, in canonical order: base_rotation_*,
// plant_age, shoot_type_label, shoot_base_*, internode_*, petiole_*,
// leaflet_scale, leaf_*.
std::span<const std::string> parameter_names();
bool is_parameter_name(std::string_view name);

// Appends every value of `name` in `doc`, shoot by shoot in preorder. base_rotation_*
// read the root shoot, shoot_base_* every other shoot. Throws DomainError for
// an unknown name.
void collect_parameter(const PlantDoc& doc, std::string_view name, ContextFilter filter,
                       std::vector<double>& out);

}  // namespace phytoken
