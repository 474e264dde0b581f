#include "phytoken/parameters.hpp"

#include <algorithm>
#include <array>

#include "phytoken/errors.hpp"

namespace phytoken {

namespace {

const std::array<std::string, 21> kNames = {
    "base_rotation_pitch", "base_rotation_yaw", "base_rotation_roll",
    "plant_age",           "shoot_type_label",  "shoot_base_pitch",
    "shoot_base_yaw",      "shoot_base_roll",   "internode_length",
    "internode_radius",    "internode_pitch",   "internode_phyllotactic_angle",
    "petiole_length",      "petiole_radius",    "petiole_pitch",
    "petiole_curvature",   "leaflet_scale",     "leaf_scale",
    "leaf_pitch",          "leaf_yaw",          "leaf_roll",
};

enum class Level { plant, root, shoot, any_shoot, internode, petiole, leaf };

struct Accessor {
  Level level;
  double (*shoot)(const Shoot&) = nullptr;
  double (*internode)(const Internode&) = nullptr;
  double (*petiole)(const Petiole&) = nullptr;
  double (*leaf)(const Leaf&) = nullptr;
};

Accessor accessor(std::string_view name) {
  using L = Level;
  if (name == "plant_age") return {L::plant};
  if (name == "base_rotation_pitch") return {L::root, [](const Shoot& s) { return s.base_pitch; }};
  if (name == "base_rotation_yaw") return {L::root, [](const Shoot& s) { return s.base_yaw; }};
  if (name == "base_rotation_roll") return {L::root, [](const Shoot& s) { return s.base_roll; }};
  if (name == "shoot_type_label") {
    return {L::any_shoot, [](const Shoot& s) { return static_cast<double>(static_cast<int>(s.type)); }};
  }
  if (name == "shoot_base_pitch") return {L::shoot, [](const Shoot& s) { return s.base_pitch; }};
  if (name == "shoot_base_yaw") return {L::shoot, [](const Shoot& s) { return s.base_yaw; }};
  if (name == "shoot_base_roll") return {L::shoot, [](const Shoot& s) { return s.base_roll; }};
  if (name == "internode_length") return {L::internode, nullptr, [](const Internode& i) { return i.length; }};
  if (name == "internode_radius") return {L::internode, nullptr, [](const Internode& i) { return i.radius; }};
  if (name == "internode_pitch") return {L::internode, nullptr, [](const Internode& i) { return i.pitch; }};
  if (name == "internode_phyllotactic_angle") {
    return {L::internode, nullptr, [](const Internode& i) { return i.phyllotactic_angle; }};
  }
  if (name == "petiole_length") return {L::petiole, nullptr, nullptr, [](const Petiole& p) { return p.length; }};
  if (name == "petiole_radius") return {L::petiole, nullptr, nullptr, [](const Petiole& p) { return p.radius; }};
  if (name == "petiole_pitch") return {L::petiole, nullptr, nullptr, [](const Petiole& p) { return p.pitch; }};
  if (name == "petiole_curvature") {
    return {L::petiole, nullptr, nullptr, [](const Petiole& p) { return p.curvature; }};
  }
  if (name == "leaflet_scale") {
    return {L::petiole, nullptr, nullptr, [](const Petiole& p) { return p.leaflet_scale; }};
  }
  if (name == "leaf_scale") return {L::leaf, nullptr, nullptr, nullptr, [](const Leaf& l) { return l.scale; }};
  if (name == "leaf_pitch") return {L::leaf, nullptr, nullptr, nullptr, [](const Leaf& l) { return l.pitch; }};
  if (name == "leaf_yaw") return {L::leaf, nullptr, nullptr, nullptr, [](const Leaf& l) { return l.yaw; }};
  if (name == "leaf_roll") return {L::leaf, nullptr, nullptr, nullptr, [](const Leaf& l) { return l.roll; }};
  throw DomainError("unknown parameter '" + std::string(name) + "'");
}

bool admits(ContextFilter filter, ShootType type) {
  return filter == ContextFilter::all || (filter == ContextFilter::unifoliate && type == ShootType::unifoliate) ||
         (filter == ContextFilter::trifoliate && type == ShootType::trifoliate);
}

}  // namespace

std::span<const std::string> parameter_names() { return kNames; }

bool is_parameter_name(std::string_view name) {
  return std::find(kNames.begin(), kNames.end(), name) != kNames.end();
}

void collect_parameter(const PlantDoc& doc, std::string_view name, ContextFilter filter,
                       std::vector<double>& out) {
  const Accessor a = accessor(name);
  if (a.level == Level::plant) {
    out.push_back(static_cast<double>(doc.plant_age));
    return;
  }
  for_each_shoot(doc.root_shoot, [&](const Shoot& s) {
    if (!admits(filter, s.type)) return;
    const bool is_root = &s == &doc.root_shoot;
    switch (a.level) {
      case Level::root:
        if (is_root) out.push_back(a.shoot(s));
        return;
      case Level::shoot:
        if (!is_root) out.push_back(a.shoot(s));
        return;
      case Level::any_shoot:
        out.push_back(a.shoot(s));
        return;
      default:
        break;
    }
    for (const Phytomer& p : s.phytomers) {
      if (a.level == Level::internode) {
        out.push_back(a.internode(p.internode));
        continue;
      }
      for (const Petiole& pt : p.petioles) {
        if (a.level == Level::petiole) {
          out.push_back(a.petiole(pt));
          continue;
        }
        for (const Leaf& l : pt.leaves) out.push_back(a.leaf(l));
      }
    }
  });
}

}  // namespace phytoken
