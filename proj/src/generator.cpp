#include "phytoken/generator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "phytoken/errors.hpp"
#include "phytoken/rng.hpp"

namespace phytoken {

namespace {

// Time comparisons tolerate accumulated rounding in multiples of the interval.
constexpr double kTimeEpsilon = 1e-9;

class Grower {
 public:
  Grower(const GeneratorConfig& cfg, int age) : cfg_(cfg), growth_(cfg.growth), age_(age) {}

  double draw(std::uint64_t key, std::string_view name, ShootType context) const {
    KeyedStream stream(derive_key(key, name_tag(name)));
    return cfg_.distribution(name, context).sample(stream);
  }

  Shoot shoot(std::uint64_t key, int order, ShootType type, double emergence, int parent_node) {
    Shoot s;
    s.order = order;
    s.type = type;
    s.parent_node_index = parent_node;
    if (order == 0) {
      s.base_pitch = draw(key, "base_rotation_pitch", type);
      s.base_yaw = draw(key, "base_rotation_yaw", type);
      s.base_roll = draw(key, "base_rotation_roll", type);
    } else {
      s.base_pitch = draw(key, "shoot_base_pitch", type);
      s.base_yaw = draw(key, "shoot_base_yaw", type);
      s.base_roll = draw(key, "shoot_base_roll", type);
    }

    int count = 1;
    if (type == ShootType::trifoliate) {
      const double elapsed = (age_ - emergence) / growth_.phytomer_emergence_interval_days;
      count = static_cast<int>(std::floor(elapsed + kTimeEpsilon)) + 1;
      count = std::clamp(count, 1, growth_.max_phytomers_per_shoot);
    }
    for (int k = 0; k < count; ++k) {
      const double born = emergence + k * growth_.phytomer_emergence_interval_days;
      s.phytomers.push_back(phytomer(derive_key(key, static_cast<std::uint64_t>(k)), s, k, born));
    }
    return s;
  }

 private:
  Phytomer phytomer(std::uint64_t key, const Shoot& owner, int index, double born) {
    const ShootType type = owner.type;
    const double node_age = std::max(0.0, age_ - born);
    const double g = elongation_fraction(node_age, growth_);

    Phytomer p;
    const double length0 = draw(key, "internode_length", type);
    const double radius0 = draw(key, "internode_radius", type);
    p.internode.length = length0 + (std::max(length0, growth_.internode_target_length) - length0) * g;
    p.internode.radius = radius0 + (std::max(radius0, growth_.internode_target_radius) - radius0) * g;
    p.internode.pitch = draw(key, "internode_pitch", type);
    p.internode.phyllotactic_angle = draw(key, "internode_phyllotactic_angle", type);

    const int petioles = type == ShootType::unifoliate ? 2 : 1;
    const std::uint64_t petiole_root = derive_key(key, name_tag("petiole"));
    for (int j = 0; j < petioles; ++j) {
      p.petioles.push_back(petiole(derive_key(petiole_root, static_cast<std::uint64_t>(j)), type));
    }

    const std::uint64_t child_key = derive_key(key, name_tag("shoot"));
    if (type == ShootType::unifoliate) {
      // The main trifoliate stem grows from the unifoliate node.
      const double emergence = born + growth_.phytomer_emergence_interval_days;
      if (owner.order + 1 <= growth_.max_order && age_ + kTimeEpsilon >= emergence) {
        p.child_shoots.push_back(shoot(child_key, owner.order + 1, ShootType::trifoliate, emergence, index));
      }
    } else if (owner.order + 1 <= growth_.max_order) {
      KeyedStream bud(derive_key(key, name_tag("lateral_bud_break")));
      const bool breaks = bud.uniform() < growth_.lateral_bud_break_probability;
      const double emergence = born + growth_.lateral_bud_break_age_days;
      if (breaks && age_ + kTimeEpsilon >= emergence) {
        p.child_shoots.push_back(shoot(child_key, owner.order + 1, ShootType::trifoliate, emergence, index));
      }
    }
    return p;
  }

  Petiole petiole(std::uint64_t key, ShootType type) const {
    Petiole pt;
    pt.length = draw(key, "petiole_length", type);
    pt.radius = draw(key, "petiole_radius", type);
    pt.pitch = draw(key, "petiole_pitch", type);
    pt.curvature = draw(key, "petiole_curvature", type);
    pt.leaflet_scale = draw(key, "leaflet_scale", type);

    static constexpr LeafPosition kTrifoliate[] = {LeafPosition::terminal, LeafPosition::lateral_left,
                                                   LeafPosition::lateral_right};
    const int leaves = type == ShootType::unifoliate ? 1 : 3;
    const std::uint64_t leaf_root = derive_key(key, name_tag("leaf"));
    for (int l = 0; l < leaves; ++l) {
      const std::uint64_t lk = derive_key(leaf_root, static_cast<std::uint64_t>(l));
      Leaf leaf;
      leaf.position = kTrifoliate[l];
      leaf.scale = draw(lk, "leaf_scale", type);
      leaf.pitch = draw(lk, "leaf_pitch", type);
      leaf.yaw = draw(lk, "leaf_yaw", type);
      leaf.roll = draw(lk, "leaf_roll", type);
      pt.leaves.push_back(leaf);
    }
    return pt;
  }

  const GeneratorConfig& cfg_;
  const GrowthControls& growth_;
  double age_;
};

void assign_ids(Shoot& s, int& next) {
  s.id = next++;
  for (Phytomer& p : s.phytomers) {
    for (Shoot& child : p.child_shoots) {
      assign_ids(child, next);
    }
  }
}

std::uint64_t plant_key(std::uint64_t seed) { return derive_key(seed, name_tag("cowpea")); }

}  // namespace

double elongation_fraction(double node_age_days, const GrowthControls& growth) {
  auto sigmoid = [&](double t) {
    return 1.0 / (1.0 + std::exp(-growth.elongation_rate_per_day * (t - growth.elongation_midpoint_days)));
  };
  const double s0 = sigmoid(0.0);
  const double t = std::max(0.0, node_age_days);
  return std::clamp((sigmoid(t) - s0) / (1.0 - s0), 0.0, 1.0);
}

PlantDoc generate_plant(std::uint64_t seed, int age, const GeneratorConfig& cfg) {
  if (age < 0 || age > kMaxPlantAge) {
    throw DomainError("plant age " + std::to_string(age) + " outside [0, 39]");
  }
  cfg.validate();
  Grower grower(cfg, age);
  PlantDoc doc;
  doc.plant_age = age;
  doc.root_shoot = grower.shoot(derive_key(plant_key(seed), name_tag("root")), 0,
                                ShootType::unifoliate, 0.0, 0);
  int next = 0;
  assign_ids(doc.root_shoot, next);
  return doc;
}

double plant_age_draw(std::uint64_t seed, const GeneratorConfig& cfg) {
  KeyedStream stream(derive_key(plant_key(seed), name_tag("plant_age")));
  return cfg.distribution("plant_age", ShootType::unifoliate).sample(stream);
}

int sample_plant_age(std::uint64_t seed, const GeneratorConfig& cfg) {
  const double v = plant_age_draw(seed, cfg);
  return std::clamp(static_cast<int>(std::lround(v)), 0, kMaxPlantAge);
}

}  // namespace phytoken
