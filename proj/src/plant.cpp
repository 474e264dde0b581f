#include "phytoken/plant.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include "phytoken/errors.hpp"

namespace phytoken {

namespace {

std::int64_t sum(const std::array<std::int64_t, kMaxBranchingOrder + 1>& per_order) {
  return std::accumulate(per_order.begin(), per_order.end(), std::int64_t{0});
}

void require(bool condition, const std::string& path, const std::string& message) {
  if (!condition) {
    throw ValidationError(path, message);
  }
}

void require_finite(double value, const std::string& path, const char* name) {
  require(std::isfinite(value), path, std::string(name) + " must be finite");
}

void require_positive(double value, const std::string& path, const char* name) {
  require(std::isfinite(value) && value > 0.0, path, std::string(name) + " must be > 0");
}

class Validator {
 public:
  void shoot(const Shoot& s, const std::string& parent_path, int expected_order,
             int expected_parent_node) {
    const std::string path = parent_path + "/shoot[id=" + std::to_string(s.id) + "]";
    require(s.order <= kMaxBranchingOrder, path,
            "branching order " + std::to_string(s.order) + " exceeds " +
                std::to_string(kMaxBranchingOrder));
    require(s.order == expected_order, path,
            "branching order " + std::to_string(s.order) + " does not match nesting depth " +
                std::to_string(expected_order));
    require(s.parent_node_index == expected_parent_node, path,
            "parent_node " + std::to_string(s.parent_node_index) + " does not match attachment node " +
                std::to_string(expected_parent_node));
    require(s.type == ShootType::unifoliate || s.type == ShootType::trifoliate, path,
            "type must be 1 (unifoliate) or 3 (trifoliate)");
    require(ids_.insert(s.id).second, path, "duplicate shoot id " + std::to_string(s.id));
    require_finite(s.base_pitch, path, "pitch");
    require_finite(s.base_yaw, path, "yaw");
    require_finite(s.base_roll, path, "roll");

    for (std::size_t k = 0; k < s.phytomers.size(); ++k) {
      phytomer(s.phytomers[k], path + "/phytomer[" + std::to_string(k) + "]", s.order,
               static_cast<int>(k));
    }
  }

 private:
  void phytomer(const Phytomer& p, const std::string& path, int order, int index) {
    const std::string ipath = path + "/internode";
    require_positive(p.internode.length, ipath, "length");
    require_positive(p.internode.radius, ipath, "radius");
    require_finite(p.internode.pitch, ipath, "pitch");
    require_finite(p.internode.phyllotactic_angle, ipath, "phyllotactic");
    require(!p.petioles.empty(), path, "phytomer has no petiole");
    for (std::size_t j = 0; j < p.petioles.size(); ++j) {
      petiole(p.petioles[j], path + "/petiole[" + std::to_string(j) + "]");
    }
    for (const auto& child : p.child_shoots) {
      shoot(child, path, order + 1, index);
    }
  }

  void petiole(const Petiole& p, const std::string& path) {
    require_positive(p.length, path, "length");
    require_positive(p.radius, path, "radius");
    require_finite(p.pitch, path, "pitch");
    require_finite(p.curvature, path, "curvature");
    require_finite(p.leaflet_scale, path, "leaflet_scale");
    require(p.leaves.size() == 1 || p.leaves.size() == 3, path,
            "petiole must carry 1 or 3 leaves, found " + std::to_string(p.leaves.size()));
    for (std::size_t l = 0; l < p.leaves.size(); ++l) {
      const Leaf& leaf = p.leaves[l];
      const std::string lpath = path + "/leaf[" + std::to_string(l) + "]";
      const int pos = static_cast<int>(leaf.position);
      require(pos >= 3 && pos <= 5, lpath, "pos must be 3, 4 or 5");
      require_positive(leaf.scale, lpath, "scale");
      require_finite(leaf.pitch, lpath, "pitch");
      require_finite(leaf.yaw, lpath, "yaw");
      require_finite(leaf.roll, lpath, "roll");
    }
  }

  std::unordered_set<int> ids_;
};

void count_shoot(const Shoot& s, OrganCounts& counts) {
  if (s.order < 0 || s.order > kMaxBranchingOrder) {
    throw ValidationError("plant/shoot[id=" + std::to_string(s.id) + "]",
                          "branching order " + std::to_string(s.order) + " out of range");
  }
  const auto m = static_cast<std::size_t>(s.order);
  counts.shoots[m] += 1;
  for (const auto& p : s.phytomers) {
    counts.phytomers[m] += 1;
    counts.petioles[m] += static_cast<std::int64_t>(p.petioles.size());
    for (const auto& pet : p.petioles) {
      counts.leaves[m] += static_cast<std::int64_t>(pet.leaves.size());
    }
    for (const auto& child : p.child_shoots) {
      count_shoot(child, counts);
    }
  }
}

}  // namespace

std::int64_t OrganCounts::total_shoots() const { return sum(shoots); }
std::int64_t OrganCounts::total_phytomers() const { return sum(phytomers); }
std::int64_t OrganCounts::total_petioles() const { return sum(petioles); }
std::int64_t OrganCounts::total_leaves() const { return sum(leaves); }

void validate(const PlantDoc& doc) {
  require(doc.plant_age >= 0 && doc.plant_age <= kMaxPlantAge, "plant",
          "age " + std::to_string(doc.plant_age) + " outside [0, 39]");
  for (double c : doc.base_position) {
    require_finite(c, "plant", "base position");
  }
  Validator v;
  v.shoot(doc.root_shoot, "plant", 0, 0);
}

OrganCounts count_organs(const PlantDoc& doc) {
  OrganCounts counts;
  count_shoot(doc.root_shoot, counts);
  return counts;
}

}  // namespace phytoken
