#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace phytoken {

inline constexpr int kMaxBranchingOrder = 3;
inline constexpr int kMaxPlantAge = 39;

// Leaf arrangement of a shoot; the numeric value is the shoot's type label.
enum class ShootType : int { unifoliate = 1, trifoliate = 3 };

// Position of a leaf on its petiole; the numeric value is the organ code N.
enum class LeafPosition : int { terminal = 3, lateral_left = 4, lateral_right = 5 };

struct Leaf {
  LeafPosition position = LeafPosition::terminal;
  double scale = 0.0;
  double pitch = 0.0;  // degrees
  double yaw = 0.0;    // degrees
  double roll = 0.0;   // degrees

  bool operator==(const Leaf&) const = default;
};

struct Petiole {
  double length = 0.0;     // m
  double radius = 0.0;     // m
  double pitch = 0.0;      // degrees
  double curvature = 0.0;  // degrees of bend per meter, <= 0 for cowpea
  double leaflet_scale = 1.0;
  std::vector<Leaf> leaves;

  bool operator==(const Petiole&) const = default;
};

struct Internode {
  double length = 0.0;  // m
  double radius = 0.0;  // m
  double pitch = 0.0;   // degrees
  double phyllotactic_angle = 0.0;  // degrees

  bool operator==(const Internode&) const = default;
};

struct Shoot;

// An internode with its petioles. Child shoots growing from this node are
// owned by the phytomer; each child's parent_node_index is this phytomer's
// index within its shoot.
struct Phytomer {
  Internode internode;
  std::vector<Petiole> petioles;
  std::vector<Shoot> child_shoots;

  bool operator==(const Phytomer&) const;
};

struct Shoot {
  int id = 0;
  int parent_node_index = 0;
  int order = 0;
  ShootType type = ShootType::trifoliate;
  double base_pitch = 0.0;  // degrees
  double base_yaw = 0.0;    // degrees
  double base_roll = 0.0;   // degrees
  std::vector<Phytomer> phytomers;

  bool operator==(const Shoot&) const = default;
};

inline bool Phytomer::operator==(const Phytomer& other) const {
  return internode == other.internode && petioles == other.petioles &&
         child_shoots == other.child_shoots;
}

struct PlantDoc {
  std::array<double, 3> base_position{0.0, 0.0, 0.0};  // m
  int plant_age = 0;                                   // days
  Shoot root_shoot{.id = 0, .parent_node_index = 0, .order = 0, .type = ShootType::unifoliate, .phytomers = {}};

  bool operator==(const PlantDoc&) const = default;
};

struct OrganCounts {
  std::array<std::int64_t, kMaxBranchingOrder + 1> shoots{};
  std::array<std::int64_t, kMaxBranchingOrder + 1> phytomers{};
  std::array<std::int64_t, kMaxBranchingOrder + 1> petioles{};
  std::array<std::int64_t, kMaxBranchingOrder + 1> leaves{};

  std::int64_t total_shoots() const;
  std::int64_t total_phytomers() const;
  std::int64_t total_petioles() const;
  std::int64_t total_leaves() const;

  bool operator==(const OrganCounts&) const = default;
};

// Throws ValidationError naming the first offending element.
void validate(const PlantDoc& doc);

// Organ counts by walking the shoot tree.
OrganCounts count_organs(const PlantDoc& doc);

// Calls fn(shoot) for every shoot in document order: a shoot, then the child
// shoots of each of its phytomers in turn.
template <typename Fn>
void for_each_shoot(const Shoot& shoot, Fn&& fn) {
  fn(shoot);
  for (const auto& phytomer : shoot.phytomers) {
    for (const auto& child : phytomer.child_shoots) {
      for_each_shoot(child, fn);
    }
  }
}

}  // namespace phytoken
