#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "phytoken/geometry.hpp"
#include "phytoken/tokens.hpp"

namespace phytoken {

inline constexpr int kAngleBins = 10;

// Leaf inclination distribution: the angle between each leaf normal and the
// vertical, folded into [0, 90] degrees, in ten 9-degree bins. Bins are
// [9i, 9i + 9) except the last, which includes 90.
struct AngleHistogram {
  std::array<std::int64_t, kAngleBins> counts{};
  std::array<double, kAngleBins> frequencies{};  // counts / total; all zero with no leaves
  std::int64_t total = 0;
};

struct TraitReport {
  double height_m = 0.0;
  std::int64_t leaf_count = 0;
  double leaf_area_m2 = 0.0;
  AngleHistogram leaf_angle_histogram;
  std::int64_t shoot_count = 0;
  std::int64_t phytomer_count = 0;
};

// Highest point above the ground plane z = 0, never negative.
double plant_height(const Skeleton3D& sk);

double leaf_area(const Skeleton3D& sk);

// Degrees in [0, 90].
double leaf_inclination_deg(const LeafInstance& leaf);
std::vector<double> leaf_inclinations(const Skeleton3D& sk);
AngleHistogram leaf_angle_histogram(const Skeleton3D& sk);

TraitReport compute_traits(const Skeleton3D& sk);
nlohmann::ordered_json to_json(const TraitReport& report);

// Wavefront OBJ: each segment as an 8-sided prism with end caps, each leaf as
// one quad. Vertex indices are 1-based and global.
std::string export_mesh(const Skeleton3D& sk);

// Size metadata for a view rotated `azimuth_deg` about the vertical. Width is
// the larger horizontal extent of the rotated geometry (segment radii
// included), height the vertical extent, and the vegetation fraction the
// vertically projected leaf area over width^2, clipped to [0, 1].
PlantMetadata metadata_from_geometry(const Skeleton3D& sk, double azimuth_deg = 0.0);

}  // namespace phytoken
