#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "phytoken/plant.hpp"

namespace phytoken {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Orthonormal frame; columns of `axes` are right, forward and up.
struct Frame {
  Vec3 origin = Vec3::Zero();
  Mat3 axes = Mat3::Identity();

  Vec3 right() const { return axes.col(0); }
  Vec3 forward() const { return axes.col(1); }
  Vec3 up() const { return axes.col(2); }
};

enum class SegmentKind { internode, petiole };

// A cylinder along start -> end.
struct Segment {
  Vec3 start;
  Vec3 end;
  double radius = 0.0;
  SegmentKind kind = SegmentKind::internode;
  int shoot_id = 0;
};

// A square lamina: base edge centered on the frame origin, extending `side`
// along forward and spanning `side` along right. The normal is frame up.
struct LeafInstance {
  Frame frame;
  double scale = 0.0;
  double leaflet_multiplier = 1.0;  // leaflet_scale for lateral leaflets, else 1
  double side = 0.0;  // m
  double area = 0.0;  // m^2
  LeafPosition position = LeafPosition::terminal;
  int shoot_id = 0;

  Vec3 normal() const { return frame.up(); }
  std::array<Vec3, 4> corners() const;
};

struct Skeleton3D {
  std::vector<Segment> segments;
  std::vector<LeafInstance> leaves;
  int shoot_count = 0;
  int phytomer_count = 0;
};

struct ReconstructOptions {
  // Leaf area at scale 1; a leaf of scale s covers leaf_unit_area * s^2.
  double leaf_unit_area = 0.01;  // m^2
  int petiole_segments = 10;
  // Lateral leaflets attach at this fraction of the petiole length, turned
  // +/- lateral_yaw_deg from the petiole.
  double lateral_attachment_fraction = 0.85;
  double lateral_yaw_deg = 60.0;
  // Orthonormalize an accumulated frame after this many compositions.
  int renormalize_every = 16;
};

// Turtle-style reconstruction. World up is +z.
//
// Shoot base: parent frame (world for the root, the node frame of the parent
// phytomer otherwise) turned by yaw about its up axis, tilted by pitch from up
// toward forward, then rolled about the new up axis. Each internode turns the
// running shoot frame by its phyllotactic angle about up, then grows along
// that frame tilted by the internode pitch. Petiole j of n leaves its node at
// azimuth 360 j / n, tilted by the petiole pitch, and bends in its vertical
// plane by curvature * length degrees (negative droops). Leaves attach at the
// petiole tip with forward along the petiole, then apply yaw, pitch (raising
// the midrib) and roll. Lateral leaflets scale by leaflet_scale.
Skeleton3D reconstruct(const PlantDoc& doc, const ReconstructOptions& options = {});

// Gram-Schmidt on the columns, keeping the up axis direction.
Mat3 orthonormalize(const Mat3& axes);

}  // namespace phytoken
