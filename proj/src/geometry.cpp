#include "phytoken/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "phytoken/errors.hpp"

namespace phytoken {

namespace {

double rad(double deg) { return deg * std::numbers::pi / 180.0; }

Mat3 rot_x(double deg) { return Eigen::AngleAxisd(rad(deg), Vec3::UnitX()).toRotationMatrix(); }
Mat3 rot_y(double deg) { return Eigen::AngleAxisd(rad(deg), Vec3::UnitY()).toRotationMatrix(); }
Mat3 rot_z(double deg) { return Eigen::AngleAxisd(rad(deg), Vec3::UnitZ()).toRotationMatrix(); }

// A frame that counts compositions and re-orthonormalizes periodically.
struct Turtle {
  Frame frame;
  int steps = 0;
  int every = 16;

  void turn(const Mat3& local) {
    frame.axes = frame.axes * local;
    if (++steps % every == 0) {
      frame.axes = orthonormalize(frame.axes);
    }
  }
};

class Builder {
 public:
  Builder(const ReconstructOptions& o, Skeleton3D& out) : opt_(o), out_(out) {}

  void shoot(const Shoot& s, const Turtle& parent) {
    ++out_.shoot_count;
    Turtle axis = parent;
    axis.turn(rot_z(s.base_yaw));
    axis.turn(rot_x(-s.base_pitch));
    axis.turn(rot_z(s.base_roll));

    for (const Phytomer& p : s.phytomers) {
      ++out_.phytomer_count;
      axis.turn(rot_z(p.internode.phyllotactic_angle));
      Turtle node = axis;
      node.turn(rot_x(-p.internode.pitch));
      const Vec3 start = axis.frame.origin;
      const Vec3 end = start + p.internode.length * node.frame.up();
      out_.segments.push_back({start, end, p.internode.radius, SegmentKind::internode, s.id});
      node.frame.origin = end;
      axis.frame.origin = end;

      const auto n = static_cast<double>(p.petioles.size());
      for (std::size_t j = 0; j < p.petioles.size(); ++j) {
        Turtle pt = node;
        pt.turn(rot_z(360.0 * static_cast<double>(j) / n));
        pt.turn(rot_x(-p.petioles[j].pitch));
        petiole(p.petioles[j], pt, s.id);
      }
      for (const Shoot& child : p.child_shoots) {
        shoot(child, node);
      }
    }
  }

 private:
  void petiole(const Petiole& pt, const Turtle& base, int shoot_id) {
    const Vec3 dir0 = base.frame.up();
    Vec3 h = Vec3::UnitZ().cross(dir0);
    if (h.norm() < 1e-12) {
      h = base.frame.right();
    }
    h.normalize();
    const double bend = -pt.curvature * pt.length;  // degrees of droop along the whole petiole
    const int n = std::max(1, opt_.petiole_segments);
    const double step = pt.length / n;

    auto bent = [&](double deg) { return Eigen::AngleAxisd(rad(deg), h).toRotationMatrix(); };

    // Midpoint rule: segment i points along the tangent at its center.
    std::vector<Vec3> points{base.frame.origin};
    for (int i = 0; i < n; ++i) {
      const Vec3 d = bent(bend * (i + 0.5) / n) * dir0;
      const Vec3 next = points.back() + step * d;
      out_.segments.push_back({points.back(), next, pt.radius, SegmentKind::petiole, shoot_id});
      points.push_back(next);
    }

    auto point_at = [&](double fraction) {
      const double u = std::clamp(fraction, 0.0, 1.0) * n;
      const int i = std::min(n - 1, static_cast<int>(std::floor(u)));
      return Vec3(points[i] + (u - i) * (points[i + 1] - points[i]));
    };

    for (const Leaf& leaf : pt.leaves) {
      const bool lateral = leaf.position != LeafPosition::terminal;
      const double fraction = lateral ? opt_.lateral_attachment_fraction : 1.0;
      Turtle lt = base;
      lt.frame.axes = bent(bend * fraction) * base.frame.axes;
      lt.frame.origin = point_at(fraction);
      lt.turn(rot_x(90.0));  // forward along the petiole
      double lateral_yaw = 0.0;
      if (leaf.position == LeafPosition::lateral_left) lateral_yaw = opt_.lateral_yaw_deg;
      if (leaf.position == LeafPosition::lateral_right) lateral_yaw = -opt_.lateral_yaw_deg;
      lt.turn(rot_z(lateral_yaw + leaf.yaw));
      lt.turn(rot_x(leaf.pitch));
      lt.turn(rot_y(leaf.roll));

      LeafInstance inst;
      inst.frame = lt.frame;
      const double mult = lateral ? pt.leaflet_scale : 1.0;
      inst.scale = leaf.scale;
      inst.leaflet_multiplier = mult;
      inst.side = std::sqrt(opt_.leaf_unit_area) * std::abs(leaf.scale * mult);
      inst.area = inst.side * inst.side;
      inst.position = leaf.position;
      inst.shoot_id = shoot_id;
      out_.leaves.push_back(inst);
    }
  }

  const ReconstructOptions& opt_;
  Skeleton3D& out_;
};

}  // namespace

std::array<Vec3, 4> LeafInstance::corners() const {
  const Vec3 r = 0.5 * side * frame.right();
  const Vec3 f = side * frame.forward();
  const Vec3& o = frame.origin;
  return {o - r, o + r, o + r + f, o - r + f};
}

Mat3 orthonormalize(const Mat3& axes) {
  const Vec3 u = axes.col(2).normalized();
  const Vec3 f = (axes.col(1) - axes.col(1).dot(u) * u).normalized();
  Mat3 out;
  out.col(0) = f.cross(u);
  out.col(1) = f;
  out.col(2) = u;
  return out;
}

Skeleton3D reconstruct(const PlantDoc& doc, const ReconstructOptions& options) {
  if (!(options.leaf_unit_area > 0.0) || options.petiole_segments < 1 || options.renormalize_every < 1) {
    throw DomainError("invalid reconstruction options");
  }
  Skeleton3D out;
  Turtle world;
  world.every = options.renormalize_every;
  world.frame.origin = Vec3(doc.base_position[0], doc.base_position[1], doc.base_position[2]);
  Builder(options, out).shoot(doc.root_shoot, world);
  return out;
}

}  // namespace phytoken
