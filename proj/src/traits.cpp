#include "phytoken/traits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "phytoken/xml.hpp"

namespace phytoken {

namespace {

// Unit vectors spanning the plane perpendicular to d.
std::pair<Vec3, Vec3> perpendicular_basis(const Vec3& d) {
  const Vec3 helper = std::abs(d.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
  const Vec3 u = d.cross(helper).normalized();
  return {u, d.cross(u).normalized()};
}

void write_vertex(std::ostringstream& out, const Vec3& v) {
  out << "v " << format_decimal(v.x()) << ' ' << format_decimal(v.y()) << ' ' << format_decimal(v.z()) << '\n';
}

}  // namespace

double plant_height(const Skeleton3D& sk) {
  double top = 0.0;
  for (const Segment& s : sk.segments) {
    top = std::max({top, s.start.z(), s.end.z()});
  }
  for (const LeafInstance& leaf : sk.leaves) {
    for (const Vec3& c : leaf.corners()) top = std::max(top, c.z());
  }
  return top;
}

double leaf_area(const Skeleton3D& sk) {
  double total = 0.0;
  for (const LeafInstance& leaf : sk.leaves) total += leaf.area;
  return total;
}

double leaf_inclination_deg(const LeafInstance& leaf) {
  const double c = std::clamp(std::abs(leaf.normal().normalized().z()), 0.0, 1.0);
  return std::acos(c) * 180.0 / std::numbers::pi;
}

std::vector<double> leaf_inclinations(const Skeleton3D& sk) {
  std::vector<double> out;
  out.reserve(sk.leaves.size());
  for (const LeafInstance& leaf : sk.leaves) out.push_back(leaf_inclination_deg(leaf));
  return out;
}

AngleHistogram leaf_angle_histogram(const Skeleton3D& sk) {
  AngleHistogram h;
  for (double a : leaf_inclinations(sk)) {
    const int bin = std::clamp(static_cast<int>(std::floor(a / 9.0)), 0, kAngleBins - 1);
    ++h.counts[bin];
    ++h.total;
  }
  if (h.total > 0) {
    for (int i = 0; i < kAngleBins; ++i) {
      h.frequencies[i] = static_cast<double>(h.counts[i]) / static_cast<double>(h.total);
    }
  }
  return h;
}

TraitReport compute_traits(const Skeleton3D& sk) {
  TraitReport r;
  r.height_m = plant_height(sk);
  r.leaf_count = static_cast<std::int64_t>(sk.leaves.size());
  r.leaf_area_m2 = leaf_area(sk);
  r.leaf_angle_histogram = leaf_angle_histogram(sk);
  r.shoot_count = sk.shoot_count;
  r.phytomer_count = sk.phytomer_count;
  return r;
}

nlohmann::ordered_json to_json(const TraitReport& report) {
  nlohmann::ordered_json hist;
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (int i = 0; i <= kAngleBins; ++i) edges.push_back(9.0 * i);
  hist["bin_edges_deg"] = edges;
  hist["counts"] = report.leaf_angle_histogram.counts;
  hist["frequencies"] = report.leaf_angle_histogram.frequencies;
  nlohmann::ordered_json j;
  j["height_m"] = report.height_m;
  j["leaf_count"] = report.leaf_count;
  j["leaf_area_m2"] = report.leaf_area_m2;
  j["leaf_angle_histogram"] = hist;
  j["shoot_count"] = report.shoot_count;
  j["phytomer_count"] = report.phytomer_count;
  return j;
}

std::string export_mesh(const Skeleton3D& sk) {
  constexpr int kSides = 8;
  std::ostringstream out;
  out << "# segments " << sk.segments.size() << " leaves " << sk.leaves.size() << '\n';
  std::size_t base = 1;
  for (const Segment& s : sk.segments) {
    Vec3 d = s.end - s.start;
    if (d.norm() < std::numeric_limits<double>::min()) d = Vec3::UnitZ();
    const auto [u, v] = perpendicular_basis(d.normalized());
    for (const Vec3* end : {&s.start, &s.end}) {
      for (int k = 0; k < kSides; ++k) {
        const double a = 2.0 * std::numbers::pi * k / kSides;
        write_vertex(out, *end + s.radius * (std::cos(a) * u + std::sin(a) * v));
      }
    }
    for (int k = 0; k < kSides; ++k) {
      const std::size_t a = base + k;
      const std::size_t b = base + (k + 1) % kSides;
      out << "f " << a << ' ' << b << ' ' << b + kSides << ' ' << a + kSides << '\n';
    }
    out << 'f';
    for (int k = kSides - 1; k >= 0; --k) out << ' ' << base + k;
    out << "\nf";
    for (int k = 0; k < kSides; ++k) out << ' ' << base + kSides + k;
    out << '\n';
    base += 2 * kSides;
  }
  for (const LeafInstance& leaf : sk.leaves) {
    for (const Vec3& c : leaf.corners()) write_vertex(out, c);
    out << "f " << base << ' ' << base + 1 << ' ' << base + 2 << ' ' << base + 3 << '\n';
    base += 4;
  }
  return out.str();
}

PlantMetadata metadata_from_geometry(const Skeleton3D& sk, double azimuth_deg) {
  if (sk.segments.empty() && sk.leaves.empty()) return {};
  const Mat3 view = Eigen::AngleAxisd(-azimuth_deg * std::numbers::pi / 180.0, Vec3::UnitZ()).toRotationMatrix();
  constexpr double inf = std::numeric_limits<double>::infinity();
  Vec3 lo(inf, inf, inf);
  Vec3 hi(-inf, -inf, -inf);
  auto add = [&](const Vec3& p, double r) {
    const Vec3 q = view * p;
    lo = lo.cwiseMin(q - Vec3(r, r, 0.0));
    hi = hi.cwiseMax(q + Vec3(r, r, 0.0));
  };
  for (const Segment& s : sk.segments) {
    add(s.start, s.radius);
    add(s.end, s.radius);
  }
  double projected = 0.0;
  for (const LeafInstance& leaf : sk.leaves) {
    for (const Vec3& c : leaf.corners()) add(c, 0.0);
    projected += leaf.area * std::abs(leaf.normal().normalized().z());
  }
  PlantMetadata m;
  m.width_m = std::max(hi.x() - lo.x(), hi.y() - lo.y());
  m.height_m = hi.z() - lo.z();
  m.vegetation_fraction = m.width_m > 0.0 ? std::clamp(projected / (m.width_m * m.width_m), 0.0, 1.0) : 0.0;
  return m;
}

}  // namespace phytoken
