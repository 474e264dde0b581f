#include <doctest.h>

#include <sstream>

#include "phytoken/generator.hpp"
#include "phytoken/geometry.hpp"
#include "phytoken/tokens.hpp"
#include "phytoken/traits.hpp"
#include "phytoken/xml.hpp"
#include "support.hpp"

using namespace phytoken;

namespace {

double deg(double rad) { return rad * 180.0 / std::numbers::pi; }

double angle_from_vertical(const Vec3& v) { return deg(std::acos(v.normalized().z())); }

std::vector<Segment> petiole_segments(const Skeleton3D& sk) {
  std::vector<Segment> out;
  for (const Segment& s : sk.segments) {
    if (s.kind == SegmentKind::petiole) out.push_back(s);
  }
  return out;
}

void scale_leaves(Shoot& s, double k) {
  for (Phytomer& p : s.phytomers) {
    for (Petiole& pt : p.petioles) {
      for (Leaf& l : pt.leaves) l.scale *= k;
    }
    for (Shoot& c : p.child_shoots) scale_leaves(c, k);
  }
}

double frame_error(const Mat3& m) { return (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("a vertical internode from the origin") {
  const Skeleton3D sk = reconstruct(test::single_phytomer(0.1, 90.0, 0.0));
  REQUIRE(!sk.segments.empty());
  const Segment& s = sk.segments.front();
  CHECK(s.kind == SegmentKind::internode);
  CHECK((s.start - Vec3(0, 0, 0)).norm() < 1e-15);
  CHECK((s.end - Vec3(0, 0, 0.1)).norm() < 1e-15);
  CHECK(s.radius == 0.002);
  CHECK(sk.shoot_count == 1);
  CHECK(sk.phytomer_count == 1);
}

TEST_CASE("a straight horizontal petiole starts at the node") {
  const Skeleton3D sk = reconstruct(test::single_phytomer(0.1, 90.0, 0.0));
  const auto pet = petiole_segments(sk);
  REQUIRE(pet.size() == 10);
  CHECK((pet.front().start - Vec3(0, 0, 0.1)).norm() < 1e-15);
  const Vec3 chord = pet.back().end - pet.front().start;
  CHECK(chord.norm() == doctest::Approx(0.07).epsilon(1e-12));
  CHECK(std::abs(chord.z()) < 1e-15);
}

TEST_CASE("curvature droops the petiole by half its total bend") {
  // curvature -100 deg/m over 0.07 m bends 7 degrees; the chord sits at half.
  const Skeleton3D sk = reconstruct(test::single_phytomer(0.1, 45.0, -100.0));
  const auto pet = petiole_segments(sk);
  const Vec3 chord = pet.back().end - pet.front().start;
  CHECK(angle_from_vertical(chord) - 45.0 == doctest::Approx(3.5).epsilon(0.05 / 3.5));
  CHECK(angle_from_vertical(pet.back().end - pet.back().start) >
        angle_from_vertical(pet.front().end - pet.front().start));
}

TEST_CASE("petiole discretization converges") {
  for (double curvature : {-50.0, -120.0, -200.0}) {
    const PlantDoc doc = test::single_phytomer(0.1, 50.0, curvature);
    ReconstructOptions coarse, fine;
    coarse.petiole_segments = 10;
    fine.petiole_segments = 100;
    const Vec3 a = petiole_segments(reconstruct(doc, coarse)).back().end;
    const Vec3 b = petiole_segments(reconstruct(doc, fine)).back().end;
    CHECK((a - b).norm() < 0.01 * 0.07);
  }
}

TEST_CASE("leaf inclination histogram bins") {
  PlantDoc flat = test::single_phytomer(0.1, 90.0, 0.0);
  AngleHistogram h = leaf_angle_histogram(reconstruct(flat));
  CHECK(h.total == 1);
  CHECK(h.counts[0] == 1);
  CHECK(h.frequencies[0] == 1.0);
  CHECK(leaf_inclinations(reconstruct(flat))[0] == doctest::Approx(0.0).epsilon(1e-9));

  PlantDoc upright = flat;
  upright.root_shoot.phytomers[0].petioles[0].leaves[0].pitch = 90.0;
  h = leaf_angle_histogram(reconstruct(upright));
  CHECK(h.counts[9] == 1);
  CHECK(leaf_inclinations(reconstruct(upright))[0] == doctest::Approx(90.0));

  PlantDoc tilted = flat;
  tilted.root_shoot.phytomers[0].petioles[0].leaves[0].pitch = 30.0;
  CHECK(leaf_inclinations(reconstruct(tilted))[0] == doctest::Approx(30.0));
  CHECK(leaf_angle_histogram(reconstruct(tilted)).counts[3] == 1);

  CHECK(leaf_angle_histogram(Skeleton3D{}).total == 0);
}

TEST_CASE("leaf area is quadratic in scale") {
  const PlantDoc doc = generate_plant(8, 25);
  const double a1 = leaf_area(reconstruct(doc));
  CHECK(a1 > 0.0);
  for (double k : {0.5, 2.0, 3.7}) {
    PlantDoc scaled = doc;
    scale_leaves(scaled.root_shoot, k);
    CHECK(leaf_area(reconstruct(scaled)) == doctest::Approx(k * k * a1).epsilon(1e-12));
  }
  const Skeleton3D one = reconstruct(test::single_phytomer(0.1, 90.0, 0.0));
  CHECK(one.leaves[0].area == doctest::Approx(0.01 * 0.1 * 0.1).epsilon(1e-15));
  ReconstructOptions big;
  big.leaf_unit_area = 1.0;
  CHECK(leaf_area(reconstruct(test::single_phytomer(0.1, 90.0, 0.0), big)) ==
        doctest::Approx(0.01).epsilon(1e-15));
}

TEST_CASE("lateral leaflets carry the leaflet scale") {
  const PlantDoc doc = test::single_phytomer(0.1, 60.0, -80.0, 3);
  const Skeleton3D sk = reconstruct(doc);
  REQUIRE(sk.leaves.size() == 3);
  CHECK(sk.leaves[0].leaflet_multiplier == 1.0);
  CHECK(sk.leaves[1].leaflet_multiplier == 0.9);
  CHECK(sk.leaves[2].leaflet_multiplier == 0.9);
  CHECK(sk.leaves[1].area == doctest::Approx(0.81 * sk.leaves[0].area));
}

TEST_CASE("traits are invariant under base yaw") {
  for (std::uint64_t seed : {1, 2, 3, 17}) {
    const PlantDoc doc = generate_plant(seed, 30);
    const TraitReport ref = compute_traits(reconstruct(doc));
    const auto ref_incl = leaf_inclinations(reconstruct(doc));
    for (double yaw : {0.0, 37.0, 123.4, 300.0}) {
      PlantDoc turned = doc;
      turned.root_shoot.base_yaw = yaw;
      const Skeleton3D sk = reconstruct(turned);
      const TraitReport t = compute_traits(sk);
      CHECK(t.height_m == doctest::Approx(ref.height_m).epsilon(1e-9));
      CHECK(t.leaf_area_m2 == doctest::Approx(ref.leaf_area_m2).epsilon(1e-9));
      CHECK(t.leaf_angle_histogram.counts == ref.leaf_angle_histogram.counts);
      const auto incl = leaf_inclinations(sk);
      for (std::size_t i = 0; i < incl.size(); ++i) CHECK(std::abs(incl[i] - ref_incl[i]) < 1e-9);
    }
  }
}

TEST_CASE("frames stay orthonormal along long chains") {
  PlantDoc doc = test::single_phytomer(0.01, 50.0, -150.0, 3);
  Phytomer p = doc.root_shoot.phytomers[0];
  p.internode.phyllotactic_angle = 137.5;
  p.internode.pitch = 7.5;
  for (int i = 0; i < 400; ++i) doc.root_shoot.phytomers.push_back(p);
  const Skeleton3D sk = reconstruct(doc);
  double worst = 0.0;
  for (const LeafInstance& l : sk.leaves) worst = std::max(worst, frame_error(l.frame.axes));
  CHECK(worst < 1e-12);

  Mat3 skewed;
  skewed << 1, 0.1, 0, 0, 1, 0.2, 0.05, 0, 1;
  const Mat3 q = orthonormalize(skewed);
  CHECK(frame_error(q) < 1e-15);
  CHECK(q.col(2).dot(skewed.col(2).normalized()) == doctest::Approx(1.0));
}

TEST_CASE("geometry leaf count equals token leaf count") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const PlantDoc doc = generate_plant(seed, sample_plant_age(seed));
    const Skeleton3D sk = reconstruct(doc);
    const OrganCounts c = count_organs(tokenize(doc, {0.1, 0.1, 0.1}));
    CHECK(static_cast<std::int64_t>(sk.leaves.size()) == c.total_leaves());
    CHECK(sk.shoot_count == c.total_shoots());
    CHECK(sk.phytomer_count == c.total_phytomers());
  }
}

TEST_CASE("height is the highest point") {
  const TraitReport r = compute_traits(reconstruct(test::single_phytomer(0.1, 90.0, 0.0)));
  // Horizontal lamina at the petiole tip height.
  CHECK(r.height_m == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(r.leaf_count == 1);
  CHECK(plant_height(Skeleton3D{}) == 0.0);
}

TEST_CASE("mesh export") {
  Skeleton3D sk;
  sk.segments.push_back({Vec3(0, 0, 0), Vec3(0, 0, 1), 0.1, SegmentKind::internode, 0});
  std::string obj = export_mesh(sk);
  auto count = [](const std::string& text, const char* prefix) {
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) n += line.rfind(prefix, 0) == 0;
    return n;
  };
  CHECK(count(obj, "v ") == 16);
  CHECK(count(obj, "f ") == 10);

  const Skeleton3D leafy = reconstruct(test::single_phytomer(0.1, 90.0, 0.0));
  obj = export_mesh(leafy);
  CHECK(count(obj, "v ") == static_cast<int>(16 * leafy.segments.size() + 4 * leafy.leaves.size()));
  CHECK(count(obj, "f ") == static_cast<int>(10 * leafy.segments.size() + leafy.leaves.size()));
  CHECK(count(export_mesh(Skeleton3D{}), "v ") == 0);
}

TEST_CASE("size metadata from geometry") {
  const Skeleton3D sk = reconstruct(generate_plant(4, 28));
  const PlantMetadata m0 = metadata_from_geometry(sk, 0.0);
  CHECK(m0.height_m == doctest::Approx(plant_height(sk)));
  CHECK(m0.width_m > 0.0);
  CHECK(m0.vegetation_fraction >= 0.0);
  CHECK(m0.vegetation_fraction <= 1.0);
  const PlantMetadata m360 = metadata_from_geometry(sk, 360.0);
  CHECK(m360.width_m == doctest::Approx(m0.width_m));
  CHECK(metadata_from_geometry(sk, 120.0).height_m == doctest::Approx(m0.height_m));

  // A lone vertical stem: width is its diameter, no leaf cover.
  Skeleton3D stem;
  stem.segments.push_back({Vec3(0, 0, 0), Vec3(0, 0, 0.5), 0.01, SegmentKind::internode, 0});
  const PlantMetadata s = metadata_from_geometry(stem, 45.0);
  CHECK(s.width_m == doctest::Approx(0.02));
  CHECK(s.height_m == doctest::Approx(0.5));
  CHECK(s.vegetation_fraction == 0.0);
  CHECK(metadata_from_geometry(Skeleton3D{}).width_m == 0.0);
}
