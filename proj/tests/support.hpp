#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "phytoken/plant.hpp"

namespace test {

inline std::filesystem::path data_dir() { return PHYTOKEN_TEST_DATA; }
inline std::filesystem::path source_dir() { return PHYTOKEN_SOURCE_DIR; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("phytoken_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Root shoot with one phytomer: an internode and one petiole carrying `leaves`.
inline phytoken::PlantDoc single_phytomer(double internode_length, double petiole_pitch, double curvature,
                                          int leaves = 1) {
  using namespace phytoken;
  PlantDoc doc;
  Phytomer p;
  p.internode = {internode_length, 0.002, 0.0, 0.0};
  Petiole pt{0.07, 0.002, petiole_pitch, curvature, 0.9, {}};
  for (int i = 0; i < leaves; ++i) {
    pt.leaves.push_back({static_cast<LeafPosition>(3 + i), 0.1, 0.0, 0.0, 0.0});
  }
  p.petioles.push_back(pt);
  doc.root_shoot.type = leaves == 3 ? ShootType::trifoliate : ShootType::unifoliate;
  doc.root_shoot.phytomers.push_back(p);
  return doc;
}

}  // namespace test
