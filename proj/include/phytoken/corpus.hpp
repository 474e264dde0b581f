#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "phytoken/generator_config.hpp"
#include "phytoken/tokens.hpp"

namespace phytoken {

struct CorpusSpec {
  std::uint64_t first_seed = 0;
  std::uint64_t seed_count = 1;
  std::vector<int> ages{0};
  std::vector<double> azimuths_deg{0.0};
  std::filesystem::path output_dir;
  unsigned threads = 0;  // 0: worker_count() default
};

struct ManifestRecord {
  std::uint64_t seed = 0;
  int age = 0;
  double azimuth_deg = 0.0;
  std::string xml_path;  // relative to the output directory
  PlantMetadata meta;
};

struct CorpusManifest {
  std::filesystem::path manifest_path;
  std::size_t xml_files = 0;
  std::vector<ManifestRecord> records;  // ordered by seed, age, azimuth
};

// "xml/seed_000042_age_07.xml"
std::string corpus_xml_path(std::uint64_t seed, int age);

// One JSON object, no trailing newline:
// {"seed":..,"age":..,"azimuth_deg":..,"xml_path":..,"width_m":..,"height_m":..,"vegetation_fraction":..}
std::string format_manifest_record(const ManifestRecord& record);

// Writes one XML per (seed, age) and <output_dir>/manifest.jsonl with one
// record per (seed, age, azimuth). The manifest is written to
// manifest.jsonl.partial and renamed once complete; on failure the files
// written by this call are removed and IoError names the failing path.
CorpusManifest generate_corpus(const CorpusSpec& spec, const GeneratorConfig& cfg);

}  // namespace phytoken
