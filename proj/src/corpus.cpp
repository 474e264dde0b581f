#include "phytoken/corpus.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <system_error>

#include "phytoken/errors.hpp"
#include "phytoken/generator.hpp"
#include "phytoken/geometry.hpp"
#include "phytoken/parallel.hpp"
#include "phytoken/traits.hpp"
#include "phytoken/xml.hpp"

namespace phytoken {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError(path.string(), "write failed");
}

struct Item {
  std::uint64_t seed = 0;
  int age = 0;
  std::vector<PlantMetadata> views;
  bool written = false;
};

}  // namespace

std::string corpus_xml_path(std::uint64_t seed, int age) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "xml/seed_%06llu_age_%02d.xml", static_cast<unsigned long long>(seed), age);
  return buf;
}

std::string format_manifest_record(const ManifestRecord& r) {
  nlohmann::ordered_json j;
  j["seed"] = r.seed;
  j["age"] = r.age;
  j["azimuth_deg"] = r.azimuth_deg;
  j["xml_path"] = r.xml_path;
  j["width_m"] = r.meta.width_m;
  j["height_m"] = r.meta.height_m;
  j["vegetation_fraction"] = r.meta.vegetation_fraction;
  return j.dump();
}

CorpusManifest generate_corpus(const CorpusSpec& spec, const GeneratorConfig& cfg) {
  if (spec.seed_count == 0) throw DomainError("seed count must be positive");
  if (spec.ages.empty()) throw DomainError("no ages requested");
  if (spec.azimuths_deg.empty()) throw DomainError("no azimuths requested");
  for (int age : spec.ages) {
    if (age < 0 || age > kMaxPlantAge) throw DomainError("age " + std::to_string(age) + " outside [0, 39]");
  }
  cfg.validate();

  const fs::path root = spec.output_dir;
  std::error_code ec;
  fs::create_directories(root / "xml", ec);
  if (ec) throw IoError((root / "xml").string(), ec.message());

  std::vector<Item> items;
  items.reserve(spec.seed_count * spec.ages.size());
  for (std::uint64_t s = 0; s < spec.seed_count; ++s) {
    for (int age : spec.ages) items.push_back({spec.first_seed + s, age, {}, false});
  }

  const fs::path partial = root / "manifest.jsonl.partial";
  const fs::path final_path = root / "manifest.jsonl";
  auto cleanup = [&] {
    std::error_code ignored;
    for (const Item& item : items) {
      if (item.written) fs::remove(root / corpus_xml_path(item.seed, item.age), ignored);
    }
    fs::remove(partial, ignored);
  };

  try {
    parallel_for(items.size(), worker_count(spec.threads), [&](std::size_t i) {
      Item& item = items[i];
      const PlantDoc doc = generate_plant(item.seed, item.age, cfg);
      item.written = true;  // claim before writing so a half-written file is removed too
      write_file(root / corpus_xml_path(item.seed, item.age), serialize_xml(doc));
      const Skeleton3D sk = reconstruct(doc);
      for (double az : spec.azimuths_deg) item.views.push_back(metadata_from_geometry(sk, az));
    });

    CorpusManifest manifest;
    manifest.manifest_path = final_path;
    manifest.xml_files = items.size();
    std::string text;
    for (const Item& item : items) {
      for (std::size_t v = 0; v < spec.azimuths_deg.size(); ++v) {
        ManifestRecord r{item.seed, item.age, spec.azimuths_deg[v], corpus_xml_path(item.seed, item.age),
                         item.views[v]};
        text += format_manifest_record(r);
        text += '\n';
        manifest.records.push_back(std::move(r));
      }
    }
    write_file(partial, text);
    fs::rename(partial, final_path, ec);
    if (ec) throw IoError(final_path.string(), ec.message());
    return manifest;
  } catch (...) {
    cleanup();
    throw;
  }
}

}  // namespace phytoken
