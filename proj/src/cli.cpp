#include "phytoken/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "phytoken/corpus.hpp"
#include "phytoken/digest.hpp"
#include "phytoken/errors.hpp"
#include "phytoken/generator.hpp"
#include "phytoken/geometry.hpp"
#include "phytoken/grid.hpp"
#include "phytoken/metrics.hpp"
#include "phytoken/parallel.hpp"
#include "phytoken/parameters.hpp"
#include "phytoken/tokens.hpp"
#include "phytoken/traits.hpp"
#include "phytoken/xml.hpp"

namespace phytoken::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr const char* kLeafInclination = "leaf_inclination";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Report {
  std::string command;
  json inputs = json::array();
  json outputs = json::array();
  json payload = json::object();

  void input(const fs::path& p) { inputs.push_back({{"path", p.string()}, {"sha256", sha256_file(p)}}); }
  void output(const fs::path& p) { outputs.push_back(p.string()); }
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& path, const std::string& text, bool append = false) {
  std::ofstream out(path, std::ios::binary | (append ? std::ios::app : std::ios::trunc));
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << text;
  out.close();
  if (!out) throw IoError(path.string(), "write failed");
}

template <typename T>
T parse_value(std::string_view s, const std::string& what) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw UsageError("bad " + what + " '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto at = s.find(sep, start);
    parts.push_back(s.substr(start, at - start));
    if (at == std::string_view::npos) return parts;
    start = at + 1;
  }
}

// "A..B", "A" or "a,b,c".
std::vector<int> parse_ages(const std::string& text) {
  std::vector<int> ages;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const int lo = parse_value<int>(std::string_view(text).substr(0, dots), "age");
    const int hi = parse_value<int>(std::string_view(text).substr(dots + 2), "age");
    if (hi < lo) throw UsageError("empty age range '" + text + "'");
    for (int a = lo; a <= hi; ++a) ages.push_back(a);
  } else {
    for (auto part : split(text, ',')) ages.push_back(parse_value<int>(part, "age"));
  }
  for (int a : ages) {
    if (a < 0 || a > kMaxPlantAge) throw UsageError("age " + std::to_string(a) + " outside 0..39");
  }
  return ages;
}

std::vector<double> parse_doubles(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (auto part : split(text, ',')) {
    const double v = parse_value<double>(part, what);
    if (!std::isfinite(v)) throw UsageError("bad " + what);
    out.push_back(v);
  }
  return out;
}

PlantMetadata parse_meta(const std::string& text) {
  const auto v = parse_doubles(text, "metadata value");
  if (v.size() != 3) throw UsageError("--meta expects width,height,fraction");
  PlantMetadata m{v[0], v[1], v[2]};
  try {
    validate(m);
  } catch (const DomainError& e) {
    throw UsageError(std::string("--meta: ") + e.what());
  }
  return m;
}

json meta_json(const PlantMetadata& m) {
  return {{"width_m", m.width_m}, {"height_m", m.height_m}, {"vegetation_fraction", m.vegetation_fraction}};
}

json counts_json(const OrganCounts& c) {
  return {{"shoots", c.total_shoots()},
          {"phytomers", c.total_phytomers()},
          {"petioles", c.total_petioles()},
          {"leaves", c.total_leaves()}};
}

// Regular files directly inside `dir`, sorted by name.
std::vector<fs::path> list_files(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError(dir.string(), "not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  return files;
}

struct Corpus {
  std::vector<TokenSequence> sequences;
  std::vector<PlantDoc> docs;  // decodable sequences only
  std::size_t undecodable = 0;
};

Corpus load_corpus(const fs::path& dir, Report& report) {
  Corpus c;
  for (const fs::path& f : list_files(dir)) {
    report.input(f);
    auto seqs = read_token_file(f);
    c.sequences.insert(c.sequences.end(), std::make_move_iterator(seqs.begin()), std::make_move_iterator(seqs.end()));
  }
  std::vector<std::optional<PlantDoc>> slots(c.sequences.size());
  parallel_for(c.sequences.size(), worker_count(), [&](std::size_t i) {
    try {
      slots[i] = detokenize(c.sequences[i], {.strict = false}).doc;
    } catch (const DecodeError&) {
    }
  });
  for (auto& s : slots) {
    if (s) c.docs.push_back(std::move(*s));
    else ++c.undecodable;
  }
  return c;
}

std::vector<double> collect(const std::vector<PlantDoc>& docs, const std::string& name, ContextFilter filter) {
  std::vector<double> out;
  if (name != kLeafInclination) {
    for (const PlantDoc& d : docs) collect_parameter(d, name, filter, out);
    return out;
  }
  std::vector<std::vector<double>> per(docs.size());
  parallel_for(docs.size(), worker_count(), [&](std::size_t i) {
    std::map<int, ShootType> types;
    for_each_shoot(docs[i].root_shoot, [&](const Shoot& s) { types[s.id] = s.type; });
    const Skeleton3D sk = reconstruct(docs[i]);
    for (const LeafInstance& leaf : sk.leaves) {
      const ShootType t = types[leaf.shoot_id];
      if (filter == ContextFilter::all || (filter == ContextFilter::unifoliate && t == ShootType::unifoliate) ||
          (filter == ContextFilter::trifoliate && t == ShootType::trifoliate)) {
        per[i].push_back(leaf_inclination_deg(leaf));
      }
    }
  });
  for (auto& v : per) out.insert(out.end(), v.begin(), v.end());
  return out;
}

// Normalization interval: the configured support of the contexts present in
// the ground truth, the ground-truth data range when that support is a point,
// and [0, 90] for leaf inclination.
std::pair<double, double> comparison_range(const std::string& name, ContextFilter filter,
                                           const std::vector<PlantDoc>& truth,
                                           const std::vector<double>& truth_values) {
  if (name == kLeafInclination) return {0.0, 90.0};
  const GeneratorConfig cfg = default_generator_config();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (ContextFilter ctx : {ContextFilter::unifoliate, ContextFilter::trifoliate}) {
    if (filter != ContextFilter::all && filter != ctx) continue;
    if (collect(truth, name, ctx).empty()) continue;
    const auto [a, b] = parameter_support(cfg, name, ctx);
    lo = std::min(lo, a);
    hi = std::max(hi, b);
  }
  if (!(hi > lo)) {
    const auto [mn, mx] = std::minmax_element(truth_values.begin(), truth_values.end());
    lo = *mn;
    hi = *mx;
  }
  return {lo, hi};
}

json histogram(const std::vector<double>& values, double lo, double hi, int bins) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  std::vector<std::int64_t> counts(static_cast<std::size_t>(bins), 0);
  for (double v : values) {
    const int b = static_cast<int>(std::floor((v - lo) / (hi - lo) * bins));
    ++counts[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))];
  }
  return counts;
}

json compare(const std::string& name, ContextFilter filter, const Corpus& gen, const Corpus& truth, double threshold,
             int bins) {
  const std::vector<double> g = collect(gen.docs, name, filter);
  const std::vector<double> t = collect(truth.docs, name, filter);
  json j;
  j["generated_count"] = g.size();
  j["truth_count"] = t.size();
  if (g.empty() || t.empty()) {
    j["wd"] = nullptr;
    j["normalized_wd"] = nullptr;
    j["starred"] = false;
    return j;
  }
  const auto [lo, hi] = comparison_range(name, filter, truth.docs, t);
  const double wd = wasserstein_1d(g, t);
  j["wd"] = wd;
  j["range"] = {lo, hi};
  j["range_width"] = hi - lo;
  if (hi > lo) {
    const double n = wd / (hi - lo);
    j["normalized_wd"] = n;
    j["starred"] = wd_starred(n, threshold);
  } else {
    j["normalized_wd"] = nullptr;
    j["starred"] = wd == 0.0;
  }
  if (bins > 0) {
    json edges = json::array();
    const double a = hi > lo ? lo : lo - 0.5;
    const double b = hi > lo ? hi : hi + 0.5;
    for (int k = 0; k <= bins; ++k) edges.push_back(a + (b - a) * k / bins);
    j["histogram"] = {{"edges", edges}, {"generated", histogram(g, lo, hi, bins)}, {"truth", histogram(t, lo, hi, bins)}};
  }
  return j;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

// ---- commands -------------------------------------------------------------

struct GenerateArgs {
  std::uint64_t seeds = 0;
  std::uint64_t first_seed = 0;
  std::string ages = "0..39";
  std::string azimuths = "0,120,240";
  std::string config;
  std::string out;
  unsigned threads = 0;
};

void cmd_generate(const GenerateArgs& a, Report& r) {
  CorpusSpec spec;
  spec.first_seed = a.first_seed;
  spec.seed_count = a.seeds;
  spec.ages = parse_ages(a.ages);
  spec.azimuths_deg = parse_doubles(a.azimuths, "azimuth");
  spec.output_dir = a.out;
  spec.threads = a.threads;
  GeneratorConfig cfg = default_generator_config();
  if (!a.config.empty()) {
    r.input(a.config);
    cfg = load_generator_config(a.config);
  }
  const CorpusManifest m = generate_corpus(spec, cfg);
  r.output(m.manifest_path);
  r.payload["manifest"] = m.manifest_path.string();
  r.payload["xml_files"] = m.xml_files;
  r.payload["records"] = m.records.size();
  r.payload["manifest_sha256"] = sha256_file(m.manifest_path);
}

struct TokenizeArgs {
  std::string xml;
  std::string out;
  std::string meta;
  double azimuth = 0.0;
};

void cmd_tokenize(const TokenizeArgs& a, Report& r) {
  const PlantMetadata override_meta = a.meta.empty() ? PlantMetadata{} : parse_meta(a.meta);
  r.input(a.xml);
  const PlantDoc doc = parse_xml(read_text(a.xml));
  const PlantMetadata meta = a.meta.empty() ? metadata_from_geometry(reconstruct(doc), a.azimuth) : override_meta;
  const TokenSequence seq = tokenize(doc, meta);
  write_text(a.out, format_token_line(seq) + "\n", true);
  r.output(a.out);
  r.payload["length"] = seq.size();
  r.payload["meta_source"] = a.meta.empty() ? "geometry" : "flag";
  r.payload["meta"] = meta_json(meta);
  r.payload["organs"] = counts_json(count_organs(doc));
}

struct DetokenizeArgs {
  std::string tokens;
  std::size_t line = 1;
  std::string out;
  bool lenient = false;
};

void cmd_detokenize(const DetokenizeArgs& a, Report& r) {
  r.input(a.tokens);
  const auto seqs = read_token_file(a.tokens);
  if (a.line < 1 || a.line > seqs.size()) {
    throw IoError(a.tokens, "has " + std::to_string(seqs.size()) + " sequences, line " + std::to_string(a.line) +
                                " requested");
  }
  const DecodedPlant d = detokenize(seqs[a.line - 1], {.strict = !a.lenient});
  write_text(a.out, serialize_xml(d.doc));
  r.output(a.out);
  r.payload["line"] = a.line;
  r.payload["meta"] = meta_json(d.meta);
  // Passing this back to tokenize --meta reproduces the original line.
  r.payload["meta_flag"] = format_decimal(d.meta.width_m) + "," + format_decimal(d.meta.height_m) + "," +
                           format_decimal(d.meta.vegetation_fraction);
  r.payload["warnings"] = d.warnings;
  r.payload["organs"] = counts_json(count_organs(d.doc));
}

struct TraitsArgs {
  std::string xml;
  std::string mesh;
  double leaf_unit_area = 0.01;
};

void cmd_traits(const TraitsArgs& a, Report& r) {
  r.input(a.xml);
  const PlantDoc doc = parse_xml(read_text(a.xml));
  ReconstructOptions opt;
  opt.leaf_unit_area = a.leaf_unit_area;
  const Skeleton3D sk = reconstruct(doc, opt);
  if (!a.mesh.empty()) {
    write_text(a.mesh, export_mesh(sk));
    r.output(a.mesh);
  }
  r.payload = to_json(compute_traits(sk));
}

struct EvalArgs {
  std::string gen;
  std::string gt;
  bool swapped_rouge = false;
  double threshold = kWdStarThreshold;
};

void cmd_eval(const EvalArgs& a, Report& r) {
  const auto gen_files = list_files(a.gen);
  const auto gt_files = list_files(a.gt);
  std::map<std::string, fs::path> gen_by_name, gt_by_name;
  for (const auto& f : gen_files) gen_by_name[f.filename().string()] = f;
  for (const auto& f : gt_files) gt_by_name[f.filename().string()] = f;
  std::vector<std::string> orphans;
  for (const auto& [name, path] : gen_by_name) {
    if (!gt_by_name.count(name)) orphans.push_back(path.string());
  }
  for (const auto& [name, path] : gt_by_name) {
    if (!gen_by_name.count(name)) orphans.push_back(path.string());
  }
  if (!orphans.empty()) {
    std::string list;
    for (const auto& o : orphans) list += (list.empty() ? "" : ", ") + o;
    throw IoError(a.gen, "unmatched token files: " + list);
  }
  if (gen_by_name.empty()) throw IoError(a.gen, "no token files");

  std::vector<SequencePair> pairs;
  json organ_counts = json::array();
  for (const auto& [name, gen_path] : gen_by_name) {
    const fs::path& gt_path = gt_by_name[name];
    r.input(gen_path);
    r.input(gt_path);
    const auto g = read_token_file(gen_path);
    const auto t = read_token_file(gt_path);
    if (g.size() != t.size()) {
      throw IoError(gen_path.string(), std::to_string(g.size()) + " sequences but " + gt_path.string() + " has " +
                                           std::to_string(t.size()));
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
      auto counted = [](const TokenSequence& s) -> json {
        try {
          validate_framing(s);
          return counts_json(count_organs(s));
        } catch (const DecodeError&) {
          return nullptr;
        }
      };
      organ_counts.push_back(
          {{"file", name}, {"line", i + 1}, {"generated", counted(g[i])}, {"truth", counted(t[i])}});
      pairs.push_back({g[i], t[i]});
    }
  }

  const BleuResult bleu = bleu4(pairs);
  const double rouge = rouge_l(pairs, {.swapped_variant = a.swapped_rouge});
  r.payload["pairs"] = pairs.size();
  r.payload["bleu4"] = bleu.score;
  r.payload["bleu4_display"] = fixed(bleu.score, 2);
  r.payload["per_n_precisions"] = bleu.precisions;
  r.payload["brevity_penalty"] = bleu.brevity_penalty;
  r.payload["rouge_l"] = rouge;
  r.payload["rouge_l_display"] = fixed(rouge, 4);

  const bool aligned = std::all_of(pairs.begin(), pairs.end(),
                                   [](const SequencePair& p) { return p.generated.size() == p.reference.size(); });
  if (aligned) {
    std::vector<TokenId> predicted, truth;
    for (const auto& p : pairs) {
      predicted.insert(predicted.end(), p.generated.ids.begin(), p.generated.ids.end());
      truth.insert(truth.end(), p.reference.ids.begin(), p.reference.ids.end());
    }
    const TeacherForcingScores tf = teacher_forcing_scores(predicted, truth);
    r.payload["accuracy"] = tf.accuracy;
    r.payload["weighted_f1"] = tf.weighted_f1;
  } else {
    r.payload["accuracy"] = nullptr;
    r.payload["weighted_f1"] = nullptr;
  }
  r.payload["organ_counts"] = organ_counts;

  Corpus gen_corpus, gt_corpus;
  for (const auto& p : pairs) {
    gen_corpus.sequences.push_back(p.generated);
    gt_corpus.sequences.push_back(p.reference);
  }
  for (Corpus* c : {&gen_corpus, &gt_corpus}) {
    for (const auto& s : c->sequences) {
      try {
        c->docs.push_back(detokenize(s, {.strict = false}).doc);
      } catch (const DecodeError&) {
        ++c->undecodable;
      }
    }
  }
  r.payload["undecodable_generated"] = gen_corpus.undecodable;
  r.payload["undecodable_truth"] = gt_corpus.undecodable;
  json wd = json::object();
  for (const std::string& name : parameter_names()) {
    if (name == "plant_age") continue;
    wd[name] = compare(name, ContextFilter::all, gen_corpus, gt_corpus, a.threshold, 0);
  }
  wd[kLeafInclination] = compare(kLeafInclination, ContextFilter::all, gen_corpus, gt_corpus, a.threshold, 0);
  r.payload["per_parameter_wd"] = wd;
}

std::vector<std::string> distcmp_names() {
  std::vector<std::string> names;
  for (const auto& n : parameter_names()) {
    if (n != "plant_age") names.push_back(n);
  }
  names.push_back(kLeafInclination);
  return names;
}

struct DistcmpArgs {
  std::string param;
  std::string gen;
  std::string gt;
  double threshold = kWdStarThreshold;
  int bins = 36;
  std::string context = "all";
};

void cmd_distcmp(const DistcmpArgs& a, Report& r) {
  const auto names = distcmp_names();
  if (std::find(names.begin(), names.end(), a.param) == names.end()) {
    std::string list;
    for (const auto& n : names) list += "\n  " + n;
    throw UsageError("unknown parameter '" + a.param + "'; valid names:" + list);
  }
  const ContextFilter filter = a.context == "unifoliate"   ? ContextFilter::unifoliate
                              : a.context == "trifoliate" ? ContextFilter::trifoliate
                                                          : ContextFilter::all;
  const Corpus gen = load_corpus(a.gen, r);
  const Corpus truth = load_corpus(a.gt, r);
  json j;
  j["parameter"] = a.param;
  j["context"] = a.context;
  j["threshold"] = a.threshold;
  j["undecodable_generated"] = gen.undecodable;
  j["undecodable_truth"] = truth.undecodable;
  const json cmp = compare(a.param, filter, gen, truth, a.threshold, a.bins);
  if (cmp["truth_count"].get<std::size_t>() == 0) {
    throw IoError(a.gt, "no values of " + a.param + " in the ground-truth corpus");
  }
  if (cmp["generated_count"].get<std::size_t>() == 0) {
    throw IoError(a.gen, "no values of " + a.param + " in the generated corpus");
  }
  j.update(cmp);
  r.payload = j;
}

void cmd_grid(const std::string& out, Report& r) {
  const QuantizationGrid& grid = default_grid();
  const std::string dump = dump_grid(grid);
  if (!out.empty()) {
    write_text(out, dump);
    r.output(out);
  }
  r.payload["size"] = grid.size();
  r.payload["first_id"] = kFirstParameterId;
  r.payload["last_id"] = kLastParameterId;
  r.payload["sha256"] = sha256_hex(dump);
  r.payload["values"] = std::vector<double>(grid.values().begin(), grid.values().end());
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Plant architecture tokenizer, generator and evaluator", "phytoken"};
  app.require_subcommand(1, 1);
  std::string report_path;

  GenerateArgs gen_args;
  auto* gen = app.add_subcommand("generate", "Generate a synthetic cowpea corpus with manifest");
  gen->add_option("--seeds", gen_args.seeds, "Number of seeds")->required()->check(CLI::PositiveNumber);
  gen->add_option("--first-seed", gen_args.first_seed, "First seed")->capture_default_str();
  gen->add_option("--ages", gen_args.ages, "Ages as A..B or a,b,c")->capture_default_str();
  gen->add_option("--azimuths", gen_args.azimuths, "View azimuths in degrees")->capture_default_str();
  gen->add_option("--config", gen_args.config, "Generator config (INI)")->check(CLI::ExistingFile);
  gen->add_option("--out", gen_args.out, "Output directory")->required();
  gen->add_option("--threads", gen_args.threads, "Worker threads (default PHYTOKEN_THREADS or all cores)");
  gen->add_option("--report", report_path, "Write the run report here instead of stdout");

  TokenizeArgs tok_args;
  auto* tok = app.add_subcommand("tokenize", "Append the token line of an XML plant to a token file");
  tok->add_option("--xml", tok_args.xml, "Input plant XML")->required()->check(CLI::ExistingFile);
  tok->add_option("--out", tok_args.out, "Token file (appended)")->required();
  tok->add_option("--meta", tok_args.meta, "Metadata override: width,height,fraction");
  tok->add_option("--azimuth", tok_args.azimuth, "View azimuth for geometry metadata")->capture_default_str();
  tok->add_option("--report", report_path, "Write the run report here instead of stdout");

  DetokenizeArgs detok_args;
  auto* detok = app.add_subcommand("detokenize", "Decode one token line to XML");
  detok->add_option("--tokens", detok_args.tokens, "Token file")->required()->check(CLI::ExistingFile);
  detok->add_option("--line", detok_args.line, "1-based line number")->capture_default_str()->check(
      CLI::PositiveNumber);
  detok->add_option("--out", detok_args.out, "Output XML")->required();
  detok->add_flag("--lenient", detok_args.lenient, "Repair undecodable parameters instead of failing");
  detok->add_option("--report", report_path, "Write the run report here instead of stdout");

  TraitsArgs traits_args;
  auto* traits = app.add_subcommand("traits", "Plant height, leaf count, leaf area and leaf-angle histogram");
  traits->add_option("--xml", traits_args.xml, "Input plant XML")->required()->check(CLI::ExistingFile);
  traits->add_option("--mesh", traits_args.mesh, "Also write an OBJ mesh");
  traits->add_option("--leaf-unit-area", traits_args.leaf_unit_area, "Leaf area at scale 1 (m^2)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  traits->add_option("--out,--report", report_path, "Write the report here instead of stdout");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Sequence metrics between aligned token corpora");
  eval->add_option("--gen", eval_args.gen, "Generated token directory")->required();
  eval->add_option("--gt", eval_args.gt, "Ground-truth token directory")->required();
  eval->add_flag("--rouge-swapped", eval_args.swapped_rouge, "ROUGE-L variant with swapped denominators and unsquared beta (reduces to LCS / reference length)");
  eval->add_option("--threshold", eval_args.threshold, "Normalized WD star threshold")->capture_default_str();
  eval->add_option("--out,--report", report_path, "Write the report here instead of stdout");

  DistcmpArgs dist_args;
  auto* dist = app.add_subcommand("distcmp", "Wasserstein comparison of one parameter between corpora");
  dist->add_option("--param", dist_args.param, "Parameter name or leaf_inclination")->required();
  dist->add_option("--gen", dist_args.gen, "Generated token directory")->required();
  dist->add_option("--gt", dist_args.gt, "Ground-truth token directory")->required();
  dist->add_option("--threshold", dist_args.threshold, "Normalized WD star threshold")->capture_default_str();
  dist->add_option("--bins", dist_args.bins, "Histogram bins")->capture_default_str()->check(CLI::PositiveNumber);
  dist->add_option("--context", dist_args.context, "all, unifoliate or trifoliate")
      ->capture_default_str()
      ->check(CLI::IsMember({"all", "unifoliate", "trifoliate"}));
  dist->add_option("--out,--report", report_path, "Write the report here instead of stdout");

  std::string grid_out;
  auto* grid = app.add_subcommand("grid", "Dump the quantization grid as 'id value' lines");
  grid->add_option("--out", grid_out, "Dump file");
  grid->add_option("--report", report_path, "Write the run report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  const auto started = std::chrono::steady_clock::now();
  Report report;
  try {
    if (gen->parsed()) {
      report.command = "generate";
      cmd_generate(gen_args, report);
    } else if (tok->parsed()) {
      report.command = "tokenize";
      cmd_tokenize(tok_args, report);
    } else if (detok->parsed()) {
      report.command = "detokenize";
      cmd_detokenize(detok_args, report);
    } else if (traits->parsed()) {
      report.command = "traits";
      cmd_traits(traits_args, report);
    } else if (eval->parsed()) {
      report.command = "eval";
      cmd_eval(eval_args, report);
    } else if (dist->parsed()) {
      report.command = "distcmp";
      cmd_distcmp(dist_args, report);
    } else if (grid->parsed()) {
      report.command = "grid";
      cmd_grid(grid_out, report);
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
    json j;
    j["command"] = report.command;
    j["inputs"] = report.inputs;
    j["outputs"] = report.outputs;
    j["payload"] = report.payload;
    j["wall_time_s"] = elapsed.count();
    const std::string text = j.dump(2) + "\n";
    if (report_path.empty()) {
      out << text;
    } else {
      write_text(report_path, text);
    }
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"phytoken"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace phytoken::cli
