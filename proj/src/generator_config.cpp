#include "phytoken/generator_config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "phytoken/errors.hpp"
#include "phytoken/xml.hpp"

namespace phytoken {

namespace {

// Rows every generator run needs.
constexpr const char* kRequiredRows[] = {
    "base_rotation_pitch", "base_rotation_yaw", "base_rotation_roll",
    "plant_age",           "shoot_type_label",  "shoot_base_pitch",
    "shoot_base_yaw",      "shoot_base_roll",   "internode_length",
    "internode_radius",    "internode_pitch",   "internode_phyllotactic_angle",
    "petiole_length",      "petiole_radius",    "petiole_pitch",
    "petiole_curvature",   "leaflet_scale",     "leaf_scale",
    "leaf_pitch",          "leaf_yaw",          "leaf_roll",
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view s, std::string_view context) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw DomainError("bad number '" + std::string(s) + "' in " + std::string(context));
  }
  return v;
}

ParameterRow both(Distribution d, std::string units) { return {d, d, std::move(units)}; }

ParameterRow split(Distribution unifoliate, Distribution trifoliate, std::string units) {
  return {unifoliate, trifoliate, std::move(units)};
}

}  // namespace

double Distribution::sample(KeyedStream& stream) const {
  switch (kind) {
    case Kind::constant:
      return a;
    case Kind::uniform:
      return a + (b - a) * stream.uniform();
    case Kind::normal:
      return a + b * stream.normal();
  }
  return a;
}

std::pair<double, double> Distribution::support() const {
  switch (kind) {
    case Kind::constant:
      return {a, a};
    case Kind::uniform:
      return {a, b};
    case Kind::normal:
      return {a - 3.0 * b, a + 3.0 * b};
  }
  return {a, a};
}

std::string Distribution::to_string() const {
  auto num = [](double v) {
    std::string s = format_decimal(v);
    if (s.size() > 2 && s.compare(s.size() - 2, 2, ".0") == 0) s.resize(s.size() - 2);
    return s;
  };
  switch (kind) {
    case Kind::constant:
      return "Constant(" + num(a) + ")";
    case Kind::uniform:
      return "Uniform(" + num(a) + ", " + num(b) + ")";
    case Kind::normal:
      return "Normal(" + num(a) + ", " + num(b) + ")";
  }
  return {};
}

Distribution parse_distribution(std::string_view text) {
  const std::string_view s = trim(text);
  const auto open = s.find('(');
  const auto close = s.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open ||
      !trim(s.substr(close + 1)).empty()) {
    throw DomainError("bad distribution '" + std::string(s) + "'");
  }
  const std::string_view name = trim(s.substr(0, open));
  const std::string_view args = s.substr(open + 1, close - open - 1);
  const auto comma = args.find(',');
  if (name == "Constant") {
    if (comma != std::string_view::npos) throw DomainError("Constant takes one argument");
    return Distribution::constant(parse_number(args, s));
  }
  if (comma == std::string_view::npos || args.find(',', comma + 1) != std::string_view::npos) {
    throw DomainError(std::string(name) + " takes two arguments");
  }
  const double first = parse_number(args.substr(0, comma), s);
  const double second = parse_number(args.substr(comma + 1), s);
  if (name == "Uniform") return Distribution::uniform(first, second);
  if (name == "Normal") return Distribution::normal(first, second);
  throw DomainError("unknown distribution '" + std::string(name) + "'");
}

const Distribution& GeneratorConfig::distribution(std::string_view name, ShootType context) const {
  const auto it = parameters.find(name);
  if (it == parameters.end()) {
    throw DomainError("no parameter row '" + std::string(name) + "'");
  }
  const auto& slot = context == ShootType::unifoliate ? it->second.unifoliate : it->second.trifoliate;
  if (!slot) {
    throw DomainError("parameter '" + std::string(name) + "' has no " +
                      (context == ShootType::unifoliate ? "unifoliate" : "trifoliate") + " value");
  }
  return *slot;
}

void GeneratorConfig::validate() const {
  if (rng != "splitmix64") {
    throw DomainError("unsupported rng '" + rng + "'");
  }
  for (const char* name : kRequiredRows) {
    distribution(name, ShootType::unifoliate);
    distribution(name, ShootType::trifoliate);
  }
  for (const auto& [name, row] : parameters) {
    for (const auto& slot : {row.unifoliate, row.trifoliate}) {
      if (!slot) continue;
      if (slot->kind == Distribution::Kind::uniform && slot->b < slot->a) {
        throw DomainError(name + ": uniform upper bound below lower bound");
      }
      if (slot->kind == Distribution::Kind::normal && slot->b < 0.0) {
        throw DomainError(name + ": negative standard deviation");
      }
    }
  }
  const GrowthControls& g = growth;
  if (!(g.phytomer_emergence_interval_days > 0.0)) {
    throw DomainError("phytomer_emergence_interval_days must be > 0");
  }
  if (!(g.lateral_bud_break_probability >= 0.0 && g.lateral_bud_break_probability <= 1.0)) {
    throw DomainError("lateral_bud_break_probability must be in [0, 1]");
  }
  if (!(g.lateral_bud_break_age_days >= 0.0)) {
    throw DomainError("lateral_bud_break_age_days must be >= 0");
  }
  if (g.max_order < 0 || g.max_order > kMaxBranchingOrder) {
    throw DomainError("max_order must be in [0, 3]");
  }
  if (g.max_phytomers_per_shoot < 1) {
    throw DomainError("max_phytomers_per_shoot must be >= 1");
  }
  if (!(g.internode_target_length > 0.0) || !(g.internode_target_radius > 0.0)) {
    throw DomainError("internode targets must be > 0");
  }
  if (!(g.elongation_rate_per_day > 0.0)) {
    throw DomainError("elongation_rate_per_day must be > 0");
  }
  if (!std::isfinite(g.elongation_midpoint_days)) {
    throw DomainError("elongation_midpoint_days must be finite");
  }
}

GeneratorConfig default_generator_config() {
  using D = Distribution;
  GeneratorConfig cfg;
  auto& p = cfg.parameters;
  p["base_rotation_pitch"] = both(D::uniform(0, 10), "deg");
  p["base_rotation_yaw"] = both(D::uniform(0, 360), "deg");
  p["base_rotation_roll"] = both(D::uniform(0, 360), "deg");
  p["plant_age"] = both(D::uniform(0, 39), "days");
  p["shoot_type_label"] = split(D::constant(1), D::constant(3), "index");
  p["shoot_base_pitch"] = split(D::constant(40), D::uniform(40, 60), "deg");
  p["shoot_base_yaw"] = split(D::uniform(0, 360), D::uniform(-20, 20), "deg");
  p["shoot_base_roll"] = both(D::constant(90), "deg");
  p["internode_length"] = both(D::constant(0.002), "m");
  p["internode_radius"] = both(D::constant(0.0015), "m");
  p["internode_pitch"] = split(D::constant(0), D::constant(20), "deg");
  p["internode_phyllotactic_angle"] = both(D::uniform(145, 215), "deg");
  p["petiole_length"] = split(D::constant(0.0004), D::uniform(0.06, 0.08), "m");
  p["petiole_radius"] = split(D::constant(0.0001), D::constant(0.0018), "m");
  p["petiole_pitch"] = split(D::uniform(60, 80), D::uniform(45, 60), "deg");
  p["petiole_curvature"] = split(D::constant(0), D::uniform(-200, -50), "deg");
  p["leaflet_scale"] = split(D::constant(1), D::constant(0.9), "");
  p["leaf_scale"] = split(D::constant(0.02), D::uniform(0.09, 0.12), "");
  p["leaf_pitch"] = split(D::uniform(-10, 10), D::normal(45, 20), "deg");
  p["leaf_yaw"] = split(D::constant(0), D::constant(10), "deg");
  p["leaf_roll"] = both(D::constant(-15), "deg");
  return cfg;
}

std::pair<double, double> parameter_support(const GeneratorConfig& cfg, std::string_view name,
                                            ContextFilter filter) {
  const auto it = cfg.parameters.find(name);
  if (it == cfg.parameters.end()) throw DomainError("no parameter row '" + std::string(name) + "'");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  auto add = [&](const std::optional<Distribution>& slot) {
    if (!slot) return;
    const auto [a, b] = slot->support();
    lo = std::min(lo, a);
    hi = std::max(hi, b);
  };
  if (filter != ContextFilter::trifoliate) add(it->second.unifoliate);
  if (filter != ContextFilter::unifoliate) add(it->second.trifoliate);
  if (lo > hi) throw DomainError("parameter '" + std::string(name) + "' has no value for this context");
  return {lo, hi};
}

GeneratorConfig parse_generator_config(std::string_view text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw DomainError("config line " + std::to_string(e.line()) + ": " + e.message());
  }

  GeneratorConfig cfg;
  for (const auto& [section, body] : tree) {
    if (section == "generator") {
      for (const auto& [key, value] : body) {
        if (key != "rng") throw DomainError("unknown key generator." + key);
        cfg.rng = std::string(trim(value.data()));
      }
    } else if (section == "growth") {
      GrowthControls& g = cfg.growth;
      for (const auto& [key, value] : body) {
        const std::string ctx = "growth." + key;
        const double v = parse_number(value.data(), ctx);
        auto as_int = [&] {
          if (v != std::floor(v)) throw DomainError(ctx + " must be an integer");
          return static_cast<int>(v);
        };
        if (key == "phytomer_emergence_interval_days") g.phytomer_emergence_interval_days = v;
        else if (key == "lateral_bud_break_probability") g.lateral_bud_break_probability = v;
        else if (key == "lateral_bud_break_age_days") g.lateral_bud_break_age_days = v;
        else if (key == "max_order") g.max_order = as_int();
        else if (key == "max_phytomers_per_shoot") g.max_phytomers_per_shoot = as_int();
        else if (key == "internode_target_length") g.internode_target_length = v;
        else if (key == "internode_target_radius") g.internode_target_radius = v;
        else if (key == "elongation_rate_per_day") g.elongation_rate_per_day = v;
        else if (key == "elongation_midpoint_days") g.elongation_midpoint_days = v;
        else throw DomainError("unknown key " + ctx);
      }
    } else if (section == "parameters") {
      for (const auto& [key, value] : body) {
        std::string name = key;
        int slots = 3;  // bit 0 unifoliate, bit 1 trifoliate
        if (const auto dot = key.find('.'); dot != std::string::npos) {
          name = key.substr(0, dot);
          const std::string ctx = key.substr(dot + 1);
          if (ctx == "unifoliate") slots = 1;
          else if (ctx == "trifoliate") slots = 2;
          else throw DomainError("unknown context '" + ctx + "' in " + key);
        }
        const std::string_view v = trim(value.data());
        const auto close = v.rfind(')');
        if (close == std::string_view::npos) throw DomainError("bad distribution for " + key);
        const Distribution d = parse_distribution(v.substr(0, close + 1));
        ParameterRow& row = cfg.parameters[name];
        if (slots & 1) row.unifoliate = d;
        if (slots & 2) row.trifoliate = d;
        const std::string units(trim(v.substr(close + 1)));
        if (!units.empty()) row.units = units;
      }
    } else {
      throw DomainError("unknown config section [" + section + "]");
    }
  }
  cfg.validate();
  return cfg;
}

GeneratorConfig load_generator_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_generator_config(buffer.str());
}

std::string format_generator_config(const GeneratorConfig& cfg) {
  std::ostringstream out;
  out << "[generator]\nrng = " << cfg.rng << "\n\n[growth]\n";
  const GrowthControls& g = cfg.growth;
  out << "phytomer_emergence_interval_days = " << format_decimal(g.phytomer_emergence_interval_days) << "\n"
      << "lateral_bud_break_probability = " << format_decimal(g.lateral_bud_break_probability) << "\n"
      << "lateral_bud_break_age_days = " << format_decimal(g.lateral_bud_break_age_days) << "\n"
      << "max_order = " << g.max_order << "\n"
      << "max_phytomers_per_shoot = " << g.max_phytomers_per_shoot << "\n"
      << "internode_target_length = " << format_decimal(g.internode_target_length) << "\n"
      << "internode_target_radius = " << format_decimal(g.internode_target_radius) << "\n"
      << "elongation_rate_per_day = " << format_decimal(g.elongation_rate_per_day) << "\n"
      << "elongation_midpoint_days = " << format_decimal(g.elongation_midpoint_days) << "\n";
  out << "\n[parameters]\n";
  for (const auto& [name, row] : cfg.parameters) {
    const std::string units = row.units.empty() ? "" : " " + row.units;
    if (row.unifoliate && row.trifoliate && *row.unifoliate == *row.trifoliate) {
      out << name << " = " << row.unifoliate->to_string() << units << "\n";
      continue;
    }
    if (row.unifoliate) out << name << ".unifoliate = " << row.unifoliate->to_string() << units << "\n";
    if (row.trifoliate) out << name << ".trifoliate = " << row.trifoliate->to_string() << units << "\n";
  }
  return out.str();
}

}  // namespace phytoken
