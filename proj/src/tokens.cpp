#include "phytoken/tokens.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "phytoken/errors.hpp"

namespace phytoken {

namespace {

constexpr std::size_t kHeaderLength = 6;  // SOS META w h f META

class Emitter {
 public:
  Emitter(const QuantizationGrid& grid, std::vector<TokenId>& out) : grid_(grid), out_(out) {}

  void organ(int order, OrganCode code) { out_.push_back(organ_token_id(order, static_cast<int>(code))); }
  void value(double v) { out_.push_back(grid_.encode(v)); }

  void shoot(const Shoot& s) {
    organ(s.order, OrganCode::shoot);
    value(static_cast<double>(s.type));
    value(static_cast<double>(s.parent_node_index));
    value(s.base_pitch);
    value(s.base_yaw);
    value(s.base_roll);
    for (const auto& p : s.phytomers) {
      organ(s.order, OrganCode::internode);
      value(p.internode.length);
      value(p.internode.radius);
      value(p.internode.pitch);
      value(p.internode.phyllotactic_angle);
      for (std::size_t j = 0; j < p.petioles.size(); ++j) {
        petiole(s.order, p.petioles[j]);
        if (j == 0) {
          for (const auto& child : p.child_shoots) {
            shoot(child);
          }
        }
      }
    }
  }

 private:
  void petiole(int order, const Petiole& p) {
    organ(order, OrganCode::petiole);
    value(p.length);
    value(p.radius);
    value(p.pitch);
    value(std::abs(p.curvature));
    value(p.leaflet_scale);
    for (const auto& leaf : p.leaves) {
      organ(order, static_cast<OrganCode>(leaf.position));
      value(leaf.scale);
      value(leaf.pitch);
      value(leaf.yaw);
      value(leaf.roll);
    }
  }

  const QuantizationGrid& grid_;
  std::vector<TokenId>& out_;
};

// Walks the body of a framed sequence and rebuilds the shoot tree. Accepts
// exactly the organ orders tokenize can produce, so re-tokenizing an accepted
// sequence reproduces it.
class TreeDecoder {
 public:
  TreeDecoder(const TokenSequence& seq, const DecodeOptions& options, const QuantizationGrid& grid,
              DecodedPlant& out)
      : ids_(seq.ids), options_(options), grid_(grid), out_(out) {}

  void run() {
    const std::size_t end = ids_.size() - 1;  // EOS
    std::size_t pos = kHeaderLength;
    while (pos < end) {
      const TokenId token = ids_[pos];
      const int order = token / 6;
      const auto code = static_cast<OrganCode>(token % 6);
      switch (code) {
        case OrganCode::shoot:
          on_shoot(pos, order);
          break;
        case OrganCode::internode:
          on_internode(pos, order);
          break;
        case OrganCode::petiole:
          on_petiole(pos, order);
          break;
        default:
          on_leaf(pos, order, code);
          break;
      }
      pos += 1 + static_cast<std::size_t>(arity(code));
    }
    close_petiole();
    if (expecting_petiole_) {
      fail(end, "internode without a petiole");
    }
  }

 private:
  struct Level {
    Shoot* shoot = nullptr;
    Phytomer* phytomer = nullptr;
    int phytomer_index = -1;
  };

  [[noreturn]] void fail(std::size_t pos, const std::string& message) const {
    throw DecodeError(pos, message);
  }

  void warn(std::size_t pos, const std::string& message) {
    out_.warnings.push_back("token " + std::to_string(pos) + ": " + message);
  }

  double param(std::size_t organ_pos, int index) const {
    return grid_.decode(ids_[organ_pos + 1 + static_cast<std::size_t>(index)]);
  }

  double positive_param(std::size_t organ_pos, int index, const char* name) {
    const double v = param(organ_pos, index);
    if (v > 0.0) {
      return v;
    }
    const std::size_t at = organ_pos + 1 + static_cast<std::size_t>(index);
    if (options_.strict) {
      fail(at, std::string(name) + " must be positive, token decodes to " + std::to_string(v));
    }
    warn(at, std::string(name) + " decodes to " + std::to_string(v) + ", replaced by the smallest positive grid value");
    return grid_.decode(grid_.encode(1e-4));
  }

  void clear_from(int order) {
    for (int m = order; m <= kMaxBranchingOrder; ++m) {
      levels_[static_cast<std::size_t>(m)] = Level{};
    }
  }

  // A petiole is closed by the next non-leaf organ token or by EOS.
  void close_petiole() {
    if (open_petiole_ == nullptr) {
      return;
    }
    const auto n = open_petiole_->leaves.size();
    if (n != 1 && n != 3) {
      fail(open_petiole_pos_, "petiole carries " + std::to_string(n) + " leaves, expected 1 or 3");
    }
    open_petiole_ = nullptr;
  }

  void before_structural(std::size_t pos, const char* what) {
    close_petiole();
    if (expecting_petiole_) {
      fail(pos, std::string("internode must be followed by a petiole, found ") + what);
    }
  }

  void on_shoot(std::size_t pos, int order) {
    before_structural(pos, "a shoot");
    Shoot shoot;
    shoot.order = order;
    shoot.id = next_shoot_id_++;

    const double type = param(pos, 0);
    if (type == 1.0 || type == 3.0) {
      shoot.type = static_cast<ShootType>(static_cast<int>(type));
    } else if (options_.strict) {
      fail(pos + 1, "shoot type decodes to " + std::to_string(type) + ", expected 1 or 3");
    } else {
      shoot.type = type < 2.0 ? ShootType::unifoliate : ShootType::trifoliate;
      warn(pos + 1, "shoot type " + std::to_string(type) + " rounded to " +
                        std::to_string(static_cast<int>(shoot.type)));
    }
    shoot.base_pitch = param(pos, 2);
    shoot.base_yaw = param(pos, 3);
    shoot.base_roll = param(pos, 4);

    int attach_index = 0;
    Shoot* placed = nullptr;
    if (order == 0) {
      if (have_root_) {
        fail(pos, "second root shoot");
      }
      have_root_ = true;
      out_.doc.root_shoot = std::move(shoot);
      placed = &out_.doc.root_shoot;
    } else {
      Level& parent = levels_[static_cast<std::size_t>(order - 1)];
      if (parent.phytomer == nullptr) {
        fail(pos, "order-" + std::to_string(order) + " shoot has no order-" +
                      std::to_string(order - 1) + " internode to attach to");
      }
      if (parent.phytomer->petioles.size() != 1) {
        fail(pos, "child shoot must follow the first petiole of its node");
      }
      attach_index = parent.phytomer_index;
      parent.phytomer->child_shoots.push_back(std::move(shoot));
      placed = &parent.phytomer->child_shoots.back();
    }

    placed->parent_node_index = attach_index;
    const TokenId stated = ids_[pos + 2];
    if (stated != grid_.encode(static_cast<double>(attach_index))) {
      const std::string message = "parent_node token decodes to " + std::to_string(grid_.decode(stated)) +
                                  " but the shoot attaches to node " + std::to_string(attach_index);
      if (options_.strict) {
        fail(pos + 2, message);
      }
      warn(pos + 2, message + "; positional attachment kept");
    }

    clear_from(order);
    levels_[static_cast<std::size_t>(order)].shoot = placed;
  }

  void on_internode(std::size_t pos, int order) {
    before_structural(pos, "an internode");
    Level& level = levels_[static_cast<std::size_t>(order)];
    if (level.shoot == nullptr) {
      fail(pos, "order-" + std::to_string(order) + " internode without an open order-" +
                    std::to_string(order) + " shoot");
    }
    Phytomer phytomer;
    phytomer.internode.length = positive_param(pos, 0, "internode length");
    phytomer.internode.radius = positive_param(pos, 1, "internode radius");
    phytomer.internode.pitch = param(pos, 2);
    phytomer.internode.phyllotactic_angle = param(pos, 3);
    level.shoot->phytomers.push_back(std::move(phytomer));
    level.phytomer = &level.shoot->phytomers.back();
    level.phytomer_index = static_cast<int>(level.shoot->phytomers.size()) - 1;
    clear_from(order + 1);
    expecting_petiole_ = true;
    expected_petiole_order_ = order;
  }

  void on_petiole(std::size_t pos, int order) {
    close_petiole();
    if (expecting_petiole_ && expected_petiole_order_ != order) {
      fail(pos, "internode must be followed by a petiole of the same order");
    }
    expecting_petiole_ = false;
    Level& level = levels_[static_cast<std::size_t>(order)];
    if (level.phytomer == nullptr) {
      fail(pos, "order-" + std::to_string(order) + " petiole without an open order-" +
                    std::to_string(order) + " internode");
    }
    Petiole petiole;
    petiole.length = positive_param(pos, 0, "petiole length");
    petiole.radius = positive_param(pos, 1, "petiole radius");
    petiole.pitch = param(pos, 2);
    const double magnitude = param(pos, 3);
    if (magnitude < 0.0) {
      if (options_.strict) {
        fail(pos + 4, "curvature magnitude decodes to a negative value");
      }
      warn(pos + 4, "negative curvature magnitude, sign dropped");
    }
    petiole.curvature = magnitude == 0.0 ? 0.0 : -std::abs(magnitude);
    petiole.leaflet_scale = param(pos, 4);
    level.phytomer->petioles.push_back(std::move(petiole));
    open_petiole_ = &level.phytomer->petioles.back();
    open_petiole_pos_ = pos;
    open_petiole_order_ = order;
    clear_from(order + 1);
  }

  void on_leaf(std::size_t pos, int order, OrganCode code) {
    if (expecting_petiole_) {
      fail(pos, "internode must be followed by a petiole, found a leaf");
    }
    if (open_petiole_ == nullptr || open_petiole_order_ != order) {
      fail(pos, "order-" + std::to_string(order) + " leaf does not follow an order-" +
                    std::to_string(order) + " petiole");
    }
    if (open_petiole_->leaves.size() == 3) {
      fail(pos, "petiole carries more than 3 leaves");
    }
    Leaf leaf;
    leaf.position = static_cast<LeafPosition>(static_cast<int>(code));
    leaf.scale = positive_param(pos, 0, "leaf scale");
    leaf.pitch = param(pos, 1);
    leaf.yaw = param(pos, 2);
    leaf.roll = param(pos, 3);
    open_petiole_->leaves.push_back(leaf);
  }

  const std::vector<TokenId>& ids_;
  const DecodeOptions& options_;
  const QuantizationGrid& grid_;
  DecodedPlant& out_;

  std::array<Level, kMaxBranchingOrder + 1> levels_{};
  Petiole* open_petiole_ = nullptr;
  std::size_t open_petiole_pos_ = 0;
  int open_petiole_order_ = -1;
  bool expecting_petiole_ = false;
  int expected_petiole_order_ = -1;
  bool have_root_ = false;
  int next_shoot_id_ = 0;
};

double metadata_value(const TokenSequence& seq, std::size_t pos, const DecodeOptions& options,
                      const QuantizationGrid& grid, DecodedPlant& out, double upper) {
  double v = grid.decode(seq.ids[pos]);
  if (v >= 0.0 && v <= upper) {
    return v;
  }
  if (options.strict) {
    throw DecodeError(pos, "metadata value " + std::to_string(v) + " out of range");
  }
  const double clamped = std::clamp(v, 0.0, upper);
  out.warnings.push_back("token " + std::to_string(pos) + ": metadata value clamped");
  // Clamping to a non-grid value would break re-encoding; snap onto the grid.
  return grid.decode(grid.encode(clamped));
}

}  // namespace

int arity(OrganCode code) {
  switch (code) {
    case OrganCode::shoot:
    case OrganCode::petiole:
      return 5;
    case OrganCode::internode:
    case OrganCode::leaf_terminal:
    case OrganCode::leaf_lateral_left:
    case OrganCode::leaf_lateral_right:
      return 4;
  }
  throw DomainError("unknown organ code " + std::to_string(static_cast<int>(code)));
}

TokenId organ_token_id(int order, int code) {
  if (order < 0 || order > kMaxBranchingOrder) {
    throw DomainError("branching order " + std::to_string(order) + " outside [0, 3]");
  }
  if (code < 0 || code > 5) {
    throw DomainError("organ code " + std::to_string(code) + " outside [0, 5]");
  }
  return static_cast<TokenId>(6 * order + code);
}

void validate(const PlantMetadata& meta) {
  const auto ok = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (!ok(meta.width_m) || !ok(meta.height_m) || !ok(meta.vegetation_fraction) ||
      meta.vegetation_fraction > 1.0) {
    throw DomainError("plant metadata must be finite and non-negative with vegetation fraction <= 1");
  }
}

TokenSequence tokenize(const PlantDoc& doc, const PlantMetadata& meta, const QuantizationGrid& grid) {
  validate(doc);
  validate(meta);
  TokenSequence seq;
  seq.ids.reserve(tokenized_length(count_organs(doc)));
  Emitter emit(grid, seq.ids);
  seq.ids.push_back(kSos);
  seq.ids.push_back(kMeta);
  emit.value(meta.width_m);
  emit.value(meta.height_m);
  emit.value(meta.vegetation_fraction);
  seq.ids.push_back(kMeta);
  emit.shoot(doc.root_shoot);
  seq.ids.push_back(kEos);
  return seq;
}

void validate_framing(const TokenSequence& seq) {
  const auto& ids = seq.ids;
  const auto expect = [&](std::size_t pos, TokenId id, const char* name) {
    if (pos >= ids.size()) {
      throw DecodeError(pos, std::string("sequence ends before ") + name);
    }
    if (ids[pos] != id) {
      throw DecodeError(pos, std::string("expected ") + name + ", found " + std::to_string(ids[pos]));
    }
  };
  const auto expect_parameter = [&](std::size_t pos) {
    if (pos >= ids.size()) {
      throw DecodeError(pos, "sequence ends inside a parameter list (missing EOS)");
    }
    if (!is_parameter_token(ids[pos])) {
      throw DecodeError(pos, "expected a parameter token, found " + std::to_string(ids[pos]));
    }
  };

  expect(0, kSos, "SOS");
  expect(1, kMeta, "META");
  for (std::size_t pos = 2; pos < 5; ++pos) {
    expect_parameter(pos);
  }
  expect(5, kMeta, "META");

  std::size_t pos = kHeaderLength;
  bool first = true;
  while (true) {
    if (pos >= ids.size()) {
      throw DecodeError(pos, "missing EOS");
    }
    const TokenId token = ids[pos];
    if (token == kEos) {
      if (first) {
        throw DecodeError(pos, "empty body");
      }
      if (pos + 1 != ids.size()) {
        throw DecodeError(pos + 1, "tokens after EOS");
      }
      return;
    }
    if (token < 0 || token >= kVocabularySize) {
      throw DecodeError(pos, "unknown token id " + std::to_string(token));
    }
    if (!is_organ_token(token)) {
      throw DecodeError(pos, "expected an organ token, found " + std::to_string(token) +
                                 (is_parameter_token(token) ? " (arity mismatch)" : ""));
    }
    if (first && token != 0) {
      throw DecodeError(pos, "body must start with the root shoot token 0");
    }
    first = false;
    const int n = arity(static_cast<OrganCode>(token % 6));
    for (int k = 1; k <= n; ++k) {
      expect_parameter(pos + static_cast<std::size_t>(k));
    }
    pos += 1 + static_cast<std::size_t>(n);
  }
}

DecodedPlant detokenize(const TokenSequence& seq, const DecodeOptions& options,
                        const QuantizationGrid& grid) {
  validate_framing(seq);
  DecodedPlant out;
  out.meta.width_m = metadata_value(seq, 2, options, grid, out, kGridMax);
  out.meta.height_m = metadata_value(seq, 3, options, grid, out, kGridMax);
  out.meta.vegetation_fraction = metadata_value(seq, 4, options, grid, out, 1.0);
  TreeDecoder(seq, options, grid, out).run();
  validate(out.doc);
  return out;
}

OrganCounts count_organs(const TokenSequence& seq) {
  validate_framing(seq);
  OrganCounts counts;
  std::size_t pos = kHeaderLength;
  while (seq.ids[pos] != kEos) {
    const TokenId token = seq.ids[pos];
    const auto order = static_cast<std::size_t>(token / 6);
    const int code = token % 6;
    switch (code) {
      case 0:
        counts.shoots[order] += 1;
        break;
      case 1:
        counts.phytomers[order] += 1;
        break;
      case 2:
        counts.petioles[order] += 1;
        break;
      default:
        counts.leaves[order] += 1;
        break;
    }
    pos += 1 + static_cast<std::size_t>(arity(static_cast<OrganCode>(code)));
  }
  return counts;
}

std::size_t tokenized_length(const OrganCounts& counts) {
  const auto organ = [](std::int64_t n, OrganCode code) {
    return static_cast<std::size_t>(n) * (1 + static_cast<std::size_t>(arity(code)));
  };
  return kHeaderLength + 1 + organ(counts.total_shoots(), OrganCode::shoot) +
         organ(counts.total_phytomers(), OrganCode::internode) +
         organ(counts.total_petioles(), OrganCode::petiole) +
         organ(counts.total_leaves(), OrganCode::leaf_terminal);
}

std::string format_token_line(const TokenSequence& seq) {
  std::string out;
  out.reserve(seq.ids.size() * 4);
  for (std::size_t i = 0; i < seq.ids.size(); ++i) {
    if (i > 0) {
      out += ' ';
    }
    out += std::to_string(seq.ids[i]);
  }
  out += '\n';
  return out;
}

TokenSequence parse_token_line(std::string_view line) {
  TokenSequence seq;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++i;
      continue;
    }
    TokenId id = 0;
    const auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + line.size(), id);
    const auto consumed = static_cast<std::size_t>(ptr - (line.data() + i));
    const bool delimited = i + consumed == line.size() || line[i + consumed] == ' ' ||
                           line[i + consumed] == '\t' || line[i + consumed] == '\r' ||
                           line[i + consumed] == '\n';
    if (ec != std::errc() || !delimited) {
      throw DecodeError(seq.ids.size(), "not a base-10 token id near '" +
                                            std::string(line.substr(i, 16)) + "'");
    }
    seq.ids.push_back(id);
    i += consumed;
  }
  return seq;
}

std::vector<TokenSequence> read_token_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError(path.string(), "cannot open token file");
  }
  std::vector<TokenSequence> sequences;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    try {
      sequences.push_back(parse_token_line(line));
    } catch (const DecodeError& e) {
      throw IoError(path.string(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return sequences;
}

}  // namespace phytoken
