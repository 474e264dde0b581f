#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "phytoken/grid.hpp"
#include "phytoken/plant.hpp"

namespace phytoken {

// Organ code N of an organ token 6*M + N.
enum class OrganCode : int {
  shoot = 0,
  internode = 1,
  petiole = 2,
  leaf_terminal = 3,
  leaf_lateral_left = 4,
  leaf_lateral_right = 5,
};

// Number of parameter tokens following an organ token: shoot 5, internode 4,
// petiole 5, leaf 4.
int arity(OrganCode code);

// 6 * order + code. Throws DomainError for order outside [0, 3] or code outside [0, 5].
TokenId organ_token_id(int order, int code);

inline bool is_organ_token(TokenId id) { return id >= 0 && id < kOrganIdCount; }
inline bool is_parameter_token(TokenId id) { return id >= kFirstParameterId && id <= kLastParameterId; }

struct TokenSequence {
  std::vector<TokenId> ids;

  std::size_t size() const { return ids.size(); }
  bool operator==(const TokenSequence&) const = default;
};

// Plant size information carried between the two META tokens.
struct PlantMetadata {
  double width_m = 0.0;
  double height_m = 0.0;
  double vegetation_fraction = 0.0;

  bool operator==(const PlantMetadata&) const = default;
};

// Throws DomainError unless all fields are finite, >= 0, and the fraction <= 1.
void validate(const PlantMetadata& meta);

// SOS META w h f META <body> EOS. Body organs follow document order; each
// organ token is followed by its parameters:
//   shoot     type_label parent_node_index base_pitch base_yaw base_roll
//   internode length radius pitch phyllotactic_angle
//   petiole   length radius pitch |curvature| leaflet_scale
//   leaf      scale pitch yaw roll
// Throws ValidationError for an invalid document, DomainError for invalid metadata.
TokenSequence tokenize(const PlantDoc& doc, const PlantMetadata& meta,
                       const QuantizationGrid& grid = default_grid());

struct DecodeOptions {
  // Strict decoding rejects parameters that cannot round-trip (shoot type not
  // 1 or 3, parent_node disagreeing with the positional attachment, negative
  // curvature magnitude, non-positive sizes). Lenient decoding repairs them
  // and records a warning instead.
  bool strict = true;
};

struct DecodedPlant {
  PlantDoc doc;
  PlantMetadata meta;
  std::vector<std::string> warnings;
};

// Inverse of tokenize. Shoot ids are assigned in document order, plant_age
// and base_position are not carried by tokens and come back as 0 / origin.
// Throws DecodeError with the offending token position.
DecodedPlant detokenize(const TokenSequence& seq, const DecodeOptions& options = {},
                        const QuantizationGrid& grid = default_grid());

// Checks SOS META p p p META (organ param^arity)+ EOS with the first body
// organ being the root shoot token 0. Throws DecodeError.
void validate_framing(const TokenSequence& seq);

// Counts organ tokens per branching order: shoots N=0, phytomers N=1,
// petioles N=2, leaves N in {3,4,5}. Requires a well-framed sequence.
OrganCounts count_organs(const TokenSequence& seq);

// Expected length of tokenize(doc, ...): SOS, META, three metadata values,
// META and EOS, plus (1 + arity) per organ.
std::size_t tokenized_length(const OrganCounts& counts);

// Token file format: one sequence per line, space-separated base-10 ids.
std::string format_token_line(const TokenSequence& seq);
TokenSequence parse_token_line(std::string_view line);
std::vector<TokenSequence> read_token_file(const std::filesystem::path& path);

}  // namespace phytoken
