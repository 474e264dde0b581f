#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace phytoken {

using TokenId = std::int32_t;

inline constexpr TokenId kOrganIdCount = 24;
inline constexpr TokenId kFirstParameterId = 24;
inline constexpr TokenId kLastParameterId = 222;
inline constexpr TokenId kSos = 223;
inline constexpr TokenId kMeta = 224;
inline constexpr TokenId kPad = 225;
inline constexpr TokenId kEos = 226;
inline constexpr TokenId kVocabularySize = 227;

inline constexpr std::size_t kGridSize = 199;
inline constexpr double kGridMin = -40.0;
inline constexpr double kGridMax = 360.0;

// The ordered set of float values a parameter token can denote. values()[i]
// is the value of token id 24 + i.
//
// Composition: the 2.5 degree angle grid over [-40, 360] (161 values), four
// ten-point decimal ladders over [1e-4, 1e-3], [1e-3, 1e-2], [1e-2, 1e-1] and
// [1e-1, 1] (37 distinct values once shared endpoints merge), and the
// constant 3.0. Decimal ladder points are computed as k / 10^e so that shared
// endpoints are bit-identical.
class QuantizationGrid {
 public:
  QuantizationGrid();

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  // Nearest grid value to clamp(v, -40, 360); ties go to the smaller value.
  // Throws DomainError for non-finite v.
  TokenId encode(double v) const;

  // Throws DomainError unless 24 <= id <= 222.
  double decode(TokenId id) const;

  // Half the gap between the two grid values bracketing clamp(v); zero on the
  // top grid value. |decode(encode(v)) - clamp(v)| never exceeds this.
  double quantization_bound(double v) const;

 private:
  std::vector<double> values_;
};

// Shared immutable grid; constructed on first use.
const QuantizationGrid& default_grid();

inline QuantizationGrid build_grid() { return QuantizationGrid(); }
inline TokenId encode_value(const QuantizationGrid& grid, double v) { return grid.encode(v); }
inline double decode_token(const QuantizationGrid& grid, TokenId id) { return grid.decode(id); }
inline TokenId encode_value(double v) { return default_grid().encode(v); }
inline double decode_token(TokenId id) { return default_grid().decode(id); }

// One "id value" pair per line, value printed with 17 significant digits.
std::string dump_grid(const QuantizationGrid& grid);

}  // namespace phytoken
