#include "phytoken/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "phytoken/errors.hpp"

namespace phytoken {

QuantizationGrid::QuantizationGrid() {
  values_.reserve(kGridSize + 8);
  for (int k = 0; k <= 160; ++k) {
    values_.push_back(kGridMin + 2.5 * k);
  }
  // Ladder [10^-e, 10^(1-e)] has ten evenly spaced points k * 10^-e, k = 1..10.
  for (int e = 4; e >= 1; --e) {
    const double denominator = std::pow(10.0, e);
    for (int k = 1; k <= 10; ++k) {
      values_.push_back(k / denominator);
    }
  }
  values_.push_back(3.0);

  std::sort(values_.begin(), values_.end());
  values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
  if (values_.size() != kGridSize) {
    throw Error("quantization grid has " + std::to_string(values_.size()) + " values, expected 199");
  }
}

TokenId QuantizationGrid::encode(double v) const {
  if (!std::isfinite(v)) {
    throw DomainError("cannot quantize non-finite value");
  }
  const double c = std::clamp(v, kGridMin, kGridMax);
  const auto it = std::lower_bound(values_.begin(), values_.end(), c);
  auto index = static_cast<std::size_t>(it - values_.begin());
  if (index == values_.size()) {
    index = values_.size() - 1;
  } else if (index > 0 && c - values_[index - 1] <= values_[index] - c) {
    index -= 1;
  }
  return kFirstParameterId + static_cast<TokenId>(index);
}

double QuantizationGrid::decode(TokenId id) const {
  if (id < kFirstParameterId || id > kLastParameterId) {
    throw DomainError("token id " + std::to_string(id) + " is not a parameter token");
  }
  return values_[static_cast<std::size_t>(id - kFirstParameterId)];
}

double QuantizationGrid::quantization_bound(double v) const {
  const double c = std::clamp(v, kGridMin, kGridMax);
  const auto upper = std::upper_bound(values_.begin(), values_.end(), c);
  if (upper == values_.end()) {
    return 0.0;
  }
  return (*upper - *(upper - 1)) / 2.0;
}

const QuantizationGrid& default_grid() {
  static const QuantizationGrid grid;
  return grid;
}

std::string dump_grid(const QuantizationGrid& grid) {
  std::string out;
  char line[64];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::snprintf(line, sizeof(line), "%d %.17g\n", kFirstParameterId + static_cast<int>(i),
                  grid.values()[i]);
    out += line;
  }
  return out;
}

}  // namespace phytoken
