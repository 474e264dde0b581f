#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "phytoken/tokens.hpp"

namespace phytoken {

struct SequencePair {
  TokenSequence generated;
  TokenSequence reference;
};

struct BleuResult {
  double score = 0.0;  // percent
  std::array<double, 4> precisions{};
  std::array<std::int64_t, 4> matches{};
  std::array<std::int64_t, 4> totals{};
  double brevity_penalty = 0.0;
  std::int64_t generated_length = 0;
  std::int64_t reference_length = 0;
};

// Corpus BLEU-4: clipped n-gram counts pooled over all pairs, geometric mean
// of the four precisions, BP = min(1, exp(1 - ref_len / gen_len)). No
// smoothing; any zero precision gives score 0. Throws DomainError for an
// empty corpus or an empty generated sequence.
BleuResult bleu4(std::span<const SequencePair> corpus);

struct RougeOptions {
  // R = LCS / |gen|, P = LCS / |ref| and F = (1 + beta^2) R P / (R + beta P).
  // This reduces to LCS / |ref|. The standard F below is symmetric in R and P
  // when beta = P / R, so swapping the denominators alone would change nothing.
  bool swapped_variant = false;
};

std::size_t lcs_length(std::span<const TokenId> a, std::span<const TokenId> b);

// ROUGE-L F for one pair: R = LCS / |ref|, P = LCS / |gen|, beta = P / R,
// F = (1 + beta^2) R P / (R + beta^2 P); 0 when LCS = 0.
double rouge_l(const TokenSequence& generated, const TokenSequence& reference, const RougeOptions& options = {});

// Mean pair F. Throws DomainError for an empty corpus or an empty sequence.
double rouge_l(std::span<const SequencePair> corpus, const RougeOptions& options = {});

struct TeacherForcingScores {
  double accuracy = 0.0;
  double weighted_f1 = 0.0;
  std::int64_t scored = 0;  // positions whose true token is not PAD
};

// Next-token scores over positions whose true token is not PAD. Per-class F1
// from one-vs-rest counts, weighted by true-class support. Throws DomainError
// on length mismatch, ids outside [0, 226], or no scorable position.
TeacherForcingScores teacher_forcing_scores(std::span<const TokenId> predicted, std::span<const TokenId> truth);

// Integral of |F_a - F_b| over the real line for the two empirical CDFs.
// Throws DomainError for empty or non-finite input.
double wasserstein_1d(std::span<const double> a, std::span<const double> b);

inline constexpr double kWdStarThreshold = 0.05;

// wasserstein_1d / range_width. Throws DomainError unless range_width > 0.
double normalized_wd(std::span<const double> a, std::span<const double> b, double range_width);

inline bool wd_starred(double normalized, double threshold = kWdStarThreshold) { return normalized < threshold; }

}  // namespace phytoken
