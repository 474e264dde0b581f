#include "phytoken/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include "phytoken/errors.hpp"

namespace phytoken {

namespace {

constexpr int kMaxN = 4;

// n-grams of up to four ids, 16 bits each.
std::uint64_t pack(std::span<const TokenId> ids, std::size_t at, int n) {
  std::uint64_t key = 0;
  for (int k = 0; k < n; ++k) key = (key << 16) | static_cast<std::uint16_t>(ids[at + k]);
  return key;
}

void check_ids(std::span<const TokenId> ids) {
  for (TokenId id : ids) {
    if (id < 0 || id > 0xFFFF) throw DomainError("token id " + std::to_string(id) + " outside [0, 65535]");
  }
}

std::unordered_map<std::uint64_t, std::int64_t> ngram_counts(std::span<const TokenId> ids, int n) {
  std::unordered_map<std::uint64_t, std::int64_t> counts;
  if (ids.size() < static_cast<std::size_t>(n)) return counts;
  for (std::size_t i = 0; i + n <= ids.size(); ++i) ++counts[pack(ids, i, n)];
  return counts;
}

}  // namespace

BleuResult bleu4(std::span<const SequencePair> corpus) {
  if (corpus.empty()) throw DomainError("BLEU of an empty corpus");
  BleuResult r;
  for (const SequencePair& pair : corpus) {
    const auto& gen = pair.generated.ids;
    const auto& ref = pair.reference.ids;
    if (gen.empty()) throw DomainError("BLEU with an empty generated sequence");
    check_ids(gen);
    check_ids(ref);
    r.generated_length += static_cast<std::int64_t>(gen.size());
    r.reference_length += static_cast<std::int64_t>(ref.size());
    for (int n = 1; n <= kMaxN; ++n) {
      const auto ref_counts = ngram_counts(ref, n);
      for (const auto& [key, count] : ngram_counts(gen, n)) {
        const auto it = ref_counts.find(key);
        if (it != ref_counts.end()) r.matches[n - 1] += std::min(count, it->second);
        r.totals[n - 1] += count;
      }
    }
  }
  double log_sum = 0.0;
  bool zero = false;
  for (int n = 0; n < kMaxN; ++n) {
    r.precisions[n] = r.totals[n] > 0 ? static_cast<double>(r.matches[n]) / static_cast<double>(r.totals[n]) : 0.0;
    if (r.precisions[n] == 0.0) {
      zero = true;
    } else {
      log_sum += std::log(r.precisions[n]);
    }
  }
  r.brevity_penalty = r.generated_length >= r.reference_length
                          ? 1.0
                          : std::exp(1.0 - static_cast<double>(r.reference_length) /
                                               static_cast<double>(r.generated_length));
  r.score = zero ? 0.0 : 100.0 * r.brevity_penalty * std::exp(log_sum / kMaxN);
  return r;
}

std::size_t lcs_length(std::span<const TokenId> a, std::span<const TokenId> b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge_l(const TokenSequence& generated, const TokenSequence& reference, const RougeOptions& options) {
  if (generated.ids.empty() || reference.ids.empty()) throw DomainError("ROUGE-L with an empty sequence");
  const double lcs = static_cast<double>(lcs_length(generated.ids, reference.ids));
  if (lcs == 0.0) return 0.0;
  double recall = lcs / static_cast<double>(reference.ids.size());
  double precision = lcs / static_cast<double>(generated.ids.size());
  if (options.swapped_variant) {
    std::swap(recall, precision);
    const double beta = precision / recall;
    return (1.0 + beta * beta) * recall * precision / (recall + beta * precision);
  }
  const double beta2 = (precision / recall) * (precision / recall);
  return (1.0 + beta2) * recall * precision / (recall + beta2 * precision);
}

double rouge_l(std::span<const SequencePair> corpus, const RougeOptions& options) {
  if (corpus.empty()) throw DomainError("ROUGE-L of an empty corpus");
  double sum = 0.0;
  for (const SequencePair& pair : corpus) sum += rouge_l(pair.generated, pair.reference, options);
  return sum / static_cast<double>(corpus.size());
}

TeacherForcingScores teacher_forcing_scores(std::span<const TokenId> predicted, std::span<const TokenId> truth) {
  if (predicted.size() != truth.size()) {
    throw DomainError("teacher forcing: " + std::to_string(predicted.size()) + " predictions for " +
                      std::to_string(truth.size()) + " targets");
  }
  std::array<std::int64_t, kVocabularySize> tp{}, fp{}, fn{}, support{};
  TeacherForcingScores s;
  std::int64_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const TokenId t = truth[i];
    const TokenId p = predicted[i];
    if (t < 0 || t >= kVocabularySize || p < 0 || p >= kVocabularySize) {
      throw DomainError("teacher forcing: token id outside [0, 226] at position " + std::to_string(i));
    }
    if (t == kPad) continue;
    ++s.scored;
    ++support[t];
    if (p == t) {
      ++correct;
      ++tp[t];
    } else {
      ++fn[t];
      ++fp[p];
    }
  }
  if (s.scored == 0) throw DomainError("teacher forcing: no scorable positions");
  s.accuracy = static_cast<double>(correct) / static_cast<double>(s.scored);
  double weighted = 0.0;
  for (int k = 0; k < kVocabularySize; ++k) {
    if (support[k] == 0) continue;
    const double f1 = 2.0 * tp[k] / static_cast<double>(2 * tp[k] + fp[k] + fn[k]);
    weighted += static_cast<double>(support[k]) * f1;
  }
  s.weighted_f1 = weighted / static_cast<double>(s.scored);
  return s;
}

double wasserstein_1d(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("Wasserstein distance of an empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  for (double v : x) if (!std::isfinite(v)) throw DomainError("non-finite sample");
  for (double v : y) if (!std::isfinite(v)) throw DomainError("non-finite sample");
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());

  // Quantile form: integral over t in (0, 1) of |Qa(t) - Qb(t)|. Breakpoints
  // i/n and j/m are exact multiples of 1/lcm(n, m).
  using Wide = unsigned __int128;
  const Wide n = x.size();
  const Wide m = y.size();
  const Wide units = n / std::gcd(x.size(), y.size()) * m;
  const Wide step_x = units / n;
  const Wide step_y = units / m;
  Wide pos = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  double acc = 0.0;
  while (i < x.size() && j < y.size()) {
    const Wide end_x = (i + 1) * step_x;
    const Wide end_y = (j + 1) * step_y;
    const Wide end = std::min(end_x, end_y);
    acc += std::abs(x[i] - y[j]) * static_cast<double>(end - pos);
    pos = end;
    if (end == end_x) ++i;
    if (end == end_y) ++j;
  }
  return acc / static_cast<double>(units);
}

double normalized_wd(std::span<const double> a, std::span<const double> b, double range_width) {
  if (!(range_width > 0.0) || !std::isfinite(range_width)) {
    throw DomainError("normalization range must be positive");
  }
  return wasserstein_1d(a, b) / range_width;
}

}  // namespace phytoken
