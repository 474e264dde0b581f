#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "phytoken/errors.hpp"
#include "phytoken/generator.hpp"
#include "phytoken/metrics.hpp"

using namespace phytoken;

namespace {

TokenSequence random_sequence(std::mt19937_64& rng, int max_len, int alphabet) {
  std::uniform_int_distribution<int> len(1, max_len);
  std::uniform_int_distribution<int> tok(0, alphabet - 1);
  TokenSequence s;
  s.ids.resize(static_cast<std::size_t>(len(rng)));
  for (auto& t : s.ids) t = tok(rng);
  return s;
}

std::vector<SequencePair> random_corpus(std::uint64_t seed, int pairs, int max_len, int alphabet) {
  std::mt19937_64 rng(seed);
  std::vector<SequencePair> out;
  for (int i = 0; i < pairs; ++i) out.push_back({random_sequence(rng, max_len, alphabet), random_sequence(rng, max_len, alphabet)});
  return out;
}

std::vector<SequencePair> generated_corpus(std::uint64_t first, int n) {
  std::vector<SequencePair> out;
  for (std::uint64_t s = first; s < first + static_cast<std::uint64_t>(n); ++s) {
    const TokenSequence seq = tokenize(generate_plant(s, sample_plant_age(s)), {0.2, 0.3, 0.4});
    out.push_back({seq, seq});
  }
  return out;
}

}  // namespace

TEST_CASE("BLEU-4 equals the exhaustive oracle per pair and per corpus") {
  for (int alphabet : {3, 6}) {
    const auto corpus = random_corpus(static_cast<std::uint64_t>(alphabet), 100, 50, alphabet);
    std::vector<std::pair<oracle::Seq, oracle::Seq>> plain;
    for (const auto& p : corpus) {
      plain.emplace_back(p.generated.ids, p.reference.ids);
      const BleuResult got = bleu4(std::span(&p, 1));
      const oracle::Bleu want = oracle::bleu4({plain.back()});
      CHECK(std::abs(got.score - want.score) <= 1e-12);
      CHECK(std::abs(got.brevity_penalty - want.bp) <= 1e-12);
      for (int n = 0; n < 4; ++n) CHECK(std::abs(got.precisions[n] - want.precisions[n]) <= 1e-12);
    }
    const BleuResult got = bleu4(corpus);
    const oracle::Bleu want = oracle::bleu4(plain);
    CHECK(got.score > 0.0);
    CHECK(std::abs(got.score - want.score) <= 1e-12);
  }
}

TEST_CASE("BLEU-4 brevity penalty and zero precision") {
  // Generated is a prefix half as long: all precisions 1, BP = exp(1 - 2).
  TokenSequence ref{{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}};
  TokenSequence gen{{1, 2, 3, 4, 5, 6}};
  const std::vector<SequencePair> c{{gen, ref}};
  const BleuResult r = bleu4(c);
  CHECK(r.brevity_penalty == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(r.score == doctest::Approx(36.787944117144233).epsilon(1e-12));
  CHECK(r.generated_length == 6);
  CHECK(r.reference_length == 12);

  const std::vector<SequencePair> longer{{ref, gen}};
  CHECK(bleu4(longer).brevity_penalty == 1.0);

  const std::vector<SequencePair> disjoint{{TokenSequence{{1, 2, 3, 4}}, TokenSequence{{5, 6, 7, 8}}}};
  CHECK(bleu4(disjoint).score == 0.0);
  const std::vector<SequencePair> short_gen{{TokenSequence{{1, 2, 3}}, TokenSequence{{1, 2, 3}}}};
  CHECK(bleu4(short_gen).score == 0.0);  // no 4-grams
  CHECK_THROWS_AS(bleu4(std::span<const SequencePair>{}), DomainError);
}

TEST_CASE("corpus BLEU ignores pair order") {
  auto corpus = random_corpus(21, 30, 40, 4);
  const double before = bleu4(corpus).score;
  std::reverse(corpus.begin(), corpus.end());
  std::swap(corpus[3], corpus[17]);
  CHECK(bleu4(corpus).score == doctest::Approx(before).epsilon(1e-14));
}

TEST_CASE("ROUGE-L equals the enumeration oracle") {
  for (int alphabet : {2, 5}) {
    const auto corpus = random_corpus(100 + static_cast<std::uint64_t>(alphabet), 100, 30, alphabet);
    double mean = 0.0;
    for (const auto& p : corpus) {
      CHECK(lcs_length(p.generated.ids, p.reference.ids) == oracle::lcs(p.generated.ids, p.reference.ids));
      const double want = oracle::rouge_l(p.generated.ids, p.reference.ids);
      CHECK(std::abs(rouge_l(p.generated, p.reference) - want) <= 1e-12);
      mean += want;
    }
    CHECK(std::abs(rouge_l(corpus) - mean / 100.0) <= 1e-12);
  }
}

TEST_CASE("ROUGE-L orientation") {
  // LCS 2 of gen length 4, ref length 2: R = 1, P = 0.5, beta = 0.5.
  const TokenSequence gen{{1, 9, 2, 9}};
  const TokenSequence ref{{1, 2}};
  const double beta2 = 0.25;
  CHECK(rouge_l(gen, ref) == doctest::Approx((1 + beta2) * 0.5 / (1 + beta2 * 0.5)));
  // With beta = P / R the standard F is symmetric in R and P.
  CHECK(rouge_l(ref, gen) == doctest::Approx(rouge_l(gen, ref)).epsilon(1e-15));
  // Variant: R = 0.5, P = 1, beta = 2, F = 5 * 0.5 / (0.5 + 2) = LCS / |ref|.
  CHECK(rouge_l(gen, ref, {.swapped_variant = true}) == doctest::Approx(1.0));
  CHECK(rouge_l(ref, gen, {.swapped_variant = true}) == doctest::Approx(0.5));
  CHECK(rouge_l(TokenSequence{{1}}, TokenSequence{{2}}) == 0.0);
}

TEST_CASE("the ROUGE-L variant is symmetric under swapping iff lengths are equal") {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 200; ++i) {
    const TokenSequence a = random_sequence(rng, 20, 4);
    const TokenSequence b = random_sequence(rng, 20, 4);
    const RougeOptions v{.swapped_variant = true};
    const double lcs = static_cast<double>(lcs_length(a.ids, b.ids));
    CHECK(rouge_l(a, b, v) == doctest::Approx(lcs / static_cast<double>(b.size())).epsilon(1e-14));
    const bool symmetric = std::abs(rouge_l(a, b, v) - rouge_l(b, a, v)) < 1e-14;
    CHECK(symmetric == (a.size() == b.size() || lcs == 0.0));
  }
}

TEST_CASE("identical corpora score BLEU 100 and ROUGE-L 1") {
  const auto corpus = generated_corpus(0, 50);
  CHECK(bleu4(corpus).score == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(rouge_l(corpus) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("teacher forcing matches the hand tally") {
  std::mt19937_64 rng(5);
  for (int batch = 0; batch < 20; ++batch) {
    std::vector<TokenId> truth(500), pred(500);
    std::uniform_int_distribution<int> tok(0, 40);
    std::uniform_real_distribution<double> u(0, 1);
    for (std::size_t i = 0; i < truth.size(); ++i) {
      truth[i] = u(rng) < 0.1 ? kPad : tok(rng);
      pred[i] = u(rng) < 0.6 ? truth[i] : tok(rng);
    }
    const TeacherForcingScores got = teacher_forcing_scores(pred, truth);
    const oracle::Tally want = oracle::teacher_forcing(pred, truth);
    CHECK(std::abs(got.accuracy - want.accuracy) <= 1e-12);
    CHECK(std::abs(got.weighted_f1 - want.weighted_f1) <= 1e-12);
    CHECK(got.scored == std::count_if(truth.begin(), truth.end(), [](TokenId t) { return t != kPad; }));
  }
}

TEST_CASE("teacher forcing edge cases") {
  const std::vector<TokenId> t{1, 2, 3, kPad};
  CHECK(teacher_forcing_scores(t, t).accuracy == 1.0);
  CHECK(teacher_forcing_scores(t, t).weighted_f1 == 1.0);
  const std::vector<TokenId> p{1, 2, 4, 7};  // the PAD position is ignored
  CHECK(teacher_forcing_scores(p, t).accuracy == doctest::Approx(2.0 / 3.0));
  CHECK(teacher_forcing_scores(p, t).scored == 3);
  CHECK_THROWS_AS(teacher_forcing_scores(std::vector<TokenId>{1}, t), DomainError);
  CHECK_THROWS_AS(teacher_forcing_scores(std::vector<TokenId>{kPad}, std::vector<TokenId>{kPad}), DomainError);
  CHECK_THROWS_AS(teacher_forcing_scores(std::vector<TokenId>{300}, std::vector<TokenId>{1}), DomainError);
}

TEST_CASE("W1 analytic cases") {
  // Dyadic values keep every difference exact.
  for (double d : {0.0, 0.125, 1.5, 37.25}) {
    const std::vector<double> a{0.75}, b{0.75 + d};
    CHECK(wasserstein_1d(a, b) == d);
  }
  const std::vector<double> p{0.0, 0.5, 0.5, 2.0, 3.25};
  CHECK(wasserstein_1d(p, p) == 0.0);
  for (double c : {0.25, -4.0, 10.5}) {
    std::vector<double> q(p);
    for (double& v : q) v += c;
    CHECK(wasserstein_1d(p, q) == std::abs(c));
  }
  // Unequal sizes: {0, 1} vs {0}: half the mass moves by 1.
  CHECK(wasserstein_1d(std::vector<double>{0.0, 1.0}, std::vector<double>{0.0}) == 0.5);
  CHECK_THROWS_AS(wasserstein_1d(std::vector<double>{}, p), DomainError);
  CHECK_THROWS_AS(wasserstein_1d(std::vector<double>{NAN}, p), DomainError);
}

TEST_CASE("W1 equals CDF integration on random samples") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0, 3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(1 + trial * 3), b(7 + trial * 2);
    for (double& v : a) v = n(rng);
    for (double& v : b) v = n(rng) + 0.5;
    CHECK(wasserstein_1d(a, b) == doctest::Approx(oracle::wasserstein(a, b)).epsilon(1e-12));
    CHECK(wasserstein_1d(a, b) == doctest::Approx(wasserstein_1d(b, a)).epsilon(1e-14));
  }
}

TEST_CASE("normalized WD and the star rule") {
  const std::vector<double> zero{0.0};
  CHECK(normalized_wd(zero, std::vector<double>{0.049}, 1.0) == doctest::Approx(0.049));
  CHECK(wd_starred(normalized_wd(zero, std::vector<double>{0.049}, 1.0)));
  CHECK(!wd_starred(normalized_wd(zero, std::vector<double>{0.05}, 1.0)));
  CHECK(!wd_starred(normalized_wd(zero, std::vector<double>{0.2}, 1.0)));
  // 7 degrees apart on a 360 degree range is 0.0194: starred.
  CHECK(wd_starred(normalized_wd(std::vector<double>{100.0}, std::vector<double>{107.0}, 360.0)));
  // 20 degrees apart on a 360 degree range is 0.0556: not starred.
  CHECK(!wd_starred(normalized_wd(std::vector<double>{100.0}, std::vector<double>{120.0}, 360.0)));
  CHECK(wd_starred(0.0));
  CHECK_THROWS_AS(normalized_wd(zero, zero, 0.0), DomainError);
}
