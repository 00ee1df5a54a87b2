#pragma once

#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "stadium/coding.hpp"

namespace stadium {

// Words over a small alphabet packed 3 bits per letter, first letter in the
// lowest bits. Supports alphabets up to 8 letters and lengths up to 21.
inline constexpr int kMaxWordLen = 21;

inline uint64_t pack_word(std::span<const uint8_t> letters) {
  uint64_t w = 0;
  for (size_t i = 0; i < letters.size(); ++i) w |= static_cast<uint64_t>(letters[i]) << (3 * i);
  return w;
}

uint64_t pack_letters(std::span<const CodeLetter> letters);

inline uint8_t word_letter(uint64_t w, int i) { return (w >> (3 * i)) & 7u; }
inline uint64_t word_factor(uint64_t w, int offset, int n) {
  const uint64_t mask = (n >= kMaxWordLen) ? ~0ull : ((1ull << (3 * n)) - 1);
  return (w >> (3 * offset)) & mask;
}

std::string word_to_string(uint64_t w, int n, int alphabet);

// Set of observed n-words for n = 1..n_max, factorially closed by
// construction (inserting a window inserts all of its factors). Also keeps
// per-n saturation flags: a level is saturated when the final tenth of the
// samples contributed no new word of that length.
class LanguageSample {
 public:
  LanguageSample(int alphabet, int n_max);

  int alphabet() const { return alphabet_; }
  int n_max() const { return n_max_; }

  size_t p(int n) const { return level(n).size(); }
  bool contains(uint64_t w, int n) const { return level(n).count(w) != 0; }
  const std::unordered_set<uint64_t>& words(int n) const { return level(n); }

  // Inserts a full window of length n together with all of its factors.
  void insert_window(uint64_t w, int n);
  void merge(const LanguageSample& other);

  bool saturated(int n) const;
  void set_saturated(int n, bool v);

  // sampling metadata
  double table_l = 0.0;
  uint64_t seed = 0;
  long long samples_requested = 0;
  long long samples_used = 0;
  long long samples_skipped = 0;  // singular or tolerance-ambiguous orbits

 private:
  const std::unordered_set<uint64_t>& level(int n) const;
  std::unordered_set<uint64_t>& level(int n);

  int alphabet_;
  int n_max_;
  std::vector<std::unordered_set<uint64_t>> sets_;
  std::vector<bool> saturated_;
};

struct SampleOptions {
  int threads = 1;
  double theta_margin = 1e-3;  // keeps samples away from tangential launches
  bool cos_weight = false;     // weight theta strata by the invariant cos measure
};

// Codes forward orbit windows of length n_max from a stratified jittered
// grid over (arc length, theta) and collects every factor. Orbits that hit
// a corner, a tangency, or a tolerance-ambiguous letter are skipped and
// counted. Deterministic for a fixed seed at any thread count.
LanguageSample sample_language(const StadiumTable& t, int n_max, long long samples,
                               uint64_t seed, const SampleOptions& opt = {});

struct SpecialCounts {
  int m_left = 0;
  int m_right = 0;
  int m_bi = 0;
};

// Extension counts of an observed n-word; requires n + 2 <= n_max.
SpecialCounts special_counts(const LanguageSample& ls, uint64_t word, int n);

std::vector<uint64_t> bispecial_words(const LanguageSample& ls, int n);

struct CassaigneResult {
  long long s_diff = 0;         // s(k+1) - s(k)
  long long bispecial_sum = 0;  // sum over BL(k) of (m_b - m_l - m_r + 1)
  long long residual = 0;       // s_diff - bispecial_sum
  size_t num_bispecial = 0;
  bool levels_saturated = false;  // saturation flags of levels k..k+2
};

// Second difference of the complexity against the bispecial accounting;
// zero on an exactly enumerated factorial extendable language.
CassaigneResult cassaigne_residual(const LanguageSample& ls, int k);

struct EntropyEstimate {
  double slope = 0.0;  // least-squares slope of log p(n) over [n_lo, n_hi]
  int n_lo = 0;
  int n_hi = 0;
  std::vector<double> step_log_ratios;  // log(p(n+1)/p(n))
  double analytic_bound_log = 0.0;      // log of the proven upper bound
  double reference_lower_log = 0.0;     // log(1 + sqrt 2), reported only
};

EntropyEstimate entropy_estimate(const LanguageSample& ls, int n_lo = 2, int n_hi = 0);

// Synthetic oracle languages for validating the Cassaigne machinery.
LanguageSample full_shift_language(int alphabet, int n_max);
LanguageSample golden_mean_language(int n_max);

struct SeparationRow {
  int n = 0;
  size_t groups = 0;        // word groups with at least 2 sampled points
  double median_diam = 0.0;
  double max_diam = 0.0;
};

// Groups sampled phase points by their centered n-window code and reports
// the phase-space diameters of the groups; diameters shrink with n when the
// partition separates orbits. The flat-bouncing alternating T/B words are
// excluded (that family is a single column for every n).
std::vector<SeparationRow> code_separation_report(const StadiumTable& t, int n_min, int n_max,
                                                  long long samples, uint64_t seed);

}  // namespace stadium
