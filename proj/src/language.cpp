#include "stadium/language.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "stadium/util.hpp"

namespace stadium {

uint64_t pack_letters(std::span<const CodeLetter> letters) {
  uint64_t w = 0;
  for (size_t i = 0; i < letters.size(); ++i)
    w |= static_cast<uint64_t>(static_cast<uint8_t>(letters[i])) << (3 * i);
  return w;
}

std::string word_to_string(uint64_t w, int n, int alphabet) {
  std::string s;
  for (int i = 0; i < n; ++i) {
    const uint8_t a = word_letter(w, i);
    if (alphabet == 6)
      s += to_string(static_cast<CodeLetter>(a));
    else
      s += static_cast<char>('0' + a);
  }
  return s;
}

LanguageSample::LanguageSample(int alphabet, int n_max) : alphabet_(alphabet), n_max_(n_max) {
  if (alphabet < 1 || alphabet > 8)
    throw std::invalid_argument("LanguageSample: alphabet must be in [1,8]");
  if (n_max < 1 || n_max > kMaxWordLen)
    throw std::invalid_argument("LanguageSample: n_max out of range");
  sets_.resize(static_cast<size_t>(n_max));
  saturated_.assign(static_cast<size_t>(n_max), false);
}

const std::unordered_set<uint64_t>& LanguageSample::level(int n) const {
  if (n < 1 || n > n_max_) throw std::invalid_argument("LanguageSample: level out of range");
  return sets_[static_cast<size_t>(n - 1)];
}

std::unordered_set<uint64_t>& LanguageSample::level(int n) {
  if (n < 1 || n > n_max_) throw std::invalid_argument("LanguageSample: level out of range");
  return sets_[static_cast<size_t>(n - 1)];
}

void LanguageSample::insert_window(uint64_t w, int n) {
  for (int len = 1; len <= n; ++len) {
    auto& s = level(len);
    for (int off = 0; off + len <= n; ++off) s.insert(word_factor(w, off, len));
  }
}

void LanguageSample::merge(const LanguageSample& other) {
  for (int n = 1; n <= std::min(n_max_, other.n_max_); ++n)
    level(n).insert(other.words(n).begin(), other.words(n).end());
  samples_used += other.samples_used;
  samples_skipped += other.samples_skipped;
}

bool LanguageSample::saturated(int n) const {
  if (n < 1 || n > n_max_) return false;
  return saturated_[static_cast<size_t>(n - 1)];
}

void LanguageSample::set_saturated(int n, bool v) {
  saturated_[static_cast<size_t>(n - 1)] = v;
}

namespace {

// One decile batch of the stratified sweep. Cells are assigned round-robin
// to deciles so the final tenth covers the whole phase space.
LanguageSample sample_decile(const StadiumTable& t, int n_max, uint64_t n_cells,
                             uint64_t cells_s, uint64_t cells_theta, int decile,
                             uint64_t seed, const SampleOptions& opt) {
  LanguageSample out(6, n_max);
  const double period = t.perimeter();
  const double theta_lo = -M_PI_2 + opt.theta_margin;
  const double theta_span = M_PI - 2.0 * opt.theta_margin;
  std::vector<CodeLetter> letters(static_cast<size_t>(n_max));

  for (uint64_t cell = static_cast<uint64_t>(decile); cell < n_cells; cell += 10) {
    const uint64_t is = cell % cells_s;
    const uint64_t it = cell / cells_s;
    const double u1 = mix_unit(seed, cell, 1);
    const double u2 = mix_unit(seed, cell, 2);
    const double s = (static_cast<double>(is) + u1) / static_cast<double>(cells_s) * period;
    double v = (static_cast<double>(it) + u2) / static_cast<double>(cells_theta);
    if (opt.cos_weight) v = std::asin(2.0 * v - 1.0) / M_PI + 0.5;  // cos-distributed strata
    const double theta = theta_lo + v * theta_span;

    PhasePoint pp{boundary_point_at(t, s), theta};
    if (pp.bp.junction_distance(t) < kSingularTol) {
      ++out.samples_skipped;
      continue;
    }
    ++out.samples_used;
    bool ok = true;
    PhasePoint cur = pp;
    for (int i = 0; i < n_max; ++i) {
      const PointCode pc = code_point(cur);
      if (pc.ambiguous()) {
        ok = false;
        break;
      }
      letters[static_cast<size_t>(i)] = pc.primary;
      if (i + 1 < n_max) {
        const StepResult sr = billiard_map(t, cur);
        if (sr.status != StepStatus::ok) {
          ok = false;
          break;
        }
        cur = sr.point;
      }
    }
    if (!ok) {
      ++out.samples_skipped;
      --out.samples_used;
      continue;
    }
    out.insert_window(pack_letters(letters), n_max);
  }
  return out;
}

}  // namespace

LanguageSample sample_language(const StadiumTable& t, int n_max, long long samples,
                               uint64_t seed, const SampleOptions& opt) {
  if (n_max < 2) throw std::invalid_argument("sample_language: n_max must be >= 2");
  if (samples < 1) throw std::invalid_argument("sample_language: samples must be >= 1");

  const double period = t.perimeter();
  const double theta_span = M_PI - 2.0 * opt.theta_margin;
  const double aspect = period / theta_span;
  uint64_t cells_s = static_cast<uint64_t>(
      std::max(1.0, std::round(std::sqrt(static_cast<double>(samples) * aspect))));
  uint64_t cells_theta = (static_cast<uint64_t>(samples) + cells_s - 1) / cells_s;
  if (cells_theta < 1) cells_theta = 1;
  const uint64_t n_cells = cells_s * cells_theta;

  std::vector<LanguageSample> parts;
  parts.reserve(10);
  for (int d = 0; d < 10; ++d) parts.emplace_back(6, n_max);
  parallel_chunks(10, opt.threads, [&](size_t d) {
    parts[d] = sample_decile(t, n_max, n_cells, cells_s, cells_theta, static_cast<int>(d),
                             seed, opt);
  });

  LanguageSample out(6, n_max);
  out.table_l = t.l();
  out.seed = seed;
  out.samples_requested = samples;
  for (int d = 0; d < 9; ++d) out.merge(parts[d]);
  // Saturation: the last decile contributes no new n-word.
  std::vector<bool> saturated(static_cast<size_t>(n_max), true);
  for (int n = 1; n <= n_max; ++n) {
    for (uint64_t w : parts[9].words(n)) {
      if (!out.contains(w, n)) {
        saturated[static_cast<size_t>(n - 1)] = false;
        break;
      }
    }
  }
  out.merge(parts[9]);
  for (int n = 1; n <= n_max; ++n) out.set_saturated(n, saturated[static_cast<size_t>(n - 1)]);
  return out;
}

SpecialCounts special_counts(const LanguageSample& ls, uint64_t word, int n) {
  if (n + 2 > ls.n_max())
    throw std::invalid_argument("special_counts: needs levels n+1 and n+2");
  if (!ls.contains(word, n)) throw std::invalid_argument("special_counts: word not observed");
  SpecialCounts sc;
  const int A = ls.alphabet();
  for (int a = 0; a < A; ++a) {
    const uint64_t left = static_cast<uint64_t>(a) | (word << 3);
    if (ls.contains(left, n + 1)) ++sc.m_left;
    const uint64_t right = word | (static_cast<uint64_t>(a) << (3 * n));
    if (ls.contains(right, n + 1)) ++sc.m_right;
    for (int b = 0; b < A; ++b) {
      const uint64_t bi = left | (static_cast<uint64_t>(b) << (3 * (n + 1)));
      if (ls.contains(bi, n + 2)) ++sc.m_bi;
    }
  }
  return sc;
}

std::vector<uint64_t> bispecial_words(const LanguageSample& ls, int n) {
  std::vector<uint64_t> out;
  for (uint64_t w : ls.words(n)) {
    const SpecialCounts sc = special_counts(ls, w, n);
    if (sc.m_left > 1 && sc.m_right > 1) out.push_back(w);
  }
  std::sort(out.begin(), out.end());
  return out;
}

CassaigneResult cassaigne_residual(const LanguageSample& ls, int k) {
  if (k < 1 || k + 2 > ls.n_max())
    throw std::invalid_argument("cassaigne_residual: needs levels k..k+2");
  CassaigneResult r;
  const auto p = [&ls](int n) { return static_cast<long long>(ls.p(n)); };
  r.s_diff = (p(k + 2) - p(k + 1)) - (p(k + 1) - p(k));
  for (uint64_t w : ls.words(k)) {
    const SpecialCounts sc = special_counts(ls, w, k);
    if (sc.m_left > 1 && sc.m_right > 1) {
      ++r.num_bispecial;
      r.bispecial_sum += sc.m_bi - sc.m_left - sc.m_right + 1;
    }
  }
  r.residual = r.s_diff - r.bispecial_sum;
  r.levels_saturated = ls.saturated(k) && ls.saturated(k + 1) && ls.saturated(k + 2);
  return r;
}

EntropyEstimate entropy_estimate(const LanguageSample& ls, int n_lo, int n_hi) {
  if (ls.n_max() < 6) throw std::invalid_argument("entropy_estimate: needs n_max >= 6");
  if (n_hi <= 0) n_hi = ls.n_max();
  n_lo = std::max(1, n_lo);
  n_hi = std::min(n_hi, ls.n_max());
  if (n_hi - n_lo < 2) throw std::invalid_argument("entropy_estimate: window too small");

  EntropyEstimate est;
  est.n_lo = n_lo;
  est.n_hi = n_hi;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int m = n_hi - n_lo + 1;
  for (int n = n_lo; n <= n_hi; ++n) {
    const double x = n;
    const double y = std::log(static_cast<double>(ls.p(n)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  est.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  for (int n = 1; n < ls.n_max(); ++n)
    est.step_log_ratios.push_back(
        std::log(static_cast<double>(ls.p(n + 1)) / static_cast<double>(ls.p(n))));
  est.analytic_bound_log = std::log(3.4908);
  est.reference_lower_log = std::log(1.0 + std::sqrt(2.0));
  return est;
}

LanguageSample full_shift_language(int alphabet, int n_max) {
  LanguageSample ls(alphabet, n_max);
  // All words: enumerate level n_max and take factors (equivalent and cheap).
  uint64_t count = 1;
  for (int i = 0; i < n_max; ++i) count *= static_cast<uint64_t>(alphabet);
  for (uint64_t idx = 0; idx < count; ++idx) {
    uint64_t w = 0;
    uint64_t v = idx;
    for (int i = 0; i < n_max; ++i) {
      w |= (v % static_cast<uint64_t>(alphabet)) << (3 * i);
      v /= static_cast<uint64_t>(alphabet);
    }
    ls.insert_window(w, n_max);
  }
  for (int n = 1; n <= n_max; ++n) ls.set_saturated(n, true);
  return ls;
}

LanguageSample golden_mean_language(int n_max) {
  LanguageSample ls(2, n_max);
  // Words over {0,1} with no adjacent 1s.
  std::vector<uint64_t> cur = {0ull, 1ull};
  std::vector<int> last = {0, 1};
  for (int n = 1; n <= n_max; ++n) {
    std::vector<uint64_t> next;
    std::vector<int> next_last;
    for (size_t i = 0; i < cur.size(); ++i) {
      if (n == n_max) {
        ls.insert_window(cur[i], n);
        continue;
      }
      for (int b = 0; b <= 1; ++b) {
        if (b == 1 && last[i] == 1) continue;
        next.push_back(cur[i] | (static_cast<uint64_t>(b) << (3 * n)));
        next_last.push_back(b);
      }
    }
    if (n == n_max) break;
    cur = std::move(next);
    last = std::move(next_last);
  }
  for (int n = 1; n <= n_max; ++n) ls.set_saturated(n, true);
  return ls;
}

std::vector<SeparationRow> code_separation_report(const StadiumTable& t, int n_min, int n_max,
                                                  long long samples, uint64_t seed) {
  if (n_min < 1 || n_max < n_min) throw std::invalid_argument("code_separation_report: bad range");
  if (n_max > kMaxWordLen) throw std::invalid_argument("code_separation_report: n_max too large");

  struct SamplePoint {
    PhasePoint pp;
    uint64_t word = 0;  // centered window of length n_max
    bool valid = false;
  };

  const int back = n_max / 2;
  const int fwd = n_max - back;  // letters at offsets -back .. fwd-1
  std::vector<SamplePoint> pts;
  pts.reserve(static_cast<size_t>(samples));
  const double period = t.perimeter();

  for (long long i = 0; i < samples; ++i) {
    SamplePoint sp;
    const double s = mix_unit(seed, static_cast<uint64_t>(i), 11) * period;
    const double theta = (mix_unit(seed, static_cast<uint64_t>(i), 12) - 0.5) * (M_PI - 2e-3);
    sp.pp = {boundary_point_at(t, s), theta};
    if (sp.pp.bp.junction_distance(t) < kSingularTol) continue;

    std::vector<CodeLetter> letters(static_cast<size_t>(n_max));
    bool ok = true;
    PhasePoint cur = sp.pp;
    for (int k = 0; k < fwd && ok; ++k) {
      const PointCode pc = code_point(cur);
      if (pc.ambiguous()) ok = false;
      letters[static_cast<size_t>(back + k)] = pc.primary;
      if (k + 1 < fwd) {
        const StepResult sr = billiard_map(t, cur);
        if (sr.status != StepStatus::ok) ok = false;
        cur = sr.point;
      }
    }
    cur = sp.pp;
    for (int k = 1; k <= back && ok; ++k) {
      const StepResult sr = billiard_map_inverse(t, cur);
      if (sr.status != StepStatus::ok) {
        ok = false;
        break;
      }
      cur = sr.point;
      const PointCode pc = code_point(cur);
      if (pc.ambiguous()) ok = false;
      letters[static_cast<size_t>(back - k)] = pc.primary;
    }
    if (!ok) continue;
    sp.word = pack_letters(letters);
    sp.valid = true;
    pts.push_back(sp);
  }

  auto alternating_tb = [](uint64_t w, int lo, int n) {
    for (int i = 0; i < n; ++i) {
      const auto c = static_cast<CodeLetter>(word_letter(w, lo + i));
      if (c != CodeLetter::T && c != CodeLetter::B) return false;
    }
    return true;
  };

  std::vector<SeparationRow> rows;
  for (int n = n_min; n <= n_max; ++n) {
    // Centered window of length n inside the n_max window.
    const int b = n / 2;
    const int lo = back - b;
    std::map<uint64_t, std::vector<const SamplePoint*>> groups;
    for (const SamplePoint& sp : pts) {
      if (!sp.valid) continue;
      groups[word_factor(sp.word, lo, n)].push_back(&sp);
    }
    SeparationRow row;
    row.n = n;
    std::vector<double> diams;
    for (const auto& [w, members] : groups) {
      if (members.size() < 2) continue;
      if (alternating_tb(w, 0, n)) continue;
      // Cap the pairwise scan; a subsample measures the diameter well enough.
      const size_t cap = std::min<size_t>(members.size(), 400);
      double d = 0.0;
      for (size_t i = 0; i < cap; ++i)
        for (size_t j = i + 1; j < cap; ++j)
          d = std::max(d, phase_distance(t, members[i]->pp, members[j]->pp));
      diams.push_back(d);
      row.max_diam = std::max(row.max_diam, d);
    }
    row.groups = diams.size();
    if (!diams.empty()) {
      const size_t mid = diams.size() / 2;
      std::nth_element(diams.begin(), diams.begin() + static_cast<long>(mid), diams.end());
      row.median_diam = diams[mid];
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace stadium
