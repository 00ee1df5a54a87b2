// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "stadium/combinatorics.hpp"
#include "stadium/language.hpp"
#include "stadium/saddles.hpp"
#include "stadium/util.hpp"

using namespace stadium;

namespace {

struct Criterion {
  int id;
  const char* name;
  bool (*run)(std::string& detail);
};

bool expect(bool cond, std::string& detail, const std::string& what) {
  if (!cond && detail.empty()) detail = what;
  return cond;
}

// ---------------------------------------------------------------- criterion 1
bool c1_constants(std::string& d) {
  bool ok = true;
  const double w = lambert_w_over_e();
  ok &= expect(std::abs(w * std::exp(w) - std::exp(-1.0)) < 1e-15, d, "W residual");
  const double a = compute_a();
  ok &= expect(a > 0.435 && a < 0.436, d, "a not in (0.435, 0.436)");
  const double pw = std::pow(2.0 / a - 1.0, a);
  ok &= expect(pw < 1.7454, d, "(2/a-1)^a >= 1.7454");
  const double final_bound = 2.0 * pw;
  ok &= expect(final_bound > 3.4905 && final_bound < 3.4908, d, "final bound range");
  ok &= expect(std::abs(final_bound - 2.0 * std::exp(2.0 * w)) < 1e-12, d,
               "2e^{2w} identity mismatch");
  return ok;
}

// ---------------------------------------------------------------- criterion 2
bool c2_kfixtures(std::string& d) {
  bool ok = true;
  for (double j : {2.0, 5.0, 10.0, 100.0}) {
    ok &= expect(k_fn(j, j) == -2.0, d, "k_j(j) != -2");
    ok &= expect(std::abs(k_fn(j, 0.435 * j) - 0.0023) < 2e-4, d, "k_j(0.435j)");
    ok &= expect(std::abs(k_fn(j, 0.436 * j) + 0.0014) < 2e-4, d, "k_j(0.436j)");
  }
  const double r435 = k_fn(2.0, 0.435 * 2.0);
  const double r436 = k_fn(2.0, 0.436 * 2.0);
  for (double j : {5.0, 10.0, 100.0}) {
    ok &= expect(std::abs(k_fn(j, 0.435 * j) - r435) < 1e-12, d, "k_j(0.435j) j-dependence");
    ok &= expect(std::abs(k_fn(j, 0.436 * j) - r436) < 1e-12, d, "k_j(0.436j) j-dependence");
  }
  return ok;
}

// ---------------------------------------------------------------- criterion 3
void enumerate_tuples(int remaining, int k_so_far, std::map<int, long long>& per_k) {
  if (remaining == 0) {
    if (k_so_far > 0) ++per_k[k_so_far];
    return;
  }
  for (int n = -(remaining - 1); n <= remaining - 1; ++n)
    for (int m = 1; m + std::abs(n) <= remaining; ++m)
      enumerate_tuples(remaining - std::abs(n) - m, k_so_far + 1, per_k);
}

bool c3_combinatorics(std::string& d) {
  bool ok = true;
  const CompositionCounts qc(40);
  for (int j = 1; j <= 12; ++j) {
    std::map<int, long long> per_k;
    enumerate_tuples(j, 0, per_k);
    for (int k = 1; k <= j; ++k)
      ok &= expect(qc.q(j, k) == BigInt(per_k.count(k) ? per_k[k] : 0), d,
                   "DP vs brute force at j=" + std::to_string(j));
  }
  ok &= expect(qc.q_total(1) == 1 && qc.q_total(2) == 4 && qc.q_total(3) == 12 &&
                   qc.q_total(4) == 36,
               d, "Q(1..4) fixtures");
  for (int j = 1; j <= 40; ++j)
    for (int k = 1; k <= j; ++k)
      ok &= expect(static_cast<double>(qc.q(j, k)) <= q_upper_bound(j, k) * (1.0 + 1e-9), d,
                   "AM-GM bound at j=" + std::to_string(j));
  for (int j = 2; j <= 200; ++j) {
    const BinomialBound b = binomial_bounds(j);
    ok &= expect(static_cast<double>(b.exact) <= b.bound, d,
                 "Gautschi bound at j=" + std::to_string(j));
  }
  const BoundReport rep = entropy_upper_bound(40);
  ok &= expect(rep.chain_ok, d, "chain: " + rep.failure);
  const GrowthReport g = q_growth_report(40);
  for (double r : g.partial_sum_roots)
    ok &= expect(r <= 3.4908, d, "partial-sum growth root above the bound");
  return ok;
}

// ---------------------------------------------------------------- criterion 4
PhasePoint random_point(const StadiumTable& t, uint64_t seed, uint64_t i) {
  for (uint64_t attempt = 0;; ++attempt) {
    const double s = mix_unit(seed, i, 500 + attempt) * t.perimeter();
    const double theta = (mix_unit(seed, i, 900 + attempt) - 0.5) * (M_PI - 0.02);
    PhasePoint pp{boundary_point_at(t, s), theta};
    if (pp.bp.junction_distance(t) > 1e-8) return pp;
  }
}

bool c4_dynamics(std::string& d) {
  bool ok = true;
  for (double l : {0.5, 1.0, 2.0, 5.0}) {
    StadiumTable t(l);
    int checked = 0;
    double worst = 0.0;
    for (uint64_t i = 0; checked < 10000; ++i) {
      const PhasePoint pp = random_point(t, 1000 + static_cast<uint64_t>(l * 10), i);
      const StepResult fwd = billiard_map(t, pp);
      if (fwd.status != StepStatus::ok) continue;
      const StepResult back = billiard_map_inverse(t, fwd.point);
      if (back.status != StepStatus::ok) continue;
      worst = std::max(worst, phase_distance(t, back.point, pp));
      ++checked;
    }
    ok &= expect(worst < 1e-9, d, "round trip at l=" + std::to_string(l));

    // axial period-2
    PhasePoint ax{{Side::L, M_PI}, 0.0};
    StepResult s1 = billiard_map(t, ax);
    StepResult s2 = billiard_map(t, s1.point);
    ok &= expect(phase_distance(t, s2.point, ax) < 1e-10, d, "axial closure");

    // rectangle period-4
    PhasePoint rect{{Side::L, 3.0 * M_PI / 4.0}, -M_PI / 4.0};
    PhasePoint cur = rect;
    bool fine = true;
    for (int k = 0; k < 4; ++k) {
      const StepResult s = billiard_map(t, cur);
      fine = fine && s.status == StepStatus::ok;
      if (!fine) break;
      cur = s.point;
    }
    ok &= expect(fine && phase_distance(t, cur, rect) < 1e-10, d, "rectangle closure");

    // theta preservation on same-arc consecutive collisions
    int pairs = 0;
    double worst_dtheta = 0.0;
    for (uint64_t i = 0; pairs < 2000 && i < 4000; ++i) {
      const double phi = M_PI_2 + 0.05 + mix_unit(77, i, 1) * (M_PI - 0.1);
      const double theta =
          (mix_unit(77, i, 2) > 0.5 ? 1 : -1) * (1.0 + mix_unit(77, i, 3) * 0.45);
      PhasePoint c{{Side::L, phi}, theta};
      for (int k = 0; k < 10; ++k) {
        const StepResult s = billiard_map(t, c);
        if (s.status != StepStatus::ok) break;
        if (s.point.bp.on_arc() && s.point.bp.side == c.bp.side) {
          worst_dtheta = std::max(worst_dtheta, std::abs(s.point.theta - c.theta));
          ++pairs;
        }
        c = s.point;
      }
    }
    ok &= expect(pairs > 500 && worst_dtheta < 1e-12, d, "theta preservation");
  }

  StadiumTable t2(2.0);
  const DefocusingReport rep = defocusing_report(t2, 10000, 2024);
  ok &= expect(rep.segments >= 10000, d, "defocusing sample count");
  ok &= expect(rep.violations == 0, d, "defocusing violations");
  ok &= expect(rep.min_expansion >= 1.0 - 1e-9, d, "defocusing margin");
  return ok;
}

// ---------------------------------------------------------------- criterion 5
bool c5_language(std::string& d) {
  bool ok = true;
  StadiumTable t(2.0);
  SampleOptions opt;
  opt.threads = default_threads();
  const LanguageSample ls = sample_language(t, 8, 1000000, 424242, opt);

  ok &= expect(ls.p(1) == 6, d, "p(1) != 6");
  ok &= expect(ls.p(2) == 30, d, "p(2) != 30");

  using CLe = CodeLetter;
  int missing = 0;
  bool only_expected_missing = true;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      const uint64_t w = static_cast<uint64_t>(a) | (static_cast<uint64_t>(b) << 3);
      if (!ls.contains(w, 2)) {
        ++missing;
        const CLe ca = static_cast<CLe>(a), cb = static_cast<CLe>(b);
        const bool tt_bb = (ca == CLe::T && cb == CLe::T) || (ca == CLe::B && cb == CLe::B);
        const bool mixed = is_arc_letter(ca) && is_arc_letter(cb) &&
                           side_of(ca) == side_of(cb) && ca != cb;
        only_expected_missing = only_expected_missing && (tt_bb || mixed);
      }
    }
  ok &= expect(missing == 6 && only_expected_missing, d, "unobserved pairs not the forbidden 6");

  for (int k = 1; k <= 10; ++k) {
    ok &= expect(cassaigne_residual(full_shift_language(2, 13), k).residual == 0, d,
                 "full-shift Cassaigne");
    ok &= expect(cassaigne_residual(golden_mean_language(13), k).residual == 0, d,
                 "golden-mean Cassaigne");
  }
  for (int k = 1; k <= 3; ++k) {
    const CassaigneResult r = cassaigne_residual(ls, k);
    ok &= expect(r.residual == 0, d,
                 "billiard Cassaigne residual at k=" + std::to_string(k) + " is " +
                     std::to_string(r.residual) +
                     (r.levels_saturated ? "" : " (levels unsaturated)"));
  }

  const double cap = std::log(3.4908) + 0.05;
  ok &= expect(entropy_estimate(ls, 2, 8).slope <= cap, d, "entropy estimate at l=2");
  for (double l : {1.0, 5.0}) {
    StadiumTable tl(l);
    const LanguageSample lsl = sample_language(tl, 8, 300000, 99, opt);
    ok &= expect(entropy_estimate(lsl, 2, 8).slope <= cap, d,
                 "entropy estimate at l=" + std::to_string(l));
  }
  return ok;
}

// ---------------------------------------------------------------- criterion 6
bool c6_saddles(std::string& d) {
  bool ok = true;
  StadiumTable t(2.0);
  SaddleSearchConfig cfg;
  cfg.max_len = 6;
  cfg.grid = 200000;
  cfg.tol = 1e-10;
  cfg.threads = default_threads();

  const SaddleCensus census = count_saddles(t, cfg);
  ok &= expect(!census.connections.empty(), d, "no connections found");

  const UniquenessReport uniq = verify_uniqueness(census.connections, cfg.tol);
  ok &= expect(uniq.unique, d,
               uniq.unique ? "" : "duplicate code " + uniq.duplicates.front().code);

  const CompositionCounts qc(8);
  BigInt partial = 1;  // Q(0)
  for (int n = 1; n <= 6; ++n) {
    ok &= expect(BigInt(count_N(census, n)) <= 36 * partial, d,
                 "N(n) bound at n=" + std::to_string(n));
    partial += qc.q_total(n);
  }

  double worst = 0.0;
  bool codes_match = true;
  for (const SaddleConnection& sc : census.connections) {
    std::string code;
    worst = std::max(worst, resimulate_connection(t, sc, &code));
    codes_match = codes_match && code == sc.code;
  }
  ok &= expect(worst < 1e-10, d, "re-simulation residual");
  ok &= expect(codes_match, d, "re-simulated code mismatch");

  SaddleSearchConfig fine = cfg;
  fine.grid = 400000;
  const SaddleCensus finer = count_saddles(t, fine);
  for (int n = 1; n <= 6; ++n)
    ok &= expect(count_N(finer, n) >= count_N(census, n), d,
                 "grid doubling decreased N at n=" + std::to_string(n));
  return ok;
}

// ---------------------------------------------------------------- criterion 7
bool c7_phi(std::string& d) {
  bool ok = true;
  using CLe = CodeLetter;
  {
    std::vector<CLe> w{CLe::Lm, CLe::Lm, CLe::Rm, CLe::Rm, CLe::Lm};
    const auto out = phi_regroup(w);
    ok &= expect(out.size() == 4 && out[0] == PairLetter::LLm && out[1] == PairLetter::LR &&
                     out[2] == PairLetter::RRm && out[3] == PairLetter::RL,
                 d, "underbar regrouping example");
  }
  {
    std::vector<CLe> w{CLe::Lp, CLe::Lp, CLe::Rp, CLe::Rp, CLe::Lp};
    const auto out = phi_regroup(w);
    ok &= expect(out.size() == 4 && out[0] == PairLetter::LLp && out[1] == PairLetter::LR &&
                     out[2] == PairLetter::RRp && out[3] == PairLetter::RL,
                 d, "overbar regrouping example");
  }
  for (int i = 0; i < 10000 && ok; ++i) {
    std::vector<CLe> w;
    w.push_back(static_cast<CLe>(mix(321, i, 0) % 6));
    while (w.size() < 9) {
      const CLe prev = w.back();
      for (uint64_t k = 0;; ++k) {
        const CLe cand = static_cast<CLe>(mix(321, i * 31 + w.size(), k) % 6);
        const bool mixed = is_arc_letter(prev) && is_arc_letter(cand) &&
                           side_of(prev) == side_of(cand) && prev != cand;
        const bool ttbb =
            (prev == CLe::T && cand == CLe::T) || (prev == CLe::B && cand == CLe::B);
        if (!mixed && !ttbb) {
          w.push_back(cand);
          break;
        }
      }
    }
    const auto full = phi_regroup(w);
    const auto shifted = phi_regroup(std::span<const CLe>(w).subspan(1));
    bool match = shifted.size() == full.size() - 1;
    for (size_t k = 0; match && k < shifted.size(); ++k) match = shifted[k] == full[k + 1];
    ok &= expect(match, d, "shift commutation failed");
  }
  return ok;
}

const Criterion kCriteria[] = {
    {1, "analytic constants (W(1/e), a, bound chain endpoints)", c1_constants},
    {2, "k-function fixtures", c2_kfixtures},
    {3, "exact combinatorics and inequality sweeps", c3_combinatorics},
    {4, "dynamics properties and defocusing", c4_dynamics},
    {5, "language statistics at l in {1,2,5}", c5_language},
    {6, "saddle connections at l=2", c6_saddles},
    {7, "phi regrouping map", c7_phi},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 2 && std::strcmp(argv[1], "--only") == 0) only = std::atoi(argv[2]);

  int failures = 0;
  for (const Criterion& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    std::string detail;
    const auto start = std::chrono::steady_clock::now();
    const bool pass = c.run(detail);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d: %s (%.1fs)%s%s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                secs, detail.empty() ? "" : " - ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
