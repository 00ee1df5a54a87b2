#include "stadium/combinatorics.hpp"

#include <cmath>
#include <stdexcept>

namespace stadium {

CompositionCounts::CompositionCounts(int j_max) : j_max_(j_max) {
  if (j_max < 1) throw std::invalid_argument("CompositionCounts: j_max must be >= 1");
  // Q(j,k) = sum over the first part r of (2r-1) * Q(j-r, k-1): a composition
  // of j into k parts r_i >= 1 carries weight prod (2 r_i - 1), the number of
  // (n_i, m_i) splittings of each part.
  rows_.resize(static_cast<size_t>(j_max) + 1);
  std::vector<std::vector<BigInt>> partial(static_cast<size_t>(j_max) + 1);
  for (int j = 0; j <= j_max; ++j) partial[j].assign(static_cast<size_t>(j_max) + 1, 0);
  partial[0][0] = 1;
  for (int j = 1; j <= j_max; ++j) {
    for (int k = 1; k <= j; ++k) {
      BigInt acc = 0;
      for (int r = 1; r <= j - k + 1; ++r) acc += BigInt(2 * r - 1) * partial[j - r][k - 1];
      partial[j][k] = std::move(acc);
    }
  }
  for (int j = 1; j <= j_max; ++j) {
    rows_[j].reserve(j);
    for (int k = 1; k <= j; ++k) rows_[j].push_back(partial[j][k]);
  }
}

const BigInt& CompositionCounts::q(int j, int k) const {
  if (j < 1 || j > j_max_ || k < 1 || k > j)
    throw std::invalid_argument("CompositionCounts::q: index out of range");
  return rows_[j][k - 1];
}

BigInt CompositionCounts::q_total(int j) const {
  if (j == 0) return 1;
  if (j < 0 || j > j_max_) throw std::invalid_argument("q_total: index out of range");
  BigInt s = 0;
  for (const BigInt& v : rows_[j]) s += v;
  return s;
}

CompositionCounts count_q(int j_max) { return CompositionCounts(j_max); }

BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

double q_upper_bound(int j, int k) {
  if (k < 1 || k > j) throw std::invalid_argument("q_upper_bound: need 1 <= k <= j");
  return g_fn(j, k);
}

double lambert_w_over_e() {
  const double target = std::exp(-1.0);
  double lo = 0.2, hi = 0.3;
  double w = 0.25;
  for (int it = 0; it < 100; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - target;
    if (std::abs(f) < 1e-17) return w;
    if (f > 0)
      hi = w;
    else
      lo = w;
    double step = f / (ew * (1.0 + w));
    double next = w - step;
    if (next <= lo || next >= hi) next = 0.5 * (lo + hi);  // bracket safeguard
    if (next == w) return w;
    w = next;
  }
  const double resid = std::abs(w * std::exp(w) - target);
  if (resid >= 1e-15) throw std::runtime_error("lambert_w_over_e: no convergence");
  return w;
}

double compute_a() {
  const double w = lambert_w_over_e();
  return 2.0 * w / (1.0 + w);
}

double k_fn(double j, double x) {
  if (!(x > 0.0) || !(x < 2.0 * j)) throw std::invalid_argument("k_fn: need 0 < x < 2j");
  return -2.0 * j / (2.0 * j - x) + std::log(2.0 * j / x - 1.0);
}

double h_fn(double j, double x) {
  if (!(x > 0.0) || !(x < 2.0 * j)) throw std::invalid_argument("h_fn: need 0 < x < 2j");
  return std::exp(x * std::log(2.0 * j / x - 1.0));
}

double g_fn(int j, int k) {
  if (k < 1 || k > j) throw std::invalid_argument("g_fn: need 1 <= k <= j");
  if (k == j) return 1.0;  // (2j/j - 1)^j * C(j,j)
  const double b = static_cast<double>(binomial(j, k));
  return h_fn(j, k) * b;
}

double solve_xj(int j) {
  if (j < 2) throw std::invalid_argument("solve_xj: need j >= 2");
  const double J = j;
  double hi = J;  // k_j(j) = -2
  double lo = 1.0;
  // k_j(1) > 0 holds for j >= 3 but fails at j = 2 (the root 2a sits below
  // 1); extend the bracket leftwards until the sign change appears.
  while (k_fn(J, lo) <= 0.0) {
    lo *= 0.5;
    if (lo < 1e-8) throw std::runtime_error("solve_xj: bracketing failure");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    (k_fn(J, mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

BinomialBound binomial_bounds(int j) {
  if (j < 2) throw std::invalid_argument("binomial_bounds: need j >= 2");
  BinomialBound r;
  r.exact = binomial(j, j / 2);
  const double denom = (j % 2 == 0) ? j : j + 1;
  r.bound = std::sqrt(2.0 / denom) * std::exp2(static_cast<double>(j)) / std::sqrt(M_PI);
  return r;
}

namespace {

// Exact integers are converted to double (at most one half-ulp up) and
// compared against the float bound with a relative slack so an inequality
// check can never fail from rounding direction.
bool leq_with_slack(const BigInt& exact, double bound) {
  return static_cast<double>(exact) <= bound * (1.0 + 1e-9);
}

}  // namespace

BoundReport entropy_upper_bound(int j_check) {
  BoundReport rep;
  rep.w = lambert_w_over_e();
  rep.w_residual = std::abs(rep.w * std::exp(rep.w) - std::exp(-1.0));
  rep.a = 2.0 * rep.w / (1.0 + rep.w);
  rep.pow_term = std::pow(2.0 / rep.a - 1.0, rep.a);
  rep.pow_term_identity = std::exp(2.0 * rep.w);
  rep.final_bound = 2.0 * rep.pow_term;
  rep.log_final_bound = std::log(rep.final_bound);

  auto fail = [&rep](const std::string& why) {
    rep.chain_ok = false;
    rep.failure = why;
    return rep;
  };

  rep.chain_ok = true;
  if (!(rep.a > 0.435 && rep.a < 0.436)) return fail("a outside (0.435, 0.436)");
  if (!(rep.pow_term < 1.7454)) return fail("(2/a-1)^a >= 1.7454");
  if (std::abs(rep.pow_term - rep.pow_term_identity) > 1e-12)
    return fail("(2/a-1)^a disagrees with e^{2w}");
  if (!(rep.final_bound > 3.4905 && rep.final_bound < 3.4908))
    return fail("final bound outside (3.4905, 3.4908)");

  const CompositionCounts qc(j_check);
  for (int j = 2; j <= j_check; ++j) {
    BoundPerJ pj;
    pj.j = j;
    pj.x_j = solve_xj(j);
    pj.h_at_xj = h_fn(j, pj.x_j);
    pj.central_binomial_bound = binomial_bounds(j).bound;
    const BigInt central = binomial(j, j / 2);
    if (!leq_with_slack(central, pj.central_binomial_bound))
      return fail("central binomial bound failed at j=" + std::to_string(j));
    double cap = std::pow(1.7454, j) * static_cast<double>(central);
    for (int k = 1; k <= j; ++k) {
      const double g = g_fn(j, k);
      pj.max_g = std::max(pj.max_g, g);
      if (!leq_with_slack(qc.q(j, k), g))
        return fail("Q(j,k) exceeded its AM-GM bound at j=" + std::to_string(j) +
                    " k=" + std::to_string(k));
      if (!(g <= cap * (1.0 + 1e-9)))
        return fail("g_j(k) exceeded 1.7454^j C(j,j/2) at j=" + std::to_string(j));
    }
    const BigInt qj = qc.q_total(j);
    if (!leq_with_slack(qj, static_cast<double>(j) * cap))
      return fail("Q(j) exceeded j * 1.7454^j * C(j,j/2) at j=" + std::to_string(j));
    const double thm1 = std::pow(rep.final_bound, j) * std::sqrt(static_cast<double>(j)) /
                        std::sqrt(M_PI / 2.0);
    if (!leq_with_slack(qj, thm1))
      return fail("Q(j) exceeded final^j sqrt(j)/sqrt(pi/2) at j=" + std::to_string(j));
    rep.per_j.push_back(pj);
  }
  return rep;
}

GrowthReport q_growth_report(int j_max) {
  if (j_max < 10) throw std::invalid_argument("q_growth_report: need j_max >= 10");
  const CompositionCounts qc(j_max);
  GrowthReport rep;
  BigInt partial = 0;
  BigInt prev = 0;
  for (int j = 1; j <= j_max; ++j) {
    const BigInt qj = qc.q_total(j);
    if (j >= 2)
      rep.ratios.push_back(static_cast<double>(qj) / static_cast<double>(prev));
    partial += qj;
    rep.partial_sum_roots.push_back(
        std::pow(static_cast<double>(partial), 1.0 / static_cast<double>(j)));
    prev = qj;
  }
  return rep;
}

}  // namespace stadium
