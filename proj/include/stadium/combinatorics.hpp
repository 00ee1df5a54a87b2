#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

namespace stadium {

using BigInt = boost::multiprecision::cpp_int;

// Exact counts Q(j,k) of signed compositions (n_1,m_1,...,n_k,m_k) of j
// (n_i integer, m_i >= 1, sum |n_i| + sum m_i = j), as arbitrary-precision
// integers. Q(0) is the empty composition, counted as 1.
class CompositionCounts {
 public:
  explicit CompositionCounts(int j_max);

  int j_max() const { return j_max_; }
  // 1 <= k <= j <= j_max
  const BigInt& q(int j, int k) const;
  // Row sum Q(j); Q(0) = 1.
  BigInt q_total(int j) const;

 private:
  int j_max_;
  std::vector<std::vector<BigInt>> rows_;  // rows_[j][k-1]
};

CompositionCounts count_q(int j_max);

// AM-GM bound (2j/k - 1)^k * C(j,k) >= Q(j,k).
double q_upper_bound(int j, int k);

BigInt binomial(int n, int k);

// w solving w e^w = 1/e (equivalently 1 = w e^{w+1}), by safeguarded Newton
// iteration on [0.2, 0.3] from w0 = 0.25, to |w e^w - 1/e| < 1e-15.
double lambert_w_over_e();

// a = 2w/(1+w); lies in (0.435, 0.436).
double compute_a();

// k_j(x) = -2j/(2j-x) + ln(2j/x - 1); strictly decreasing in x, and
// k_j(c*j) depends only on c.
double k_fn(double j, double x);
// h_j(x) = (2j/x - 1)^x.
double h_fn(double j, double x);
// g_j(k) = (2j/k - 1)^k * C(j,k) for integer 1 <= k <= j.
double g_fn(int j, int k);

// Root of k_j, found by bisection. Equals a*j; for j = 2 the root lies
// below 1, so the bracket is extended leftwards until the sign changes.
double solve_xj(int j);

struct BinomialBound {
  BigInt exact;  // C(j, floor(j/2))
  double bound;  // sqrt(2/j) 2^j/sqrt(pi) for even j, sqrt(2/(j+1)) 2^j/sqrt(pi) for odd j
};
BinomialBound binomial_bounds(int j);

struct BoundPerJ {
  int j = 0;
  double x_j = 0.0;
  double h_at_xj = 0.0;
  double max_g = 0.0;  // max over integer k of g_j(k)
  double central_binomial_bound = 0.0;
};

struct BoundReport {
  double w = 0.0;                  // W(1/e)
  double w_residual = 0.0;         // |w e^w - 1/e|
  double a = 0.0;                  // 2w/(1+w)
  double pow_term = 0.0;           // (2/a - 1)^a
  double pow_term_identity = 0.0;  // e^{2w}, the independent route
  double final_bound = 0.0;        // 2 (2/a - 1)^a
  double log_final_bound = 0.0;
  std::vector<BoundPerJ> per_j;
  bool chain_ok = false;
  std::string failure;  // non-empty when a chain inequality failed
};

// Evaluates every constant of the bound chain and validates the chain
// inequalities against the exact Q table up to j_check:
//   (2/a-1)^a < 1.7454, final in (3.4905, 3.4908),
//   Q(j,k) <= g_j(k), g_j(k) <= 1.7454^j C(j,floor(j/2)),
//   Q(j) <= j * 1.7454^j * C(j,floor(j/2)),
//   Q(j) <= final^j * sqrt(j) / sqrt(pi/2).
BoundReport entropy_upper_bound(int j_check = 40);

struct GrowthReport {
  std::vector<double> ratios;             // ratios[i] = Q(i+2)/Q(i+1)
  std::vector<double> partial_sum_roots;  // entry j-1: (sum_{1<=i<=j} Q(i))^{1/j}
};

GrowthReport q_growth_report(int j_max);

}  // namespace stadium
