#include <cmath>

#include "doctest.h"
#include "stadium/language.hpp"

using namespace stadium;
using CL = CodeLetter;

TEST_CASE("full shift oracle: complexity, special counts, Cassaigne") {
  const LanguageSample ls = full_shift_language(2, 13);
  size_t expect = 2;
  for (int n = 1; n <= 13; ++n) {
    CHECK(ls.p(n) == expect);
    expect *= 2;
  }
  // every word is bispecial with counts (2,2,4)
  for (int n = 1; n <= 4; ++n) {
    for (uint64_t w : ls.words(n)) {
      const SpecialCounts sc = special_counts(ls, w, n);
      CHECK(sc.m_left == 2);
      CHECK(sc.m_right == 2);
      CHECK(sc.m_bi == 4);
    }
    CHECK(bispecial_words(ls, n).size() == ls.p(n));
  }
  for (int k = 1; k <= 10; ++k) {
    const CassaigneResult r = cassaigne_residual(ls, k);
    CHECK(r.residual == 0);
    CHECK(r.levels_saturated);
  }
  const EntropyEstimate est = entropy_estimate(ls);
  CHECK(std::abs(est.slope - std::log(2.0)) < 0.01);
}

TEST_CASE("golden mean shift oracle") {
  const LanguageSample ls = golden_mean_language(13);
  // p(n) = F(n+2): 2, 3, 5, 8, 13, ...
  size_t a = 1, b = 2;
  for (int n = 1; n <= 13; ++n) {
    const size_t expect = a + b;
    CHECK(ls.p(n) == expect);
    a = b;
    b = expect;
  }
  // the word "1" extends only by 0 on both sides
  const uint64_t one = 1;
  const SpecialCounts sc = special_counts(ls, one, 1);
  CHECK(sc.m_left == 1);
  CHECK(sc.m_right == 1);
  // bispecial words of length 1: just "0"
  const auto bl1 = bispecial_words(ls, 1);
  REQUIRE(bl1.size() == 1);
  CHECK(bl1[0] == 0);
  for (int k = 1; k <= 10; ++k) CHECK(cassaigne_residual(ls, k).residual == 0);
}

TEST_CASE("factorial closure holds on a sampled billiard language") {
  StadiumTable t(2.0);
  const LanguageSample ls = sample_language(t, 5, 20000, 7);
  for (int n = 2; n <= 5; ++n) {
    for (uint64_t w : ls.words(n)) {
      CHECK(ls.contains(word_factor(w, 0, n - 1), n - 1));
      CHECK(ls.contains(word_factor(w, 1, n - 1), n - 1));
    }
  }
}

TEST_CASE("billiard l=2: p(1)=6, p(2)=30, forbidden pairs absent") {
  StadiumTable t(2.0);
  const LanguageSample ls = sample_language(t, 4, 100000, 11);
  CHECK(ls.p(1) == 6);
  CHECK(ls.p(2) == 30);

  // exactly TT, BB and the four mixed-sign arc pairs are missing
  int missing = 0;
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      const uint64_t w = static_cast<uint64_t>(a) | (static_cast<uint64_t>(b) << 3);
      if (!ls.contains(w, 2)) {
        ++missing;
        const CL ca = static_cast<CL>(a);
        const CL cb = static_cast<CL>(b);
        const bool flat_rep = (ca == CL::T && cb == CL::T) || (ca == CL::B && cb == CL::B);
        const bool mixed_arc = is_arc_letter(ca) && is_arc_letter(cb) &&
                               side_of(ca) == side_of(cb) && ca != cb;
        CHECK((flat_rep || mixed_arc));
      }
    }
  }
  CHECK(missing == 6);

  // doubling samples never decreases complexity
  const LanguageSample more = sample_language(t, 4, 200000, 11);
  for (int n = 1; n <= 4; ++n) CHECK(more.p(n) >= ls.p(n));

  // the letter T extends both ways by several letters
  const uint64_t tw = static_cast<uint64_t>(CL::T);
  const SpecialCounts sc = special_counts(ls, tw, 1);
  CHECK(sc.m_left >= 2);
  CHECK(sc.m_right >= 2);
  CHECK(sc.m_left <= 6);
  CHECK(sc.m_right <= 6);
  CHECK(sc.m_bi <= sc.m_left * sc.m_right);
}

TEST_CASE("billiard Cassaigne residual vanishes at saturated small levels") {
  StadiumTable t(2.0);
  const LanguageSample ls = sample_language(t, 4, 400000, 3);
  const CassaigneResult r = cassaigne_residual(ls, 1);
  CHECK(r.levels_saturated);
  CHECK(r.residual == 0);
  // every Cassaigne summand obeys the (m_b - m_l - m_r + 1) <= 25 cap
  for (uint64_t w : ls.words(1)) {
    const SpecialCounts sc = special_counts(ls, w, 1);
    CHECK(sc.m_bi - sc.m_left - sc.m_right + 1 <= 25);
    CHECK(sc.m_bi >= std::max(sc.m_left, sc.m_right));
  }
}

TEST_CASE("entropy estimate stays under the analytic bound") {
  StadiumTable t(2.0);
  const LanguageSample ls = sample_language(t, 8, 200000, 21);
  const EntropyEstimate est = entropy_estimate(ls, 2, 8);
  CHECK(est.slope <= std::log(3.4908) + 0.05);
  CHECK(est.analytic_bound_log == doctest::Approx(std::log(3.4908)));
  CHECK(est.reference_lower_log == doctest::Approx(std::log(1.0 + std::sqrt(2.0))));
}

TEST_CASE("multithreaded sampling is deterministic") {
  StadiumTable t(2.0);
  SampleOptions opt1;
  opt1.threads = 1;
  SampleOptions opt2;
  opt2.threads = 2;
  const LanguageSample a = sample_language(t, 5, 30000, 77, opt1);
  const LanguageSample b = sample_language(t, 5, 30000, 77, opt2);
  for (int n = 1; n <= 5; ++n) {
    REQUIRE(a.p(n) == b.p(n));
    for (uint64_t w : a.words(n)) CHECK(b.contains(w, n));
    CHECK(a.saturated(n) == b.saturated(n));
  }
}

TEST_CASE("code separation: cell diameters shrink with the window length") {
  StadiumTable t(2.0);
  const auto rows = code_separation_report(t, 2, 10, 20000, 5);
  REQUIRE(rows.size() == 9);
  for (size_t i = 0; i + 1 < rows.size(); ++i) {
    CHECK(rows[i].groups > 0);
    CHECK(rows[i + 1].median_diam < rows[i].median_diam);
  }
}
