#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "tautrel/combinat.hpp"
#include "tautrel/errors.hpp"
#include "tautrel/hain.hpp"
#include "tautrel/kernels.hpp"
#include "tautrel/wk.hpp"

using namespace tautrel;

namespace {

MultiPoly X(const std::string& s, int k) { return MultiPoly::parse(s, vars_x(k)); }

// (k-2)! / (prod d_i! * d0!): genus-0 kernels carry no weights
Rational genus0_multinomial(const std::vector<int>& d, int d0) {
  Rational r = Rational(factorial(static_cast<int>(d.size()) - 2)) / Rational(factorial(d0));
  for (int e : d) r /= Rational(factorial(e));
  return r;
}

}  // namespace

TEST(WK, SpecExamples) {
  EXPECT_EQ(wk_integral(0, {0, 0, 0}), 1);
  EXPECT_EQ(wk_integral(0, {1, 0, 0, 0}), 1);
  EXPECT_EQ(wk_integral(1, {1}), make_rational(1, 24));
  EXPECT_EQ(wk_integral(1, {0}), 0);
}

TEST(WK, Genus0ClosedFormUpTo8Points) {
  for (int k = 3; k <= 8; ++k)
    for (const auto& d : compositions(k - 3, k)) EXPECT_EQ(wk_integral(0, d), wk_genus0_closed(d)) << k;
}

// Values of the KdV tau function, tabulated independently before the build.
TEST(WK, KnownHigherGenusValues) {
  EXPECT_EQ(wk_integral(1, {1, 1}), make_rational(1, 24));
  EXPECT_EQ(wk_integral(1, {1, 1, 1}), make_rational(1, 12));
  EXPECT_EQ(wk_integral(1, {2, 0}), make_rational(1, 24));
  EXPECT_EQ(wk_integral(2, {4}), make_rational(1, 1152));
  EXPECT_EQ(wk_integral(2, {3, 2}), make_rational(29, 5760));
  EXPECT_EQ(wk_integral(2, {2, 2, 2}), make_rational(7, 240));
  EXPECT_EQ(wk_integral(3, {7}), make_rational(1, 82944));
  EXPECT_EQ(wk_integral(4, {10}), make_rational(1, 7962624));
}

TEST(WK, StringAndDilaton) {
  for (int g = 0; g <= 3; ++g)
    for (int k = 1; k <= 4; ++k) {
      if (2 * g - 2 + k <= 0) continue;
      for (const auto& d : compositions(3 * g - 3 + k + 1, k)) {
        std::vector<int> with0 = d, with1 = d;
        with0.push_back(0);
        with1.push_back(1);
        Rational s = 0;
        for (int i = 0; i < k; ++i)
          if (d[i] > 0) {
            auto e = d;
            --e[i];
            s += wk_integral(g, e);
          }
        EXPECT_EQ(wk_integral(g, with0), s);
      }
      for (const auto& d : compositions(3 * g - 3 + k, k)) {
        std::vector<int> with1 = d;
        with1.push_back(1);
        EXPECT_EQ(wk_integral(g, with1), Rational(2 * g - 2 + k) * wk_integral(g, d));
      }
    }
}

TEST(WK, Unstable) {
  EXPECT_THROW(wk_integral(0, {0, 0}), UnstableTarget);
  EXPECT_THROW(wk_integral(1, {}), UnstableTarget);
  EXPECT_EQ(wk_or_zero(0, {0, 0}), 0);
}

TEST(Kernel, SpecExamples) {
  const auto& kt = KernelTable::shipped();
  EXPECT_EQ(kt.kernel(0, 2, {0, 0}, 0), X("1", 2));
  EXPECT_EQ(kt.kernel(0, 3, {0, 0, 0}, 1), X("1", 3));
  EXPECT_TRUE(kt.kernel(0, 1, {0}, 0).is_zero());
  EXPECT_EQ(kt.kernel(1, 1, {0}, 0), X("1/24*x1^2", 1));
}

TEST(Kernel, Genus0Multinomial) {
  const auto& kt = KernelTable::shipped();
  for (int k = 2; k <= 6; ++k)
    for (const auto& dd : compositions(k - 2, k + 1)) {
      std::vector<int> d(dd.begin(), dd.end() - 1);
      EXPECT_EQ(kt.kernel(0, k, d, dd.back()), MultiPoly::constant(vars_x(k), genus0_multinomial(d, dd.back())));
    }
}

TEST(Kernel, MatchesCompactTypeOracle) {
  const auto& kt = KernelTable::shipped();
  int cases = 0;
  for (int g = 1; g <= 2; ++g)
    for (int k = 1; k <= 4; ++k)
      for (const auto& dd : compositions(g - 2 + k, k + 1)) {
        std::vector<int> d(dd.begin(), dd.end() - 1);
        EXPECT_EQ(kt.kernel(g, k, d, dd.back()), hain_kernel(g, k, d, dd.back())) << g << " " << k;
        ++cases;
      }
  EXPECT_GT(cases, 100);
}

TEST(Kernel, ReductionPointDoesNotMatter) {
  const auto& kt = KernelTable::shipped();
  for (int g = 0; g <= 2; ++g)
    for (int k = 1; k <= 5; ++k)
      for (const auto& dd : compositions(g - 2 + k, k + 1)) {
        std::vector<int> d(dd.begin(), dd.end() - 1);
        MultiPoly ref = kt.kernel(g, k, d, dd.back());
        EXPECT_TRUE(ref.is_zero() || (ref.is_homogeneous() && ref.degree() == 2 * g));
        for (int i = 0; i < k; ++i)
          if (d[i] > 0) EXPECT_EQ(kt.kernel_step(g, k, d, dd.back(), i), ref);
      }
}

TEST(Kernel, SymmetricUnderPairedPermutation) {
  const auto& kt = KernelTable::shipped();
  std::vector<int> d{2, 0, 1}, perm{0, 1, 2};
  MultiPoly ref = kt.kernel(2, 3, d, 0);
  ASSERT_FALSE(ref.is_zero());
  do {
    std::vector<int> pd(3);
    for (int j = 0; j < 3; ++j) pd[perm[j]] = d[j];
    EXPECT_EQ(kt.kernel(2, 3, pd, 0), permute_vars(ref, perm, vars_x(3)));
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST(Kernel, StringSpecialization) {
  const auto& kt = KernelTable::shipped();
  for (int g = 0; g <= 2; ++g)
    for (int k = 2; k <= 5; ++k) {
      if (g == 0 && k == 2) continue;  // forgetting the point leaves nothing stable
      for (const auto& dd : compositions(g - 2 + k, k)) {
        std::vector<int> d(dd.begin(), dd.end() - 1);
        const int d0 = dd.back();
        std::vector<int> full = d;
        full.push_back(0);
        MultiPoly lhs = set_last_zero(kt.kernel(g, k, full, d0));
        MultiPoly rhs(vars_x(k - 1));
        for (int i = 0; i < k - 1; ++i)
          if (d[i] > 0) {
            auto e = d;
            --e[i];
            rhs += kt.kernel(g, k - 1, e, d0);
          }
        if (d0 > 0) rhs += kt.kernel(g, k - 1, d, d0 - 1);
        EXPECT_EQ(lhs, rhs) << g << " " << k;
      }
    }
}

TEST(Kernel, BaseCompletionFromString) {
  const auto& kt = KernelTable::shipped();
  EXPECT_EQ(set_last_zero(kt.base(1, 3)), kt.base(1, 2));
  EXPECT_EQ(set_last_zero(kt.base(2, 6)), kt.base(2, 5));
  EXPECT_TRUE(is_symmetric(kt.base(2, 5)));
}

TEST(Kernel, Uncalibrated) {
  const auto& kt = KernelTable::shipped();
  EXPECT_THROW(kt.kernel(3, 1, {0}, 2), UncalibratedBase);
  KernelTable genus0;
  EXPECT_THROW(genus0.kernel(1, 1, {0}, 0), UncalibratedBase);
  EXPECT_EQ(genus0.kernel(0, 3, {1, 0, 0}, 0), X("1", 3));
}

TEST(Calibration, FreeConstantCounts) {
  EXPECT_EQ(calibrate_base_table(0, 6, {}, "none").constants, 0);
  EXPECT_EQ(calibrate_base_table(1, 6, hain_rows(1), "hain-compact-type").constants, 2);
  EXPECT_EQ(free_constant_count(4, 1) + free_constant_count(4, 2) + free_constant_count(4, 3) + free_constant_count(4, 4) +
                free_constant_count(4, 5),
            5);
  EXPECT_EQ(calibrate_base_table(2, 6, hain_rows(2), "hain-compact-type").constants, 7);
}

TEST(Calibration, ShippedTableIsReproducible) {
  auto res = calibrate_base_table(2, 6, hain_rows(2), "hain-compact-type");
  EXPECT_EQ(res.text, std::string(KernelTable::shipped_constants_text()));
  auto again = KernelTable::from_constants(res.text);
  EXPECT_EQ(again->base(2, 3), KernelTable::shipped().base(2, 3));
}

TEST(Calibration, RowsRoundTrip) {
  auto rows = parse_oracle_rows(KernelTable::shipped_constants_text());
  EXPECT_EQ(rows.size(), 6u);
  EXPECT_EQ(calibrate_base_table(2, 6, rows, "hain-compact-type").constants, 7);
}

TEST(Calibration, ContradictoryRows) {
  auto rows = hain_rows(1);
  rows.push_back({1, 1, X("1/12*x1^2", 1)});
  EXPECT_THROW(calibrate_base_table(1, 6, rows, "test"), InconsistentCalibration);
}

TEST(Calibration, StringViolationRejected) {
  // K0(1,2) must restrict to K0(1,1)
  std::vector<CalibrationRow> rows{{1, 1, X("1/24*x1^2", 1)}, {1, 2, X("1/12*x1^2 + 1/12*x2^2", 2)}};
  EXPECT_THROW(calibrate_base_table(1, 6, rows, "test"), InconsistentCalibration);
}

TEST(Calibration, MissingRows) {
  EXPECT_THROW(calibrate_base_table(1, 6, {{1, 1, X("1/24*x1^2", 1)}}, "test"), UncalibratedBase);
}

TEST(Calibration, TamperedConstantsFileRejected) {
  std::string text(KernelTable::shipped_constants_text());
  auto pos = text.find("K0 g=1 k=1 poly=1/24*x1^2");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 25, "K0 g=1 k=1 poly=1/25*x1^2");
  EXPECT_THROW(KernelTable::from_constants(text), InconsistentCalibration);
  EXPECT_THROW(KernelTable::from_constants("K0 g=1 k=1"), ParseError);
}
