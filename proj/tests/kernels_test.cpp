#include "sbf/kernels.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "sbf/image.hpp"

namespace sbf {
namespace {

using oracle::BigFloat;
using oracle::BigInt;

// cos(s / (sqrt(N) sigma))^N, the untruncated kernel in closed form.
double raised_cosine(int N, double sigma, double s) {
  return std::pow(std::cos(s / (std::sqrt(double(N)) * sigma)), N);
}

TEST(OrderThreshold, RoundModeKnownValues) {
  const auto rc = KernelFamily::RaisedCosine;
  EXPECT_EQ(order_threshold(255, 20, rc, ThresholdMode::Round), 66);
  EXPECT_EQ(order_threshold(255, 100, rc, ThresholdMode::Round), 3);
  EXPECT_EQ(order_threshold(255, 10, rc, ThresholdMode::Round), 263);
  EXPECT_EQ(order_threshold(255, 5, rc, ThresholdMode::Round), 1053);
}

TEST(OrderThreshold, CeilModeCoversExactBound) {
  const auto rc = KernelFamily::RaisedCosine;
  EXPECT_EQ(order_threshold(255, 10, rc), 264);
  for (double sigma : {3.0, 5.0, 7.5, 10.0, 10.5, 20.0, 33.0}) {
    const int n = order_threshold(255, sigma, rc);
    const double exact = 4.0 * 255 * 255 / (std::numbers::pi * std::numbers::pi * sigma * sigma);
    EXPECT_GE(n, exact);
    EXPECT_LT(n - 1, exact);
  }
  EXPECT_EQ(order_threshold(255, 10, KernelFamily::Polynomial), 326);  // ceil(325.125)
}

TEST(OrderThreshold, DegenerateInputs) {
  EXPECT_EQ(order_threshold(0, 10, KernelFamily::RaisedCosine), 1);
  EXPECT_EQ(order_threshold(0, 10, KernelFamily::Polynomial), 1);
  EXPECT_EQ(order_threshold(255, 1e6, KernelFamily::RaisedCosine), 1);
  EXPECT_THROW(order_threshold(255, 0, KernelFamily::RaisedCosine), InvalidParameter);
  EXPECT_THROW(order_threshold(255, -2, KernelFamily::RaisedCosine), InvalidParameter);
}

TEST(BinomialWeights, PartitionOfUnityUpTo2000) {
  for (int N = 0; N <= 2000; ++N) {
    const auto w = binomial_weights(N);
    double sum = 0.0;
    for (double v : w) sum += v;
    ASSERT_NEAR(sum, 1.0, 1e-12) << "N=" << N;
  }
}

TEST(BinomialWeights, MatchExactBinomials) {
  for (int N : {1, 2, 7, 60, 61, 263, 1000, 2000}) {
    const auto w = binomial_weights(N);
    const auto row = oracle::binomial_row(N);
    const BigFloat total = BigFloat(BigInt(1) << N);
    for (int n = 0; n <= N; ++n) {
      const double exact = static_cast<double>(BigFloat(row[n]) / total);
      if (exact < 1e-290) continue;  // below the range the weights keep
      ASSERT_NEAR(w[n], exact, 1e-12 * exact) << "N=" << N << " n=" << n;
      ASSERT_GT(w[n], 0.0);
      ASSERT_EQ(w[n], w[N - n]);
    }
  }
}

TEST(TruncationExact, Examples) {
  EXPECT_EQ(truncation_index_exact(10, 0.0), 0);
  // Weights {1,4,6,4,1}/16: 1/16 + 4/16 = 0.3125 > 0.25 already at M = 0.
  EXPECT_EQ(truncation_index_exact(4, 0.5), 0);
}

TEST(TruncationExact, Order263Epsilon005AgainstOracle) {
  const int m = truncation_index_exact(263, 0.005);
  EXPECT_EQ(m, oracle::truncation_index(263, 0.005));
  EXPECT_LE(std::abs(m - 111), 5);
}

TEST(TruncationExact, SweepAgainstOracle) {
  for (int N = 1; N <= 400; N += 7)
    for (double eps : {1e-4, 0.001, 0.005, 0.01, 0.05, 0.2, 0.6, 0.95})
      ASSERT_EQ(truncation_index_exact(N, eps), oracle::truncation_index(N, eps))
          << "N=" << N << " eps=" << eps;
}

TEST(TruncationChernoff, Examples) {
  // sqrt(4 * 263 * ln 400) = 79.39..., (263 - 79.39) / 2 = 91.8
  EXPECT_NEAR(std::sqrt(1052 * std::log(400.0)), 79.39, 0.005);
  EXPECT_EQ(truncation_index_chernoff(263, 0.005), 91);
  EXPECT_EQ(truncation_index_chernoff(4, 0.5), 0);
  EXPECT_EQ(truncation_index_chernoff(1, 0.9), 0);
  EXPECT_THROW(truncation_index_chernoff(100, 0.0), InvalidParameter);
}

TEST(TruncationChernoff, ClampedToKeepOneTerm) {
  for (int N = 1; N <= 50; ++N)
    for (double eps : {0.5, 0.9, 0.99}) {
      const int m = truncation_index_chernoff(N, eps);
      EXPECT_GE(m, 0);
      EXPECT_LT(2 * m, N);
    }
}

TEST(TruncationChernoff, TailBoundHoldsExhaustively) {
  for (int N = 1; N <= 200; ++N) {
    const auto row = oracle::binomial_row(N);
    const BigFloat total = BigFloat(BigInt(1) << N);
    BigInt cumulative = 0;
    for (int M = 0; 2 * M <= N; ++M) {
      cumulative += row[M];
      const BigFloat tail = BigFloat(cumulative) / total;
      const BigFloat bound = exp(-BigFloat((N - 2 * M) * (N - 2 * M)) / (4 * N));
      ASSERT_LE(tail, bound) << "N=" << N << " M=" << M;
    }
  }
}

TEST(TruncationChernoff, ConservativeRelativeToExactRule) {
  for (int N = 100; N <= 1000; N += 100)
    for (double eps : {0.05, 0.01, 0.005})
      EXPECT_LE(truncation_index_chernoff(N, eps), truncation_index_exact(N, eps) + 1)
          << "N=" << N << " eps=" << eps;
}

TEST(SelectPlan, BranchesOnSigmaR) {
  const auto rc = KernelFamily::RaisedCosine;
  const KernelPlan wide = select_plan(255, 60, 0.01, rc);
  EXPECT_EQ(wide.truncation, 0);

  const KernelPlan mid = select_plan(255, 20, 0.05, rc);
  EXPECT_EQ(mid.truncation, truncation_index_exact(mid.order, 0.05));
  EXPECT_LT(mid.retained_terms(), mid.order + 1);

  const KernelPlan narrow = select_plan(255, 10, 0.01, rc);
  EXPECT_EQ(narrow.truncation, truncation_index_chernoff(narrow.order, 0.01));

  const KernelPlan flat = select_plan(0, 10, 0.05, rc);
  EXPECT_EQ(flat.order, 1);
  EXPECT_EQ(flat.truncation, 0);

  EXPECT_EQ(select_plan(255, 5, 0.0, rc).truncation, 0);
  EXPECT_EQ(select_plan(255, 5, 0.05, KernelFamily::Polynomial).truncation, 0);
  EXPECT_THROW(select_plan(255, 5, 1.0, rc), InvalidParameter);
  EXPECT_THROW(select_plan(255, 5, -0.1, rc), InvalidParameter);
}

TEST(SelectPlan, InvariantsHoldAcrossParameters) {
  for (double T : {0.0, 1.0, 37.0, 128.0, 255.0})
    for (double sigma : {2.0, 5.0, 9.9, 10.0, 10.1, 25.0, 40.0, 41.0, 200.0})
      for (double eps : {0.0, 0.001, 0.01, 0.05, 0.3}) {
        const KernelPlan p = select_plan(T, sigma, eps, KernelFamily::RaisedCosine);
        EXPECT_NO_THROW(validate_plan(p));
        EXPECT_GE(p.order, order_threshold(T, sigma, KernelFamily::RaisedCosine));
        EXPECT_LT(2 * p.truncation, p.order + (p.order == 1 ? 1 : 0));
        if (eps == 0.0) EXPECT_EQ(p.truncation, 0);
      }
}

TEST(Expansion, HandExpansionOfOrderTwo) {
  // cos^2(s / sqrt 2) = 1/4 e^{-i sqrt2 s} + 1/2 + 1/4 e^{i sqrt2 s}
  const KernelPlan plan = make_plan(1.0, 1.0, 0.0, KernelFamily::RaisedCosine,
                                    TruncationRule::None, 2);
  const Expansion e = raised_cosine_expansion(plan);
  ASSERT_EQ(e.size(), 3u);
  const double r2 = std::sqrt(2.0);
  EXPECT_DOUBLE_EQ(e.terms()[0].weight, 0.25);
  EXPECT_DOUBLE_EQ(e.terms()[0].frequency, -r2);
  EXPECT_DOUBLE_EQ(e.terms()[1].weight, 0.5);
  EXPECT_DOUBLE_EQ(e.terms()[1].frequency, 0.0);
  EXPECT_DOUBLE_EQ(e.terms()[2].weight, 0.25);
  EXPECT_DOUBLE_EQ(e.terms()[2].frequency, r2);
}

TEST(Expansion, Order263TruncatedAt111) {
  KernelPlan plan = make_plan(255, 10, 0.005, KernelFamily::RaisedCosine,
                              TruncationRule::None, 263);
  plan.truncation = 111;
  const Expansion e = raised_cosine_expansion(plan);
  EXPECT_EQ(e.size(), 42u);
  // The error of the M = 111 series is its dropped mass (attained at s = 0).
  const double dropped = 1.0 - e.retained_mass();
  for (int i = 0; i <= 2000; ++i) {
    const double s = -255.0 + 0.255 * i;
    EXPECT_LE(std::abs(raised_cosine(263, 10, s) - e(s)), dropped + 1e-12);
  }
}

TEST(Expansion, SymmetricFrequenciesAndRetainedMass) {
  for (double sigma : {4.0, 10.0, 15.0, 30.0})
    for (double eps : {0.0, 0.005, 0.05, 0.2}) {
      const KernelPlan plan = select_plan(255, sigma, eps, KernelFamily::RaisedCosine);
      const Expansion e = raised_cosine_expansion(plan);
      ASSERT_EQ(static_cast<int>(e.size()), plan.order - 2 * plan.truncation + 1);
      const auto t = e.terms();
      for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& mirror = t[t.size() - 1 - i];
        EXPECT_EQ(t[i].frequency, -mirror.frequency);
        EXPECT_EQ(t[i].weight, mirror.weight);
      }
      const double mass = e.retained_mass();
      EXPECT_LE(mass, 1.0 + 1e-12);
      EXPECT_GT(mass, 1.0 - eps - 1e-12);
    }
}

TEST(Expansion, UntruncatedIsOneAtOrigin) {
  for (double sigma : {3.0, 10.0, 50.0}) {
    const Expansion e = raised_cosine_expansion(select_plan(255, sigma, 0.0, KernelFamily::RaisedCosine));
    EXPECT_NEAR(eval_truncated_kernel(e, 0.0), 1.0, 1e-12);
  }
}

TEST(Expansion, MatchesClosedFormWhenUntruncated) {
  for (double sigma : {5.0, 20.0, 60.0}) {
    const KernelPlan plan = select_plan(255, sigma, 0.0, KernelFamily::RaisedCosine);
    const Expansion e = raised_cosine_expansion(plan);
    for (int i = 0; i <= 500; ++i) {
      const double s = -255.0 + 255.0 * i / 250.0;
      ASSERT_NEAR(e(s), raised_cosine(plan.order, sigma, s), 1e-12);
    }
  }
}

TEST(Expansion, PositiveAndMonotoneAboveThreshold) {
  for (double sigma : {5.0, 10.0, 20.0, 40.0, 100.0}) {
    const KernelPlan plan = select_plan(255, sigma, 0.0, KernelFamily::RaisedCosine);
    const Expansion e = raised_cosine_expansion(plan);
    double prev = e(0.0);
    for (int i = 1; i < 4096; ++i) {
      const double v = e(255.0 * i / 4095.0);
      ASSERT_GE(v, -1e-13) << "sigma=" << sigma;
      ASSERT_LE(v, 1.0 + 1e-13);
      ASSERT_LE(v, prev + 1e-13) << "sigma=" << sigma << " i=" << i;
      prev = v;
    }
  }
}

TEST(Expansion, RandomPointsInUnitRangeAndMonotoneInMagnitude) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-255.0, 255.0);
  const Expansion e = raised_cosine_expansion(select_plan(255, 30, 0.0, KernelFamily::RaisedCosine));
  std::vector<double> s(1000);
  for (double& v : s) v = dist(rng);
  std::sort(s.begin(), s.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  double prev = 1.0;
  for (double v : s) {
    const double k = e(v);
    EXPECT_GE(k, -1e-13);
    EXPECT_LE(k, prev + 1e-13);
    prev = k;
  }
}

TEST(Expansion, TruncationErrorWithinEpsilon) {
  for (TruncationRule rule : {TruncationRule::Exact, TruncationRule::Chernoff, TruncationRule::Auto})
    for (double eps : {0.005, 0.01, 0.05}) {
      const KernelPlan plan = make_plan(255, 10, eps, KernelFamily::RaisedCosine, rule);
      const Expansion e = raised_cosine_expansion(plan);
      double worst = 0.0, lowest = 1.0;
      for (int i = 0; i <= 10200; ++i) {
        const double s = -255.0 + 0.05 * i;
        const double approx = e(s);
        worst = std::max(worst, std::abs(raised_cosine(plan.order, 10, s) - approx));
        lowest = std::min(lowest, approx);
      }
      EXPECT_LE(worst, eps) << "eps=" << eps;
      EXPECT_GE(lowest, -eps) << "eps=" << eps;
    }
}

TEST(Expansion, ShiftabilityIdentity) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-255.0, 255.0);
  const Expansion e = raised_cosine_expansion(select_plan(255, 12, 0.01, KernelFamily::RaisedCosine));
  for (int trial = 0; trial < 200; ++trial) {
    const double tau = dist(rng), s = dist(rng);
    double sum = 0.0;
    for (const auto& t : e.terms())
      sum += t.weight * (std::cos(t.frequency * tau) * std::cos(t.frequency * s) +
                         std::sin(t.frequency * tau) * std::sin(t.frequency * s));
    ASSERT_NEAR(sum, e(s - tau), 1e-12);
  }
}

TEST(Gaussian, Values) {
  EXPECT_DOUBLE_EQ(eval_gaussian(0.0, 7.0), 1.0);
  EXPECT_NEAR(eval_gaussian(7.0, 7.0), std::exp(-0.5), 1e-15);
  EXPECT_THROW(eval_gaussian(1.0, 0.0), InvalidParameter);
}

TEST(Gaussian, RaisedCosineConvergesAsOrderGrows) {
  const int n0 = order_threshold(255, 30, KernelFamily::RaisedCosine);
  const KernelPlan plan = make_plan(255, 30, 0.0, KernelFamily::RaisedCosine,
                                    TruncationRule::None, 2 * n0);
  const Expansion e = raised_cosine_expansion(plan);
  double worst = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double s = -255.0 + 0.255 * i;
    worst = std::max(worst, std::abs(e(s) - eval_gaussian(s, 30)));
  }
  EXPECT_LT(worst, 0.02);
}

TEST(Gaussian, SupDistanceNonIncreasingWhenOrderDoubles) {
  for (double sigma : {20.0, 40.0}) {
    const int n0 = order_threshold(255, sigma, KernelFamily::RaisedCosine);
    double prev = 2.0;
    for (int N = n0; N <= 8 * n0; N *= 2) {
      const Expansion e = raised_cosine_expansion(
          make_plan(255, sigma, 0.0, KernelFamily::RaisedCosine, TruncationRule::None, N));
      double worst = 0.0;
      for (int i = 0; i <= 2040; ++i) {
        const double s = -255.0 + 0.25 * i;
        worst = std::max(worst, std::abs(e(s) - eval_gaussian(s, sigma)));
      }
      EXPECT_LE(worst, prev) << "sigma=" << sigma << " N=" << N;
      prev = worst;
    }
  }
}

KernelPlan poly_plan(int N, double sigma) {
  return make_plan(1.0, sigma, 0.0, KernelFamily::Polynomial, TruncationRule::None, N);
}

TEST(PolynomialShift, OrderOne) {
  const double sigma = 0.4;
  const double c2 = -1.0 / (2 * sigma * sigma);
  const auto at_zero = polynomial_shift_coefficients(poly_plan(1, sigma), 0.0);
  ASSERT_EQ(at_zero.size(), 3u);
  EXPECT_DOUBLE_EQ(at_zero[0], 1.0);
  EXPECT_DOUBLE_EQ(at_zero[1], 0.0);
  EXPECT_DOUBLE_EQ(at_zero[2], c2);

  const double tau = 0.3;
  const auto c = polynomial_shift_coefficients(poly_plan(1, sigma), tau);
  EXPECT_NEAR(c[0], 1.0 - tau * tau / (2 * sigma * sigma), 1e-15);
  EXPECT_NEAR(c[1], tau / (sigma * sigma), 1e-15);
  EXPECT_NEAR(c[2], c2, 1e-15);
}

TEST(PolynomialShift, ReproducesShiftedKernel) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int N = 1; N <= 10; ++N) {
    const KernelPlan plan = poly_plan(N, 0.3);
    for (int trial = 0; trial < 50; ++trial) {
      const double s = unit(rng), tau = unit(rng);
      const auto c = polynomial_shift_coefficients(plan, tau);
      ASSERT_EQ(c.size(), static_cast<std::size_t>(2 * N + 1));
      double sum = 0.0, power = 1.0;
      for (double ck : c) {
        sum += ck * power;
        power *= s;
      }
      const double direct = std::pow(1.0 - (s - tau) * (s - tau) / (2.0 * N * 0.09), N);
      ASSERT_NEAR(sum, direct, 1e-10 * std::max(1.0, std::abs(direct))) << "N=" << N;
      ASSERT_NEAR(eval_polynomial_kernel(plan, s - tau), direct, 1e-12);
    }
  }
}

TEST(PolynomialShift, OrderCapAndFamilyChecks) {
  EXPECT_NO_THROW(polynomial_shift_coefficients(poly_plan(kMaxPolynomialOrder, 0.5), 0.1));
  EXPECT_THROW(polynomial_shift_coefficients(poly_plan(kMaxPolynomialOrder + 1, 0.5), 0.1),
               UnsupportedOrder);
  const KernelPlan rc = select_plan(255, 30, 0.0, KernelFamily::RaisedCosine);
  EXPECT_THROW(polynomial_shift_coefficients(rc, 0.0), InvalidParameter);
  EXPECT_THROW(raised_cosine_expansion(poly_plan(3, 0.5)), InvalidParameter);
}

TEST(ScheduledEpsilon, LoosensForNarrowKernels) {
  EXPECT_EQ(scheduled_epsilon(5), 0.03);
  EXPECT_EQ(scheduled_epsilon(8), 0.02);
  EXPECT_EQ(scheduled_epsilon(10), 0.02);
  EXPECT_EQ(scheduled_epsilon(12), 0.01);
  EXPECT_EQ(scheduled_epsilon(20), 0.01);
}

}  // namespace
}  // namespace sbf
