#include "sbf/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sbf/image.hpp"

namespace sbf {
namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0))
    throw InvalidParameter("epsilon must lie in [0, 1), got " +
                           std::to_string(epsilon));
}

int max_truncation(int N) { return (N - 1) / 2; }

}  // namespace

Expansion::Expansion(KernelPlan plan, std::vector<ExpansionTerm> terms)
    : plan_(plan), terms_(std::move(terms)) {}

double Expansion::operator()(double s) const {
  double sum = 0.0;
  for (const auto& t : terms_) sum += t.weight * std::cos(t.frequency * s);
  return sum;
}

double Expansion::retained_mass() const {
  double sum = 0.0;
  for (const auto& t : terms_) sum += t.weight;
  return sum;
}

int order_threshold(double T, double sigma_r, KernelFamily family,
                    ThresholdMode mode) {
  if (!(sigma_r > 0.0)) throw InvalidParameter("sigma_r must be positive");
  if (!(T >= 0.0)) throw InvalidParameter("T must be non-negative");
  const double ratio = (T / sigma_r) * (T / sigma_r);
  double coefficient = 0.5;
  if (family == KernelFamily::RaisedCosine) {
    // The rounded table uses the two-digit coefficient; filtering needs the
    // exact bound 4/pi^2 so that |s| <= T maps into [-pi/2, pi/2].
    coefficient = mode == ThresholdMode::Round
                      ? 0.405
                      : 4.0 / (std::numbers::pi * std::numbers::pi);
  }
  const double n0 = coefficient * ratio;
  const double n = mode == ThresholdMode::Ceil ? std::ceil(n0) : std::round(n0);
  if (n < 1.0) return 1;
  if (n > 1e8) throw InvalidParameter("order threshold exceeds 1e8 terms");
  return static_cast<int>(n);
}

std::vector<double> binomial_weights(int N) {
  if (N < 0) throw InvalidParameter("binomial order must be non-negative");
  std::vector<double> w(static_cast<std::size_t>(N) + 1, 0.0);
  const int mid = N / 2;
  // Unnormalized weights relative to the central term, mirrored so that
  // w[n] == w[N - n] bit for bit.
  w[mid] = 1.0;
  for (int n = mid; n > 0; --n)
    w[n - 1] = w[n] * static_cast<double>(n) / static_cast<double>(N - n + 1);
  for (int n = 0; n <= (N - 1) / 2; ++n) w[N - n] = w[n];
  double total = 0.0;
  for (int n = 0; n <= N; ++n) total += w[n];
  for (double& v : w) v /= total;
  return w;
}

int truncation_index_exact(int N, double epsilon) {
  if (N < 1) throw InvalidParameter("order must be at least 1");
  check_epsilon(epsilon);
  if (epsilon == 0.0) return 0;
  const auto w = binomial_weights(N);
  const double half = epsilon / 2.0;
  const int cap = max_truncation(N);
  double cumulative = w[0];
  for (int M = 0; M < cap; ++M) {
    cumulative += w[M + 1];
    if (cumulative > half) return M;
  }
  return cap;
}

int truncation_index_chernoff(int N, double epsilon) {
  if (N < 1) throw InvalidParameter("order must be at least 1");
  check_epsilon(epsilon);
  if (epsilon == 0.0)
    throw InvalidParameter("Chernoff truncation is undefined for epsilon = 0");
  const double n = static_cast<double>(N);
  const double m =
      std::floor((n - std::sqrt(4.0 * n * std::log(2.0 / epsilon))) / 2.0);
  return static_cast<int>(std::clamp(m, 0.0, double(max_truncation(N))));
}

KernelPlan make_plan(double T, double sigma_r, double epsilon,
                     KernelFamily family, TruncationRule rule,
                     std::optional<int> order) {
  if (!(sigma_r > 0.0)) throw InvalidParameter("sigma_r must be positive");
  if (!(T >= 0.0)) throw InvalidParameter("T must be non-negative");
  check_epsilon(epsilon);

  KernelPlan plan;
  plan.family = family;
  plan.sigma_r = sigma_r;
  plan.T = T;
  plan.epsilon = epsilon;
  if (order) {
    if (*order < 1) throw InvalidParameter("order must be at least 1");
    plan.order = *order;
  } else if (T == 0.0) {
    // Constant image: any positive order is valid, the filter reduces to
    // spatial smoothing.
    plan.order = 1;
  } else {
    plan.order = order_threshold(T, sigma_r, family, ThresholdMode::Ceil);
  }

  if (family == KernelFamily::Polynomial || epsilon == 0.0) {
    plan.truncation = 0;
    return plan;
  }

  if (rule == TruncationRule::Auto) {
    if (sigma_r > 40.0)
      rule = TruncationRule::None;
    else if (sigma_r > 10.0)
      rule = TruncationRule::Exact;
    else
      rule = TruncationRule::Chernoff;
  }
  switch (rule) {
    case TruncationRule::None:
      plan.truncation = 0;
      break;
    case TruncationRule::Exact:
      plan.truncation = truncation_index_exact(plan.order, epsilon);
      break;
    case TruncationRule::Chernoff:
      plan.truncation = truncation_index_chernoff(plan.order, epsilon);
      break;
    case TruncationRule::Auto:
      break;
  }
  return plan;
}

KernelPlan select_plan(double T, double sigma_r, double epsilon,
                       KernelFamily family) {
  return make_plan(T, sigma_r, epsilon, family, TruncationRule::Auto);
}

void validate_plan(const KernelPlan& plan) {
  if (!(plan.sigma_r > 0.0)) throw InvalidParameter("sigma_r must be positive");
  if (!(plan.T >= 0.0)) throw InvalidParameter("T must be non-negative");
  if (plan.order < 1) throw InvalidParameter("order must be at least 1");
  if (plan.truncation < 0 || 2 * plan.truncation >= plan.order)
    throw InvalidParameter("truncation must keep at least one term");
  if (plan.epsilon == 0.0 && plan.truncation != 0)
    throw InvalidParameter("truncation requires a positive epsilon");
  check_epsilon(plan.epsilon);
}

Expansion raised_cosine_expansion(const KernelPlan& plan) {
  if (plan.family != KernelFamily::RaisedCosine)
    throw InvalidParameter("raised-cosine expansion requires that family");
  validate_plan(plan);
  const int N = plan.order;
  const int M = plan.truncation;
  const auto w = binomial_weights(N);
  const double scale = std::sqrt(static_cast<double>(N)) * plan.sigma_r;

  std::vector<ExpansionTerm> terms;
  terms.reserve(static_cast<std::size_t>(N - 2 * M + 1));
  for (int n = M; n <= N - M; ++n)
    terms.push_back({w[n], static_cast<double>(2 * n - N) / scale, n});
  return Expansion(plan, std::move(terms));
}

double eval_truncated_kernel(const Expansion& expansion, double s) {
  return expansion(s);
}

double eval_gaussian(double s, double sigma_r) {
  if (!(sigma_r > 0.0)) throw InvalidParameter("sigma_r must be positive");
  return std::exp(-s * s / (2.0 * sigma_r * sigma_r));
}

double eval_polynomial_kernel(const KernelPlan& plan, double s) {
  const double c = 2.0 * plan.order * plan.sigma_r * plan.sigma_r;
  return std::pow(1.0 - s * s / c, plan.order);
}

std::vector<double> polynomial_shift_coefficients(const KernelPlan& plan,
                                                  double tau) {
  if (plan.family != KernelFamily::Polynomial)
    throw InvalidParameter("shift coefficients require the polynomial family");
  if (plan.order > kMaxPolynomialOrder)
    throw UnsupportedOrder("polynomial order " + std::to_string(plan.order) +
                           " exceeds the cap of " +
                           std::to_string(kMaxPolynomialOrder));
  if (plan.order < 1) throw InvalidParameter("order must be at least 1");

  // 1 - (s - tau)^2 / c as a quadratic in s, raised to the N-th power.
  const double c = 2.0 * plan.order * plan.sigma_r * plan.sigma_r;
  const double q[3] = {1.0 - tau * tau / c, 2.0 * tau / c, -1.0 / c};

  std::vector<double> coeffs{1.0};
  for (int i = 0; i < plan.order; ++i) {
    std::vector<double> next(coeffs.size() + 2, 0.0);
    for (std::size_t k = 0; k < coeffs.size(); ++k)
      for (int j = 0; j < 3; ++j) next[k + j] += coeffs[k] * q[j];
    coeffs = std::move(next);
  }
  return coeffs;
}

double scheduled_epsilon(double sigma_r) {
  if (sigma_r <= 5.0) return 0.03;
  if (sigma_r <= 10.0) return 0.02;
  return 0.01;
}

}  // namespace sbf
