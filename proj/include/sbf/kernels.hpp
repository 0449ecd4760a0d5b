#pragma once

#include <optional>
#include <span>
#include <vector>

namespace sbf {

enum class KernelFamily { RaisedCosine, Polynomial };

// How the order threshold is rounded. Ceil is what filtering needs; Round
// uses the two-digit coefficient 0.405 and rounds to nearest.
enum class ThresholdMode { Ceil, Round };

// Auto picks the rule from sigma_r: M = 0 above 40, the exact binomial-tail
// rule on (10, 40], the Chernoff estimate at or below 10.
enum class TruncationRule { Auto, None, Exact, Chernoff };

// Highest polynomial order accepted by the polynomial family. Monomials up to
// degree 2N lose all precision beyond this.
inline constexpr int kMaxPolynomialOrder = 30;

struct KernelPlan {
  KernelFamily family = KernelFamily::RaisedCosine;
  double sigma_r = 1.0;
  double T = 0.0;
  int order = 1;       // N
  int truncation = 0;  // M, terms dropped from each tail
  double epsilon = 0.0;

  int retained_terms() const { return order - 2 * truncation + 1; }
};

struct ExpansionTerm {
  double weight;     // 2^-N C(N, n)
  double frequency;  // (2n - N) / (sqrt(N) sigma_r)
  int index;         // n
};

/// Truncated raised-cosine series: sum over n in [M, N-M] of
/// d_n cos(w_n s). Immutable once built.
///
/// Weights too small for a double (far tails, N beyond ~1000) are stored as
/// zero; they contribute nothing to any sum.
class Expansion {
 public:
  Expansion(KernelPlan plan, std::vector<ExpansionTerm> terms);

  const KernelPlan& plan() const { return plan_; }
  std::span<const ExpansionTerm> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  double operator()(double s) const;
  double retained_mass() const;

 private:
  KernelPlan plan_;
  std::vector<ExpansionTerm> terms_;
};

int order_threshold(double T, double sigma_r, KernelFamily family,
                    ThresholdMode mode = ThresholdMode::Ceil);

/// All N+1 binomial weights 2^-N C(N, n), computed by ratio recurrence from
/// the central term and normalized to unit sum. No factorials are formed.
std::vector<double> binomial_weights(int N);

int truncation_index_exact(int N, double epsilon);
int truncation_index_chernoff(int N, double epsilon);

/// Builds a plan. `order` overrides the threshold-derived N (used by oracle
/// tests that pin N); the positivity guarantee then no longer applies.
KernelPlan make_plan(double T, double sigma_r, double epsilon,
                     KernelFamily family, TruncationRule rule,
                     std::optional<int> order = std::nullopt);

KernelPlan select_plan(double T, double sigma_r, double epsilon,
                       KernelFamily family);

void validate_plan(const KernelPlan& plan);

Expansion raised_cosine_expansion(const KernelPlan& plan);

double eval_truncated_kernel(const Expansion& expansion, double s);
double eval_gaussian(double s, double sigma_r);

// (1 - s^2 / (2 N sigma^2))^N, the polynomial Gaussian surrogate.
double eval_polynomial_kernel(const KernelPlan& plan, double s);

/// c_k(tau) with phi(s - tau) = sum_k c_k(tau) s^k, k = 0..2N.
std::vector<double> polynomial_shift_coefficients(const KernelPlan& plan,
                                                  double tau);

// Per-sigma_r tolerance that loosens as the range kernel narrows:
// 3% of peak at sigma_r <= 5, 2% up to 10, 1% above.
double scheduled_epsilon(double sigma_r);

}  // namespace sbf
