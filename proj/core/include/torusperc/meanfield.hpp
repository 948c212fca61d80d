#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace torusperc {

// Mean-field activation maps. A vertex with long degree j has a closed
// neighbourhood of j + 5 vertices (itself, 4 lattice neighbours, j long
// neighbours); under the k-rule it is active next step iff at least k of
// them are active now.

enum class DegreeBackend { poisson, exact };

[[nodiscard]] std::string_view to_string(DegreeBackend backend) noexcept;

/// Threshold k together with the law of the long-edge degree.
class MeanFieldModel {
 public:
  /// Degree ~ Po(lambda), lambda > 0.
  static MeanFieldModel poisson(double lambda, int k);
  /// Degree law of the finite torus (N, c), computed exactly.
  static MeanFieldModel exact(int n, double c, int k);

  [[nodiscard]] int k() const noexcept { return k_; }
  [[nodiscard]] double lambda() const noexcept { return lambda_; }
  [[nodiscard]] DegreeBackend backend() const noexcept { return backend_; }
  [[nodiscard]] std::span<const double> degree_pmf() const noexcept { return pmf_; }

 private:
  MeanFieldModel(int k, double lambda, DegreeBackend backend, std::vector<double> pmf);

  int k_;
  double lambda_;
  DegreeBackend backend_;
  std::vector<double> pmf_;
};

/// P(Bin(n, x) >= m), exact at x = 0 and x = 1.
[[nodiscard]] double binomial_upper_tail(int n, double x, int m);

/// Probability that an active vertex stays active given density x.
[[nodiscard]] double f_plus(double x, const MeanFieldModel& model);
/// Probability that an inactive vertex becomes active given density x.
[[nodiscard]] double f_minus(double x, const MeanFieldModel& model);
/// Conditional mean of the next density: x f+ + (1 - x) f-.
[[nodiscard]] double f_mean(double x, const MeanFieldModel& model);

enum class VarianceForm {
  binomial,  ///< x f+(1 - f+) + (1 - x) f-(1 - f-)
  printed,   ///< x f+(1 - f+) + (1 - x) f-(1 - f+), kept for comparison only
};

/// N^2 times the conditional variance of the next density.
[[nodiscard]] double g_var(double x, const MeanFieldModel& model,
                           VarianceForm form = VarianceForm::binomial);

/// Closed forms of the Poissonized map for k = 0..3 (lambda >= 0).
[[nodiscard]] double fbar_closed(double x, double lambda, int k);
/// d/dx of fbar_closed.
[[nodiscard]] double fbar_closed_derivative(double x, double lambda, int k);

/// Poisson-weighted binomial tail series, valid for every k >= 0. The
/// series is truncated once the remaining Poisson mass is below `tol`.
[[nodiscard]] double fbar_generic(double x, double lambda, int k, double tol = 1e-14);

/// Smallest n_max with P(Po(lambda) > n_max) < tol.
[[nodiscard]] int poisson_support(double lambda, double tol);

/// Randomized activation: an active [inactive] vertex whose closed
/// neighbourhood holds i active vertices becomes active with probability
/// p_plus[i] [p_minus[i]].
struct GeneralizedRule {
  std::vector<double> p_plus;
  std::vector<double> p_minus;

  /// The deterministic k-rule, p_i = 1(i >= k), for i < length.
  static GeneralizedRule threshold(int k, std::size_t length);
};

struct ActivationPair {
  double plus = 0.0;
  double minus = 0.0;
};

/// (f+, f-) of a generalized rule under Po(lambda) degrees. Rule vectors
/// must cover counts 0..poisson_support(lambda, tol) + 5.
[[nodiscard]] ActivationPair fbar_generalized(double x, double lambda, const GeneralizedRule& rule,
                                              double tol = 1e-14);

enum class Stability { stable, unstable, marginal };

[[nodiscard]] std::string_view to_string(Stability s) noexcept;

struct FixedPoint {
  double x = 0.0;
  Stability stability = Stability::marginal;
  double derivative = 0.0;
};

/// All fixed points of fbar_k on [0, 1] for k in {0, 1, 2, 3}, ascending.
/// Throws NumericError if k = 2, 3 does not show exactly one interior root.
[[nodiscard]] std::vector<FixedPoint> find_fixed_points(double lambda, int k);

/// Critical probability: 0 for k <= 1, the interior fixed point for k = 2, 3.
/// lambda = 0 is evaluated as the limit lambda -> 0+.
[[nodiscard]] double p_c(double lambda, int k);

/// dp_c/dlambda by implicit differentiation of e^{lambda x} = h_k(x).
[[nodiscard]] double dpc_dlambda(double lambda, int k);

/// Coefficients (ascending powers of x) of h_k(x) = (1 - x)^{-1} times the
/// right-hand side of the fixed-point equation (1 - x) e^{lambda x} = ...,
/// for k = 2, 3.
[[nodiscard]] std::vector<double> reduced_fixed_point_polynomial(int k, double lambda);

struct PcPoint {
  double lambda = 0.0;
  double p_c = 0.0;
};

/// p_c over a grid of positive lambda values.
[[nodiscard]] std::vector<PcPoint> pc_curve(std::span<const double> lambda_grid, int k,
                                            unsigned threads = 1);

}  // namespace torusperc
