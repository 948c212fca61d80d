#include "torusperc/meanfield.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <string>

#include "torusperc/errors.hpp"
#include "torusperc/graph_analysis.hpp"
#include "torusperc/parallel.hpp"

namespace torusperc {

namespace {

constexpr double kSeriesTail = 1e-15;
constexpr double kStabilityBand = 1e-8;

void check_unit(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("density must lie in [0, 1]");
}

void check_closed_k(int k) {
  if (k < 0 || k > 3) {
    throw ValidationError("closed forms exist for k in {0,1,2,3}, got k=" + std::to_string(k));
  }
}

double log_choose(int n, int i) {
  return std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0);
}

// Binomial(n, x) PMF on 0..n.
std::vector<double> binomial_pmf(int n, double x) {
  std::vector<double> pmf(static_cast<std::size_t>(n) + 1, 0.0);
  if (x == 0.0) {
    pmf.front() = 1.0;
    return pmf;
  }
  if (x == 1.0) {
    pmf.back() = 1.0;
    return pmf;
  }
  const double lx = std::log(x);
  const double ly = std::log1p(-x);
  for (int i = 0; i <= n; ++i) {
    pmf[static_cast<std::size_t>(i)] = std::exp(log_choose(n, i) + i * lx + (n - i) * ly);
  }
  return pmf;
}

// sum_j pmf[j] P(Bin(j + base, x) >= m). The endpoint cases return exact 0/1
// where the k-rule makes them exact, independent of PMF truncation.
double mixture_upper_tail(std::span<const double> pmf, int base, double x, int m) {
  if (m <= 0) return 1.0;
  if (x == 0.0) return 0.0;
  if (x == 1.0) {
    if (m <= base) return 1.0;
    double s = 0.0;
    for (std::size_t j = static_cast<std::size_t>(m - base); j < pmf.size(); ++j) s += pmf[j];
    return s;
  }
  double s = 0.0;
  for (std::size_t j = 0; j < pmf.size(); ++j) {
    if (pmf[j] == 0.0) continue;
    s += pmf[j] * binomial_upper_tail(static_cast<int>(j) + base, x, m);
  }
  return std::min(s, 1.0);
}

std::vector<double> poisson_weights(double lambda, double tol) {
  return poisson_pmf(lambda, poisson_support(lambda, tol)).pmf;
}

// --- Polynomials in x with real coefficients (ascending powers). ---

using Poly = std::vector<double>;

Poly mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Poly add(Poly a, const Poly& b, double scale = 1.0) {
  if (a.size() < b.size()) a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += scale * b[i];
  return a;
}

Poly power(const Poly& p, int e) {
  Poly out{1.0};
  for (int i = 0; i < e; ++i) out = mul(out, p);
  return out;
}

Poly derivative(const Poly& p) {
  if (p.size() <= 1) return {0.0};
  Poly out(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) out[i - 1] = static_cast<double>(i) * p[i];
  return out;
}

double eval(const Poly& p, double x) {
  double r = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * x + *it;
  return r;
}

// h_k(x; lambda) = A(x) + lambda B(x) + lambda^2 C(x).
struct ReducedRhs {
  Poly a, b, c;

  [[nodiscard]] Poly at(double lambda) const {
    return add(add(a, b, lambda), c, lambda * lambda);
  }
  [[nodiscard]] Poly d_lambda(double lambda) const { return add(b, c, 2.0 * lambda); }
};

ReducedRhs reduced_rhs(int k) {
  const Poly y{1.0, -1.0};
  const Poly x{0.0, 1.0};
  if (k == 2) {
    return {mul(power(y, 3), Poly{1.0, 4.0}), mul(x, power(y, 4)), Poly{0.0}};
  }
  if (k == 3) {
    Poly a = add(add(power(y, 4), mul(Poly{0.0, 5.0}, power(y, 3))), mul(Poly{0.0, 0.0, 10.0}, power(y, 2)));
    Poly b = add(mul(x, power(y, 4)), mul(Poly{0.0, 0.0, 5.0}, power(y, 3)));
    Poly c = mul(Poly{0.0, 0.0, 0.5}, power(y, 4));
    return {std::move(a), std::move(b), std::move(c)};
  }
  throw ValidationError("reduced fixed-point polynomial defined for k in {2,3}");
}

Stability classify(double derivative) {
  const double mag = std::abs(derivative);
  if (mag < 1.0 - kStabilityBand) return Stability::stable;
  if (mag > 1.0 + kStabilityBand) return Stability::unstable;
  return Stability::marginal;
}

// Root of a sign-changing continuous function on [lo, hi]: Illinois
// (modified regula falsi) steps, falling back to bisection when they stall.
template <class Fn>
double refine_root(Fn&& fn, double lo, double hi, double flo, double fhi) {
  int side = 0;
  for (int iter = 0; iter < 300; ++iter) {
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi))) {
      break;
    }
    double mid = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(mid > lo && mid < hi) || iter % 8 == 7) mid = 0.5 * (lo + hi);
    const double fm = fn(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = mid;
      fhi = fm;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
  }
  return std::abs(flo) < std::abs(fhi) ? lo : hi;
}

// Uniform 1e-3 grid on (0, 1), plus geometric points below 1e-3 so that the
// interior root stays bracketed when it shrinks like 1/lambda^2.
const std::vector<double>& bracket_grid() {
  static const std::vector<double> grid = [] {
    std::vector<double> g;
    for (int j = 30; j >= 1; --j) g.push_back(1e-3 * std::ldexp(1.0, -j));
    for (int i = 1; i <= 999; ++i) g.push_back(1e-3 * i);
    return g;
  }();
  return grid;
}

// Interior roots of fbar_k(x) - x on (0, 1).
std::vector<double> interior_roots(double lambda, int k) {
  auto phi = [&](double x) { return fbar_closed(x, lambda, k) - x; };
  const auto& grid = bracket_grid();
  std::vector<double> roots;
  double prev_x = grid.front();
  double prev = phi(prev_x);
  if (prev == 0.0) roots.push_back(prev_x);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double x = grid[i];
    const double v = phi(x);
    if (v == 0.0) {
      roots.push_back(x);
    } else if (prev != 0.0 && (v < 0.0) != (prev < 0.0)) {
      roots.push_back(refine_root(phi, prev_x, x, prev, v));
    }
    prev_x = x;
    prev = v;
  }
  return roots;
}

// lambda -> 0+ limit: root of (h_k(x; 0) - 1) / x on (0, 1).
double interior_root_at_zero(int k) {
  Poly q = reduced_rhs(k).a;
  q[0] -= 1.0;
  q.erase(q.begin());  // divide by x; h_k(0) = 1
  auto fn = [&](double x) { return eval(q, x); };
  const double f0 = fn(0.0);
  const double f1 = fn(1.0);
  if (!(f0 > 0.0 && f1 < 0.0)) throw NumericError("lambda=0 fixed-point polynomial does not change sign");
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double v = fn(mid);
    if (v == 0.0) return mid;
    (v > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double interior_root(double lambda, int k) {
  if (lambda == 0.0) return interior_root_at_zero(k);
  const auto roots = interior_roots(lambda, k);
  if (roots.size() != 1) {
    throw NumericError("expected exactly one interior fixed point for k=" + std::to_string(k) +
                       ", lambda=" + std::to_string(lambda) + "; found " + std::to_string(roots.size()));
  }
  const double x = roots.front();
  if (std::abs(fbar_closed(x, lambda, k) - x) >= 1e-12) {
    throw NumericError("interior fixed point did not converge for lambda=" + std::to_string(lambda));
  }
  return x;
}

}  // namespace

std::string_view to_string(DegreeBackend backend) noexcept {
  return backend == DegreeBackend::poisson ? "poisson" : "exact";
}

std::string_view to_string(Stability s) noexcept {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::marginal: return "marginal";
  }
  return "unknown";
}

MeanFieldModel::MeanFieldModel(int k, double lambda, DegreeBackend backend, std::vector<double> pmf)
    : k_(k), lambda_(lambda), backend_(backend), pmf_(std::move(pmf)) {
  if (k < 0) throw ValidationError("threshold k must be nonnegative");
}

MeanFieldModel MeanFieldModel::poisson(double lambda, int k) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ValidationError("Poisson backend requires lambda > 0");
  return {k, lambda, DegreeBackend::poisson, poisson_weights(lambda, kSeriesTail)};
}

MeanFieldModel MeanFieldModel::exact(int n, double c, int k) {
  auto law = exact_long_degree_distribution(n, c);
  return {k, 4.0 * c * std::log(2.0), DegreeBackend::exact, std::move(law.pmf)};
}

double binomial_upper_tail(int n, double x, int m) {
  if (m <= 0) return 1.0;
  if (m > n) return 0.0;
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double lx = std::log(x);
  const double ly = std::log1p(-x);
  double s = 0.0;
  for (int i = m; i <= n; ++i) s += std::exp(log_choose(n, i) + i * lx + (n - i) * ly);
  return std::min(s, 1.0);
}

double f_plus(double x, const MeanFieldModel& model) {
  check_unit(x);
  return mixture_upper_tail(model.degree_pmf(), 4, x, model.k() - 1);
}

double f_minus(double x, const MeanFieldModel& model) {
  check_unit(x);
  return mixture_upper_tail(model.degree_pmf(), 4, x, model.k());
}

double f_mean(double x, const MeanFieldModel& model) {
  return x * f_plus(x, model) + (1.0 - x) * f_minus(x, model);
}

double g_var(double x, const MeanFieldModel& model, VarianceForm form) {
  const double fp = f_plus(x, model);
  const double fm = f_minus(x, model);
  const double second = form == VarianceForm::binomial ? (1.0 - fm) : (1.0 - fp);
  return x * fp * (1.0 - fp) + (1.0 - x) * fm * second;
}

double fbar_closed(double x, double lambda, int k) {
  check_unit(x);
  check_closed_k(k);
  if (lambda < 0.0) throw ValidationError("lambda must be nonnegative");
  if (k == 0) return 1.0;
  const double y = 1.0 - x;
  if (k == 1) return -std::expm1(-lambda * x + 5.0 * std::log1p(-x));
  const double y3 = y * y * y;
  const double y4 = y3 * y;
  const double y5 = y4 * y;
  double poly = y5 + 5.0 * x * y4 + lambda * x * y5;
  if (k == 3) {
    const double x2 = x * x;
    poly += 0.5 * lambda * lambda * x2 * y5 + 5.0 * lambda * x2 * y4 + 10.0 * x2 * y3;
  }
  return 1.0 - std::exp(-lambda * x) * poly;
}

double fbar_closed_derivative(double x, double lambda, int k) {
  check_unit(x);
  check_closed_k(k);
  if (lambda < 0.0) throw ValidationError("lambda must be nonnegative");
  if (k == 0) return 0.0;
  // fbar = 1 - e^{-lambda x} P(x)  =>  fbar' = e^{-lambda x} (lambda P - P').
  const double y = 1.0 - x;
  const double y2 = y * y;
  const double y3 = y2 * y;
  const double y4 = y3 * y;
  const double y5 = y4 * y;
  double p = y5;
  double dp = -5.0 * y4;
  if (k >= 2) {
    p += 5.0 * x * y4 + lambda * x * y5;
    dp += 5.0 * y4 - 20.0 * x * y3 + lambda * y5 - 5.0 * lambda * x * y4;
  }
  if (k == 3) {
    const double x2 = x * x;
    const double l2 = lambda * lambda;
    p += 0.5 * l2 * x2 * y5 + 5.0 * lambda * x2 * y4 + 10.0 * x2 * y3;
    dp += l2 * x * y5 - 2.5 * l2 * x2 * y4 + 10.0 * lambda * x * y4 - 20.0 * lambda * x2 * y3 +
          20.0 * x * y3 - 30.0 * x2 * y2;
  }
  return std::exp(-lambda * x) * (lambda * p - dp);
}

int poisson_support(double lambda, double tol) {
  if (!(lambda > 0.0)) throw ValidationError("Poisson rate must be positive");
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  const double log_lambda = std::log(lambda);
  for (int n = 0;; ++n) {
    if (n + 2 > lambda) {
      // P(Po > n) <= pmf(n + 1) / (1 - lambda / (n + 2)).
      const double next = std::exp(-lambda + (n + 1) * log_lambda - std::lgamma(n + 2.0));
      if (next / (1.0 - lambda / (n + 2)) < tol) return n;
    }
  }
}

double fbar_generic(double x, double lambda, int k, double tol) {
  check_unit(x);
  if (k < 0) throw ValidationError("threshold k must be nonnegative");
  if (tol < 1e-14) throw ValidationError("fbar_generic tolerance must be >= 1e-14");
  if (k == 0) return 1.0;
  if (lambda == 0.0) return binomial_upper_tail(5, x, k);
  const auto weights = poisson_weights(lambda, tol);
  return mixture_upper_tail(weights, 5, x, k);
}

GeneralizedRule GeneralizedRule::threshold(int k, std::size_t length) {
  GeneralizedRule rule;
  rule.p_plus.resize(length);
  rule.p_minus.resize(length);
  for (std::size_t i = 0; i < length; ++i) {
    const double v = static_cast<int>(i) >= k ? 1.0 : 0.0;
    rule.p_plus[i] = v;
    rule.p_minus[i] = v;
  }
  return rule;
}

ActivationPair fbar_generalized(double x, double lambda, const GeneralizedRule& rule, double tol) {
  check_unit(x);
  const auto weights = poisson_weights(lambda, tol);
  const std::size_t needed = weights.size() + 5;  // counts 0..n_max + 5
  if (rule.p_plus.size() < needed || rule.p_minus.size() < needed) {
    throw ValidationError("generalized rule vectors must cover active counts 0.." + std::to_string(needed - 1));
  }
  for (const auto* v : {&rule.p_plus, &rule.p_minus}) {
    for (double p : *v) {
      if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("generalized rule entries must be probabilities");
    }
  }
  ActivationPair out;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    // Open neighbourhood of size n = j + 4; i counts active closed-neighbourhood members.
    const int n = static_cast<int>(j) + 4;
    const auto pmf = binomial_pmf(n, x);
    double plus = 0.0;
    double minus = 0.0;
    for (int a = 0; a <= n; ++a) {
      const double w = pmf[static_cast<std::size_t>(a)];
      plus += rule.p_plus[static_cast<std::size_t>(a) + 1] * w;  // self active: i = a + 1
      minus += rule.p_minus[static_cast<std::size_t>(a)] * w;
    }
    out.plus += weights[j] * plus;
    out.minus += weights[j] * minus;
  }
  return out;
}

std::vector<FixedPoint> find_fixed_points(double lambda, int k) {
  check_closed_k(k);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ValidationError("find_fixed_points requires lambda > 0");

  const auto interior = interior_roots(lambda, k);
  const std::size_t expected = k >= 2 ? 1 : 0;
  if (interior.size() != expected) {
    throw NumericError("k=" + std::to_string(k) + ", lambda=" + std::to_string(lambda) + ": found " +
                       std::to_string(interior.size()) + " interior fixed points, expected " +
                       std::to_string(expected));
  }

  std::vector<double> xs;
  if (fbar_closed(0.0, lambda, k) == 0.0) xs.push_back(0.0);
  if (k >= 2) xs.push_back(interior_root(lambda, k));
  xs.push_back(1.0);

  std::vector<FixedPoint> points;
  for (double x : xs) {
    const double d = fbar_closed_derivative(x, lambda, k);
    points.push_back({x, classify(d), d});
  }
  return points;
}

double p_c(double lambda, int k) {
  check_closed_k(k);
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ValidationError("lambda must be finite and >= 0");
  if (k <= 1) return 0.0;
  return interior_root(lambda, k);
}

std::vector<double> reduced_fixed_point_polynomial(int k, double lambda) {
  return reduced_rhs(k).at(lambda);
}

double dpc_dlambda(double lambda, int k) {
  if (k != 2 && k != 3) throw ValidationError("dpc_dlambda defined for k in {2,3}");
  if (!(lambda > 0.0)) throw ValidationError("dpc_dlambda requires lambda > 0");
  const double x = p_c(lambda, k);
  const ReducedRhs rhs = reduced_rhs(k);
  // F_k(lambda, x) = e^{lambda x} - h_k(x; lambda).
  const double e = std::exp(lambda * x);
  const double dF_dx = lambda * e - eval(derivative(rhs.at(lambda)), x);
  const double dF_dlambda = x * e - eval(rhs.d_lambda(lambda), x);
  return -dF_dlambda / dF_dx;
}

std::vector<PcPoint> pc_curve(std::span<const double> lambda_grid, int k, unsigned threads) {
  for (double l : lambda_grid) {
    if (!(l > 0.0) || !std::isfinite(l)) throw ValidationError("lambda grid values must be positive");
  }
  std::vector<PcPoint> out(lambda_grid.size());
  parallel_for(lambda_grid.size(), threads, [&](std::size_t i) {
    out[i] = {lambda_grid[i], p_c(lambda_grid[i], k)};
  });
  return out;
}

}  // namespace torusperc
