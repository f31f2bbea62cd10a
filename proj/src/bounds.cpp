#include "odi/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace odi {

namespace {

double half_sqrt_d(int dim) { return 0.5 * std::sqrt(static_cast<double>(dim)); }

// a_j = l_f(t_{j+1}) h_j / (1 - l_f(t_{j+1}) h_j)
double implicit_rate(const TimeGrid& grid, std::size_t j, const ModuliSpec& m) {
  const double lh = m.l_f(grid.node(j + 1)) * grid.step(j);
  return lh / (1.0 - lh);
}

// (e^{x} - 1) / x with its limit 1 at x = 0.
double expm1_over(double x) { return std::abs(x) < 1e-12 ? 1.0 + 0.5 * x : std::expm1(x) / x; }

// Trapezoid integral of g over [a, b] with `panels` panels, weighted by
// exp(int_s^b rate(u) du).
template <class Rate, class Integrand>
double weighted_integral(double a, double b, int panels, Rate rate, Integrand g) {
  if (!(b > a)) return 0.0;
  const double dt = (b - a) / panels;
  // Walk backwards from b, accumulating the exponent by the trapezoid rule.
  double exponent = 0.0;
  double prev_rate = rate(b);
  double sum = 0.5 * g(b);
  for (int i = panels - 1; i >= 0; --i) {
    const double s = a + dt * i;
    const double r = rate(s);
    exponent += 0.5 * dt * (r + prev_rate);
    prev_rate = r;
    const double w = std::exp(exponent) * g(s);
    sum += i == 0 ? 0.5 * w : w;
  }
  return sum * dt;
}

}  // namespace

double gamma(double h, double t, const ModuliSpec& m) {
  return m.tau_f(h) + m.chi_f(m.P * h) + m.tau_M(h) + m.L_M(t) * m.P * h;
}

double gamma_split(const TimeGrid& grid, std::size_t k, const ModuliSpec& m) {
  const double h = grid.step(k);
  const double t0 = grid.node(k);
  const double t1 = grid.node(k + 1);
  const double lh = m.l_f(t1) * h;
  double drift;
  if (m.constant_coefficients) {
    drift = m.P * h * expm1_over(m.l_f(t1) * h);
  } else {
    drift = weighted_integral(t0, t1, 256, m.l_f, [&](double) { return m.P; });
  }
  return (m.tau_f(h) + m.chi_f(m.P * h)) / (1.0 - lh) + m.chi_f(drift) + m.tau_M(h) + m.L_M(t0) * m.P * h;
}

double apriori_parameterized(std::size_t n, const TimeGrid& grid, const ModuliSpec& m) {
  double total = 0.0;
  // Backwards accumulation of the exponent sum_{j>=k} a_j + sum_{j>k} L_M h_j.
  double exponent_a = 0.0;
  double exponent_m = 0.0;
  for (std::size_t k = n; k-- > 0;) {
    exponent_a += implicit_rate(grid, k, m);
    if (k + 1 < n) exponent_m += m.L_M(grid.node(k + 1)) * grid.step(k + 1);
    const double h = grid.step(k);
    total += std::exp(exponent_a + exponent_m) * h * gamma(h, grid.node(k), m);
  }
  return total;
}

double apriori_filippov_continuous(std::size_t n, const TimeGrid& grid, const ModuliSpec& m, int subintervals) {
  const double tn = grid.node(n);
  if (tn == 0.0) return 0.0;
  const double hmax = grid.max_step();
  if (m.constant_coefficients) {
    return closed_form::filippov_continuous(tn, m.l_f(0.0), m.L_M(0.0), gamma(hmax, 0.0, m));
  }
  const int panels = std::max(subintervals, static_cast<int>(4 * n));
  return weighted_integral(
      0.0, tn, panels, [&](double s) { return m.l_f(s) + m.L_M(s); }, [&](double t) { return gamma(hmax, t, m); });
}

double apriori_split(std::size_t n, const TimeGrid& grid, const ModuliSpec& m) {
  double total = 0.0;
  double product = 1.0;
  for (std::size_t k = n; k-- > 0;) {
    if (k + 1 < n) {
      const std::size_t j = k + 1;
      product *= 1.0 / (1.0 - m.l_f(grid.node(j + 1)) * grid.step(j)) + m.L_M(grid.node(j)) * grid.step(j);
    }
    total += product * grid.step(k) * gamma_split(grid, k, m);
  }
  return total;
}

double apriori_temporal(Scheme scheme, std::size_t n, const TimeGrid& grid, const ModuliSpec& m) {
  const double forward =
      scheme == Scheme::split ? apriori_split(n, grid, m) : apriori_parameterized(n, grid, m);
  return std::max(forward, apriori_filippov_continuous(n, grid, m));
}

double apriori_spatial_parameterized(std::size_t n, const TimeGrid& grid, const DiscretizationSchedule& sched,
                                     const ModuliSpec& m, int dim) {
  double sum = 0.0;
  double product = 1.0;
  for (std::size_t k = n; k-- > 0;) {
    const double h = grid.step(k);
    const double lh = m.l_f(grid.node(k + 1)) * h;
    sum += product * (sched.rho[k + 1] + sched.eps[k] * h / (1.0 - lh));
    product *= (1.0 + m.L_M(grid.node(k)) * h) / (1.0 - lh);
  }
  return half_sqrt_d(dim) * (sched.rho[0] * product + sum);
}

double apriori_spatial_split(std::size_t n, const TimeGrid& grid, const DiscretizationSchedule& sched,
                             const ModuliSpec& m, int dim, bool image_sampling) {
  double sum = sched.rho[n] * (image_sampling && n > 0 ? 2.0 : 1.0);
  double product = 1.0;
  for (std::size_t k = n; k-- > 0;) {
    product *= 1.0 / (1.0 - m.l_f(grid.node(k + 1)) * grid.step(k)) + m.L_M(grid.node(k)) * grid.step(k);
    sum += product * sched.rho[k] * (image_sampling && k > 0 ? 2.0 : 1.0);
  }
  return half_sqrt_d(dim) * sum;
}

double apriori_spatial(Scheme scheme, std::size_t n, const TimeGrid& grid, const DiscretizationSchedule& sched,
                       const ModuliSpec& m, int dim) {
  return scheme == Scheme::split ? apriori_spatial_split(n, grid, sched, m, dim)
                                 : apriori_spatial_parameterized(n, grid, sched, m, dim);
}

namespace closed_form {

double parameterized(std::size_t n, double h, double l_f, double L_M, double gamma_value) {
  if (n == 0) return 0.0;
  const double a = l_f * h / (1.0 - l_f * h);
  const double b = L_M * h;
  // sum_{j=1}^{n} exp(j a + (j - 1) b) = e^{a} sum_{i=0}^{n-1} e^{i (a + b)}
  const double c = a + b;
  const double series = static_cast<double>(n) * expm1_over(static_cast<double>(n) * c) / expm1_over(c);
  return std::exp(a) * series * h * gamma_value;
}

double filippov_continuous(double t, double l_f, double L_M, double gamma_value) {
  return gamma_value * t * expm1_over((l_f + L_M) * t);
}

double spatial_parameterized(std::size_t n, double h, double rho, double eps, double l_f, double L_M, int dim) {
  const double q = (1.0 + L_M * h) / (1.0 - l_f * h);
  const double qn = std::pow(q, static_cast<double>(n));
  const double series = q == 1.0 ? static_cast<double>(n) : (qn - 1.0) / (q - 1.0);
  return half_sqrt_d(dim) * (rho * qn + series * (rho + eps * h / (1.0 - l_f * h)));
}

double spatial_parameterized_exp(std::size_t n, double h, double rho, double eps, double l_f, double L_M, int dim) {
  const double t = static_cast<double>(n) * h;
  const double a = l_f / (1.0 - l_f * h);
  const double rate = a + L_M;
  const double denom = L_M + a + L_M * a * h;
  const double growth = std::exp(rate * t);
  const double ratio = std::abs(denom) < 1e-300 ? t : std::expm1(rate * t) / denom;
  return half_sqrt_d(dim) * (rho * growth + ratio * (rho / h + eps / (1.0 - l_f * h)));
}

double spatial_split(std::size_t n, double h, double rho, double l_f, double L_M, int dim) {
  const double p = 1.0 / (1.0 - l_f * h) + L_M * h;
  const double terms = static_cast<double>(n + 1);
  const double series = p == 1.0 ? terms : (std::pow(p, terms) - 1.0) / (p - 1.0);
  return half_sqrt_d(dim) * series * rho;
}

double spatial_split_exp(std::size_t n, double h, double rho, double l_f, double L_M, int dim) {
  const double a = l_f / (1.0 - l_f * h);
  const double steps = static_cast<double>(n + 1);
  // (exp((n+1)(a + L_M) h) - 1) / (a + L_M) * rho / h
  return half_sqrt_d(dim) * steps * h * expm1_over(steps * (a + L_M) * h) * rho / h;
}

}  // namespace closed_form

DiscreteFilippov filippov_discrete_bound(const std::vector<Vec>& xs, const TimeGrid& grid, const Problem& problem,
                                         const ModuliSpec& m, double initial_offset) {
  if (xs.size() != grid.steps() + 1) throw Error("sequence length must equal the number of grid nodes");
  DiscreteFilippov out;
  const std::size_t steps = grid.steps();
  for (std::size_t k = 0; k < steps; ++k) {
    const double h = grid.step(k);
    const Vec velocity = (xs[k + 1] - xs[k]) / h;
    const Vec shifted = velocity - problem.f(grid.node(k + 1), xs[k + 1]);
    out.defects.push_back(problem.velocity_set(grid.node(k), xs[k]).distance(shifted));
  }
  for (std::size_t n = 0; n <= steps; ++n) {
    double exponent_a = 0.0;
    double exponent_m = 0.0;
    double sum = 0.0;
    for (std::size_t k = n; k-- > 0;) {
      exponent_a += implicit_rate(grid, k, m);
      if (k + 1 < n) exponent_m += m.L_M(grid.node(k + 1)) * grid.step(k + 1);
      sum += std::exp(exponent_a + exponent_m) * grid.step(k) * out.defects[k];
    }
    // Initial term: exp(sum_{k<n} a_k + L_M(t_k) h_k) |x_0 - y_0|.
    double lead = 0.0;
    for (std::size_t k = 0; k < n; ++k) lead += implicit_rate(grid, k, m) + m.L_M(grid.node(k)) * grid.step(k);
    out.bounds.push_back(std::exp(lead) * initial_offset + sum);
  }
  return out;
}

double estimate_trajectory_bound(const Problem& problem, const InitialState& x0, const TimeGrid& grid) {
  double largest = 0.0;
  if (const Vec* p = std::get_if<Vec>(&x0)) {
    largest = p->norm();
  } else {
    largest = std::get<ConvexSet>(x0).max_norm();
  }
  if (grid.steps() > 0) {
    StepOptions opts;
    const ReachTube pilot = reach(problem, x0, grid, DiscretizationSchedule::quadratic(grid), Scheme::split, opts);
    for (const LatticeSet& s : pilot.sets) {
      for (std::size_t i = 0; i < s.size(); ++i) largest = std::max(largest, s.point(i).norm());
    }
  }
  return 1.5 * std::max(largest, 1e-12);
}

ModuliSpec estimated_moduli(const Problem& problem, const InitialState& x0, const TimeGrid& grid) {
  ModuliSpec m = problem.moduli_at(estimate_trajectory_bound(problem, x0, grid));
  m.rigorous = false;
  return m;
}

}  // namespace odi
