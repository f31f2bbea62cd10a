#include "odi/problem.hpp"

#include "odi/metrics.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace odi {

namespace {

ScalarFn constant(double c) {
  return [c](double) { return c; };
}

ScalarFn linear(double slope) {
  return [slope](double delta) { return slope * delta; };
}

bool is_diagonal(const Mat& a) {
  if (a.rows() != a.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (i != j && a(i, j) != 0.0) return false;
    }
  }
  return true;
}

ConvexSet linear_image(const Mat& a, const ConvexSet& u) {
  if (a.cols() != u.dim()) throw Error("control matrix columns must match the control set dimension");
  if (const auto* box = std::get_if<Box>(&u.variant())) {
    if (is_diagonal(a)) {
      Vec lo = a.diagonal().cwiseProduct(box->lower);
      Vec hi = a.diagonal().cwiseProduct(box->upper);
      return ConvexSet::box(lo.cwiseMin(hi), lo.cwiseMax(hi));
    }
  }
  if (const auto* ball = std::get_if<Ball>(&u.variant())) {
    const bool scalar = is_diagonal(a) && (a.diagonal().array() == a(0, 0)).all();
    if (!scalar) {
      throw Error(
          "unsupported affine control: a ball control set requires A(t,x) to be a scalar multiple of the identity; "
          "use a box or polytope control set for general A");
    }
    return ConvexSet::ball(a(0, 0) * ball->center, std::abs(a(0, 0)) * ball->radius);
  }
  std::vector<Vec> vertices;
  for (const Vec& v : u.extreme_points()) vertices.emplace_back(a * v);
  return ConvexSet::polytope(std::move(vertices));
}

}  // namespace

Problem stiff_linear(double lambda, double radius) {
  if (!(lambda < 0.0)) throw Error("stiff_linear requires lambda < 0");
  if (!(radius >= 0.0)) throw Error("stiff_linear requires radius >= 0");
  Problem p;
  p.name = "stiff";
  p.dim = 1;
  p.f = [lambda](double, const Vec& x) -> Vec { return lambda * x; };
  p.jac_f = [lambda](double, const Vec&) -> Mat { return Mat::Constant(1, 1, lambda); };
  const ConvexSet m = ConvexSet::box(make_vec({-radius}), make_vec({radius}));
  p.velocity_set = [m](double, const Vec&) { return m; };
  p.state_independent_velocity = true;
  p.l_f = constant(lambda);
  p.L_M = constant(0.0);
  p.moduli_at = [lambda, radius](double c) {
    ModuliSpec mod;
    mod.l_f = constant(lambda);
    mod.L_M = constant(0.0);
    mod.tau_f = constant(0.0);
    mod.chi_f = linear(std::abs(lambda));
    mod.tau_M = constant(0.0);
    mod.C = c;
    mod.P = std::abs(lambda) * c + radius;
    mod.L = std::abs(lambda);
    return mod;
  };
  // Upper and lower solutions e^{lambda t} x0 +- (radius/|lambda|)(1 - e^{lambda t}).
  p.exact_reach = [lambda, radius](double t, const Vec& x0) {
    const double decay = std::exp(lambda * t);
    const double spread = radius / std::abs(lambda) * (1.0 - decay);
    return ConvexSet::box(make_vec({decay * x0[0] - spread}), make_vec({decay * x0[0] + spread}));
  };
  return p;
}

Problem dahlquist() {
  Problem p = stiff_linear(-1.0, 1.0);
  p.name = "dahlquist";
  return p;
}

Problem nonconvex_example() {
  Problem p;
  p.name = "nonconvex";
  p.dim = 2;
  p.f = [](double, const Vec& x) -> Vec {
    return make_vec({0.5 * (-x[0] - x[1]), 0.5 * (x[0] - x[1] - x[1] * x[1] * x[1])});
  };
  p.jac_f = [](double, const Vec& x) -> Mat {
    Mat j(2, 2);
    j << -0.5, -0.5, 0.5, -0.5 - 1.5 * x[1] * x[1];
    return j;
  };
  const ConvexSet m = ConvexSet::box(make_vec({0.0, 0.0}), make_vec({6.5, 0.0}));
  p.velocity_set = [m](double, const Vec&) { return m; };
  p.state_independent_velocity = true;
  p.l_f = constant(-0.5);
  p.L_M = constant(0.0);
  p.moduli_at = [](double c) {
    // Frobenius norm of the Jacobian on B_C(0) bounds the Lipschitz constant.
    const double lip = 0.5 * std::sqrt(3.0 + (1.0 + 3.0 * c * c) * (1.0 + 3.0 * c * c));
    ModuliSpec mod;
    mod.l_f = constant(-0.5);
    mod.L_M = constant(0.0);
    mod.tau_f = constant(0.0);
    mod.chi_f = linear(lip);
    mod.tau_M = constant(0.0);
    mod.C = c;
    mod.P = 0.5 * std::hypot(2.0 * c, 2.0 * c + c * c * c) + 6.5;
    mod.L = lip;
    return mod;
  };
  return p;
}

DriftSpec linear_drift(const Mat& f) {
  if (f.rows() != f.cols()) throw Error("linear drift matrix must be square");
  DriftSpec drift;
  drift.f = [f](double, const Vec& x) -> Vec { return f * x; };
  drift.jac = [f](double, const Vec&) -> Mat { return f; };
  const Eigen::MatrixXd sym = 0.5 * (Eigen::MatrixXd(f) + Eigen::MatrixXd(f).transpose());
  drift.osl = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym).eigenvalues().maxCoeff();
  drift.lipschitz = Eigen::JacobiSVD<Eigen::MatrixXd>(Eigen::MatrixXd(f)).singularValues()(0);
  drift.f_at_origin = 0.0;
  return drift;
}

Problem affine_control(std::string name, int dim, DriftSpec drift, MatrixField a, double lipschitz_a, ConvexSet u) {
  if (dim < 1 || dim > kMaxDim) throw Error("dimension out of range");
  const Vec origin = Vec::Zero(dim);
  const Mat a0 = a(0.0, origin);
  if (a0.rows() != dim) throw Error("control matrix rows must match the state dimension");
  // Rejects unsupported (A, U) pairs at construction.
  linear_image(a0, u);

  Problem p;
  p.name = std::move(name);
  p.dim = dim;
  p.f = drift.f;
  p.jac_f = drift.jac;
  p.velocity_set = [a, u](double t, const Vec& x) { return linear_image(a(t, x), u); };
  p.state_independent_velocity = lipschitz_a == 0.0;
  const double u_norm = u.max_norm();
  const double l_m = lipschitz_a * u_norm;
  p.l_f = constant(drift.osl);
  p.L_M = constant(l_m);
  const double a0_norm = Eigen::JacobiSVD<Eigen::MatrixXd>(Eigen::MatrixXd(a0)).singularValues()(0);
  p.moduli_at = [drift, l_m, lipschitz_a, a0_norm, u_norm](double c) {
    ModuliSpec mod;
    mod.l_f = constant(drift.osl);
    mod.L_M = constant(l_m);
    mod.tau_f = constant(0.0);
    mod.chi_f = linear(drift.lipschitz);
    mod.tau_M = linear(l_m);
    mod.C = c;
    mod.P = drift.f_at_origin + drift.lipschitz * c + (a0_norm + lipschitz_a * c) * u_norm;
    mod.L = std::max(drift.lipschitz, l_m);
    return mod;
  };
  return p;
}

double osl_violation(const Problem& p, double radius, double t_max, int samples, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  auto random_in_ball = [&]() {
    Vec v(p.dim);
    for (int i = 0; i < p.dim; ++i) v[i] = normal(rng);
    const double scale = radius * std::pow(unit(rng), 1.0 / p.dim) / std::max(v.norm(), 1e-300);
    return Vec(v * scale);
  };
  double worst = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const double t = t_max * unit(rng);
    const Vec x = random_in_ball();
    const Vec y = random_in_ball();
    const Vec dx = x - y;
    const double lhs = (p.f(t, x) - p.f(t, y)).dot(dx);
    worst = std::max(worst, lhs - p.l_f(t) * dx.squaredNorm());
  }
  return worst;
}

double lipschitz_m_violation(const Problem& p, double radius, double t_max, int samples, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-radius / std::sqrt(static_cast<double>(p.dim)),
                                               radius / std::sqrt(static_cast<double>(p.dim)));
  std::uniform_real_distribution<double> unit;
  double worst = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const double t = t_max * unit(rng);
    Vec x(p.dim);
    Vec y(p.dim);
    for (int i = 0; i < p.dim; ++i) {
      x[i] = coord(rng);
      y[i] = coord(rng);
    }
    const ConvexSet mx = p.velocity_set(t, x);
    const ConvexSet my = p.velocity_set(t, y);
    const double eps = std::max(mx.diameter(), my.diameter()) / 64.0 + 1e-9;
    const double slack = std::sqrt(static_cast<double>(p.dim)) * eps;
    const double dh = dist_hausdorff(sample_convex(mx, eps), sample_convex(my, eps));
    worst = std::max(worst, dh - p.L_M(t) * (x - y).norm() - slack);
  }
  return worst;
}

Problem problem_by_name(const std::string& name, double lambda, double radius) {
  if (name == "dahlquist") return dahlquist();
  if (name == "nonconvex") return nonconvex_example();
  if (name == "stiff") return stiff_linear(lambda, radius);
  throw Error("unknown problem '" + name + "' (expected dahlquist, nonconvex, stiff or affine)");
}

}  // namespace odi
