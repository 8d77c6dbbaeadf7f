#include "betadual/loggas.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "betadual/errors.hpp"
#include "betadual/orthopoly.hpp"

namespace betadual {

namespace {

struct Well {
  double v, d1, d2;
};

Well well(const Potential& p, double x) {
  switch (p.family) {
    case Family::Gaussian:
      return {x * x / 2, x, 1.0};
    case Family::Laguerre:
      return {x / 2 - p.a / 2 * std::log(x), 0.5 - p.a / (2 * x), p.a / (2 * x * x)};
    case Family::Jacobi: {
      const double y = 1 - x;
      return {-p.a / 2 * std::log(x) - p.b / 2 * std::log(y), -p.a / (2 * x) + p.b / (2 * y),
              p.a / (2 * x * x) + p.b / (2 * y * y)};
    }
  }
  return {0, 0, 0};
}

bool admissible(const Potential& p, const std::vector<double>& x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) return false;
    if (i > 0 && !(x[i] > x[i - 1])) return false;
  }
  if (x.empty()) return true;
  if (p.family == Family::Laguerre && !(x.front() > 0)) return false;
  if (p.family == Family::Jacobi && !(x.front() > 0 && x.back() < 1)) return false;
  return true;
}

double energy_only(const Potential& p, const std::vector<double>& x) {
  double e = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    e += well(p, x[j]).v;
    for (std::size_t k = j + 1; k < x.size(); ++k) e -= std::log(std::abs(x[k] - x[j]));
  }
  return e;
}

double min_eigenvalue(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

void validate(const Potential& pot) {
  if (pot.n < 1) throw std::invalid_argument("N must be >= 1");
  if (pot.family != Family::Gaussian && !(pot.a > 0)) throw std::invalid_argument("a must be > 0");
  if (pot.family == Family::Jacobi && !(pot.b > 0)) throw std::invalid_argument("b must be > 0");
}

void check_configuration(const Potential& pot, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != pot.n) throw std::invalid_argument("configuration size differs from N");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (x[i] == x[i - 1]) throw std::domain_error("coincident points");
  if (!admissible(pot, x)) throw std::domain_error("configuration is unordered or outside the domain");
}

EnergyEval energy_grad_hess(const Potential& pot, const std::vector<double>& x) {
  validate(pot);
  std::vector<double> sorted(x);
  std::sort(sorted.begin(), sorted.end());
  check_configuration(pot, sorted);
  const int n = pot.n;
  EnergyEval out{0.0, Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)};
  for (int j = 0; j < n; ++j) {
    const Well w = well(pot, x[j]);
    out.energy += w.v;
    out.gradient(j) += w.d1;
    out.hessian(j, j) += w.d2;
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const double d = x[j] - x[k];
      if (k > j) out.energy -= std::log(std::abs(d));
      out.gradient(j) -= 1.0 / d;
      out.hessian(j, j) += 1.0 / (d * d);
      out.hessian(j, k) = -1.0 / (d * d);
    }
  }
  return out;
}

std::vector<double> interlaced_default(const Potential& pot) {
  validate(pot);
  const int n = pot.n;
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double u = (i + 1.0) / (n + 1.0);
    switch (pot.family) {
      case Family::Gaussian:
        x[static_cast<std::size_t>(i)] = std::sqrt(2.0 * n) * (2 * u - 1);
        break;
      case Family::Laguerre:
        x[static_cast<std::size_t>(i)] = (4.0 * n + 2 * pot.a) * u;
        break;
      case Family::Jacobi:
        x[static_cast<std::size_t>(i)] = u;
        break;
    }
  }
  return x;
}

MinimizationResult crystallize(const Potential& pot, std::optional<std::vector<double>> init,
                               double tol, int max_iter) {
  validate(pot);
  std::vector<double> x = init ? *init : interlaced_default(pot);
  check_configuration(pot, x);
  const int n = pot.n;
  MinimizationResult res;
  EnergyEval ev = energy_grad_hess(pot, x);
  for (int it = 0;; ++it) {
    res.iterations = it;
    res.gradient_norm = ev.gradient.lpNorm<Eigen::Infinity>();
    if (res.gradient_norm <= tol) break;
    if (it >= max_iter) throw ConvergenceError("crystallize: iteration cap reached");
    Eigen::MatrixXd h = ev.hessian;
    Eigen::LLT<Eigen::MatrixXd> llt(h);
    for (double shift = 1e-8; llt.info() != Eigen::Success; shift *= 10) {
      h = ev.hessian + shift * Eigen::MatrixXd::Identity(n, n);
      llt.compute(h);
      if (shift > 1e12) throw ConvergenceError("crystallize: cannot regularise the Hessian");
    }
    const Eigen::VectorXd step = llt.solve(-ev.gradient);
    double s = 1.0;
    bool moved = false;
    for (int halving = 0; halving < 60; ++halving, s /= 2) {
      std::vector<double> trial(x);
      for (int j = 0; j < n; ++j) trial[static_cast<std::size_t>(j)] += s * step(j);
      if (!admissible(pot, trial)) continue;
      const double e = energy_only(pot, trial);
      const double slack = 1e-13 * (1.0 + std::abs(ev.energy));
      if (e <= ev.energy + slack) {
        EnergyEval next = energy_grad_hess(pot, trial);
        // inside the roundoff band only accept steps that still reduce the gradient
        if (e > ev.energy && next.gradient.lpNorm<Eigen::Infinity>() >= res.gradient_norm) continue;
        x = std::move(trial);
        ev = std::move(next);
        moved = true;
        break;
      }
    }
    if (!moved) throw ConvergenceError("crystallize: line search failed");
  }
  res.configuration = x;
  res.energy = ev.energy;
  res.hessian_min_eigenvalue = min_eigenvalue(ev.hessian);
  res.converged = res.hessian_min_eigenvalue > 0;
  if (!res.converged) throw ConvergenceError("crystallize: Hessian not positive definite at the end point");
  return res;
}

double harmonic_two_point(int n, double x1, double x2) {
  if (n < 1) throw std::invalid_argument("N must be >= 1");
  const std::vector<double> z = poly_zeros(Family::Gaussian, n).zeros;
  Eigen::VectorXd g1(n), g2(n);
  for (int j = 0; j < n; ++j) {
    const double d1 = x1 - z[static_cast<std::size_t>(j)], d2 = x2 - z[static_cast<std::size_t>(j)];
    if (d1 == 0 || d2 == 0) throw std::domain_error("evaluation point coincides with a Hermite zero");
    g1(j) = 1.0 / (d1 * d1);
    g2(j) = 1.0 / (d2 * d2);
  }
  const Eigen::MatrixXd h = energy_grad_hess(Potential{Family::Gaussian, n}, z).hessian;
  Eigen::LLT<Eigen::MatrixXd> llt(h);
  if (llt.info() != Eigen::Success) throw ConvergenceError("Hessian at the zeros is not positive definite");
  return 0.5 * g1.dot(llt.solve(g2));
}

void to_json(nlohmann::json& j, const MinimizationResult& r) {
  j = nlohmann::json{{"configuration", r.configuration},
                     {"energy", r.energy},
                     {"gradient_norm", r.gradient_norm},
                     {"hessian_min_eigenvalue", r.hessian_min_eigenvalue},
                     {"iterations", r.iterations},
                     {"converged", r.converged}};
}

}  // namespace betadual
