#pragma once

// Log-gas energies U = sum V(x_l) - sum_{j<k} log|x_j - x_k| for
//   G: V = x^2/2
//   L: V = x/2 - (a/2) log x            (x > 0)
//   J: V = -(a/2) log x - (b/2) log(1-x) (0 < x < 1)
// whose minimisers are the zeros of H_N, L_N^{a-1} and P_N^{(a-1,b-1)}(1-2x).

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "betadual/family.hpp"

namespace betadual {

struct Potential {
  Family family = Family::Gaussian;
  int n = 1;
  double a = 0.0;
  double b = 0.0;
};

void validate(const Potential& pot);
/// Throws std::domain_error unless x is ordered, distinct and in the domain.
void check_configuration(const Potential& pot, const std::vector<double>& x);

struct EnergyEval {
  double energy = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

EnergyEval energy_grad_hess(const Potential& pot, const std::vector<double>& x);

struct MinimizationResult {
  std::vector<double> configuration;
  double energy = 0.0;
  double gradient_norm = 0.0;  // infinity norm
  double hessian_min_eigenvalue = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Evenly spaced points inside the family's equilibrium support.
std::vector<double> interlaced_default(const Potential& pot);

/// Damped Newton; steps are halved until the points stay ordered and inside
/// the domain and the energy does not increase. Throws ConvergenceError if
/// the iteration cap is hit or the terminal Hessian is not positive definite.
MinimizationResult crystallize(const Potential& pot,
                               std::optional<std::vector<double>> init = std::nullopt,
                               double tol = 1e-12, int max_iter = 200);

/// 1/2 grad A_1^T H^{-1} grad A_2 at the Hermite zeros, where
/// A_i = sum_j 1/(x_i - lambda_j) and H is the Gaussian Hessian there.
double harmonic_two_point(int n, double x1, double x2);

void to_json(nlohmann::json& j, const MinimizationResult& r);

}  // namespace betadual
