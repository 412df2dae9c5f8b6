#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "ncgeo/flow.hpp"
#include "ncgeo/loop.hpp"
#include "ncgeo/metric.hpp"
#include "ncgeo/space_form.hpp"

namespace ncgeo {

/// Standard symplectic matrix [[0, I], [-I, 0]] of size 2k.
Eigen::MatrixXd standard_symplectic(int k);

/// || P^T J P - J ||_F.
double symplectic_defect(const Eigen::MatrixXd& P);

/// Newton-Schulz projection X <- X (3I - J^{-1} X^T J X) / 2 onto Sp(2k).
Eigen::MatrixXd symplectic_polish(const Eigen::MatrixXd& P, int max_iters = 30);

struct PoincareMap {
  /// (2n-2) x (2n-2) in a symplectic basis of the section.
  Eigen::MatrixXd matrix;
  /// Base point and unit speed velocity on the orbit.
  Eigen::VectorXd x0, v0;
  double period = 0.0;
  /// Section basis in (dx, dv) coordinates, one column per symplectic basis vector.
  Eigen::MatrixXd section_basis;
  double defect_raw = 0.0;
  double defect = 0.0;
  ShootingState shooting;
};

struct PoincareOptions {
  double fd_step = 1e-6;
  double max_step = kDefaultFlowStep;
  /// Refine the base point by shooting before differentiating.
  bool shoot = true;
};

/// Linearized Poincare map of the closed geodesic through (x0, v0) with
/// period T, class [h^k], from central differences of the time-T flow.
PoincareMap poincare_map(const MetricSpec& m, const SpaceFormSpec& sf, int k, const Eigen::VectorXd& x0,
                         const Eigen::VectorXd& v0, double T, const PoincareOptions& opts = {});

/// Same, starting from a converged discrete loop.
PoincareMap poincare_map(const MetricSpec& m, const SpaceFormSpec& sf, const DiscreteLoop& g,
                         const PoincareOptions& opts = {});

struct SpectralSummary {
  /// Sorted by argument in (-pi, pi], then modulus.
  std::vector<std::complex<double>> eigenvalues;
  int elliptic_height = 0;
  int nullity = 0;
  bool hyperbolic = false;
  bool nonhyperbolic = false;
};

SpectralSummary spectral_summary(const Eigen::MatrixXd& P, double tol_unit = 1e-6, double tol_null = 1e-6);

/// Largest distance from an eigenvalue z to the nearest eigenvalue to 1/conj(z)
/// or to conj(z).
double spectral_symmetry_defect(const std::vector<std::complex<double>>& eig);

void sort_eigenvalues(std::vector<std::complex<double>>& eig);

struct MorseIndexEstimate {
  int index = 0;
  /// Kernel dimension of the loop Hessian; includes the reparametrization direction.
  int nullity_est = 0;
  /// An eigenvalue lies within a factor 100 of the threshold.
  bool ambiguous = false;
  int index_alt = 0;
  int nullity_alt = 0;
  double threshold = 0.0;
  double spectral_radius = 0.0;
};

/// Counts eigenvalues of the Riemannian Hessian of loop_energy below
/// -eps and within [-eps, eps], eps = 1e-7 * spectral radius.
MorseIndexEstimate numerical_morse_index(const MetricSpec& m, const DiscreteLoop& g, double max_residual = 1e-6);

}  // namespace ncgeo
