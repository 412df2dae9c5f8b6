#pragma once

#include <Eigen/Dense>

#include "ncgeo/loop.hpp"
#include "ncgeo/metric.hpp"
#include "ncgeo/space_form.hpp"

namespace ncgeo {

/// Derivatives of L = F^2 / 2 at (x, v). lvx(i, j) = d^2 L / dv_i dx_j.
struct LagrangianJet {
  double value = 0.0;
  Eigen::VectorXd lx, lv;
  Eigen::MatrixXd lvv, lvx;
};

LagrangianJet lagrangian_jet(const MetricSpec& m, const Eigen::VectorXd& x, const Eigen::VectorXd& v);

/// Second derivative of the geodesic through (x, v) on the unit sphere, from
/// the Euler-Lagrange equations of L with the constraint |x| = 1.
Eigen::VectorXd geodesic_acceleration(const MetricSpec& m, const Eigen::VectorXd& x, const Eigen::VectorXd& v);

inline constexpr double kDefaultFlowStep = 0.01;

/// Time-T geodesic flow of z = (x, v) by fixed-step Runge-Kutta-Fehlberg 7(8)
/// with step at most `max_step`. Throws IntegratorError on blow-up.
Eigen::VectorXd geodesic_flow(const MetricSpec& m, const Eigen::VectorXd& z0, double T,
                              double max_step = kDefaultFlowStep);

/// Rescales v so that F(x, v) = 1.
Eigen::VectorXd unit_speed(const MetricSpec& m, const Eigen::VectorXd& x, const Eigen::VectorXd& v);

struct ShootingState {
  Eigen::VectorXd x0, v0;
  double period = 0.0;
  /// Norm of A^{-k} phi_T(z0) - z0 together with the normalization conditions.
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Gauss-Newton shooting for a closed geodesic of class [h^k] with unit
/// speed: A^{-k} phi_T(x0, v0) = (x0, v0). Minimum norm steps handle the
/// degenerate directions of orbit families.
ShootingState shoot_closed_geodesic(const MetricSpec& m, const SpaceFormSpec& sf, int k, const Eigen::VectorXd& x0,
                                    const Eigen::VectorXd& v0, double T0, int max_iters = 20, double tol = 1e-11);

/// Initial data (x0, unit speed v0, T = length) read off a converged discrete loop.
ShootingState shooting_guess(const MetricSpec& m, const DiscreteLoop& g);

}  // namespace ncgeo
