#pragma once

#include <Eigen/Dense>

namespace ncgeo {

/// The space form S^n / <h>, represented by its lift to the unit sphere of
/// R^{n+1} and an orthogonal deck generator `action`.
///
/// Even n forces p = 2 and the antipodal map. For odd n the generator
/// rotates every complex coordinate plane of C^{(n+1)/2} by 2*pi/p.
struct SpaceFormSpec {
  int n = 2;
  int p = 2;
  Eigen::MatrixXd action;

  /// Standard generator for (n, p). Throws PreconditionError on an invalid pair.
  static SpaceFormSpec make(int n, int p);

  /// Validates a user supplied generator: orthogonal, order exactly p, and
  /// every nontrivial power fixed-point free.
  static SpaceFormSpec from_action(int n, int p, const Eigen::MatrixXd& action);

  int ambient_dim() const { return n + 1; }

  /// A^k for any integer k (reduced mod p).
  Eigen::MatrixXd deck_power(int k) const;
};

Eigen::VectorXd deck_apply(const SpaceFormSpec& sf, int k, const Eigen::VectorXd& x);

}  // namespace ncgeo
