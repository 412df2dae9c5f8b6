#pragma once

#include <Eigen/Dense>

namespace ncgeo {

/// Symmetric band matrix in LAPACK upper band storage.
class BandedSym {
 public:
  BandedSym() = default;
  BandedSym(int n, int kd);

  int size() const { return n_; }
  int bandwidth() const { return kd_; }

  /// Adds `value` to entries (i, j) and (j, i). Requires |i - j| <= kd.
  void add(int i, int j, double value);
  double operator()(int i, int j) const;
  void add_diagonal(double value);

  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  /// A * A, with band width 2 kd.
  BandedSym squared() const;
  double max_abs() const;

  /// All eigenvalues, ascending.
  Eigen::VectorXd eigenvalues() const;
  /// Solves A x = b by banded Cholesky. Returns false if A is not positive definite.
  bool solve_spd(const Eigen::VectorXd& b, Eigen::VectorXd& x) const;

  Eigen::MatrixXd to_dense() const;

 private:
  int n_ = 0;
  int kd_ = 0;
  // Column major, (kd + 1) x n; entry (i, j), i <= j, at (kd + i - j, j).
  Eigen::MatrixXd ab_;
};

}  // namespace ncgeo
