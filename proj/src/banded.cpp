#include "ncgeo/banded.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>

#include "ncgeo/errors.hpp"

namespace ncgeo {

BandedSym::BandedSym(int n, int kd) : n_(n), kd_(std::min(kd, std::max(n - 1, 0))) {
  ab_.setZero(kd_ + 1, n_);
}

void BandedSym::add(int i, int j, double value) {
  if (i > j) std::swap(i, j);
  if (j - i > kd_) throw PreconditionError("banded: entry outside the band");
  ab_(kd_ + i - j, j) += value;
}

double BandedSym::operator()(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (j - i > kd_) return 0.0;
  return ab_(kd_ + i - j, j);
}

void BandedSym::add_diagonal(double value) { ab_.row(kd_).array() += value; }

Eigen::VectorXd BandedSym::multiply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n_);
  for (int j = 0; j < n_; ++j) {
    y(j) += ab_(kd_, j) * x(j);
    for (int i = std::max(0, j - kd_); i < j; ++i) {
      const double a = ab_(kd_ + i - j, j);
      y(i) += a * x(j);
      y(j) += a * x(i);
    }
  }
  return y;
}

BandedSym BandedSym::squared() const {
  BandedSym out(n_, 2 * kd_);
  for (int j = 0; j < n_; ++j) {
    for (int i = std::max(0, j - 2 * kd_); i <= j; ++i) {
      double s = 0.0;
      const int lo = std::max({0, i - kd_, j - kd_});
      const int hi = std::min({n_ - 1, i + kd_, j + kd_});
      for (int k = lo; k <= hi; ++k) s += (*this)(i, k) * (*this)(k, j);
      if (s != 0.0) out.ab_(out.kd_ + i - j, j) = s;
    }
  }
  return out;
}

double BandedSym::max_abs() const { return ab_.size() ? ab_.cwiseAbs().maxCoeff() : 0.0; }

Eigen::VectorXd BandedSym::eigenvalues() const {
  Eigen::MatrixXd ab = ab_;
  Eigen::VectorXd w(n_);
  if (n_ == 0) return w;
  const lapack_int info = LAPACKE_dsbev(LAPACK_COL_MAJOR, 'N', 'U', n_, kd_, ab.data(), kd_ + 1, w.data(),
                                        nullptr, 1);
  if (info != 0) throw Error("banded eigensolver failed, info = " + std::to_string(info));
  return w;
}

bool BandedSym::solve_spd(const Eigen::VectorXd& b, Eigen::VectorXd& x) const {
  Eigen::MatrixXd ab = ab_;
  x = b;
  const lapack_int info = LAPACKE_dpbsv(LAPACK_COL_MAJOR, 'U', n_, kd_, 1, ab.data(), kd_ + 1, x.data(), n_);
  return info == 0 && x.allFinite();
}

Eigen::MatrixXd BandedSym::to_dense() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (int j = 0; j < n_; ++j) {
    for (int i = std::max(0, j - kd_); i <= j; ++i) {
      a(i, j) = ab_(kd_ + i - j, j);
      a(j, i) = a(i, j);
    }
  }
  return a;
}

}  // namespace ncgeo
