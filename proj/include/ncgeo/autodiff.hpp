#pragma once

// Forward-mode automatic differentiation types shared by the metric, loop
// and flow code. Storage is fixed-capacity so inner loops never allocate.

#include <Eigen/Dense>
#include <unsupported/Eigen/AutoDiff>

namespace ncgeo {

/// Largest supported ambient dimension n + 1.
inline constexpr int kMaxAmbient = 8;
/// Largest number of independent variables differentiated at once.
inline constexpr int kMaxVars = 2 * kMaxAmbient;

template <class T>
using AVec = Eigen::Matrix<T, Eigen::Dynamic, 1, 0, kMaxAmbient, 1>;

using DVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxVars, 1>;
using AD1 = Eigen::AutoDiffScalar<DVec>;
using AD1Vec = Eigen::Matrix<AD1, Eigen::Dynamic, 1, 0, kMaxVars, 1>;
using AD2 = Eigen::AutoDiffScalar<AD1Vec>;

inline AD1 ad1_variable(double value, int nvars, int index) { return AD1(value, nvars, index); }

inline AD2 ad2_variable(double value, int nvars, int index) {
  AD2 out;
  out.value() = AD1(value, nvars, index);
  out.derivatives() = AD1Vec(nvars);
  for (int j = 0; j < nvars; ++j) {
    out.derivatives()(j) = AD1(j == index ? 1.0 : 0.0, DVec::Zero(nvars));
  }
  return out;
}

/// Value, gradient and Hessian of a scalar function of `nvars` variables.
struct SecondOrder {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

inline SecondOrder unpack(const AD2& r, int nvars) {
  SecondOrder out;
  out.value = r.value().value();
  out.gradient.resize(nvars);
  out.hessian.setZero(nvars, nvars);
  const bool has_first = r.derivatives().size() == nvars;
  for (int i = 0; i < nvars; ++i) {
    out.gradient(i) = has_first ? r.derivatives()(i).value() : 0.0;
    if (!has_first) continue;
    const auto& row = r.derivatives()(i).derivatives();
    if (row.size() == nvars) out.hessian.row(i) = row.transpose();
  }
  return out;
}

}  // namespace ncgeo
