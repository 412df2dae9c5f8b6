#include "ncgeo/space_form.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ncgeo/errors.hpp"

namespace ncgeo {

namespace {

constexpr double kOrthoTol = 1e-12;

Eigen::MatrixXd block_rotation(int dim, double angle) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  for (int b = 0; b + 1 < dim; b += 2) {
    a(b, b) = c;
    a(b, b + 1) = -s;
    a(b + 1, b) = s;
    a(b + 1, b + 1) = c;
  }
  return a;
}

}  // namespace

SpaceFormSpec SpaceFormSpec::make(int n, int p) {
  if (n < 2) throw PreconditionError("space form: n must be >= 2, got " + std::to_string(n));
  if (p < 2) throw PreconditionError("space form: p must be >= 2, got " + std::to_string(p));
  if (n % 2 == 0 && p != 2) {
    throw PreconditionError("space form: only Z_2 acts freely on S^" + std::to_string(n) +
                            " (n even), got p = " + std::to_string(p));
  }
  Eigen::MatrixXd a;
  if (n % 2 == 0) {
    a = -Eigen::MatrixXd::Identity(n + 1, n + 1);
  } else {
    a = block_rotation(n + 1, 2.0 * std::numbers::pi / p);
    // cos(pi) leaves tiny sin residue; snap the antipodal case exactly.
    if (p == 2) a = -Eigen::MatrixXd::Identity(n + 1, n + 1);
  }
  return from_action(n, p, a);
}

SpaceFormSpec SpaceFormSpec::from_action(int n, int p, const Eigen::MatrixXd& action) {
  if (n < 2 || p < 2) throw PreconditionError("space form: need n >= 2 and p >= 2");
  const int d = n + 1;
  if (action.rows() != d || action.cols() != d) {
    throw PreconditionError("space form: action must be (n+1)x(n+1)");
  }
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  if ((action.transpose() * action - id).cwiseAbs().maxCoeff() > kOrthoTol) {
    throw PreconditionError("space form: action is not orthogonal");
  }
  if (n % 2 == 0 && (p != 2 || (action + id).cwiseAbs().maxCoeff() > kOrthoTol)) {
    throw PreconditionError("space form: for even n the action must be the antipodal map");
  }
  Eigen::MatrixXd power = id;
  for (int k = 1; k <= p; ++k) {
    power = power * action;
    if (k < p) {
      // Free action: A^k has no eigenvalue 1, i.e. A^k - I is nonsingular.
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(power - id);
      if (svd.singularValues().minCoeff() < 1e-9) {
        throw PreconditionError("space form: A^" + std::to_string(k) +
                                " has a fixed point on the sphere");
      }
    }
  }
  if ((power - id).cwiseAbs().maxCoeff() > 1e-10) {
    throw PreconditionError("space form: A^p != I");
  }
  SpaceFormSpec sf;
  sf.n = n;
  sf.p = p;
  sf.action = action;
  return sf;
}

Eigen::MatrixXd SpaceFormSpec::deck_power(int k) const {
  int r = ((k % p) + p) % p;
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(n + 1, n + 1);
  for (int i = 0; i < r; ++i) out = out * action;
  return out;
}

Eigen::VectorXd deck_apply(const SpaceFormSpec& sf, int k, const Eigen::VectorXd& x) {
  return sf.deck_power(k) * x;
}

}  // namespace ncgeo
