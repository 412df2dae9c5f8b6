#include "ncgeo/linearized.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ncgeo/errors.hpp"

namespace ncgeo {

namespace {

using cd = std::complex<double>;

// omega(u, w) = dp_u . dx_w - dp_w . dx_u with dp = Lvx dx + Lvv dv.
Eigen::MatrixXd symplectic_form_matrix(const LagrangianJet& j, int d) {
  // omega(u, w) = u^T W w.
  Eigen::MatrixXd dp(d, 2 * d);
  dp << j.lvx, j.lvv;
  Eigen::MatrixXd dx = Eigen::MatrixXd::Zero(d, 2 * d);
  dx.leftCols(d).setIdentity();
  return dp.transpose() * dx - dx.transpose() * dp;
}

// Columns e_1..e_k, f_1..f_k with T^T W T = J.
Eigen::MatrixXd symplectic_basis(const Eigen::MatrixXd& W) {
  const int K = static_cast<int>(W.rows());
  const int k = K / 2;
  std::vector<Eigen::VectorXd> pool;
  for (int i = 0; i < K; ++i) pool.push_back(Eigen::VectorXd::Unit(K, i));
  Eigen::MatrixXd T(K, K);
  for (int s = 0; s < k; ++s) {
    std::size_t ba = 0, bb = 1;
    double best = -1.0;
    for (std::size_t a = 0; a < pool.size(); ++a) {
      for (std::size_t b = a + 1; b < pool.size(); ++b) {
        const double w = std::abs(pool[a].dot(W * pool[b]));
        if (w > best) {
          best = w;
          ba = a;
          bb = b;
        }
      }
    }
    if (best < 1e-12) throw Error("poincare map: degenerate symplectic form on the section");
    const Eigen::VectorXd e = pool[ba];
    const Eigen::VectorXd f = pool[bb] / e.dot(W * pool[bb]);
    pool.erase(pool.begin() + static_cast<long>(bb));
    pool.erase(pool.begin() + static_cast<long>(ba));
    for (auto& u : pool) {
      const double ue = u.dot(W * e);
      const double uf = u.dot(W * f);
      u += ue * f - uf * e;
    }
    T.col(s) = e;
    T.col(k + s) = f;
  }
  return T;
}

}  // namespace

Eigen::MatrixXd standard_symplectic(int k) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * k, 2 * k);
  J.topRightCorner(k, k).setIdentity();
  J.bottomLeftCorner(k, k) = -Eigen::MatrixXd::Identity(k, k);
  return J;
}

double symplectic_defect(const Eigen::MatrixXd& P) {
  if (P.rows() != P.cols() || P.rows() % 2) throw PreconditionError("symplectic defect: need an even square matrix");
  const Eigen::MatrixXd J = standard_symplectic(static_cast<int>(P.rows() / 2));
  return (P.transpose() * J * P - J).norm();
}

Eigen::MatrixXd symplectic_polish(const Eigen::MatrixXd& P, int max_iters) {
  const int K = static_cast<int>(P.rows());
  const Eigen::MatrixXd J = standard_symplectic(K / 2);
  const Eigen::MatrixXd Jinv = -J;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(K, K);
  Eigen::MatrixXd X = P;
  double last = symplectic_defect(X);
  for (int it = 0; it < max_iters && last > 1e-15; ++it) {
    const Eigen::MatrixXd next = 0.5 * X * (3.0 * I - Jinv * X.transpose() * J * X);
    const double dn = symplectic_defect(next);
    if (!(dn < last)) break;
    X = next;
    last = dn;
  }
  return X;
}

PoincareMap poincare_map(const MetricSpec& m, const SpaceFormSpec& sf, int k, const Eigen::VectorXd& x0_in,
                         const Eigen::VectorXd& v0_in, double T, const PoincareOptions& opts) {
  const int d = sf.n + 1;
  PoincareMap pm;
  Eigen::VectorXd x0 = x0_in.normalized();
  Eigen::VectorXd v0 = unit_speed(m, x0, v0_in - v0_in.dot(x0) * x0);
  if (opts.shoot) {
    pm.shooting = shoot_closed_geodesic(m, sf, k, x0, v0, T);
    if (pm.shooting.converged) {
      x0 = pm.shooting.x0.normalized();
      v0 = unit_speed(m, x0, pm.shooting.v0 - pm.shooting.v0.dot(x0) * x0);
      T = pm.shooting.period;
    }
  }
  pm.x0 = x0;
  pm.v0 = v0;
  pm.period = T;

  Eigen::VectorXd z0(2 * d);
  z0 << x0, v0;
  const Eigen::MatrixXd cinv = sf.deck_power(k).transpose();
  Eigen::MatrixXd mono(2 * d, 2 * d);
  for (int c = 0; c < 2 * d; ++c) {
    Eigen::VectorXd zp = z0, zm = z0;
    zp(c) += opts.fd_step;
    zm(c) -= opts.fd_step;
    const Eigen::VectorXd fp = geodesic_flow(m, zp, T, opts.max_step);
    const Eigen::VectorXd fm = geodesic_flow(m, zm, T, opts.max_step);
    Eigen::VectorXd col(2 * d);
    col.head(d) = cinv * (fp.head(d) - fm.head(d));
    col.tail(d) = cinv * (fp.tail(d) - fm.tail(d));
    mono.col(c) = col / (2.0 * opts.fd_step);
  }

  const LagrangianJet jet = lagrangian_jet(m, x0, v0);
  const Eigen::VectorXd a0 = geodesic_acceleration(m, x0, v0);
  // Tangent space of TS^n, energy level and transversality to the flow.
  Eigen::MatrixXd cons = Eigen::MatrixXd::Zero(4, 2 * d);
  cons.block(0, 0, 1, d) = x0.transpose();
  cons.block(1, 0, 1, d) = v0.transpose();
  cons.block(1, d, 1, d) = x0.transpose();
  cons.block(2, 0, 1, d) = jet.lx.transpose();
  cons.block(2, d, 1, d) = jet.lv.transpose();
  cons.block(3, 0, 1, d) = v0.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cons, Eigen::ComputeFullV);
  const int K = 2 * d - 4;
  const Eigen::MatrixXd B = svd.matrixV().rightCols(K);

  Eigen::MatrixXd frame(2 * d, 2 * d);
  frame.leftCols(K) = B;
  frame.col(K) << v0, a0;
  frame.col(K + 1) << Eigen::VectorXd::Zero(d), v0;
  frame.col(K + 2) << x0, Eigen::VectorXd::Zero(d);
  frame.col(K + 3) << Eigen::VectorXd::Zero(d), x0;
  const Eigen::MatrixXd coords = frame.partialPivLu().solve(mono * B);
  const Eigen::MatrixXd PB = coords.topRows(K);

  const Eigen::MatrixXd W = B.transpose() * symplectic_form_matrix(jet, d) * B;
  const Eigen::MatrixXd Tb = symplectic_basis(W);
  const Eigen::MatrixXd P = Tb.partialPivLu().solve(PB * Tb);
  pm.section_basis = B * Tb;
  pm.defect_raw = symplectic_defect(P);
  pm.matrix = symplectic_polish(P);
  pm.defect = symplectic_defect(pm.matrix);
  return pm;
}

PoincareMap poincare_map(const MetricSpec& m, const SpaceFormSpec& sf, const DiscreteLoop& g,
                         const PoincareOptions& opts) {
  const ShootingState guess = shooting_guess(m, g);
  return poincare_map(m, sf, g.class_power, guess.x0, guess.v0, guess.period, opts);
}

void sort_eigenvalues(std::vector<std::complex<double>>& eig) {
  std::sort(eig.begin(), eig.end(), [](const cd& a, const cd& b) {
    const double aa = std::arg(a);
    const double ab = std::arg(b);
    if (std::abs(aa - ab) > 1e-12) return aa < ab;
    return std::abs(a) < std::abs(b);
  });
}

SpectralSummary spectral_summary(const Eigen::MatrixXd& P, double tol_unit, double tol_null) {
  if (P.rows() != P.cols()) throw PreconditionError("spectral summary: matrix is not square");
  SpectralSummary s;
  Eigen::EigenSolver<Eigen::MatrixXd> es(P, false);
  for (int i = 0; i < P.rows(); ++i) s.eigenvalues.push_back(es.eigenvalues()(i));
  sort_eigenvalues(s.eigenvalues);
  for (const auto& z : s.eigenvalues) {
    if (std::abs(std::abs(z) - 1.0) <= tol_unit) ++s.elliptic_height;
  }
  const Eigen::MatrixXd diff = P - Eigen::MatrixXd::Identity(P.rows(), P.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(diff);
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) < tol_null) ++s.nullity;
  }
  s.hyperbolic = s.elliptic_height == 0 && s.nullity == 0;
  s.nonhyperbolic = s.elliptic_height >= 2;
  return s;
}

double spectral_symmetry_defect(const std::vector<std::complex<double>>& eig) {
  double worst = 0.0;
  for (const auto& z : eig) {
    double dr = std::numeric_limits<double>::infinity();
    double dc = std::numeric_limits<double>::infinity();
    const cd r = 1.0 / std::conj(z);
    const cd c = std::conj(z);
    for (const auto& w : eig) {
      dr = std::min(dr, std::abs(w - r));
      dc = std::min(dc, std::abs(w - c));
    }
    worst = std::max({worst, dr, dc});
  }
  return worst;
}

MorseIndexEstimate numerical_morse_index(const MetricSpec& m, const DiscreteLoop& g, double max_residual) {
  const LoopHessian lh = loop_energy_hessian(m, g);
  const double res = geodesic_residual(loop_energy_gradient(m, g));
  if (res > max_residual) {
    throw PreconditionError("morse index: loop is not a converged geodesic (residual " + std::to_string(res) + ")");
  }
  const Eigen::VectorXd ev = lh.hessian.eigenvalues();
  MorseIndexEstimate out;
  out.spectral_radius = ev.cwiseAbs().maxCoeff();
  out.threshold = 1e-7 * out.spectral_radius;
  const double eps = out.threshold;
  bool above = false;
  for (int i = 0; i < ev.size(); ++i) {
    const double a = std::abs(ev(i));
    if (ev(i) < -eps) ++out.index;
    if (a <= eps) ++out.nullity_est;
    if (a > eps / 100.0 && a < eps * 100.0) {
      out.ambiguous = true;
      if (a > eps) above = true;
    }
  }
  const double alt = above ? eps * 100.0 : eps / 100.0;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) < -alt) ++out.index_alt;
    if (std::abs(ev(i)) <= alt) ++out.nullity_alt;
  }
  return out;
}

}  // namespace ncgeo
