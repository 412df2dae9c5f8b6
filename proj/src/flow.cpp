#include "ncgeo/flow.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <vector>

#include "ncgeo/errors.hpp"

namespace ncgeo {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::vector<double>;

Eigen::VectorXd residual_vector(const MetricSpec& m, const SpaceFormSpec& sf, int k, const Eigen::VectorXd& u,
                                const Eigen::VectorXd& xref, const Eigen::VectorXd& vref) {
  const int d = sf.n + 1;
  const Eigen::VectorXd x = u.head(d);
  const Eigen::VectorXd v = u.segment(d, d);
  const double T = u(2 * d);
  Eigen::VectorXd z0(2 * d);
  z0 << x, v;
  const Eigen::VectorXd z1 = geodesic_flow(m, z0, T);
  const Eigen::MatrixXd cinv = sf.deck_power(k).transpose();
  Eigen::VectorXd r(2 * d + 4);
  r.head(d) = cinv * z1.head(d) - x;
  r.segment(d, d) = cinv * z1.tail(d) - v;
  r(2 * d) = x.squaredNorm() - 1.0;
  r(2 * d + 1) = x.dot(v);
  r(2 * d + 2) = finsler_norm<double>(m, AVec<double>(x), AVec<double>(v)) - 1.0;
  r(2 * d + 3) = (x - xref).dot(vref);
  return r;
}

}  // namespace

LagrangianJet lagrangian_jet(const MetricSpec& m, const Eigen::VectorXd& x, const Eigen::VectorXd& v) {
  const int d = static_cast<int>(x.size());
  AVec<AD2> xa(d), va(d);
  for (int i = 0; i < d; ++i) {
    xa(i) = ad2_variable(x(i), 2 * d, i);
    va(i) = ad2_variable(v(i), 2 * d, d + i);
  }
  const AD2 f = finsler_norm<AD2>(m, xa, va);
  const SecondOrder so = unpack(AD2(0.5) * f * f, 2 * d);
  LagrangianJet j;
  j.value = so.value;
  j.lx = so.gradient.head(d);
  j.lv = so.gradient.tail(d);
  j.lvv = so.hessian.bottomRightCorner(d, d);
  j.lvx = so.hessian.bottomLeftCorner(d, d);
  return j;
}

Eigen::VectorXd geodesic_acceleration(const MetricSpec& m, const Eigen::VectorXd& x, const Eigen::VectorXd& v) {
  const int d = static_cast<int>(x.size());
  const LagrangianJet j = lagrangian_jet(m, x, v);
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(d + 1, d + 1);
  kkt.topLeftCorner(d, d) = j.lvv;
  kkt.topRightCorner(d, 1) = -x;
  kkt.bottomLeftCorner(1, d) = x.transpose();
  Eigen::VectorXd rhs(d + 1);
  rhs.head(d) = j.lx - j.lvx * v;
  rhs(d) = -v.squaredNorm();
  return kkt.partialPivLu().solve(rhs).head(d);
}

Eigen::VectorXd geodesic_flow(const MetricSpec& m, const Eigen::VectorXd& z0, double T, double max_step) {
  if (!(max_step > 0.0)) throw PreconditionError("flow: step must be positive");
  const int d = static_cast<int>(z0.size() / 2);
  if (T == 0.0) return z0;
  const int steps = static_cast<int>(std::ceil(std::abs(T) / max_step));
  const double h = T / steps;
  State z(z0.data(), z0.data() + z0.size());
  auto rhs = [&](const State& s, State& ds, double) {
    const Eigen::Map<const Eigen::VectorXd> all(s.data(), 2 * d);
    const Eigen::VectorXd a = geodesic_acceleration(m, all.head(d), all.tail(d));
    for (int i = 0; i < d; ++i) {
      ds[i] = s[d + i];
      ds[d + i] = a(i);
    }
  };
  odeint::runge_kutta_fehlberg78<State> stepper;
  double t = 0.0;
  for (int s = 0; s < steps; ++s) {
    stepper.do_step(rhs, z, t, h);
    t += h;
    for (double c : z) {
      if (!std::isfinite(c)) {
        throw IntegratorError("flow: non-finite state at step " + std::to_string(s) + " of " +
                              std::to_string(steps) + " (t = " + std::to_string(t) + ", h = " +
                              std::to_string(h) + ")");
      }
    }
  }
  return Eigen::Map<Eigen::VectorXd>(z.data(), 2 * d);
}

Eigen::VectorXd unit_speed(const MetricSpec& m, const Eigen::VectorXd& x, const Eigen::VectorXd& v) {
  const double f = finsler_norm<double>(m, AVec<double>(x), AVec<double>(v));
  if (!(f > 0.0)) throw PreconditionError("unit_speed: zero tangent vector");
  return v / f;
}

ShootingState shooting_guess(const MetricSpec& m, const DiscreteLoop& g) {
  const int N = g.samples();
  const Eigen::VectorXd x = g.points.col(0);
  const Eigen::VectorXd next = g.points.col(1);
  const Eigen::VectorXd prev = g.closure.transpose() * g.points.col(N - 1);
  Eigen::VectorXd v = next - prev;
  v -= v.dot(x) * x;
  ShootingState s;
  s.x0 = x;
  s.v0 = unit_speed(m, x, v);
  s.period = loop_length(m, g);
  return s;
}

ShootingState shoot_closed_geodesic(const MetricSpec& m, const SpaceFormSpec& sf, int k, const Eigen::VectorXd& x0,
                                    const Eigen::VectorXd& v0, double T0, int max_iters, double tol) {
  const int d = sf.n + 1;
  if (x0.size() != d || v0.size() != d) throw PreconditionError("shooting: state dimension mismatch");
  if (!(T0 > 0.0)) throw PreconditionError("shooting: period guess must be positive");
  Eigen::VectorXd u(2 * d + 1);
  u << x0, v0, T0;
  const Eigen::VectorXd xref = x0;
  const Eigen::VectorXd vref = v0;
  Eigen::VectorXd r = residual_vector(m, sf, k, u, xref, vref);
  ShootingState st;
  int it = 0;
  for (; it < max_iters && r.norm() > tol; ++it) {
    Eigen::MatrixXd jac(r.size(), u.size());
    for (int c = 0; c < u.size(); ++c) {
      const double h = 1e-7 * std::max(1.0, std::abs(u(c)));
      Eigen::VectorXd up = u, um = u;
      up(c) += h;
      um(c) -= h;
      jac.col(c) = (residual_vector(m, sf, k, up, xref, vref) - residual_vector(m, sf, k, um, xref, vref)) / (2 * h);
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jac);
    cod.setThreshold(1e-9);
    const Eigen::VectorXd step = cod.solve(-r);
    double t = 1.0;
    bool accepted = false;
    for (int b = 0; b < 12; ++b, t *= 0.5) {
      const Eigen::VectorXd trial = u + t * step;
      Eigen::VectorXd rt;
      try {
        rt = residual_vector(m, sf, k, trial, xref, vref);
      } catch (const IntegratorError&) {
        continue;
      }
      if (rt.norm() < r.norm()) {
        u = trial;
        r = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  st.x0 = u.head(d);
  st.v0 = u.segment(d, d);
  st.period = u(2 * d);
  st.residual = r.norm();
  st.iterations = it;
  st.converged = st.residual <= tol * 1e3;
  return st;
}

}  // namespace ncgeo
