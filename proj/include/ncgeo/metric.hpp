#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "ncgeo/autodiff.hpp"
#include "ncgeo/space_form.hpp"

namespace ncgeo {

/// Metric families on S^n. All are invariant under the standard deck actions.
///
///  - Round:   F = |v|, the constant curvature 1 metric g0.
///  - Randers: F = |v| + alpha <K x, v>, a Randers metric with drift one-form
///             dual to the Killing field K.
///  - Katok:   the Zermelo navigation metric of (g0, W = alpha K x). Its
///             geodesics are great circles carried along by the rotation
///             generated by K, which makes the closed ones explicit.
///
/// K is the rotation of the (x0, x1) plane when n is even and the Hopf field
/// (rotation of every complex coordinate plane) when n is odd.
enum class MetricKind { Round, Randers, Katok };

std::string to_string(MetricKind kind);
MetricKind metric_kind_from_string(const std::string& name);

/// Default sampling resolution per angular dimension.
inline constexpr int kDefaultGrid = 64;

struct MetricSpec {
  MetricKind kind = MetricKind::Round;
  int n = 2;
  double alpha = 0.0;
  /// Sampled reversibility, cached at construction.
  double lambda = 1.0;
  int grid = kDefaultGrid;

  static MetricSpec round(int n);
  static MetricSpec randers(int n, double alpha, int grid = kDefaultGrid);
  static MetricSpec katok(int n, double alpha, int grid = kDefaultGrid);
  static MetricSpec make(MetricKind kind, int n, double alpha, int grid = kDefaultGrid);

  /// Stable identifier, e.g. "katok(n=2,alpha=0.1)".
  std::string id() const;
};

/// Killing field K x (unscaled).
template <class T>
AVec<T> killing_field(int n, const AVec<T>& x) {
  AVec<T> k = AVec<T>::Zero(x.size());
  const int planes = (n % 2 == 1) ? (n + 1) / 2 : 1;
  for (int b = 0; b < planes; ++b) {
    k(2 * b) = -x(2 * b + 1);
    k(2 * b + 1) = x(2 * b);
  }
  return k;
}

/// F(x, v) without precondition checks. `x` need not lie exactly on the
/// sphere; the formula is the natural extension to R^{n+1}.
template <class T>
T finsler_norm(const MetricSpec& m, const AVec<T>& x, const AVec<T>& v) {
  using std::sqrt;
  const T vv = v.dot(v);
  switch (m.kind) {
    case MetricKind::Round:
      return sqrt(vv);
    case MetricKind::Randers: {
      const AVec<T> k = killing_field<T>(m.n, x);
      return sqrt(vv) + T(m.alpha) * k.dot(v);
    }
    case MetricKind::Katok: {
      const AVec<T> w = T(m.alpha) * killing_field<T>(m.n, x);
      const T wv = w.dot(v);
      const T lam0 = T(1.0) - w.dot(w);
      return (sqrt(lam0 * vv + wv * wv) - wv) / lam0;
    }
  }
  return sqrt(vv);
}

/// Pointwise drift norm |beta|_x (Randers) or |W(x)| (Katok); 0 for Round.
double drift_norm(const MetricSpec& m, const Eigen::VectorXd& x);

/// A point of the unit sphere together with a tangent vector.
struct TangentSample {
  Eigen::VectorXd x;
  Eigen::VectorXd v;

  /// Validates |x| = 1 and x.v = 0 to 1e-12.
  static TangentSample make(const Eigen::VectorXd& x, const Eigen::VectorXd& v);
};

/// F(x, v). Throws PreconditionError for a non-tangent sample and
/// DegenerateMetricError when the drift norm at x reaches 1.
double eval_metric(const MetricSpec& m, const TangentSample& s);

/// Sampled reversibility max{F(x,-v) : F(x,v) = 1}.
///
/// Samples grid^2 base points and grid directions per point (deterministic
/// pseudo-random sets), then refines the best candidates by projected
/// gradient ascent on the unit tangent bundle. Requires grid >= 4.
double reversibility(const MetricSpec& m, int grid = kDefaultGrid);

struct PinchResult {
  bool holds = false;
  double margin = 0.0;
  /// sup F(x,v)^2 / g0(v,v) over sampled unit tangents.
  double sup_ratio = 0.0;
};

/// Checks F^2 < ((lambda+1)/lambda)^2 g0 on the same sampling scheme as
/// `reversibility`. margin = ((lambda+1)/lambda)^2 - sup_ratio.
PinchResult metric_pinch_check(const MetricSpec& m, double lambda, int grid = kDefaultGrid);

/// max |F(Ax, Av) - F(x, v)| over `samples` pseudo-random unit tangents.
double deck_invariance_defect(const MetricSpec& m, const SpaceFormSpec& sf, int samples = 1000,
                              unsigned long long seed = 7);

}  // namespace ncgeo
