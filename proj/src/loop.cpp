#include "ncgeo/loop.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>

#include "ncgeo/errors.hpp"

namespace ncgeo {

namespace {

// theta * F(mid, u) for the great arc a -> b.
template <class T>
T segment_length(const MetricSpec& m, const AVec<T>& a, const AVec<T>& b) {
  using std::asin;
  using std::sqrt;
  const AVec<T> d = b - a;
  const T c = sqrt(d.dot(d));
  const T theta = T(2.0) * asin(c / T(2.0));
  const AVec<T> s = a + b;
  const AVec<T> mid = s / sqrt(s.dot(s));
  const AVec<T> u = d / c;
  return theta * finsler_norm<T>(m, mid, u);
}

template <class T>
T segment_energy(const MetricSpec& m, const AVec<T>& a, const AVec<T>& b, int N) {
  const T l = segment_length<T>(m, a, b);
  return T(0.5 * N) * l * l;
}

Eigen::VectorXd endpoint(const DiscreteLoop& g, int i) {
  const int N = g.samples();
  return (i + 1 < N) ? Eigen::VectorXd(g.points.col(i + 1)) : g.closing_point();
}

void check_loop(const DiscreteLoop& g) {
  if (g.samples() < kMinLoopSamples) {
    throw ResolutionError("loop has " + std::to_string(g.samples()) + " samples, need at least " +
                          std::to_string(kMinLoopSamples));
  }
}

struct SegmentDerivs {
  Eigen::VectorXd ga, gb;
  Eigen::MatrixXd haa, hab, hbb;
};

SegmentDerivs segment_second_order(const MetricSpec& m, const Eigen::VectorXd& a, const Eigen::VectorXd& b, int N) {
  const int d = static_cast<int>(a.size());
  AVec<AD2> xa(d), xb(d);
  for (int i = 0; i < d; ++i) {
    xa(i) = ad2_variable(a(i), 2 * d, i);
    xb(i) = ad2_variable(b(i), 2 * d, d + i);
  }
  const SecondOrder so = unpack(segment_energy<AD2>(m, xa, xb, N), 2 * d);
  SegmentDerivs s;
  s.ga = so.gradient.head(d);
  s.gb = so.gradient.tail(d);
  s.haa = so.hessian.topLeftCorner(d, d);
  s.hab = so.hessian.topRightCorner(d, d);
  s.hbb = so.hessian.bottomRightCorner(d, d);
  return s;
}

double point_arc_distance(const Eigen::VectorXd& q, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double da = (q - a).norm();
  const double db = (q - b).norm();
  Eigen::VectorXd e2 = b - b.dot(a) * a;
  const double e2n = e2.norm();
  if (e2n < 1e-15) return std::min(da, db);
  e2 /= e2n;
  const double qa = q.dot(a);
  const double qe = q.dot(e2);
  const double r = std::hypot(qa, qe);
  if (r < 1e-15) return std::min(da, db);
  const double phi = std::atan2(qe, qa);
  const double span = std::atan2(b.dot(e2), b.dot(a));
  if (phi >= 0.0 && phi <= span) {
    const Eigen::VectorXd s = (qa * a + qe * e2) / r;
    return (q - s).norm();
  }
  return std::min(da, db);
}

// All deck images of the segments of g: (start, end, quotient segment index).
struct Arc {
  Eigen::VectorXd a, b;
  int seg;
};

std::vector<Arc> orbit_arcs(const DiscreteLoop& g, const SpaceFormSpec& sf) {
  const int N = g.samples();
  std::vector<Arc> arcs;
  arcs.reserve(static_cast<std::size_t>(N) * sf.p);
  for (int j = 0; j < sf.p; ++j) {
    const Eigen::MatrixXd aj = sf.deck_power(j);
    for (int i = 0; i < N; ++i) arcs.push_back({aj * g.points.col(i), aj * endpoint(g, i), i});
  }
  return arcs;
}

bool arcs_cross_s2(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
                   const Eigen::Vector3d& e) {
  const Eigen::Vector3d n1 = a.cross(b);
  const Eigen::Vector3d n2 = c.cross(e);
  Eigen::Vector3d q = n1.cross(n2);
  if (q.norm() < 1e-12 * n1.norm() * n2.norm()) return false;
  q.normalize();
  for (const Eigen::Vector3d& s : {q, Eigen::Vector3d(-q)}) {
    const bool in1 = a.cross(s).dot(n1) > 0.0 && s.cross(b).dot(n1) > 0.0;
    const bool in2 = c.cross(s).dot(n2) > 0.0 && s.cross(e).dot(n2) > 0.0;
    if (in1 && in2) return true;
  }
  return false;
}

double segment_distance(const Eigen::VectorXd& p0, const Eigen::VectorXd& p1, const Eigen::VectorXd& q0,
                        const Eigen::VectorXd& q1) {
  const Eigen::VectorXd d1 = p1 - p0;
  const Eigen::VectorXd d2 = q1 - q0;
  const Eigen::VectorXd r = p0 - q0;
  const double a = d1.squaredNorm();
  const double e = d2.squaredNorm();
  const double f = d2.dot(r);
  const double c = d1.dot(r);
  const double b = d1.dot(d2);
  const double denom = a * e - b * b;
  double s = denom > 1e-300 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
  double t = (b * s + f) / e;
  if (t < 0.0) {
    t = 0.0;
    s = std::clamp(-c / a, 0.0, 1.0);
  } else if (t > 1.0) {
    t = 1.0;
    s = std::clamp((b - c) / a, 0.0, 1.0);
  }
  return ((p0 + s * d1) - (q0 + t * d2)).norm();
}

}  // namespace

DiscreteLoop DiscreteLoop::make(const Eigen::MatrixXd& points, const SpaceFormSpec& sf, int class_power) {
  if (points.rows() != sf.n + 1) throw PreconditionError("loop: point dimension does not match the space form");
  if (points.cols() < kMinLoopSamples) {
    throw ResolutionError("loop has " + std::to_string(points.cols()) + " samples, need at least " +
                          std::to_string(kMinLoopSamples));
  }
  for (int i = 0; i < points.cols(); ++i) {
    if (std::abs(points.col(i).norm() - 1.0) > 1e-12) {
      throw PreconditionError("loop: sample " + std::to_string(i) + " is not a unit vector");
    }
  }
  DiscreteLoop g;
  g.points = points;
  g.class_power = ((class_power % sf.p) + sf.p) % sf.p;
  g.closure = sf.deck_power(g.class_power);
  return g;
}

Eigen::MatrixXd great_arc_samples(const Eigen::VectorXd& x, const Eigen::VectorXd& dir, double angle, int N) {
  Eigen::MatrixXd pts(x.size(), N);
  for (int i = 0; i < N; ++i) {
    const double t = angle * i / N;
    pts.col(i) = (std::cos(t) * x + std::sin(t) * dir).normalized();
  }
  return pts;
}

double loop_energy(const MetricSpec& m, const DiscreteLoop& g) {
  check_loop(g);
  const int N = g.samples();
  double e = 0.0;
  for (int i = 0; i < N; ++i) {
    e += segment_energy<double>(m, AVec<double>(g.points.col(i)), AVec<double>(endpoint(g, i)), N);
  }
  return e;
}

double loop_length(const MetricSpec& m, const DiscreteLoop& g) {
  check_loop(g);
  const int N = g.samples();
  double l = 0.0;
  for (int i = 0; i < N; ++i) {
    l += segment_length<double>(m, AVec<double>(g.points.col(i)), AVec<double>(endpoint(g, i)));
  }
  return l;
}

Eigen::MatrixXd loop_energy_gradient(const MetricSpec& m, const DiscreteLoop& g) {
  check_loop(g);
  const int N = g.samples();
  const int d = g.ambient_dim();
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(d, N);
  for (int i = 0; i < N; ++i) {
    const Eigen::VectorXd a = g.points.col(i);
    const Eigen::VectorXd b = endpoint(g, i);
    AVec<AD1> xa(d), xb(d);
    for (int k = 0; k < d; ++k) {
      xa(k) = ad1_variable(a(k), 2 * d, k);
      xb(k) = ad1_variable(b(k), 2 * d, d + k);
    }
    const AD1 e = segment_energy<AD1>(m, xa, xb, N);
    if (e.derivatives().size() != 2 * d) continue;
    grad.col(i) += e.derivatives().head(d);
    const Eigen::VectorXd gb = e.derivatives().tail(d);
    if (i + 1 < N) {
      grad.col(i + 1) += gb;
    } else {
      grad.col(0) += g.closure.transpose() * gb;
    }
  }
  for (int i = 0; i < N; ++i) {
    const Eigen::VectorXd x = g.points.col(i);
    grad.col(i) -= grad.col(i).dot(x) * x;
  }
  return grad;
}

double geodesic_residual(const Eigen::MatrixXd& gradient) {
  return gradient.cols() * gradient.colwise().norm().maxCoeff();
}

std::vector<Eigen::MatrixXd> tangent_frames(const DiscreteLoop& g) {
  const int d = g.ambient_dim();
  std::vector<Eigen::MatrixXd> frames(g.samples());
  for (int i = 0; i < g.samples(); ++i) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g.points.col(i));
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
    frames[i] = q.rightCols(d - 1);
  }
  return frames;
}

int band_position(int i, int N) {
  const int half = (N + 1) / 2;
  return i < half ? 2 * i : 2 * (N - 1 - i) + 1;
}

LoopHessian loop_energy_hessian(const MetricSpec& m, const DiscreteLoop& g) {
  check_loop(g);
  const int N = g.samples();
  const int d = g.ambient_dim();
  const int n = d - 1;
  std::vector<Eigen::MatrixXd> diag(N, Eigen::MatrixXd::Zero(d, d));
  std::vector<Eigen::MatrixXd> off(N);
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(d, N);
  for (int i = 0; i < N; ++i) {
    const SegmentDerivs s = segment_second_order(m, g.points.col(i), endpoint(g, i), N);
    grad.col(i) += s.ga;
    diag[i] += s.haa;
    if (i + 1 < N) {
      grad.col(i + 1) += s.gb;
      diag[i + 1] += s.hbb;
      off[i] = s.hab;
    } else {
      const Eigen::MatrixXd& c = g.closure;
      grad.col(0) += c.transpose() * s.gb;
      diag[0] += c.transpose() * s.hbb * c;
      off[i] = s.hab * c;
    }
  }
  LoopHessian out;
  out.frames = tangent_frames(g);
  out.hessian = BandedSym(n * N, 3 * n - 1);
  out.gradient.resize(n * N);
  for (int i = 0; i < N; ++i) {
    const Eigen::MatrixXd& e = out.frames[i];
    const int pi = band_position(i, N) * n;
    const double radial = g.points.col(i).dot(grad.col(i));
    const Eigen::VectorXd gi = e.transpose() * grad.col(i);
    out.gradient.segment(pi, n) = gi;
    const Eigen::MatrixXd hii = e.transpose() * diag[i] * e - radial * Eigen::MatrixXd::Identity(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = r; c < n; ++c) out.hessian.add(pi + r, pi + c, r == c ? hii(r, c) : 0.5 * (hii(r, c) + hii(c, r)));
    }
    const int j = (i + 1) % N;
    const int pj = band_position(j, N) * n;
    const Eigen::MatrixXd hij = e.transpose() * off[i] * out.frames[j];
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) out.hessian.add(pi + r, pj + c, hij(r, c));
    }
  }
  return out;
}

DiscreteLoop retract(const DiscreteLoop& g, const std::vector<Eigen::MatrixXd>& frames, const Eigen::VectorXd& step) {
  const int N = g.samples();
  const int n = g.ambient_dim() - 1;
  DiscreteLoop out = g;
  for (int i = 0; i < N; ++i) {
    const int pi = band_position(i, N) * n;
    out.points.col(i) = (g.points.col(i) + frames[i] * step.segment(pi, n)).normalized();
  }
  return out;
}

DiscreteLoop iterate_loop(const DiscreteLoop& g, int m, const SpaceFormSpec& sf) {
  if (m < 1) throw PreconditionError("iterate_loop: m must be >= 1");
  const int N = g.samples();
  DiscreteLoop out;
  out.points.resize(g.ambient_dim(), static_cast<Eigen::Index>(N) * m);
  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(g.ambient_dim(), g.ambient_dim());
  for (int j = 0; j < m; ++j) {
    out.points.middleCols(static_cast<Eigen::Index>(j) * N, N) = c * g.points;
    c = g.closure * c;
  }
  out.class_power = static_cast<int>((static_cast<long long>(g.class_power) * m) % sf.p);
  out.closure = sf.deck_power(out.class_power);
  return out;
}

bool iterate_in_class(int class_power, int m, int p) {
  return (static_cast<long long>(class_power) * m) % p == 1 % p;
}

DiscreteLoop refine_loop(const DiscreteLoop& g) {
  const int N = g.samples();
  DiscreteLoop out = g;
  out.points.resize(g.ambient_dim(), 2 * N);
  for (int i = 0; i < N; ++i) {
    out.points.col(2 * i) = g.points.col(i);
    out.points.col(2 * i + 1) = (g.points.col(i) + endpoint(g, i)).normalized();
  }
  return out;
}

SelfIntersection detect_self_intersections(const DiscreteLoop& g, const SpaceFormSpec& sf) {
  check_loop(g);
  const int N = g.samples();
  const int d = g.ambient_dim();
  SelfIntersection out;
  for (int i = 0; i < N; ++i) {
    const double ang = 2.0 * std::asin(std::min(1.0, 0.5 * (endpoint(g, i) - g.points.col(i)).norm()));
    if (ang > M_PI / 8.0) out.resolution_warning = true;
  }
  const std::vector<Arc> arcs = orbit_arcs(g, sf);
  std::set<std::pair<int, int>> pairs;
  for (int i = 0; i < N; ++i) {
    const Eigen::VectorXd a = g.points.col(i);
    const Eigen::VectorXd b = endpoint(g, i);
    for (const Arc& arc : arcs) {
      const int dj = ((arc.seg - i) % N + N) % N;
      if (dj == 0 || dj == 1 || dj == N - 1) continue;
      bool cross = false;
      if (d == 3) {
        cross = arcs_cross_s2(a, b, arc.a, arc.b);
      } else {
        const Eigen::VectorXd d1 = b - a;
        const Eigen::VectorXd d2 = arc.b - arc.a;
        const double cosang = std::abs(d1.dot(d2)) / (d1.norm() * d2.norm());
        if (cosang < 0.999) {
          const double tol = 0.25 * (d1.squaredNorm() + d2.squaredNorm());
          cross = segment_distance(a, b, arc.a, arc.b) < tol;
        }
      }
      if (cross) pairs.insert({std::min(i, arc.seg), std::max(i, arc.seg)});
    }
  }
  out.crossings = static_cast<int>(pairs.size());
  out.simple = out.crossings == 0;
  return out;
}

ImageComparison compare_images(const DiscreteLoop& a, const DiscreteLoop& b, const SpaceFormSpec& sf) {
  ImageComparison out;
  const std::vector<Arc> arcs_a = orbit_arcs(a, sf);
  const std::vector<Arc> arcs_b = orbit_arcs(b, sf);
  auto directed = [](const DiscreteLoop& g, const std::vector<Arc>& arcs, int* nearest0) {
    double worst = 0.0;
    for (int i = 0; i < g.samples(); ++i) {
      double best = 1e300;
      int best_k = 0;
      for (std::size_t k = 0; k < arcs.size(); ++k) {
        const double dist = point_arc_distance(g.points.col(i), arcs[k].a, arcs[k].b);
        if (dist < best) {
          best = dist;
          best_k = static_cast<int>(k);
        }
      }
      if (i == 0 && nearest0) *nearest0 = best_k;
      worst = std::max(worst, best);
    }
    return worst;
  };
  int k0 = 0;
  out.hausdorff = std::max(directed(a, arcs_b, &k0), directed(b, arcs_a, nullptr));
  const Eigen::VectorXd da = endpoint(a, 0) - a.points.col(0);
  const Eigen::VectorXd db = arcs_b[k0].b - arcs_b[k0].a;
  out.same_orientation = da.dot(db) > 0.0;
  return out;
}

}  // namespace ncgeo
