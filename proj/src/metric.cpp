#include "ncgeo/metric.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <vector>

#include "ncgeo/errors.hpp"

namespace ncgeo {

namespace {

constexpr double kSampleTol = 1e-12;
constexpr int kAscentStarts = 8;
constexpr int kAscentIters = 200;

void check_dimension(int n) {
  if (n < 2 || n + 1 > kMaxAmbient) {
    throw PreconditionError("metric: dimension n must lie in [2, " + std::to_string(kMaxAmbient - 1) +
                            "], got " + std::to_string(n));
  }
}

Eigen::VectorXd random_unit(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(dim);
  do {
    for (int i = 0; i < dim; ++i) v(i) = normal(rng);
  } while (v.norm() < 1e-8);
  return v.normalized();
}

Eigen::VectorXd random_unit_tangent(std::mt19937_64& rng, const Eigen::VectorXd& x) {
  Eigen::VectorXd v;
  do {
    v = random_unit(rng, static_cast<int>(x.size()));
    v -= v.dot(x) * x;
  } while (v.norm() < 1e-8);
  return v.normalized();
}

// Objective on the unit tangent bundle, homogeneous of degree 0 in v.
enum class Objective { Reversibility, Pinch };

template <class T>
T objective_value(const MetricSpec& m, Objective obj, const AVec<T>& x, const AVec<T>& v) {
  if (obj == Objective::Reversibility) {
    const AVec<T> mv = -v;
    return finsler_norm<T>(m, x, mv) / finsler_norm<T>(m, x, v);
  }
  const T f = finsler_norm<T>(m, x, v);
  return f * f / v.dot(v);
}

double objective(const MetricSpec& m, Objective obj, const Eigen::VectorXd& x, const Eigen::VectorXd& v) {
  return objective_value<double>(m, obj, AVec<double>(x), AVec<double>(v));
}

struct Candidate {
  double value;
  Eigen::VectorXd x;
  Eigen::VectorXd v;
};

// Projected gradient ascent with backtracking; never decreases the objective.
double ascend(const MetricSpec& m, Objective obj, Eigen::VectorXd x, Eigen::VectorXd v) {
  const int d = static_cast<int>(x.size());
  double best = objective(m, obj, x, v);
  double step = 0.1;
  for (int it = 0; it < kAscentIters; ++it) {
    AVec<AD1> xa(d), va(d);
    for (int i = 0; i < d; ++i) {
      xa(i) = ad1_variable(x(i), 2 * d, i);
      va(i) = ad1_variable(v(i), 2 * d, d + i);
    }
    const AD1 r = objective_value<AD1>(m, obj, xa, va);
    if (r.derivatives().size() != 2 * d) break;
    Eigen::VectorXd gx = r.derivatives().head(d);
    Eigen::VectorXd gv = r.derivatives().tail(d);
    gx -= gx.dot(x) * x;
    gv -= gv.dot(x) * x;
    gv -= gv.dot(v) * v;
    const double gnorm = std::sqrt(gx.squaredNorm() + gv.squaredNorm());
    if (gnorm < 1e-14) break;
    bool improved = false;
    while (step > 1e-14) {
      Eigen::VectorXd xn = (x + step * gx).normalized();
      Eigen::VectorXd vn = v + step * gv;
      vn -= vn.dot(xn) * xn;
      vn.normalize();
      const double val = objective(m, obj, xn, vn);
      if (val > best) {
        x = xn;
        v = vn;
        best = val;
        improved = true;
        step *= 2.0;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  return best;
}

double sampled_supremum(const MetricSpec& m, Objective obj, int grid) {
  if (grid < 4) throw PreconditionError("sampling grid must be >= 4, got " + std::to_string(grid));
  const int d = m.n + 1;
  std::mt19937_64 rng(0x5eedULL + static_cast<unsigned long long>(grid));
  const int points = grid * grid;
  const int directions = grid;
  std::vector<Candidate> top;
  top.reserve(kAscentStarts + 1);
  for (int i = 0; i < points; ++i) {
    const Eigen::VectorXd x = random_unit(rng, d);
    if (drift_norm(m, x) >= 1.0) throw DegenerateMetricError("metric: drift norm >= 1 at a sample point");
    for (int j = 0; j < directions; ++j) {
      const Eigen::VectorXd v = random_unit_tangent(rng, x);
      const double val = objective(m, obj, x, v);
      if (top.size() < static_cast<std::size_t>(kAscentStarts) || val > top.back().value) {
        top.push_back({val, x, v});
        std::sort(top.begin(), top.end(), [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
        if (top.size() > static_cast<std::size_t>(kAscentStarts)) top.pop_back();
      }
    }
  }
  double best = top.empty() ? 0.0 : top.front().value;
  for (const auto& c : top) best = std::max(best, ascend(m, obj, c.x, c.v));
  return best;
}

MetricSpec build(MetricKind kind, int n, double alpha, int grid) {
  check_dimension(n);
  if (kind == MetricKind::Round) alpha = 0.0;
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw DegenerateMetricError("metric: drift strength alpha must lie in [0, 1)");
  }
  MetricSpec m;
  m.kind = kind;
  m.n = n;
  m.alpha = alpha;
  m.grid = grid;
  m.lambda = (kind == MetricKind::Round) ? 1.0 : reversibility(m, grid);
  return m;
}

}  // namespace

std::string to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::Round:
      return "round";
    case MetricKind::Randers:
      return "randers";
    case MetricKind::Katok:
      return "katok";
  }
  return "round";
}

MetricKind metric_kind_from_string(const std::string& name) {
  if (name == "round") return MetricKind::Round;
  if (name == "randers") return MetricKind::Randers;
  if (name == "katok") return MetricKind::Katok;
  throw PreconditionError("unknown metric kind '" + name + "' (expected round, randers or katok)");
}

MetricSpec MetricSpec::round(int n) { return build(MetricKind::Round, n, 0.0, kDefaultGrid); }
MetricSpec MetricSpec::randers(int n, double alpha, int grid) { return build(MetricKind::Randers, n, alpha, grid); }
MetricSpec MetricSpec::katok(int n, double alpha, int grid) { return build(MetricKind::Katok, n, alpha, grid); }
MetricSpec MetricSpec::make(MetricKind kind, int n, double alpha, int grid) { return build(kind, n, alpha, grid); }

std::string MetricSpec::id() const {
  char buf[96];
  if (kind == MetricKind::Round) {
    std::snprintf(buf, sizeof(buf), "round(n=%d)", n);
  } else {
    std::snprintf(buf, sizeof(buf), "%s(n=%d,alpha=%.12g)", to_string(kind).c_str(), n, alpha);
  }
  return buf;
}

double drift_norm(const MetricSpec& m, const Eigen::VectorXd& x) {
  if (m.kind == MetricKind::Round) return 0.0;
  return m.alpha * killing_field<double>(m.n, AVec<double>(x)).norm();
}

TangentSample TangentSample::make(const Eigen::VectorXd& x, const Eigen::VectorXd& v) {
  if (x.size() != v.size()) throw PreconditionError("tangent sample: x and v differ in size");
  if (std::abs(x.norm() - 1.0) > kSampleTol) throw PreconditionError("tangent sample: |x| != 1");
  if (std::abs(x.dot(v)) > kSampleTol * std::max(1.0, v.norm())) {
    throw PreconditionError("tangent sample: v is not tangent to the sphere at x");
  }
  return {x, v};
}

double eval_metric(const MetricSpec& m, const TangentSample& s) {
  if (s.x.size() != m.n + 1) throw PreconditionError("eval_metric: sample dimension does not match the metric");
  if (std::abs(s.x.norm() - 1.0) > kSampleTol || std::abs(s.x.dot(s.v)) > kSampleTol * std::max(1.0, s.v.norm())) {
    throw PreconditionError("eval_metric: sample is not a unit-sphere tangent vector");
  }
  if (drift_norm(m, s.x) >= 1.0) throw DegenerateMetricError("eval_metric: drift norm >= 1 at x");
  if (s.v.squaredNorm() == 0.0) return 0.0;
  return finsler_norm<double>(m, AVec<double>(s.x), AVec<double>(s.v));
}

double reversibility(const MetricSpec& m, int grid) {
  if (m.kind == MetricKind::Round || m.alpha == 0.0) {
    if (grid < 4) throw PreconditionError("sampling grid must be >= 4");
    return 1.0;
  }
  return std::max(1.0, sampled_supremum(m, Objective::Reversibility, grid));
}

PinchResult metric_pinch_check(const MetricSpec& m, double lambda, int grid) {
  if (!(lambda >= 1.0)) throw DomainError("pinch check: lambda >= 1 violated");
  const double sup = sampled_supremum(m, Objective::Pinch, grid);
  const double bound = std::pow((lambda + 1.0) / lambda, 2);
  PinchResult r;
  r.sup_ratio = sup;
  r.margin = bound - sup;
  r.holds = sup < bound;
  return r;
}

double deck_invariance_defect(const MetricSpec& m, const SpaceFormSpec& sf, int samples, unsigned long long seed) {
  if (sf.n != m.n) throw PreconditionError("deck invariance: metric and space form dimensions differ");
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Eigen::VectorXd x = random_unit(rng, m.n + 1);
    const Eigen::VectorXd v = random_unit_tangent(rng, x) * (0.5 + static_cast<double>(i % 7));
    const double f = finsler_norm<double>(m, AVec<double>(x), AVec<double>(v));
    const double fa = finsler_norm<double>(m, AVec<double>(sf.action * x), AVec<double>(sf.action * v));
    worst = std::max(worst, std::abs(fa - f));
  }
  return worst;
}

}  // namespace ncgeo
