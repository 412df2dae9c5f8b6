#include "ncgeo/search.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ncgeo/errors.hpp"
#include "ncgeo/linearized.hpp"

namespace ncgeo {

namespace {

constexpr double kArmijo = 1e-4;

Eigen::VectorXd random_unit(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(dim);
  do {
    for (int i = 0; i < dim; ++i) v(i) = normal(rng);
  } while (v.norm() < 1e-8);
  return v.normalized();
}

Eigen::VectorXd random_tangent(std::mt19937_64& rng, const Eigen::VectorXd& x) {
  Eigen::VectorXd v;
  do {
    v = random_unit(rng, static_cast<int>(x.size()));
    v -= v.dot(x) * x;
  } while (v.norm() < 1e-6);
  return v.normalized();
}

// Cholesky factor of N * L + I / N, L the Laplacian of the twisted cycle
// x_0 - x_1 - ... - x_{N-1} - C x_0, acting on stacked ambient coordinates.
Eigen::LLT<Eigen::MatrixXd> smoothing_factor(int N, const Eigen::MatrixXd& closure) {
  const int d = static_cast<int>(closure.rows());
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(d * N, d * N);
  for (int i = 0; i < N; ++i) M.block(d * i, d * i, d, d) = (2.0 * N + 1.0 / N) * I;
  for (int i = 0; i + 1 < N; ++i) {
    M.block(d * i, d * (i + 1), d, d) = -N * I;
    M.block(d * (i + 1), d * i, d, d) = -N * I;
  }
  M.block(d * (N - 1), 0, d, d) -= N * closure;
  M.block(0, d * (N - 1), d, d) -= N * closure.transpose();
  return Eigen::LLT<Eigen::MatrixXd>(M);
}

DiscreteLoop move(const DiscreteLoop& g, const Eigen::MatrixXd& dir, double t) {
  DiscreteLoop out = g;
  out.points = g.points + t * dir;
  out.points.colwise().normalize();
  return out;
}

bool better(const GeodesicRecord& a, const GeodesicRecord& b) { return a.energy < b.energy; }

}  // namespace

DiscreteLoop make_seed_loop(const SpaceFormSpec& sf, int k, int N, std::uint64_t rng_seed, int seed_index,
                            double noise) {
  std::seed_seq seq{static_cast<std::uint32_t>(rng_seed), static_cast<std::uint32_t>(rng_seed >> 32),
                    static_cast<std::uint32_t>(seed_index)};
  std::mt19937_64 rng(seq);
  const int d = sf.n + 1;
  const Eigen::VectorXd x0 = random_unit(rng, d);
  const Eigen::VectorXd x1 = sf.deck_power(k) * x0;
  Eigen::MatrixXd pts(d, N);
  const double c = std::clamp(x0.dot(x1), -1.0, 1.0);
  if (c < -1.0 + 1e-9) {
    pts = great_arc_samples(x0, random_tangent(rng, x0), M_PI, N);
  } else {
    // Two great arcs through a perturbed midpoint.
    const double ang = std::acos(c);
    Eigen::VectorXd dir = x1 - c * x0;
    dir = dir.norm() > 1e-12 ? Eigen::VectorXd(dir.normalized()) : random_tangent(rng, x0);
    Eigen::VectorXd mid = std::cos(ang / 2) * x0 + std::sin(ang / 2) * dir;
    mid = (mid + 0.3 * ang * random_tangent(rng, mid)).normalized();
    const int h = N / 2;
    auto arc = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b, int count, int offset) {
      const double cab = std::clamp(a.dot(b), -1.0, 1.0);
      const double phi = std::acos(cab);
      const Eigen::VectorXd t = (b - cab * a).normalized();
      pts.middleCols(offset, count) = great_arc_samples(a, t, phi, count);
    };
    arc(x0, mid, h, 0);
    arc(mid, x1, N - h, h);
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < N; ++i) {
    Eigen::VectorXd e(d);
    for (int j = 0; j < d; ++j) e(j) = normal(rng);
    e -= e.dot(pts.col(i)) * pts.col(i);
    pts.col(i) = (pts.col(i) + noise * e).normalized();
  }
  return DiscreteLoop::make(pts, sf, k);
}

DescentResult descend(const MetricSpec& m, DiscreteLoop g, double stop_residual, int max_iters) {
  const int N = g.samples();
  const Eigen::LLT<Eigen::MatrixXd> smooth = smoothing_factor(N, g.closure);
  const int d = g.ambient_dim();
  DescentResult r;
  double e = loop_energy(m, g);
  Eigen::MatrixXd grad = loop_energy_gradient(m, g);
  r.trace.push_back(e);
  double t = 1.0;
  int it = 0;
  for (; it < max_iters; ++it) {
    if (geodesic_residual(grad) <= stop_residual) break;
    const Eigen::Map<const Eigen::VectorXd> gflat(grad.data(), grad.size());
    const Eigen::VectorXd sflat = -smooth.solve(gflat);
    Eigen::MatrixXd dir = Eigen::Map<const Eigen::MatrixXd>(sflat.data(), d, N);
    for (int i = 0; i < N; ++i) dir.col(i) -= dir.col(i).dot(g.points.col(i)) * g.points.col(i);
    const double slope = (grad.array() * dir.array()).sum();
    if (!(slope < 0.0)) break;
    bool accepted = false;
    t = std::min(1.0, 2.0 * t);
    for (int b = 0; b < 60; ++b, t *= 0.5) {
      const DiscreteLoop trial = move(g, dir, t);
      const double et = loop_energy(m, trial);
      if (et <= e + kArmijo * t * slope) {
        g = trial;
        e = et;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    grad = loop_energy_gradient(m, g);
    r.trace.push_back(e);
  }
  r.loop = g;
  r.iterations = it;
  r.energy = e;
  r.residual = geodesic_residual(grad);
  return r;
}

DescentResult newton_refine(const MetricSpec& m, DiscreteLoop g, double stop_residual, int max_iters) {
  DescentResult r;
  LoopHessian lh = loop_energy_hessian(m, g);
  double gnorm = lh.gradient.norm();
  double res = geodesic_residual(loop_energy_gradient(m, g));
  double mu = -1.0;
  int it = 0;
  for (; it < max_iters && res > stop_residual; ++it) {
    const BandedSym h2 = lh.hessian.squared();
    if (mu < 0.0) mu = 1e-10 * std::max(h2.max_abs(), 1e-300);
    const Eigen::VectorXd rhs = -lh.hessian.multiply(lh.gradient);
    bool accepted = false;
    for (int tries = 0; tries < 40; ++tries) {
      BandedSym sys = h2;
      sys.add_diagonal(mu);
      Eigen::VectorXd step;
      if (!sys.solve_spd(rhs, step)) {
        mu *= 8.0;
        continue;
      }
      const DiscreteLoop trial = retract(g, lh.frames, step);
      const LoopHessian th = loop_energy_hessian(m, trial);
      const double tn = th.gradient.norm();
      if (tn < gnorm) {
        g = trial;
        lh = th;
        gnorm = tn;
        mu = std::max(mu / 4.0, 1e-20);
        accepted = true;
        break;
      }
      mu *= 8.0;
    }
    if (!accepted) break;
    res = geodesic_residual(loop_energy_gradient(m, g));
    r.trace.push_back(loop_energy(m, g));
  }
  r.loop = g;
  r.iterations = it;
  r.residual = res;
  r.energy = loop_energy(m, g);
  return r;
}

SearchResult find_geodesics(const MetricSpec& m, const SpaceFormSpec& sf, int k, const SearchOptions& opts) {
  if (sf.n != m.n) throw PreconditionError("find_geodesics: metric and space form dimensions differ");
  if (k < 1 || k > sf.p - 1) throw PreconditionError("find_geodesics: class power must lie in [1, p-1]");
  if (opts.seeds < 1) throw PreconditionError("find_geodesics: need at least one seed");
  if (opts.N < kMinLoopSamples) throw ResolutionError("find_geodesics: N below the minimum resolution");

  SearchResult out;
  std::vector<GeodesicRecord> candidates;
  for (int s = 0; s < opts.seeds; ++s) {
    const DiscreteLoop seed = make_seed_loop(sf, k, opts.N, opts.rng_seed, s, opts.seed_noise);
    std::vector<std::pair<std::string, DescentResult>> runs;
    {
      DescentResult d = descend(m, seed, opts.switch_tol, opts.max_iters);
      const int descent_iters = d.iterations;
      DescentResult nr = newton_refine(m, d.loop, 1e-2 * opts.tol_geo, opts.newton_iters);
      nr.iterations += descent_iters;
      runs.emplace_back("descent", nr);
    }
    if (opts.newton_from_seeds) runs.emplace_back("newton", newton_refine(m, seed, 1e-2 * opts.tol_geo, opts.newton_iters));

    for (auto& [route, run] : runs) {
      SeedDiagnostic diag;
      diag.seed = s;
      diag.route = route;
      diag.iterations = run.iterations;
      diag.residual = run.residual;
      diag.energy = run.energy;
      const double len = loop_length(m, run.loop);
      const bool speed_ok = std::abs(run.energy - 0.5 * len * len) <= 1e-6 * (1.0 + run.energy);
      diag.converged = run.residual <= opts.tol_geo && speed_ok;
      if (run.residual > opts.tol_geo) {
        diag.message = "residual above tolerance";
      } else if (!speed_ok) {
        diag.message = "not constant speed";
      }
      out.diagnostics.push_back(diag);
      if (!diag.converged) continue;
      GeodesicRecord rec;
      rec.loop = run.loop;
      rec.length = len;
      rec.energy = run.energy;
      rec.residual = run.residual;
      rec.class_power = k;
      rec.metric_id = m.id();
      rec.seed = s;
      rec.route = route;
      rec.hessian_kernel = numerical_morse_index(m, run.loop, opts.tol_geo).nullity_est;
      candidates.push_back(std::move(rec));
    }
  }
  out.partial = std::any_of(out.diagnostics.begin(), out.diagnostics.end(),
                            [](const SeedDiagnostic& d) { return d.route == "descent" && !d.converged; });

  std::vector<GeodesicRecord> kept;
  for (auto& c : candidates) {
    bool merged = false;
    for (auto& r : kept) {
      bool same = false;
      if (std::abs(c.energy - r.energy) <= 1e-4 * (1.0 + r.energy) && c.hessian_kernel >= 2 && r.hessian_kernel >= 2) {
        same = true;
      } else {
        const ImageComparison ic = compare_images(c.loop, r.loop, sf);
        same = ic.hausdorff <= opts.dedup_tol && ic.same_orientation;
      }
      if (same) {
        if (better(c, r)) r = c;
        merged = true;
        break;
      }
    }
    if (!merged) kept.push_back(std::move(c));
  }
  std::stable_sort(kept.begin(), kept.end(), better);
  for (auto& r : kept) {
    const SelfIntersection si = detect_self_intersections(r.loop, sf);
    r.simple = si.simple;
    r.crossings = si.crossings;
  }
  out.records = std::move(kept);
  return out;
}

}  // namespace ncgeo
