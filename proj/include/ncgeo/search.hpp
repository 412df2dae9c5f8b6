#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "ncgeo/loop.hpp"
#include "ncgeo/metric.hpp"
#include "ncgeo/space_form.hpp"

namespace ncgeo {

struct SearchOptions {
  int seeds = 20;
  std::uint64_t rng_seed = 1;
  int N = 256;
  double tol_geo = 1e-8;
  int max_iters = 20000;
  /// Residual at which descent hands over to the Newton refinement.
  double switch_tol = 1e-4;
  double dedup_tol = 1e-4;
  int newton_iters = 80;
  /// Also run the Newton refinement directly from every seed; this reaches
  /// saddle type closed geodesics that descent cannot.
  bool newton_from_seeds = true;
  double seed_noise = 1e-2;
};

struct GeodesicRecord {
  DiscreteLoop loop;
  double length = 0.0;
  double energy = 0.0;
  double residual = 0.0;
  bool simple = true;
  int crossings = 0;
  int class_power = 1;
  std::string metric_id;
  /// Morse index and nullity, -1 until analysed. nullity excludes the
  /// reparametrization direction.
  int index = -1;
  int nullity = -1;
  /// Poincare map eigenvalues, empty until analysed.
  std::vector<std::complex<double>> eigenvalues;
  /// Dimension of the numerical Hessian kernel found during the search.
  int hessian_kernel = 0;
  int seed = -1;
  std::string route;
};

struct SeedDiagnostic {
  int seed = 0;
  std::string route;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
  double energy = 0.0;
  std::string message;
};

struct SearchResult {
  std::vector<GeodesicRecord> records;
  std::vector<SeedDiagnostic> diagnostics;
  /// True when some seed failed to converge.
  bool partial = false;
};

/// Initial twisted loop for seed `seed_index`.
DiscreteLoop make_seed_loop(const SpaceFormSpec& sf, int k, int N, std::uint64_t rng_seed, int seed_index,
                            double noise);

struct DescentResult {
  DiscreteLoop loop;
  int iterations = 0;
  double residual = 0.0;
  double energy = 0.0;
  /// Energies after every accepted step.
  std::vector<double> trace;
};

/// Preconditioned projected gradient descent with Armijo backtracking.
/// Stops when the residual drops below `stop_residual`.
DescentResult descend(const MetricSpec& m, DiscreteLoop g, double stop_residual, int max_iters);

/// Levenberg-Marquardt Newton iteration on |grad|^2 using the banded
/// Riemannian Hessian. Stops at `stop_residual`.
DescentResult newton_refine(const MetricSpec& m, DiscreteLoop g, double stop_residual, int max_iters);

/// Closed geodesics of class [h^k] from `opts.seeds` random twisted loops,
/// deduplicated and sorted by energy.
SearchResult find_geodesics(const MetricSpec& m, const SpaceFormSpec& sf, int k, const SearchOptions& opts);

}  // namespace ncgeo
