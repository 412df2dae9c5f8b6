#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ncgeo/banded.hpp"
#include "ncgeo/metric.hpp"
#include "ncgeo/space_form.hpp"

namespace ncgeo {

inline constexpr int kMinLoopSamples = 16;

/// Twisted discrete loop: columns x_0..x_{N-1} of `points` lie on S^n and the
/// last segment runs from x_{N-1} to closure * x_0, closure = A^class_power.
struct DiscreteLoop {
  Eigen::MatrixXd points;
  int class_power = 1;
  Eigen::MatrixXd closure;

  /// Validates |x_i| = 1 (1e-12) and N >= 16. class_power is reduced mod p;
  /// 0 gives a loop closed on the sphere.
  static DiscreteLoop make(const Eigen::MatrixXd& points, const SpaceFormSpec& sf, int class_power);

  int samples() const { return static_cast<int>(points.cols()); }
  int ambient_dim() const { return static_cast<int>(points.rows()); }
  Eigen::VectorXd closing_point() const { return closure * points.col(0); }
};

/// N samples x cos(t) + dir sin(t), t = angle * i / N, along the great circle
/// through x with unit tangent `dir`.
Eigen::MatrixXd great_arc_samples(const Eigen::VectorXd& x, const Eigen::VectorXd& dir, double angle, int N);

/// (1/2) int F^2 on the uniform grid, each segment replaced by its great
/// circle arc evaluated at the chord midpoint.
double loop_energy(const MetricSpec& m, const DiscreteLoop& g);
double loop_length(const MetricSpec& m, const DiscreteLoop& g);

/// Riemannian gradient of loop_energy; column i is orthogonal to x_i.
Eigen::MatrixXd loop_energy_gradient(const MetricSpec& m, const DiscreteLoop& g);

/// N * max_i |grad_i|, the sup norm of the discrete geodesic equation.
double geodesic_residual(const Eigen::MatrixXd& gradient);

/// Orthonormal tangent frames: frames[i] is (n+1) x n with columns orthogonal to x_i.
std::vector<Eigen::MatrixXd> tangent_frames(const DiscreteLoop& g);

/// Position of vertex i in the band-friendly ordering 0, N-1, 1, N-2, ...
int band_position(int i, int N);

struct LoopHessian {
  BandedSym hessian;
  /// Gradient in frame coordinates, same ordering as the Hessian.
  Eigen::VectorXd gradient;
  std::vector<Eigen::MatrixXd> frames;
};

/// Riemannian Hessian of loop_energy on the product of spheres in frame
/// coordinates, stored by vertex blocks in band_position order.
LoopHessian loop_energy_hessian(const MetricSpec& m, const DiscreteLoop& g);

/// Moves each vertex along its frame coordinates and renormalizes.
DiscreteLoop retract(const DiscreteLoop& g, const std::vector<Eigen::MatrixXd>& frames, const Eigen::VectorXd& step);

/// m-fold iterate: concatenated deck-translated copies of the lift.
DiscreteLoop iterate_loop(const DiscreteLoop& g, int m, const SpaceFormSpec& sf);
/// True iff the iterate of class k by m lies in the class of h, i.e. k m = 1 mod p.
bool iterate_in_class(int class_power, int m, int p);

/// Doubles N by inserting great circle midpoints.
DiscreteLoop refine_loop(const DiscreteLoop& g);

struct SelfIntersection {
  bool simple = true;
  int crossings = 0;
  /// Set when some segment spans more than pi/8, too coarse to decide reliably.
  bool resolution_warning = false;
};

/// Counts transversal crossings of the quotient image. Segments are great
/// circle arcs; for n = 2 crossings are exact arc intersections, for n >= 3
/// non-parallel segment pairs closer than the chord sagitta scale count.
SelfIntersection detect_self_intersections(const DiscreteLoop& g, const SpaceFormSpec& sf);

/// Hausdorff distance between the quotient images of two loops, measured on
/// the sphere along great circle arcs; `same_orientation` reports whether the
/// images are traversed in the same direction.
struct ImageComparison {
  double hausdorff = 0.0;
  bool same_orientation = true;
};
ImageComparison compare_images(const DiscreteLoop& a, const DiscreteLoop& b, const SpaceFormSpec& sf);

}  // namespace ncgeo
