#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ncgeo/errors.hpp"
#include "ncgeo/rational.hpp"

namespace ncgeo {

/// E(a) = ceiling, floor, phi = E - floor, frac = a - floor.
template <class S>
struct FloorOps {
  long long ceil = 0;
  long long floor = 0;
  int phi = 0;
  S frac{};
};

/// Tolerance used to snap long double arguments to nearby integers.
inline constexpr long double kSnapTol = 1e-12L;

inline FloorOps<Rational> floor_ops(const Rational& a) {
  FloorOps<Rational> f;
  f.floor = floor_of(a);
  f.ceil = ceil_of(a);
  f.phi = static_cast<int>(f.ceil - f.floor);
  f.frac = a - Rational(f.floor);
  return f;
}

inline FloorOps<long double> floor_ops(long double a) {
  const long double r = std::nearbyint(a);
  if (std::abs(a - r) <= kSnapTol * std::max(1.0L, std::abs(a))) a = r;
  FloorOps<long double> f;
  f.floor = static_cast<long long>(std::floor(a));
  f.ceil = static_cast<long long>(std::ceil(a));
  f.phi = static_cast<int>(f.ceil - f.floor);
  f.frac = a - static_cast<long double>(f.floor);
  return f;
}

inline Rational half_shift(int m, const Rational& a) { return m % 2 ? a - Rational(1, 2) : a; }
inline long double half_shift(int m, long double a) { return m % 2 ? a - 0.5L : a; }

/// E_m(a) = E(a - (1 - (-1)^m) / 4) and phi_m likewise.
template <class S>
struct ShiftedOps {
  long long E = 0;
  int phi = 0;
};

template <class S>
ShiftedOps<S> E_m_phi_m(int m, const S& a) {
  if (m < 1) throw PreconditionError("E_m: m must be >= 1");
  const auto f = floor_ops(half_shift(m, a));
  return {f.ceil, f.phi};
}

/// Block counts and rotation angles of the symplectic normal form. Angles are
/// fractions of 2 pi in (0, 1) minus {1/2}; the first r_prime thetas lie in (1/2, 1).
template <class S>
struct NormalFormT {
  int p_minus = 0, p_zero = 0, p_plus = 0;
  int q_minus = 0, q_zero = 0, q_plus = 0;
  int r_prime = 0;
  std::vector<S> thetas, alphas, betas;
  int h_count = 0;
  int i1 = 0;
  int nu1 = 0;
  int n = 2;

  int r() const { return static_cast<int>(thetas.size()); }
  int r_star() const { return static_cast<int>(alphas.size()); }
  int r_zero() const { return static_cast<int>(betas.size()); }
  int block_dimension() const {
    return 2 * (p_minus + p_zero + p_plus + q_minus + q_zero + q_plus + r() + h_count) + 4 * (r_star() + r_zero());
  }
};

using NormalForm = NormalFormT<Rational>;
using NormalFormLD = NormalFormT<long double>;

NormalFormLD to_long_double(const NormalForm& nf);

inline bool angle_less_half(const Rational& a) { return a < Rational(1, 2); }
inline bool angle_less_half(long double a) { return a < 0.5L; }
inline bool angle_valid(const Rational& a) { return a > Rational(0) && a < Rational(1) && a != Rational(1, 2); }
inline bool angle_valid(long double a) {
  return a > kSnapTol && a < 1.0L - kSnapTol && std::abs(a - 0.5L) > kSnapTol;
}

/// Throws PreconditionError naming the violated invariant.
template <class S>
void validate(const NormalFormT<S>& nf) {
  auto nonneg = [](int v, const char* name) {
    if (v < 0) throw PreconditionError(std::string("normal form: ") + name + " must be >= 0");
  };
  nonneg(nf.p_minus, "p_minus");
  nonneg(nf.p_zero, "p_zero");
  nonneg(nf.p_plus, "p_plus");
  nonneg(nf.q_minus, "q_minus");
  nonneg(nf.q_zero, "q_zero");
  nonneg(nf.q_plus, "q_plus");
  nonneg(nf.h_count, "h_count");
  nonneg(nf.nu1, "nu1");
  if (nf.n < 2) throw PreconditionError("normal form: n must be >= 2");
  if (nf.r_prime < 0 || nf.r_prime > nf.r()) throw PreconditionError("normal form: r_prime must lie in [0, r]");
  for (const auto* list : {&nf.thetas, &nf.alphas, &nf.betas}) {
    for (const auto& a : *list) {
      if (!angle_valid(a)) throw PreconditionError("normal form: angle fraction must lie in (0,1) and differ from 1/2");
    }
  }
  for (int j = 0; j < nf.r(); ++j) {
    const bool upper = !angle_less_half(nf.thetas[j]);
    if (upper != (j < nf.r_prime)) {
      throw PreconditionError("normal form: the first r_prime thetas must exceed 1/2 and the rest must not");
    }
  }
  if (nf.block_dimension() > 2 * nf.n - 2) {
    throw PreconditionError("normal form: total block dimension exceeds 2n-2");
  }
}

/// i(c^m) for a non-orientable closed geodesic.
template <class S>
long long index_iterate(const NormalFormT<S>& nf, int m) {
  if (m < 1) throw PreconditionError("index_iterate: m must be >= 1");
  validate(nf);
  const long long even = (m % 2 == 0) ? 1 : 0;
  const long long odd_n = (nf.n % 2 == 1) ? 1 : 0;
  long long i = static_cast<long long>(m) * (nf.i1 + nf.q_zero + nf.q_plus - 2 * nf.r_prime) - (nf.q_zero + nf.q_plus) -
                even * (nf.r() + nf.p_minus + nf.p_zero + odd_n);
  for (const auto& t : nf.thetas) i += 2 * E_m_phi_m<S>(m, S(m) * t).E;
  for (const auto& a : nf.alphas) i += 2 * E_m_phi_m<S>(m, S(m) * a).phi;
  i -= 2 * nf.r_star();
  return i;
}

/// nu(c^m) for a non-orientable closed geodesic.
template <class S>
long long nullity_iterate(const NormalFormT<S>& nf, int m) {
  if (m < 1) throw PreconditionError("nullity_iterate: m must be >= 1");
  validate(nf);
  const long long even = (m % 2 == 0) ? 1 : 0;
  const long long odd_n = (nf.n % 2 == 1) ? 1 : 0;
  long long sigma = nf.r() + nf.r_star() + nf.r_zero();
  for (const auto& t : nf.thetas) sigma -= E_m_phi_m<S>(m, S(m) * t).phi;
  for (const auto& a : nf.alphas) sigma -= E_m_phi_m<S>(m, S(m) * a).phi;
  for (const auto& b : nf.betas) sigma -= E_m_phi_m<S>(m, S(m) * b).phi;
  return nf.nu1 + even * (nf.p_minus + 2 * nf.p_zero + nf.p_plus + odd_n) + 2 * sigma;
}

/// (i1 + q_zero + q_plus - 2 r') + 2 sum theta_j.
template <class S>
S mean_index(const NormalFormT<S>& nf) {
  validate(nf);
  S out = S(nf.i1 + nf.q_zero + nf.q_plus - 2 * nf.r_prime);
  for (const auto& t : nf.thetas) out += S(2) * t;
  return out;
}

/// Uniform bound on |i(c^m) - m mean_index| derived from the block counts.
template <class S>
long long linear_growth_bound(const NormalFormT<S>& nf) {
  return (nf.q_zero + nf.q_plus) + (nf.r() + nf.p_minus + nf.p_zero + 1) + 2 * nf.r() + 2 * nf.r_star();
}

struct IndexRow {
  int m = 0;
  long long index = 0;
  long long nullity = 0;
};

template <class S>
std::vector<IndexRow> index_sequence(const NormalFormT<S>& nf, int m_max) {
  std::vector<IndexRow> rows;
  for (int m = 1; m <= m_max; ++m) rows.push_back({m, index_iterate(nf, m), nullity_iterate(nf, m)});
  return rows;
}

/// pi (lambda + 1) / lambda.
double bound_min_length(double lambda);

/// k (n - 1) with k the largest integer such that L > k pi / sqrt(delta).
long long bound_index_from_length(double L, double delta, int n);

/// sqrt(delta) (lambda + 1) / lambda (n - 1) / p.
double bound_mean_index(double delta, double lambda, int n, int p);

}  // namespace ncgeo
