#include "ncgeo/topology.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numbers>

#include "ncgeo/errors.hpp"

namespace ncgeo {

namespace {

using BigQ = boost::multiprecision::cpp_rational;
using BigZ = boost::multiprecision::cpp_int;

BigQ big(const Rational& r) { return BigQ(BigZ(r.numerator()), BigZ(r.denominator())); }

BigQ big(double v) {
  if (!std::isfinite(v)) throw DomainError("non-finite input");
  int e = 0;
  const double mant = std::frexp(v, &e);
  const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  BigQ out{BigZ(scaled)};
  e -= 53;
  const BigZ pow2 = BigZ(1) << std::abs(e);
  return e >= 0 ? out * BigQ(pow2) : out / BigQ(pow2);
}

double to_double(const BigQ& q) { return q.convert_to<double>(); }

// Largest k >= 0 with k^2 <= v.
long long floor_sqrt(const BigQ& v) {
  if (v < 0) throw DomainError("square root of a negative number");
  long long k = static_cast<long long>(std::floor(std::sqrt(to_double(v))));
  k = std::max(0LL, k);
  while (k > 0 && BigQ(k) * k > v) --k;
  while (BigQ(k + 1) * (k + 1) <= v) ++k;
  return k;
}

std::optional<BigQ> exact_sqrt_big(const BigQ& v) {
  if (v < 0) return std::nullopt;
  const BigZ a = boost::multiprecision::sqrt(boost::multiprecision::numerator(v));
  const BigZ b = boost::multiprecision::sqrt(boost::multiprecision::denominator(v));
  if (a * a != boost::multiprecision::numerator(v) || b * b != boost::multiprecision::denominator(v)) {
    return std::nullopt;
  }
  return BigQ(a, b);
}

std::optional<Rational> narrow(const BigQ& q) {
  const BigZ num = boost::multiprecision::numerator(q);
  const BigZ den = boost::multiprecision::denominator(q);
  const BigZ lim = BigZ(std::numeric_limits<long long>::max());
  if (abs(num) > lim || den > lim) return std::nullopt;
  return Rational(num.convert_to<long long>(), den.convert_to<long long>());
}

std::string check(bool ok, const std::string& text) { return text + (ok ? ": holds" : ": violated"); }

CountingReport counting(const BigQ& delta, const BigQ& lambda) {
  CountingReport rep;
  rep.delta = to_double(delta);
  rep.lambda = to_double(lambda);
  if (!(lambda >= 1)) throw DomainError("thm1_counting: lambda >= 1 violated");
  const BigQ c = (lambda + 1) / lambda;
  const BigQ lo = 1 / (c * c);
  if (!(delta > lo)) throw DomainError("thm1_counting: delta > (lambda/(lambda+1))^2 violated");
  if (!(delta <= 1)) throw DomainError("thm1_counting: delta <= 1 violated");
  rep.hypotheses.push_back(check(true, "lambda >= 1"));
  rep.hypotheses.push_back(check(true, "(lambda/(lambda+1))^2 < delta"));
  rep.hypotheses.push_back(check(true, "delta <= 1"));

  // s = sqrt(delta) c > 1 and N is the least integer with N s > N + 1.
  const BigQ s2 = delta * c * c;
  const double s = std::sqrt(rep.delta) * to_double(c);
  rep.x = 1.0 / (s - 1.0);
  long long N = std::max(1LL, static_cast<long long>(std::floor(std::min(rep.x, 1e15))) - 1);
  auto exceeds = [&](long long k) { return BigQ(k) * k * s2 > BigQ(k + 1) * (k + 1); };
  while (N > 1 && exceeds(N - 1)) --N;
  while (!exceeds(N)) ++N;
  rep.N = N;
  rep.branch = N % 2 == 0 ? "even" : "odd";

  const double sd = std::sqrt(rep.delta);
  const long long mult = N % 2 == 0 ? N + 1 : N;
  rep.bound_c1 = std::numbers::pi / sd;
  rep.bound_c2 = static_cast<double>(mult) * std::numbers::pi / sd;
  rep.closed_form_c2 = std::numbers::pi / sd * (2.0 + rep.x);
  if (const auto root = exact_sqrt_big(delta)) {
    const BigQ xs = 1 / (*root * c - 1);
    rep.x_exact = narrow(xs);
    rep.bound_c2_over_pi = narrow(BigQ(mult) / *root);
    rep.branch_within_closed_form = BigQ(mult) <= 2 + xs;
  } else {
    rep.branch_within_closed_form = rep.bound_c2 <= rep.closed_form_c2 + 1e-12;
  }
  return rep;
}

}  // namespace

int betti(int n, int q) {
  if (n < 2) throw PreconditionError("betti: n >= 2 required");
  if (q < 0) throw PreconditionError("betti: q >= 0 required");
  if (q % 2) return 0;
  if (q == 0) return 1;
  const int period = n % 2 ? n - 1 : 2 * (n - 1);
  return q % period == 0 ? 2 : 1;
}

std::vector<long long> poincare_series_coeffs(int n, int Q) {
  if (n < 2) throw PreconditionError("poincare series: n >= 2 required");
  if (Q < 0) throw PreconditionError("poincare series: Q >= 0 required");
  int top = 0;
  int gap = 0;
  if (n % 2) {
    const int k = (n - 1) / 2;
    top = 2 * k + 2;
    gap = 2 * k;
  } else {
    const int k = n / 2;
    top = 4 * k;
    gap = 4 * k - 2;
  }
  std::vector<long long> num(Q + 1, 0), den(Q + 1, 0);
  num[0] = 1;
  if (top <= Q) num[top] -= 1;
  // (1 - t^2)(1 - t^gap)
  den[0] = 1;
  if (2 <= Q) den[2] -= 1;
  if (gap <= Q) den[gap] -= 1;
  if (gap + 2 <= Q) den[gap + 2] += 1;
  std::vector<long long> out(Q + 1, 0);
  for (int i = 0; i <= Q; ++i) {
    long long v = num[i];
    for (int j = 1; j <= i; ++j) v -= den[j] * out[i - j];
    out[i] = v;
  }
  return out;
}

BettiTable BettiTable::make(int n, int Q) {
  if (Q < 0) throw PreconditionError("betti table: Q >= 0 required");
  BettiTable t;
  t.n = n;
  t.max_degree = Q;
  for (int q = 0; q <= Q; ++q) t.values.push_back(betti(n, q));
  return t;
}

int BettiTable::operator()(int q) const {
  if (q < 0 || q > max_degree) throw PreconditionError("betti table: degree out of range");
  return values[q];
}

void MorseData::validate() const {
  if (p < 2) throw DataError("morse data: p >= 2 required");
  for (const auto& e : entries) {
    const std::string who = "morse data entry '" + e.label + "': ";
    if (e.m < 1 || e.m % p != 1 % p) throw DataError(who + "iterate exponent must satisfy m = 1 mod p");
    if (e.index < 0 || e.nullity < 0) throw DataError(who + "index and nullity must be nonnegative");
    for (const auto& [q, k] : e.kq) {
      if (k < 0) throw DataError(who + "k_q must be nonnegative");
      if (k > 0 && (q < e.index || q > e.index + e.nullity)) {
        throw DataError(who + "k_q supported outside [i, i + nu]");
      }
    }
    auto at = [&](int q) {
      const auto it = e.kq.find(q);
      return it == e.kq.end() ? 0 : it->second;
    };
    if (at(e.index) > 1 || at(e.index + e.nullity) > 1) {
      throw DataError(who + "k_i and k_{i+nu} must lie in {0, 1}");
    }
  }
}

std::vector<long long> MorseData::aggregate(int Q) const {
  std::vector<long long> M(Q + 1, 0);
  for (const auto& e : entries) {
    for (const auto& [q, k] : e.kq) {
      if (q >= 0 && q <= Q) M[q] += k;
    }
  }
  return M;
}

MorseCheck morse_inequality_check(const MorseData& md, const BettiTable& bt, int Q) {
  md.validate();
  if (Q < 0 || Q > bt.max_degree) throw PreconditionError("morse check: Q outside the Betti table");
  MorseCheck out;
  out.M = md.aggregate(Q);
  long long sm = 0, sb = 0;
  for (int q = 0; q <= Q; ++q) {
    out.b.push_back(bt(q));
    if (out.M[q] < bt(q) && out.pass) {
      out.pass = false;
      out.first_failure = q;
    }
    sm += out.M[q];
    sb += bt(q);
    if (sm < sb && out.cumulative_pass) {
      out.cumulative_pass = false;
      out.first_cumulative_failure = q;
    }
  }
  return out;
}

CountingReport thm1_counting(const Rational& delta, const Rational& lambda) {
  CountingReport rep = counting(big(delta), big(lambda));
  rep.exact = true;
  rep.delta_exact = delta;
  rep.lambda_exact = lambda;
  return rep;
}

CountingReport thm1_counting(double delta, double lambda) { return counting(big(delta), big(lambda)); }

long long standard_metric_index(int m, int n, int p) {
  if (m < 1 || n < 2 || p < 2) throw PreconditionError("standard_metric_index: need m >= 1, n >= 2, p >= 2");
  return static_cast<long long>(p) * (m - 1) * (n - 1);
}

SandwichReport index_sandwich_check(const std::vector<std::pair<int, int>>& index_nullity, int n) {
  SandwichReport rep;
  for (int k = 1; k <= n; ++k) {
    SandwichRow row;
    row.k = k;
    if (k <= static_cast<int>(index_nullity.size())) {
      row.present = true;
      row.index = index_nullity[k - 1].first;
      row.nullity = index_nullity[k - 1].second;
      row.pass = row.index <= 2 * k - 2 && 2 * k - 2 <= row.index + row.nullity;
      if (!row.pass) rep.pass = false;
    } else {
      rep.incomplete = true;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

long long thm3_count(int n, int p, const Rational& lambda_r, const Rational& delta_r, const Rational& rho_r) {
  if (n < 3 || n % 2 == 0) throw DomainError("thm3_count: n odd and >= 3 required");
  if (p < 2) throw DomainError("thm3_count: p >= 2 required");
  const BigQ lambda = big(lambda_r), delta = big(delta_r), rho = big(rho_r);
  if (!(lambda >= 1)) throw DomainError("thm3_count: lambda >= 1 violated");
  const BigQ lo = (lambda / (lambda + 1)) * (lambda / (lambda + 1));
  if (!(delta >= lo)) throw DomainError("thm3_count: delta >= (lambda/(lambda+1))^2 violated");
  if (!(delta <= 1)) throw DomainError("thm3_count: delta <= 1 violated");
  if (!(rho > lo)) throw DomainError("thm3_count: rho > (lambda/(lambda+1))^2 violated");
  const BigQ a = BigQ(n - 1) / p;
  // [a / sqrt(rho) + 1] = floor(sqrt(a^2 / rho)) + 1.
  const long long first = floor_sqrt(a * a / rho) + 1;
  const BigQ b = a * (lambda + 1) / (2 * lambda);
  const long long second = floor_sqrt(b * b * delta) + 1;
  return n - first + second;
}

MorseData synthetic_single_geodesic(double delta, double lambda, int Q) {
  const double mu = std::sqrt(delta) * (lambda + 1.0) / (2.0 * lambda);
  if (!(mu > 0.5)) throw DomainError("synthetic data: mean index bound must exceed 1/2");
  MorseData md;
  md.p = 2;
  for (int m = 1;; ++m) {
    const int exponent = 2 * (m - 1) + 1;
    const double lower = std::max(0.0, exponent * mu - 1.0);
    long long idx = 2 * static_cast<long long>(std::ceil(lower / 2.0 - 1e-9));
    idx = std::max(0LL, idx);
    if (idx > Q) break;
    MorseEntry e;
    e.label = "c1^" + std::to_string(exponent);
    e.m = exponent;
    e.index = static_cast<int>(idx);
    e.nullity = 0;
    e.kq[e.index] = 1;
    md.entries.push_back(std::move(e));
  }
  return md;
}

}  // namespace ncgeo
