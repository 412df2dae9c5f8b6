#include "ncgeo/index_calculus.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

namespace ncgeo {

Rational parse_rational(const std::string& raw) {
  std::string text;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) text += c;
  }
  if (text.empty()) throw PreconditionError("empty rational literal");
  try {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      std::size_t used = 0;
      const long long num = std::stoll(text.substr(0, slash), &used);
      if (used != slash) throw PreconditionError("bad numerator");
      const std::string den_s = text.substr(slash + 1);
      const long long den = std::stoll(den_s, &used);
      if (used != den_s.size()) throw PreconditionError("bad denominator");
      if (den == 0) throw PreconditionError("zero denominator");
      return Rational(num, den);
    }
    std::string mant = text;
    long long exp10 = 0;
    const auto epos = text.find_first_of("eE");
    if (epos != std::string::npos) {
      mant = text.substr(0, epos);
      std::size_t used = 0;
      const std::string es = text.substr(epos + 1);
      exp10 = std::stoll(es, &used);
      if (used != es.size()) throw PreconditionError("bad exponent");
    }
    bool neg = false;
    std::size_t pos = 0;
    if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
      neg = mant[0] == '-';
      pos = 1;
    }
    long long num = 0;
    long long den = 1;
    bool seen_dot = false;
    bool digits = false;
    for (; pos < mant.size(); ++pos) {
      const char c = mant[pos];
      if (c == '.') {
        if (seen_dot) throw PreconditionError("two decimal points");
        seen_dot = true;
        continue;
      }
      if (!std::isdigit(static_cast<unsigned char>(c))) throw PreconditionError("unexpected character");
      digits = true;
      if (num > (1LL << 58) / 10) throw PreconditionError("too many digits");
      num = num * 10 + (c - '0');
      if (seen_dot) den *= 10;
    }
    if (!digits) throw PreconditionError("no digits");
    Rational r(neg ? -num : num, den);
    for (; exp10 > 0; --exp10) r *= 10;
    for (; exp10 < 0; ++exp10) r /= 10;
    return r;
  } catch (const PreconditionError& e) {
    throw PreconditionError("cannot parse rational '" + raw + "': " + e.what());
  } catch (const std::exception&) {
    throw PreconditionError("cannot parse rational '" + raw + "'");
  }
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

long long floor_of(const Rational& r) {
  const long long n = r.numerator();
  const long long d = r.denominator();
  long long q = n / d;
  if ((n % d != 0) && (n < 0)) --q;
  return q;
}

long long ceil_of(const Rational& r) { return -floor_of(-r); }

long long isqrt(long long v) {
  if (v < 0) throw DomainError("isqrt of a negative number");
  long long s = static_cast<long long>(std::sqrt(static_cast<long double>(v)));
  while (s > 0 && s * s > v) --s;
  while ((s + 1) * (s + 1) <= v) ++s;
  return s;
}

std::optional<Rational> exact_sqrt(const Rational& r) {
  if (r < Rational(0)) return std::nullopt;
  const long long a = isqrt(r.numerator());
  const long long b = isqrt(r.denominator());
  if (a * a != r.numerator() || b * b != r.denominator()) return std::nullopt;
  return Rational(a, b);
}

NormalFormLD to_long_double(const NormalForm& nf) {
  NormalFormLD out;
  out.p_minus = nf.p_minus;
  out.p_zero = nf.p_zero;
  out.p_plus = nf.p_plus;
  out.q_minus = nf.q_minus;
  out.q_zero = nf.q_zero;
  out.q_plus = nf.q_plus;
  out.r_prime = nf.r_prime;
  out.h_count = nf.h_count;
  out.i1 = nf.i1;
  out.nu1 = nf.nu1;
  out.n = nf.n;
  for (const auto& t : nf.thetas) out.thetas.push_back(to_long_double(t));
  for (const auto& a : nf.alphas) out.alphas.push_back(to_long_double(a));
  for (const auto& b : nf.betas) out.betas.push_back(to_long_double(b));
  return out;
}

double bound_min_length(double lambda) {
  if (!(lambda >= 1.0)) throw DomainError("bound_min_length: lambda >= 1 violated");
  return std::numbers::pi * (lambda + 1.0) / lambda;
}

long long bound_index_from_length(double L, double delta, int n) {
  if (!(delta > 0.0)) throw DomainError("bound_index_from_length: delta > 0 violated");
  if (!(L > 0.0)) throw DomainError("bound_index_from_length: L > 0 violated");
  const double ratio = L * std::sqrt(delta) / std::numbers::pi;
  long long k = static_cast<long long>(std::ceil(ratio)) - 1;
  if (k < 0) k = 0;
  while (k > 0 && !(L > k * std::numbers::pi / std::sqrt(delta))) --k;
  return k * (n - 1);
}

double bound_mean_index(double delta, double lambda, int n, int p) {
  if (!(lambda >= 1.0)) throw DomainError("bound_mean_index: lambda >= 1 violated");
  if (!(delta <= 1.0)) throw DomainError("bound_mean_index: delta <= 1 violated");
  if (n % 2 == 1) {
    const double lo = std::pow(lambda / (lambda + 1.0), 2);
    if (!(delta > lo)) throw DomainError("bound_mean_index: delta > (lambda/(lambda+1))^2 violated (n odd)");
  } else if (!(delta > 0.0)) {
    throw DomainError("bound_mean_index: delta > 0 violated");
  }
  if (p < 2) throw DomainError("bound_mean_index: p >= 2 violated");
  return std::sqrt(delta) * (lambda + 1.0) / lambda * (n - 1) / p;
}

}  // namespace ncgeo
