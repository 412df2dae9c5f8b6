#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ncgeo/rational.hpp"

namespace ncgeo {

/// Rank of the S^1-equivariant rational homology of the twisted loop space in degree q.
int betti(int n, int q);

/// Coefficients 0..Q of the equivariant Poincare series, by power series division.
std::vector<long long> poincare_series_coeffs(int n, int Q);

struct BettiTable {
  int n = 2;
  int max_degree = 0;
  std::vector<int> values;

  static BettiTable make(int n, int Q);
  std::string branch() const { return n % 2 ? "odd" : "even"; }
  int operator()(int q) const;
};

struct MorseEntry {
  std::string label;
  int m = 1;
  int index = 0;
  int nullity = 0;
  /// Critical module dimensions k_q, keyed by degree.
  std::map<int, int> kq;
};

struct MorseData {
  /// Order of the deck group; iterates must satisfy m = 1 mod p.
  int p = 2;
  std::vector<MorseEntry> entries;

  /// Throws DataError when a support or class rule is broken.
  void validate() const;
  /// M_q = sum of k_q over all entries.
  std::vector<long long> aggregate(int Q) const;
};

struct MorseCheck {
  bool pass = true;
  int first_failure = -1;
  /// sum_{q' <= q} M_q' >= sum_{q' <= q} b_q' for all q <= Q.
  bool cumulative_pass = true;
  int first_cumulative_failure = -1;
  std::vector<long long> M;
  std::vector<int> b;
};

MorseCheck morse_inequality_check(const MorseData& md, const BettiTable& bt, int Q);

struct CountingReport {
  Rational delta_exact{1};
  Rational lambda_exact{1};
  bool exact = false;
  double delta = 1.0;
  double lambda = 1.0;
  int n = 2;
  int p = 2;
  std::optional<double> rho;

  long long N = 1;
  double x = 0.0;
  double bound_c1 = 0.0;
  double bound_c2 = 0.0;
  double closed_form_c2 = 0.0;
  /// bound_c2 / pi when sqrt(delta) is rational.
  std::optional<Rational> bound_c2_over_pi;
  std::optional<Rational> x_exact;
  std::string branch;
  std::optional<long long> thm3_count;
  std::vector<std::string> hypotheses;
  bool branch_within_closed_form = true;
};

/// Counting arithmetic for the two-geodesic length bounds, with exact comparisons.
CountingReport thm1_counting(const Rational& delta, const Rational& lambda);
/// Floating variant for non-rational inputs.
CountingReport thm1_counting(double delta, double lambda);

/// p (m - 1)(n - 1).
long long standard_metric_index(int m, int n, int p);

struct SandwichRow {
  int k = 0;
  bool present = false;
  bool pass = false;
  int index = 0;
  int nullity = 0;
};

struct SandwichReport {
  std::vector<SandwichRow> rows;
  bool pass = true;
  bool incomplete = false;
};

/// i(c_k) <= 2k - 2 <= i(c_k) + nu(c_k) for k = 1..n over (index, nullity) pairs sorted by energy.
SandwichReport index_sandwich_check(const std::vector<std::pair<int, int>>& index_nullity, int n);

/// Count of closed geodesics for odd n from the curvature and pinching data.
long long thm3_count(int n, int p, const Rational& lambda, const Rational& delta, const Rational& rho);

/// Single geodesic Morse data with the smallest even index allowed by the mean index bound
/// for every iterate whose index is at most Q (n = 2, p = 2).
MorseData synthetic_single_geodesic(double delta, double lambda, int Q);

}  // namespace ncgeo
