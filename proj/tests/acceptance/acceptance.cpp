// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ncgeo/index_calculus.hpp"
#include "ncgeo/linearized.hpp"
#include "ncgeo/pipeline.hpp"
#include "ncgeo/search.hpp"
#include "ncgeo/topology.hpp"
#include "oracles.hpp"

using namespace ncgeo;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Criteria whose failure is known and explained in the project notes. The
// round lens space S^3/Z_3 has index 4 (not 6) at c^4 and 8 (not 12) at c^7.
const std::set<int> kKnownDeviations = {3};

struct Shared {
  std::vector<std::pair<std::string, PoincareMap>> maps;
  std::vector<std::pair<std::string, double>> symmetry;
};
Shared shared;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome criterion_betti() {
  const auto t0 = std::chrono::steady_clock::now();
  int mismatches = 0;
  for (int n = 2; n <= 10; ++n) {
    const auto series = poincare_series_coeffs(n, 200);
    const auto oracle_series = oracle::poincare_series(n, 200);
    for (int q = 0; q <= 200; ++q) {
      const int b = betti(n, q);
      if (b != series[q] || b != oracle_series[q] || b != oracle::betti(n, q)) ++mismatches;
    }
  }
  const double dt = seconds_since(t0);
  return {mismatches == 0 && dt < 1.0,
          std::to_string(mismatches) + " mismatches over n=2..10, q<=200; " + fmt("%.3f s", dt)};
}

Outcome criterion_round_lengths() {
  Outcome out;
  std::ostringstream d;
  for (auto [n, p] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {3, 3}, {3, 5}}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto sf = SpaceFormSpec::make(n, p);
    const auto m = MetricSpec::round(n);
    SearchOptions opts;
    opts.N = 256;
    const SearchResult r = find_geodesics(m, sf, 1, opts);
    const double dt = seconds_since(t0);
    const double want = 2 * M_PI / p;
    double err = INFINITY;
    if (!r.records.empty()) err = std::abs(r.records[0].length - want);
    const bool ok = !r.records.empty() && r.records[0].class_power == 1 && err <= 1e-6 && dt < 60.0;
    out.pass = out.pass && ok;
    d << "(" << n << "," << p << ") err " << fmt("%.2e", err) << " " << fmt("%.1f s", dt) << (ok ? "" : " FAIL")
      << "; ";
    for (std::size_t i = 0; i < r.records.size(); ++i) {
      shared.maps.emplace_back("round(" + std::to_string(n) + "," + std::to_string(p) + ")#" + std::to_string(i),
                               poincare_map(m, sf, r.records[i].loop));
    }
  }
  out.detail = d.str();
  return out;
}

Outcome criterion_round_index() {
  Outcome out;
  std::ostringstream d;
  for (int p : {2, 3}) {
    for (int n : {2, 3}) {
      if (n % 2 == 0 && p != 2) {
        d << "(p=" << p << ",n=" << n << ") no free action; ";
        continue;
      }
      const auto sf = SpaceFormSpec::make(n, p);
      const auto m = MetricSpec::round(n);
      SearchOptions opts;
      opts.seeds = 2;
      opts.N = 64;
      const SearchResult r = find_geodesics(m, sf, 1, opts);
      if (r.records.empty()) {
        out.pass = false;
        d << "(p=" << p << ",n=" << n << ") no minimizer; ";
        continue;
      }
      for (int k = 1; k <= 3; ++k) {
        const int e = p * (k - 1) + 1;
        const auto g = iterate_loop(r.records[0].loop, e, sf);
        const auto coarse = numerical_morse_index(m, g, 1e-6);
        const auto fine = numerical_morse_index(m, refine_loop(g), 1e-5);
        const long long want = standard_metric_index(k, n, p);
        const bool ok = coarse.index == want && fine.index == want;
        out.pass = out.pass && ok;
        d << "(p=" << p << ",n=" << n << ",m=" << k << ") " << coarse.index << "/" << fine.index << " vs " << want
          << (ok ? "" : " MISMATCH") << "; ";
      }
    }
  }
  out.detail = d.str();
  return out;
}

Outcome criterion_index_suite() {
  std::mt19937_64 rng(20240601);
  long long failures = 0;
  std::string first;
  auto fail = [&](const std::string& what) {
    if (failures++ == 0) first = what;
  };
  for (int t = 0; t < 1000; ++t) {
    const int n = 2 + t % 6;
    const auto nf = oracle::random_normal_form(rng, n, 2 * n - 2);
    if (index_iterate(nf.lib, 1) != nf.lib.i1 || nullity_iterate(nf.lib, 1) != nf.lib.nu1) {
      fail("m=1 identity, sample " + std::to_string(t));
    }
    const Rational mi = mean_index(nf.lib);
    const Rational C(linear_growth_bound(nf.lib));
    const NormalFormLD lf = to_long_double(nf.lib);
    for (int m = 1; m <= 10000; ++m) {
      const long long i = index_iterate(nf.lib, m);
      if (abs(Rational(i) - Rational(m) * mi) > C) fail("growth bound, sample " + std::to_string(t));
      if (i != index_iterate(lf, m) || nullity_iterate(nf.lib, m) != nullity_iterate(lf, m)) {
        fail("rational/float, sample " + std::to_string(t) + " m=" + std::to_string(m));
      }
    }
  }
  // Dimension two, minimal c with index 0 and no p or rotation blocks.
  for (int t = 0; t < 1000; ++t) {
    oracle::NF p;
    p.n = 2;
    p.nu1 = std::uniform_int_distribution<int>(0, 2)(rng);
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
      case 0: p.q_minus = 1; break;
      case 1: p.q_zero = 1; break;
      case 2: p.q_plus = 1; break;
      default: break;
    }
    const auto nf = oracle::mirror(p);
    for (int m = 1; m <= 100; ++m) {
      const long long i = index_iterate(nf.lib, 2 * (m - 1) + 1);
      if (i % 2 != 0 || i != 2LL * (m - 1) * (p.q_zero + p.q_plus)) fail("parity, sample " + std::to_string(t));
    }
  }
  return {failures == 0, std::to_string(failures) + " failures over 1000 + 1000 normal forms" +
                             (failures ? " (first: " + first + ")" : "")};
}

Outcome criterion_counting() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  std::ostringstream d;
  const auto a = thm1_counting(Rational(9, 16), Rational(1));
  const bool a_ok = a.N == 3 && a.bound_c2_over_pi && *a.bound_c2_over_pi == Rational(4);
  const auto b = thm1_counting(Rational(1), Rational(1));
  const bool b_ok = b.N == 2 && b.bound_c2_over_pi && *b.bound_c2_over_pi == Rational(3);
  d << "(9/16,1): N=" << a.N << " c2=" << (a.bound_c2_over_pi ? to_string(*a.bound_c2_over_pi) : "?") << "pi; ";
  d << "(1,1): N=" << b.N << " c2=" << (b.bound_c2_over_pi ? to_string(*b.bound_c2_over_pi) : "?") << "pi; ";
  int grid = 0, morse_fail_at_N = 0, level_gap = 0, within = 0;
  for (int i = 1; i <= 50; ++i) {
    for (int j = 0; j < 50; ++j) {
      const Rational lam(49 + 9 * j, 49);
      const Rational lo = (lam / (lam + 1)) * (lam / (lam + 1));
      const Rational delta = lo + (Rational(1) - lo) * Rational(i, 50);
      const auto rep = thm1_counting(delta, lam);
      ++grid;
      within += rep.branch_within_closed_form;
      const int N = static_cast<int>(rep.N);
      const MorseData md = synthetic_single_geodesic(to_double(delta), to_double(lam), N);
      md.validate();
      const auto check = morse_inequality_check(md, BettiTable::make(2, N), N);
      morse_fail_at_N += !check.pass;
      // Sums over even degrees up to the even level N or N - 1.
      const int Q = N - N % 2;
      long long M = 0, bsum = 0;
      for (int q = 0; q <= Q; q += 2) {
        M += check.M[q];
        bsum += check.b[q];
      }
      level_gap += (M <= Q && bsum >= Q + 1);
    }
  }
  const double dt = seconds_since(t0);
  d << "grid " << grid << ": morse fails at Q=N " << morse_fail_at_N << ", sum M <= Q < Q+1 <= sum b " << level_gap
    << ", branch within closed form " << within << "; " << fmt("%.2f s", dt);
  out.pass = a_ok && b_ok && morse_fail_at_N == grid && level_gap == grid && within == grid && dt < 10.0;
  out.detail = d.str();
  return out;
}

Outcome criterion_katok() {
  const auto t0 = std::chrono::steady_clock::now();
  const double alpha = 0.1;
  ExperimentConfig cfg;
  cfg.n = 2;
  cfg.p = 2;
  cfg.metric = MetricKind::Katok;
  cfg.alpha = alpha;
  cfg.search.seeds = 40;
  cfg.delta = 1.0;
  const PipelineResult r = run_pipeline(cfg);
  const double dt = seconds_since(t0);
  std::ostringstream d;
  bool ok = r.error.empty();
  const auto& recs = r.search.records;
  d << recs.size() << " records";
  ok = ok && recs.size() == 2;
  std::vector<double> want{oracle::katok_short(alpha), oracle::katok_long(alpha)};
  for (std::size_t i = 0; i < recs.size() && i < 2; ++i) {
    const double err = std::abs(recs[i].length - want[i]);
    ok = ok && recs[i].simple && err <= 1e-4;
    d << "; L" << i + 1 << "=" << fmt("%.10f", recs[i].length) << " err " << fmt("%.1e", err)
      << (recs[i].simple ? " simple" : " NOT simple");
  }
  const auto counting = thm1_counting(1.0, r.lambda);
  if (recs.size() == 2) {
    ok = ok && recs[0].length <= counting.bound_c1 && recs[1].length <= counting.bound_c2;
  }
  d << "; lambda " << fmt("%.6f", r.lambda) << " c1<=" << fmt("%.4f", counting.bound_c1) << " c2<="
    << fmt("%.4f", counting.bound_c2) << "; " << fmt("%.1f s", dt);
  ok = ok && dt < 300.0;
  for (std::size_t i = 0; i < r.analyses.size(); ++i) {
    if (!r.analyses[i].has_poincare) continue;
    shared.symmetry.emplace_back("katok#" + std::to_string(i), r.analyses[i].symmetry_defect);
    PoincareMap pm;
    pm.defect = r.analyses[i].symplectic_defect;
    shared.maps.emplace_back("katok#" + std::to_string(i), pm);
  }
  return {ok, d.str()};
}

Outcome criterion_poincare() {
  std::ostringstream d;
  bool ok = !shared.maps.empty();
  double worst_defect = 0.0, worst_symmetry = 0.0;
  for (const auto& [name, pm] : shared.maps) {
    worst_defect = std::max(worst_defect, pm.defect);
    if (pm.matrix.size() > 0) {
      const auto s = spectral_summary(pm.matrix);
      worst_symmetry = std::max(worst_symmetry, spectral_symmetry_defect(s.eigenvalues));
    }
  }
  for (const auto& [name, v] : shared.symmetry) worst_symmetry = std::max(worst_symmetry, v);
  ok = ok && worst_defect <= 1e-6 && worst_symmetry <= 1e-5;

  const auto sf = SpaceFormSpec::make(2, 2);
  Eigen::VectorXd x(3), dir(3);
  x << 1, 0, 0;
  dir << 0, 1, 0;
  const auto half = DiscreteLoop::make(great_arc_samples(x, dir, M_PI, 256), sf, 1);
  const PoincareMap pm = poincare_map(MetricSpec::round(2), sf, iterate_loop(half, 2, sf));
  const double dev = (pm.matrix - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff();
  ok = ok && dev <= 1e-6;
  d << shared.maps.size() << " maps, max symplectic defect " << fmt("%.2e", worst_defect) << ", max symmetry defect "
    << fmt("%.2e", worst_symmetry) << "; great circle |P - I| " << fmt("%.2e", dev);
  return {ok, d.str()};
}

Outcome criterion_thm3() {
  const long long a = thm3_count(5, 2, Rational(1), Rational(1), Rational(1));
  const long long b = thm3_count(5, 2, Rational(1), Rational(1), Rational(1, 2));
  const long long c = thm3_count(3, 2, Rational(2), Rational(9, 16), Rational(1));
  std::ostringstream d;
  d << a << ", " << b << ", " << c << " (want 5, 5, 2)";
  return {a == 5 && b == 5 && c == 2, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Betti exactness", criterion_betti},
      {"round-metric lengths", criterion_round_lengths},
      {"round-metric index", criterion_round_index},
      {"index iteration suite", criterion_index_suite},
      {"counting engine", criterion_counting},
      {"Katok RP^2", criterion_katok},
      {"Poincare maps", criterion_poincare},
      {"closed geodesic count, odd n", criterion_thm3},
  };
  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const bool known = kKnownDeviations.count(id) > 0;
    std::string tag = o.pass ? "PASS" : "FAIL";
    if (!o.pass && known) tag += " (known deviation)";
    if (o.pass && known) tag += " (expected failure did not occur)";
    if (o.pass == known) ++unexpected;
    std::printf("criterion %d %s: %s  [%s]\n", id, tag.c_str(), criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d unexpected result(s)\n", unexpected);
  return unexpected == 0 ? 0 : 1;
}
