#include <cmath>
#include <numeric>
#include <stdexcept>
#include <complex>
#include <random>

#include "doctest.h"
#include "qflab/group_rep.hpp"
#include "qflab/markov.hpp"

using namespace qflab;

namespace {

const double kSqrt8 = 2.0 * std::sqrt(2.0);

// Random valid complex triple: complex (x, y) near the Fuchsian range with
// z solved from the Markov quadratic, so the identity holds exactly.
TraceTriple random_triple(std::mt19937_64& rng) {
  auto u = [&]() { return (rng() >> 11) * 0x1.0p-53; };
  while (true) {
    cx x{2.2 + 3.0 * u(), 0.8 * (u() - 0.5)};
    cx y{2.2 + 3.0 * u(), 0.8 * (u() - 0.5)};
    cx disc = std::sqrt(x * x * y * y - 4.0 * (x * x + y * y));
    cx z = (x * y + (u() < 0.5 ? disc : -disc)) / 2.0;
    if (std::abs(z) < 0.5) continue;
    TraceTriple t = TraceTriple::unchecked(x, y, z);
    if (t.is_valid()) return t;
  }
}

}  // namespace

TEST_CASE("triple validation enforces the Markov identity and nonzero traces") {
  CHECK_NOTHROW(TraceTriple::make(3.0, 3.0, 3.0));
  CHECK_NOTHROW(TraceTriple::make(kSqrt8, kSqrt8, 4.0));
  CHECK_THROWS_AS((TraceTriple::make(1.0, 1.0, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS((TraceTriple::make(cx{0.0}, cx{3.0}, cx{0.0, 3.0})),
                  std::invalid_argument);
}

TEST_CASE("vieta flips") {
  TraceTriple t = TraceTriple::make(3.0, 3.0, 3.0);
  TraceTriple fz = vieta_flip(t, Coord::Z);
  CHECK(fz.z == cx{6.0});
  CHECK(fz.markov_residual() == doctest::Approx(0.0));

  TraceTriple square = TraceTriple::make(kSqrt8, kSqrt8, 4.0);
  TraceTriple sflip = vieta_flip(square, Coord::Z);
  CHECK(std::abs(sflip.z - 4.0) < 1e-14);  // the square torus is flip symmetric

  TraceTriple fx = vieta_flip(fz, Coord::X);
  CHECK(fx.x == cx{15.0});
  CHECK(fx.y == cx{3.0});
  CHECK(fx.z == cx{6.0});
}

TEST_CASE("random flip sequences preserve the Markov residual") {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    TraceTriple t = random_triple(rng);
    double worst = 0.0;
    for (int step = 0; step < 40; ++step) {
      t = vieta_flip(t, static_cast<Coord>(rng() % 3));
      // Iterates must stay nondegenerate triples: flips that drive a
      // coordinate toward 0 or the product past 1e9 leave the domain the
      // residual bound is stated for (cancellation, not algebra).
      double lo = std::min({std::abs(t.x), std::abs(t.y), std::abs(t.z)});
      double hi = std::abs(t.x * t.y * t.z);
      if (!std::isfinite(hi) || hi > 1e9 || lo < 0.05) break;
      worst = std::max(worst, t.relative_residual());
      ++checked;
    }
    CHECK(worst <= 1e-9);
  }
  CHECK(checked > 2000);
}

TEST_CASE("trace_of_slope on the (3,3,3) triple") {
  TraceTriple t = TraceTriple::make(3.0, 3.0, 3.0);
  CHECK(trace_of_slope(t, Slope{1, 1}).real() == doctest::Approx(3.0));
  CHECK(trace_of_slope(t, Slope{2, 1}).real() == doctest::Approx(6.0));
  CHECK(trace_of_slope(t, Slope{3, 2}).real() == doctest::Approx(15.0));
  // 3^2 + 6^2 + 15^2 = 3 * 6 * 15: the walk's final triangle is Markov.
  CHECK(9.0 + 36.0 + 225.0 == 3.0 * 6.0 * 15.0);
  CHECK(trace_of_slope(t, Slope{-1, 1}).real() == doctest::Approx(6.0));
  CHECK(trace_of_slope(t, Slope{1, 2}).real() == doctest::Approx(6.0));
  // Mirror slopes see the flipped triple: trace(-3/2) here equals the
  // trace of 3/2 at (3, 3, 6), namely 6 * 15 - 3 = 87.
  CHECK(trace_of_slope(t, Slope{-3, 2}).real() == doctest::Approx(87.0));
}

TEST_CASE("trace walk respects the q cap") {
  TraceTriple t = TraceTriple::make(3.0, 3.0, 3.0);
  TraceWalkOptions opt;
  opt.max_q = 10;
  CHECK_THROWS_AS((trace_of_slope(t, Slope{1, 11}, opt)), std::invalid_argument);
  CHECK_THROWS_AS((trace_of_slope(t, Slope{11, 1}, opt)), std::invalid_argument);
  CHECK_NOTHROW((trace_of_slope(t, Slope{7, 10}, opt)));
}

TEST_CASE("trace_of_slope agrees with matrix words, q <= 50") {
  std::mt19937_64 rng(5);
  std::vector<TraceTriple> triples = {TraceTriple::make(3.0, 3.0, 3.0),
                                      random_triple(rng)};
  for (const TraceTriple& t : triples) {
    GroupRep rep = realize_matrices(t);
    double worst = 0.0;
    for (long long q = 0; q <= 50; ++q) {
      for (long long p = -50; p <= 50; ++p) {
        if (q == 0 && p != 1) continue;
        if (std::gcd(std::abs(p), q) != 1) continue;
        Slope s{p, q};
        cx via_recursion = trace_of_slope(t, s);
        cx via_word = word_for_slope(rep, s).trace();
        double scale = 1.0 + std::abs(via_recursion);
        worst = std::max(worst, std::abs(via_recursion - via_word) / scale);
      }
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("trace_of_slope is consistent across both parent decompositions") {
  // Every slope s with Farey parents (a, b) sits on the edge (a, s) of two
  // triangles, giving t_{a + s} = t_a t_s - t_b. Each of the four traces is
  // computed by its own independent walk, so agreement exercises flip-order
  // independence of the recursion.
  std::mt19937_64 rng(17);
  std::vector<TraceTriple> triples = {TraceTriple::make(3.0, 3.0, 3.0),
                                      random_triple(rng)};
  for (const TraceTriple& t : triples) {
    double worst = 0.0;
    for (long long q = 1; q <= 50; ++q) {
      for (long long p = -50; p <= 50; ++p) {
        if (std::gcd(std::abs(p), q) != 1) continue;
        Slope s{p, q};
        Slope a = farey_parent(s);
        long long pa = (a.q == 0 && s.p < 0) ? -a.p : a.p;  // 1/0 as (-1, 0)
        Slope b = normalize_slope(s.p - pa, s.q - a.q);
        Slope m = normalize_slope(s.p + pa, s.q + a.q);
        cx ts = trace_of_slope(t, s);
        cx ta = trace_of_slope(t, a);
        cx tb = trace_of_slope(t, b);
        cx tm = trace_of_slope(t, m);
        double scale = 1.0 + std::abs(ta * ts);
        worst = std::max(worst, std::abs(tm + tb - ta * ts) / scale);
      }
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("complex_length branch and frozen values") {
  CHECK(complex_length(cx{2.0}).parabolic);
  CHECK(std::abs(complex_length(cx{2.0}).lambda) == doctest::Approx(0.0));
  CHECK(complex_length(cx{3.0}).lambda.real() ==
        doctest::Approx(1.9248473002384139).epsilon(1e-14));
  CHECK(complex_length(cx{3.0}).lambda.imag() == 0.0);
  CHECK(complex_length(2.0 * std::cosh(1.0)).lambda.real() ==
        doctest::Approx(2.0).epsilon(1e-14));
  // Trace sign is projective.
  CHECK(complex_length(cx{-3.0}).lambda.real() ==
        doctest::Approx(1.9248473002384139).epsilon(1e-14));

  double prev = 0.0;
  for (double trace = 2.1; trace < 12.0; trace += 0.25) {
    double l = complex_length(cx{trace}).lambda.real();
    CHECK(l > prev);
    prev = l;
  }
}

TEST_CASE("complex_length inverts cosh on the fixed branch") {
  constexpr double kPi = 3.14159265358979323846;
  std::mt19937_64 rng(23);
  auto u = [&]() { return (rng() >> 11) * 0x1.0p-53; };
  for (int i = 0; i < 1000; ++i) {
    cx trace{14.0 * (u() - 0.5), 14.0 * (u() - 0.5)};
    if (std::abs(std::abs(trace) - 2.0) < 1e-3) continue;
    cx lambda = complex_length(trace).lambda;
    CHECK(lambda.real() >= 0.0);
    CHECK(lambda.imag() > -kPi);
    CHECK(lambda.imag() <= kPi);
    cx recovered = 2.0 * std::cosh(lambda / 2.0);
    double err = std::min(std::abs(recovered - trace), std::abs(recovered + trace));
    CHECK(err <= 1e-9 * (1.0 + std::abs(trace)));
  }
}

TEST_CASE("complex_length_derivative matches finite differences") {
  std::mt19937_64 rng(29);
  auto u = [&]() { return (rng() >> 11) * 0x1.0p-53; };
  for (int i = 0; i < 500; ++i) {
    cx trace{2.5 + 8.0 * u(), 4.0 * (u() - 0.5)};
    cx d = complex_length_derivative(trace);
    double h = 1e-6;
    cx fd = (complex_length(trace + h).lambda - complex_length(trace - h).lambda) /
            (2.0 * h);
    CHECK(std::abs(d - fd) <= 1e-6 * (1.0 + std::abs(d)));
  }
}

TEST_CASE("realize_matrices reproduces traces and the parabolic commutator") {
  std::mt19937_64 rng(31);
  std::vector<TraceTriple> triples = {TraceTriple::make(3.0, 3.0, 3.0),
                                      TraceTriple::make(kSqrt8, kSqrt8, 4.0)};
  for (int i = 0; i < 25; ++i) triples.push_back(random_triple(rng));
  for (const TraceTriple& t : triples) {
    GroupRep rep = realize_matrices(t);
    double scale = 1.0 + std::abs(t.x) + std::abs(t.y) + std::abs(t.z);
    CHECK(std::abs(rep.A.trace() - t.x) <= 1e-9 * scale);
    CHECK(std::abs(rep.B.trace() - t.y) <= 1e-9 * scale);
    CHECK(std::abs((rep.A * rep.B).trace() - t.z) <= 1e-9 * scale);
    CHECK(std::abs(rep.A.det() - 1.0) <= 1e-9);
    CHECK(std::abs(rep.B.det() - 1.0) <= 1e-9);
    CHECK(std::abs(rep.commutator().trace() + 2.0) <= 1e-9 * scale);
  }
}

TEST_CASE("realize_matrices rejects degenerate triples") {
  // x = 0 solves the Markov identity with z = iy but is a degenerate marking.
  TraceTriple degenerate = TraceTriple::unchecked(0.0, 3.0, cx{0.0, 3.0});
  CHECK_THROWS(realize_matrices(degenerate));
}

TEST_CASE("different normalizations give identical simple-curve traces") {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 10; ++i) {
    TraceTriple t = random_triple(rng);
    std::vector<GroupRep> reps;
    for (RealizeRotation r :
         {RealizeRotation::XY, RealizeRotation::YZ, RealizeRotation::ZX}) {
      try {
        reps.push_back(realize_matrices(t, r));
      } catch (const std::exception&) {
        // rotation slot too close to +-2; fine, conventions are optional
      }
    }
    REQUIRE(reps.size() >= 2);
    for (long long q = 0; q <= 8; ++q) {
      for (long long p = -8; p <= 8; ++p) {
        if (q == 0 && p != 1) continue;
        if (std::gcd(std::abs(p), q) != 1) continue;
        cx t0 = word_for_slope(reps[0], Slope{p, q}).trace();
        for (size_t k = 1; k < reps.size(); ++k) {
          cx tk = word_for_slope(reps[k], Slope{p, q}).trace();
          CHECK(std::abs(t0 - tk) <= 1e-8 * (1.0 + std::abs(t0)));
        }
      }
    }
  }
}

TEST_CASE("bowditch_check verdicts") {
  TraceTriple fuchsian = TraceTriple::make(3.0, 3.0, 3.0);
  BowditchOptions opt;
  opt.depth = 8;
  BowditchReport rep = bowditch_check(fuchsian, opt);
  CHECK(rep.verdict == BowditchVerdict::Pass);
  CHECK(rep.all_escaped);

  // A valid Markov triple with a short simple trace: x = 0.5 forces an
  // immediate fail.
  cx x{0.5}, y{3.0};
  cx disc = std::sqrt(x * x * y * y - 4.0 * (x * x + y * y));
  TraceTriple bad = TraceTriple::unchecked(x, y, (x * y + disc) / 2.0);
  REQUIRE(bad.relative_residual() < 1e-12);
  CHECK(bowditch_check(bad, opt).verdict == BowditchVerdict::Fail);

  CHECK_THROWS_AS((bowditch_check(fuchsian, BowditchOptions{0, 2.001, 1e-6})),
                  std::invalid_argument);
}
