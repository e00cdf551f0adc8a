#pragma once

#include <complex>
#include <vector>

#include "qflab/slope.hpp"

namespace qflab {

using cx = std::complex<double>;

/// Point of the representation variety in trace coordinates: traces of the
/// marking curves 0/1, 1/0, 1/1. Valid triples satisfy the Markov identity
/// x^2 + y^2 + z^2 = xyz up to a small relative residual, equivalent to the
/// commutator of the generators being parabolic of trace -2.
struct TraceTriple {
  cx x, y, z;

  static constexpr double kRelTol = 1e-9;

  /// Validating factory: checks the Markov residual and rejects zero traces.
  static TraceTriple make(cx x, cx y, cx z);
  /// No validation; for internal iteration states and tests.
  static TraceTriple unchecked(cx x, cx y, cx z) { return {x, y, z}; }

  /// |x^2 + y^2 + z^2 - xyz|
  double markov_residual() const;
  /// markov_residual() / (1 + |xyz|)
  double relative_residual() const;
  bool is_valid() const;

  cx coord(int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

enum class Coord { X = 0, Y = 1, Z = 2 };

/// Replace the chosen coordinate w by (product of the other two) - w.
/// Preserves the Markov identity exactly.
TraceTriple vieta_flip(const TraceTriple& t, Coord which);

struct TraceWalkOptions {
  long long max_q = 1'000'000;  // also caps |p|
};

/// Trace of the simple closed curve of slope s under the representation,
/// computed by walking the Farey tessellation from the basis triangle
/// (0/1, 1/0, 1/1) with the edge relation t_new = t_a t_b - t_opposite.
cx trace_of_slope(const TraceTriple& t, const Slope& s,
                  const TraceWalkOptions& opt = {});

/// Step-by-step Farey walk for a slope, shared by the trace, jet and
/// matrix-word evaluators.
struct FareyPath {
  enum class Base { X, Y, Z, MirrorZ, Walk };
  Base base = Base::X;
  bool negative = false;    // walk runs in the (-inf, 0) sector
  std::vector<bool> steps;  // false: toward the a vertex, true: toward b
};
FareyPath farey_path(const Slope& s, const TraceWalkOptions& opt = {});

/// Generic walker over any ring element F supporting * and -. Applies the
/// edge recursion t_new = t_a t_c - t_b along the path. The walk starts at
/// the triangle (0/1, 1/0, mediant) whose mediant is 1/1 on the positive
/// side and -1/1 (trace xy - z) on the negative side.
template <class F>
F walk_traces(const FareyPath& path, F x, F y, F z) {
  using Base = FareyPath::Base;
  switch (path.base) {
    case Base::X: return x;
    case Base::Y: return y;
    case Base::Z: return z;
    case Base::MirrorZ: return x * y - z;
    case Base::Walk: break;
  }
  F ta = x;
  F tb = y;
  F tc = path.negative ? x * y - z : z;
  for (bool toward_b : path.steps) {
    if (toward_b) {
      F tn = tc * tb - ta;  // new triangle (c, b, c + b)
      ta = tc;
      tc = tn;
    } else {
      F tn = ta * tc - tb;  // new triangle (a, c, a + c)
      tb = tc;
      tc = tn;
    }
  }
  return tc;
}

/// Complex translation length 2 acosh(trace / 2) on the branch
/// Re >= 0, Im in (-pi, pi]. Trace sign is projective: -trace is used
/// when the principal branch lands outside the strip. parabolic flags
/// |trace| = 2 within tolerance (lambda = 0 there).
struct ComplexLength {
  cx lambda;
  bool parabolic = false;
};
ComplexLength complex_length(cx trace);

/// Derivative of the length branch with respect to the trace,
/// 1 / sqrt(trace^2/4 - 1), with the matching sign convention.
cx complex_length_derivative(cx trace);

enum class BowditchVerdict { Pass, Fail, Inconclusive };

struct BowditchOptions {
  int depth = 12;
  double bound = 2.001;   // escape bound on |trace|
  double low_tol = 1e-6;  // fail when |trace| < 2 - low_tol
};

struct BowditchReport {
  BowditchVerdict verdict = BowditchVerdict::Inconclusive;
  int depth = 0;
  double min_modulus = 0.0;  // over every trace visited
  bool all_escaped = false;
};

/// Breadth-first escape search over the Farey tree of simple slopes.
/// Fail: some simple trace has modulus < 2 - low_tol, or the per-level
/// minima decay below the bound. Pass: every branch escapes (child at
/// least as large as the smaller edge and above the bound) or the final
/// level clears the bound. Heuristic stand-in for quasifuchsian-ness.
BowditchReport bowditch_check(const TraceTriple& t,
                              const BowditchOptions& opt = {});

std::string to_string(const TraceTriple& t);

}  // namespace qflab
