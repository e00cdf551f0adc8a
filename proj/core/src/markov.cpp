#include "qflab/markov.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qflab {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TraceTriple TraceTriple::make(cx x, cx y, cx z) {
  TraceTriple t{x, y, z};
  if (!t.is_valid()) {
    throw std::invalid_argument("TraceTriple: Markov residual too large or degenerate trace: " +
                                to_string(t));
  }
  return t;
}

double TraceTriple::markov_residual() const {
  return std::abs(x * x + y * y + z * z - x * y * z);
}

double TraceTriple::relative_residual() const {
  return markov_residual() / (1.0 + std::abs(x * y * z));
}

bool TraceTriple::is_valid() const {
  if (relative_residual() > kRelTol) return false;
  // Zero traces are degenerate markings.
  return std::abs(x) > 0.0 && std::abs(y) > 0.0 && std::abs(z) > 0.0;
}

TraceTriple vieta_flip(const TraceTriple& t, Coord which) {
  switch (which) {
    case Coord::X: return {t.y * t.z - t.x, t.y, t.z};
    case Coord::Y: return {t.x, t.x * t.z - t.y, t.z};
    case Coord::Z: return {t.x, t.y, t.x * t.y - t.z};
  }
  throw std::logic_error("vieta_flip: bad coordinate");
}

FareyPath farey_path(const Slope& s, const TraceWalkOptions& opt) {
  using Base = FareyPath::Base;
  if (s.q > opt.max_q || std::llabs(s.p) > opt.max_q) {
    throw std::invalid_argument("farey_path: slope " + to_string(s) +
                                " exceeds the walk cap q <= " +
                                std::to_string(opt.max_q));
  }
  if (s == Slope{0, 1}) return {Base::X, false, {}};
  if (s == Slope{1, 0}) return {Base::Y, false, {}};
  if (s == Slope{1, 1}) return {Base::Z, false, {}};
  if (s == Slope{-1, 1}) return {Base::MirrorZ, false, {}};

  FareyPath path;
  path.base = Base::Walk;
  path.negative = s.p < 0;
  // Homogeneous pairs; 1/0 enters as (-1, 0) on the negative side so that
  // mediants stay in the sector.
  long long pa = 0, qa = 1;
  long long pb = path.negative ? -1 : 1, qb = 0;
  long long pc = pa + pb, qc = qa + qb;
  const long long sector = pa * qb - qa * pb;  // +-1, preserved by the walk
  while (!(pc == s.p && qc == s.q)) {
    long long side = s.p * qc - s.q * pc;  // D(target, c)
    if ((side > 0) == (sector > 0)) {
      // target between a and c
      pb = pc;
      qb = qc;
      path.steps.push_back(false);
    } else {
      pa = pc;
      qa = qc;
      path.steps.push_back(true);
    }
    pc = pa + pb;
    qc = qa + qb;
    if (static_cast<long long>(path.steps.size()) > 4 * opt.max_q) {
      throw std::runtime_error("farey_path: walk failed to terminate");
    }
  }
  return path;
}

cx trace_of_slope(const TraceTriple& t, const Slope& s,
                  const TraceWalkOptions& opt) {
  return walk_traces(farey_path(s, opt), t.x, t.y, t.z);
}

ComplexLength complex_length(cx trace) {
  ComplexLength out;
  out.parabolic = std::abs(std::abs(trace) - 2.0) < 1e-12 &&
                  std::abs(trace.imag()) < 1e-12;
  cx lambda = 2.0 * std::acosh(trace / 2.0);
  if (lambda.imag() <= -kPi || lambda.imag() > kPi) {
    // Trace sign is only defined projectively; the other lift lands in the
    // strip Im in (-pi, pi].
    lambda = 2.0 * std::acosh(-trace / 2.0);
  }
  if (lambda.real() < 0.0) lambda = -lambda;
  if (lambda.imag() <= -kPi) lambda = std::conj(lambda);  // Im == -pi edge
  out.lambda = lambda;
  return out;
}

cx complex_length_derivative(cx trace) {
  cx w = trace / 2.0;
  cx lambda = 2.0 * std::acosh(w);
  double flip = 1.0;
  if (lambda.imag() <= -kPi || lambda.imag() > kPi) {
    w = -w;
    flip = -1.0;  // chain rule through the trace sign flip
    lambda = 2.0 * std::acosh(w);
  }
  cx d = flip / (std::sqrt(w - 1.0) * std::sqrt(w + 1.0));
  if (lambda.real() < 0.0) d = -d;
  return d;
}

BowditchReport bowditch_check(const TraceTriple& t, const BowditchOptions& opt) {
  if (opt.depth < 1) {
    throw std::invalid_argument("bowditch_check: depth must be >= 1");
  }
  BowditchReport report;
  report.depth = opt.depth;

  struct Sector {
    cx a, b, opposite;  // edge traces and the trace across the edge
  };

  const double low = 2.0 - opt.low_tol;
  double min_mod = std::min({std::abs(t.x), std::abs(t.y), std::abs(t.z)});
  report.min_modulus = min_mod;
  if (min_mod < low) {
    report.verdict = BowditchVerdict::Fail;
    return report;
  }

  // One sector per edge of the basis triangle (0/1, 1/0, 1/1); the mirror
  // vertex -1/1 appears as the first child of the (x, y) edge.
  std::vector<Sector> frontier = {
      {t.x, t.y, t.z},
      {t.x, t.z, t.y},
      {t.y, t.z, t.x},
  };
  double prev_level_min = min_mod;

  for (int level = 1; level <= opt.depth; ++level) {
    std::vector<Sector> next;
    next.reserve(frontier.size() * 2);
    double level_min = std::numeric_limits<double>::infinity();
    for (const Sector& s : frontier) {
      cx child = s.a * s.b - s.opposite;
      double m = std::abs(child);
      if (!std::isfinite(m)) continue;  // far past the escape bound
      level_min = std::min(level_min, m);
      report.min_modulus = std::min(report.min_modulus, m);
      if (m < low) {
        report.verdict = BowditchVerdict::Fail;
        return report;
      }
      bool escaped = m >= opt.bound && m >= std::min(std::abs(s.a), std::abs(s.b));
      if (!escaped) {
        next.push_back({s.a, child, s.b});
        next.push_back({s.b, child, s.a});
      }
    }
    if (std::isfinite(level_min) && level_min < opt.bound &&
        level_min < prev_level_min - 1e-12) {
      // Minima must grow toward the escape bound; decay signals an
      // indiscrete or boundary group.
      report.verdict = BowditchVerdict::Fail;
      return report;
    }
    if (std::isfinite(level_min)) prev_level_min = level_min;
    frontier = std::move(next);
    if (frontier.empty()) {
      report.all_escaped = true;
      report.verdict = BowditchVerdict::Pass;
      return report;
    }
    if (frontier.size() > (1u << 22)) {
      report.verdict = BowditchVerdict::Inconclusive;
      return report;
    }
  }

  double final_min = std::numeric_limits<double>::infinity();
  for (const Sector& s : frontier) {
    final_min = std::min({final_min, std::abs(s.a), std::abs(s.b)});
  }
  report.verdict = final_min >= opt.bound ? BowditchVerdict::Pass
                                          : BowditchVerdict::Inconclusive;
  return report;
}

std::string to_string(const TraceTriple& t) {
  std::ostringstream os;
  os.precision(17);
  auto put = [&os](cx v) {
    os << "(" << v.real();
    if (v.imag() != 0.0) os << (v.imag() > 0 ? "+" : "") << v.imag() << "i";
    os << ")";
  };
  put(t.x);
  os << ", ";
  put(t.y);
  os << ", ";
  put(t.z);
  return os.str();
}

}  // namespace qflab
