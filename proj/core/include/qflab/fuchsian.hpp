#pragma once

#include <array>
#include <vector>

#include "qflab/markov.hpp"
#include "qflab/slope.hpp"

namespace qflab {

enum class ChartBranch { Lower, Upper };

/// Point of Fuchsian space, a real trace triple together with the global
/// chart coordinates (u, t):
///
///   x = 2 cosh u,  y = 2 coth u cosh(t/2),  z = 2 coth u cosh(u + t/2)
///
/// u > 0 is half the length of the 0/1 curve and t is the twist along it.
/// The parametrization satisfies the Markov identity identically, covers
/// Fuchsian space once, and is smooth across the locus where the quadratic
/// chart (x, y, branch) folds (t = 0, zero discriminant).
struct FuchsianPoint {
  TraceTriple triple;
  double u = 0.0;
  double t = 0.0;
};

FuchsianPoint fuchsian_from_chart(double u, double t);

/// Two-sheeted quadratic chart over x, y > 2: picks the root
/// z = (xy +- sqrt(x^2 y^2 - 4x^2 - 4y^2)) / 2. Throws when the
/// discriminant is negative. Lower is the sheet with twist t <= 0.
FuchsianPoint chart_point(double x, double y, ChartBranch branch);

struct LengthOptions {
  double irrational_tol = 1e-8;  // Cauchy stop for the convergent ladder
  int convergent_budget = 40;
};

struct LengthDetail {
  double value = 0.0;
  int convergents_used = 0;  // 0 for rational supports
  double cauchy_gap = 0.0;   // last ladder increment
};

/// Geodesic length of the lamination at the point. Rational supports are
/// weight * 2 acosh(trace / 2) with the trace walked in log space, so large
/// denominators do not overflow. Irrational supports iterate the weighted
/// convergent ladder (weight / q_n) * l_{p_n/q_n} until it is Cauchy.
LengthDetail length_detail(const FuchsianPoint& p, const Lamination& m,
                           const LengthOptions& opt = {});
double length(const FuchsianPoint& p, const Lamination& m);

/// Analytic d(length)/d(u, t), via log-space jets through the trace walk.
std::array<double, 2> length_gradient(const FuchsianPoint& p,
                                      const Lamination& m,
                                      const LengthOptions& opt = {});

struct MinimizeOptions {
  double grad_tol = 1e-8;
  int max_iterations = 400;
  int starts = 3;          // independent seeds; results must agree
  double agree_tol = 1e-6;
  LengthOptions length;
};

/// The unique minimizer of l_mu + c l_nu over Fuchsian space. Requires
/// i(mu, nu) > 0; quasi-Newton from several seeds, certified to agree.
FuchsianPoint line_of_minima_point(const Lamination& mu, const Lamination& nu,
                                   double c, const MinimizeOptions& opt = {});

struct MinimaSample {
  double c = 0.0;
  FuchsianPoint point;
  double l_mu = 0.0;
  double l_nu = 0.0;
  double grad_norm = 0.0;
};

struct MinimaLine {
  Lamination mu, nu;
  std::vector<MinimaSample> samples;
};

MinimaLine sample_minima_line(const Lamination& mu, const Lamination& nu,
                              const std::vector<double>& cs,
                              const MinimizeOptions& opt = {});

/// Point of the line of minima with l_mu = b, solved by a monotone root
/// search in the line parameter. l_nu there is the graph value f(b).
struct LinePoint {
  FuchsianPoint point;
  double l_mu = 0.0;
  double l_nu = 0.0;
  double c_line = 0.0;  // minimization weight at the root
};
LinePoint line_point_at_mu_length(const Lamination& mu, const Lamination& nu,
                                  double b, const MinimizeOptions& opt = {});

/// f_{mu,nu}(b): l_nu on the line of minima where l_mu = b. Surjective and
/// strictly decreasing; the graph bounds the solvable region.
double f_value(const Lamination& mu, const Lamination& nu, double b,
               const MinimizeOptions& opt = {});

/// True iff (b, c) lies strictly below the graph of f_{mu,nu}.
bool in_region(const Lamination& mu, const Lamination& nu, double b, double c,
               const MinimizeOptions& opt = {});

}  // namespace qflab
