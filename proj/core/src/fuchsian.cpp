#include "qflab/fuchsian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qflab {

namespace {

// Log-space trace with gradient of the log in the chart coordinates.
// Multiplication adds logs; the subtraction t_a t_c - t_b stays positive
// for Fuchsian traces, so it is a stable log1p update.
struct LogJet {
  double lv, du, dt;

  friend LogJet operator*(const LogJet& a, const LogJet& b) {
    return {a.lv + b.lv, a.du + b.du, a.dt + b.dt};
  }
  friend LogJet operator-(const LogJet& big, const LogJet& small) {
    double r = std::exp(small.lv - big.lv);
    if (!(r < 1.0)) {
      throw std::runtime_error(
          "fuchsian trace walk: non-positive trace difference");
    }
    double scale = 1.0 / (1.0 - r);
    return {big.lv + std::log1p(-r), (big.du - r * small.du) * scale,
            (big.dt - r * small.dt) * scale};
  }
};

struct BaseJets {
  LogJet x, y, z;
};

BaseJets base_jets(double u, double t) {
  double log2cosh_u = std::log(2.0) + std::log(std::cosh(u));
  double logcoth_u = std::log(std::cosh(u)) - std::log(std::sinh(u));
  double dcoth = -1.0 / (std::sinh(u) * std::cosh(u));  // d log coth u / du
  LogJet x{log2cosh_u, std::tanh(u), 0.0};
  LogJet y{std::log(2.0) + logcoth_u + std::log(std::cosh(t / 2.0)), dcoth,
           0.5 * std::tanh(t / 2.0)};
  LogJet z{std::log(2.0) + logcoth_u + std::log(std::cosh(u + t / 2.0)),
           dcoth + std::tanh(u + t / 2.0), 0.5 * std::tanh(u + t / 2.0)};
  return {x, y, z};
}

struct CurveLength {
  double value;
  double du, dt;
};

// 2 acosh(e^lv / 2) and its chart gradient; switches to the asymptotic
// branch once the trace exceeds comfortable doubles.
CurveLength length_from_logjet(const LogJet& j) {
  if (j.lv < 30.0) {
    double w = std::exp(j.lv) / 2.0;
    double l = 2.0 * std::acosh(w);
    double dl_dlv = 2.0 * w / std::sqrt(w * w - 1.0);
    return {l, dl_dlv * j.du, dl_dlv * j.dt};
  }
  // acosh(w) = lv - log 2 + log(1 + sqrt(1 - 1/w^2)), the log term being
  // below double epsilon here.
  return {2.0 * j.lv, 2.0 * j.du, 2.0 * j.dt};
}

CurveLength slope_length(const FuchsianPoint& p, const Slope& s) {
  FareyPath path = farey_path(s);
  BaseJets base = base_jets(p.u, p.t);
  LogJet trace = walk_traces(path, base.x, base.y, base.z);
  return length_from_logjet(trace);
}

CurveLength lamination_length(const FuchsianPoint& p, const Lamination& m,
                              const LengthOptions& opt, LengthDetail* detail) {
  if (m.is_rational()) {
    CurveLength l = slope_length(p, m.slope());
    if (detail) *detail = {m.weight * l.value, 0, 0.0};
    return {m.weight * l.value, m.weight * l.du, m.weight * l.dt};
  }
  auto cs = convergents(m.irrational(), opt.convergent_budget);
  CurveLength current{};
  double prev = 0.0;
  for (int k = 0; k < static_cast<int>(cs.size()); ++k) {
    CurveLength l = slope_length(p, cs[k]);
    double scale = m.weight / static_cast<double>(cs[k].q);
    current = {scale * l.value, scale * l.du, scale * l.dt};
    if (k > 0) {
      double gap = std::abs(current.value - prev);
      if (gap < opt.irrational_tol) {
        if (detail) *detail = {current.value, k + 1, gap};
        return current;
      }
    }
    prev = current.value;
  }
  throw std::runtime_error(
      "length: convergent ladder did not stabilize within the budget for " +
      to_string(m));
}

struct Objective {
  const Lamination& mu;
  const Lamination& nu;
  double c;
  LengthOptions lopt;

  double eval(double u, double t, double* g) const {
    FuchsianPoint p = fuchsian_from_chart(u, t);
    CurveLength a = lamination_length(p, mu, lopt, nullptr);
    CurveLength b = lamination_length(p, nu, lopt, nullptr);
    if (g) {
      g[0] = a.du + c * b.du;
      g[1] = a.dt + c * b.dt;
    }
    return a.value + c * b.value;
  }
};

struct MinimumResult {
  double u, t, grad_norm;
  bool converged;
};

// Two-variable BFGS with Armijo backtracking, u kept positive.
MinimumResult minimize_from(const Objective& f, double u0, double t0,
                            const MinimizeOptions& opt) {
  double u = u0, t = t0;
  double g[2];
  double value = f.eval(u, t, g);
  double h00 = 1.0, h01 = 0.0, h11 = 1.0;  // inverse Hessian estimate
  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    double gnorm = std::hypot(g[0], g[1]);
    if (gnorm <= opt.grad_tol) return {u, t, gnorm, true};
    double du = -(h00 * g[0] + h01 * g[1]);
    double dt = -(h01 * g[0] + h11 * g[1]);
    double slope = g[0] * du + g[1] * dt;
    if (slope >= 0.0) {  // reset a non-descent metric
      h00 = h11 = 1.0;
      h01 = 0.0;
      du = -g[0];
      dt = -g[1];
      slope = -gnorm * gnorm;
    }
    double alpha = 1.0;
    double un = u, tn = t, vn = value;
    bool accepted = false;
    for (int back = 0; back < 48; ++back) {
      un = u + alpha * du;
      tn = t + alpha * dt;
      if (un > 1e-8) {
        vn = f.eval(un, tn, nullptr);
        if (vn <= value + 1e-4 * alpha * slope) {
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!accepted) return {u, t, gnorm, false};
    double gn[2];
    f.eval(un, tn, gn);
    double sx = un - u, sy = tn - t;
    double yx = gn[0] - g[0], yy = gn[1] - g[1];
    double sdoty = sx * yx + sy * yy;
    if (sdoty > 1e-14) {
      double hy0 = h00 * yx + h01 * yy;
      double hy1 = h01 * yx + h11 * yy;
      double yhy = yx * hy0 + yy * hy1;
      double f1 = (sdoty + yhy) / (sdoty * sdoty);
      double f2 = 1.0 / sdoty;
      h00 += f1 * sx * sx - 2.0 * f2 * hy0 * sx;
      h01 += f1 * sx * sy - f2 * (hy0 * sy + sx * hy1);
      h11 += f1 * sy * sy - 2.0 * f2 * hy1 * sy;
    }
    u = un;
    t = tn;
    value = vn;
    g[0] = gn[0];
    g[1] = gn[1];
  }
  double gnorm = std::hypot(g[0], g[1]);
  return {u, t, gnorm, gnorm <= opt.grad_tol};
}

MinimumResult certified_minimum(const Lamination& mu, const Lamination& nu,
                                double c, const MinimizeOptions& opt,
                                const double* warm) {
  Objective f{mu, nu, c, opt.length};
  if (warm) {
    MinimumResult r = minimize_from(f, warm[0], warm[1], opt);
    if (r.converged) return r;  // warm paths skip the multi-start check
  }
  static constexpr double kSeeds[][2] = {{0.9, 0.1}, {0.5, -0.9}, {1.7, 0.8}};
  std::vector<MinimumResult> hits;
  int starts = std::max(1, opt.starts);
  for (int k = 0; k < starts; ++k) {
    MinimumResult r =
        minimize_from(f, kSeeds[k % 3][0] * (1.0 + 0.3 * (k / 3)),
                      kSeeds[k % 3][1] + 0.2 * (k / 3), opt);
    if (r.converged) hits.push_back(r);
  }
  if (hits.empty()) {
    throw std::runtime_error("line_of_minima_point: optimizer did not converge");
  }
  for (const MinimumResult& r : hits) {
    if (std::abs(r.u - hits[0].u) > opt.agree_tol ||
        std::abs(r.t - hits[0].t) > opt.agree_tol) {
      throw std::runtime_error(
          "line_of_minima_point: multi-start minima disagree");
    }
  }
  return hits[0];
}

}  // namespace

FuchsianPoint fuchsian_from_chart(double u, double t) {
  if (!(u > 0.0) || !std::isfinite(u) || !std::isfinite(t)) {
    throw std::domain_error("fuchsian_from_chart: need finite u > 0");
  }
  double coth = std::cosh(u) / std::sinh(u);
  cx x{2.0 * std::cosh(u), 0.0};
  cx y{2.0 * coth * std::cosh(t / 2.0), 0.0};
  cx z{2.0 * coth * std::cosh(u + t / 2.0), 0.0};
  return {TraceTriple::unchecked(x, y, z), u, t};
}

FuchsianPoint chart_point(double x, double y, ChartBranch branch) {
  if (!(x > 2.0) || !(y > 2.0)) {
    throw std::domain_error("chart_point: need x, y > 2");
  }
  double disc = x * x * y * y - 4.0 * x * x - 4.0 * y * y;
  if (disc < 0.0) {
    throw std::domain_error("chart_point: negative discriminant, no real z");
  }
  double u = std::acosh(x / 2.0);
  double h = (y / 2.0) * std::tanh(u);  // equals cosh(t/2); >= 1 iff disc >= 0
  double t = 2.0 * std::acosh(std::max(1.0, h));
  if (branch == ChartBranch::Lower) t = -t;
  return fuchsian_from_chart(u, t);
}

LengthDetail length_detail(const FuchsianPoint& p, const Lamination& m,
                           const LengthOptions& opt) {
  LengthDetail detail;
  lamination_length(p, m, opt, &detail);
  return detail;
}

double length(const FuchsianPoint& p, const Lamination& m) {
  return length_detail(p, m).value;
}

std::array<double, 2> length_gradient(const FuchsianPoint& p,
                                      const Lamination& m,
                                      const LengthOptions& opt) {
  CurveLength l = lamination_length(p, m, opt, nullptr);
  return {l.du, l.dt};
}

FuchsianPoint line_of_minima_point(const Lamination& mu, const Lamination& nu,
                                   double c, const MinimizeOptions& opt) {
  if (!(c > 0.0)) {
    throw std::domain_error("line_of_minima_point: c must be positive");
  }
  if (!(intersection(mu, nu) > 0.0)) {
    throw std::domain_error(
        "line_of_minima_point: laminations must intersect (distinct classes)");
  }
  MinimumResult r = certified_minimum(mu, nu, c, opt, nullptr);
  return fuchsian_from_chart(r.u, r.t);
}

MinimaLine sample_minima_line(const Lamination& mu, const Lamination& nu,
                              const std::vector<double>& cs,
                              const MinimizeOptions& opt) {
  if (!(intersection(mu, nu) > 0.0)) {
    throw std::domain_error("sample_minima_line: laminations must intersect");
  }
  MinimaLine line{mu, nu, {}};
  line.samples.reserve(cs.size());
  double warm[2] = {0.0, 0.0};
  bool have_warm = false;
  for (double c : cs) {
    if (!(c > 0.0)) {
      throw std::domain_error("sample_minima_line: c values must be positive");
    }
    MinimumResult r =
        certified_minimum(mu, nu, c, opt, have_warm ? warm : nullptr);
    FuchsianPoint p = fuchsian_from_chart(r.u, r.t);
    line.samples.push_back({c, p, length(p, mu), length(p, nu), r.grad_norm});
    warm[0] = r.u;
    warm[1] = r.t;
    have_warm = true;
  }
  return line;
}

LinePoint line_point_at_mu_length(const Lamination& mu, const Lamination& nu,
                                  double b, const MinimizeOptions& opt) {
  if (!(b > 0.0)) {
    throw std::domain_error("line_point_at_mu_length: b must be positive");
  }
  if (!(intersection(mu, nu) > 0.0)) {
    throw std::domain_error(
        "line_point_at_mu_length: laminations must intersect");
  }

  double warm[2] = {0.9, 0.1};
  bool have_warm = false;
  auto eval = [&](double c) {
    MinimumResult r =
        certified_minimum(mu, nu, c, opt, have_warm ? warm : nullptr);
    warm[0] = r.u;
    warm[1] = r.t;
    have_warm = true;
    FuchsianPoint p = fuchsian_from_chart(r.u, r.t);
    return std::pair<double, FuchsianPoint>(length(p, mu), p);
  };

  // l_mu at the minimizer is strictly increasing in the line parameter:
  // bracket b by geometric expansion, then bisect with a secant proposal.
  double clo = 1.0, chi = 1.0;
  auto first = eval(1.0);
  double llo = first.first, lhi = first.first;
  for (int k = 0; llo > b && k < 90; ++k) {
    clo *= 0.5;
    llo = eval(clo).first;
  }
  for (int k = 0; lhi < b && k < 90; ++k) {
    chi *= 2.0;
    lhi = eval(chi).first;
  }
  if (llo > b || lhi < b) {
    throw std::runtime_error("line_point_at_mu_length: failed to bracket b");
  }

  double lmu = llo;
  FuchsianPoint point = first.second;
  for (int iter = 0; iter < 200; ++iter) {
    double w = (b - llo) / (lhi - llo);
    w = std::clamp(w, 0.15, 0.85);
    double c = std::exp((1.0 - w) * std::log(clo) + w * std::log(chi));
    auto [l, p] = eval(c);
    lmu = l;
    point = p;
    if (std::abs(l - b) <= 1e-11 * (1.0 + b)) break;
    if (l < b) {
      clo = c;
      llo = l;
    } else {
      chi = c;
      lhi = l;
    }
  }
  if (std::abs(lmu - b) > 1e-8 * (1.0 + b)) {
    throw std::runtime_error("line_point_at_mu_length: root solve stalled");
  }
  double c_line = std::exp(0.5 * (std::log(clo) + std::log(chi)));
  return {point, lmu, length(point, nu), c_line};
}

double f_value(const Lamination& mu, const Lamination& nu, double b,
               const MinimizeOptions& opt) {
  return line_point_at_mu_length(mu, nu, b, opt).l_nu;
}

bool in_region(const Lamination& mu, const Lamination& nu, double b, double c,
               const MinimizeOptions& opt) {
  if (!(b > 0.0) || !(c > 0.0)) {
    throw std::domain_error("in_region: lengths must be positive");
  }
  return c < f_value(mu, nu, b, opt);
}

}  // namespace qflab
