#include "qflab/group_rep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace qflab {

namespace {

constexpr cx kI{0.0, 1.0};

// Normal form for (ta, tb, tab) with parabolic commutator, valid away from
// tab = +-2. The AB axis is pinned by the construction; conjugating the
// result is harmless since only traces are contractual.
GroupRep assemble(cx ta, cx tb, cx tab) {
  cx denom = tb * tab - 2.0 * ta + 2.0 * kI * tab;
  cx z0 = (tab - 2.0) * tb / denom;
  Mat2c A{ta / 2.0, (ta * tab - 2.0 * tb + 4.0 * kI) / ((2.0 * tab + 4.0) * z0),
          (ta * tab - 2.0 * tb - 4.0 * kI) * z0 / (2.0 * tab - 4.0), ta / 2.0};
  Mat2c B{(tb - 2.0 * kI) / 2.0, tb / 2.0, tb / 2.0, (tb + 2.0 * kI) / 2.0};
  return {A, B};
}

double slot_margin(cx slot) {
  return std::min(std::abs(slot - 2.0), std::abs(slot + 2.0));
}

bool realization_ok(const GroupRep& rep, const TraceTriple& t) {
  double scale = 1.0 + std::abs(t.x) + std::abs(t.y) + std::abs(t.z);
  double err = std::abs(rep.A.trace() - t.x) + std::abs(rep.B.trace() - t.y) +
               std::abs((rep.A * rep.B).trace() - t.z) +
               std::abs(rep.A.det() - 1.0) + std::abs(rep.B.det() - 1.0) +
               std::abs(rep.commutator().trace() + 2.0);
  return err <= 1e-9 * scale;
}

}  // namespace

Mat2c Mat2c::inverse() const { return {d, -b, -c, a}; }

Mat2c GroupRep::commutator() const {
  return A * B * A.inverse() * B.inverse();
}

GroupRep realize_matrices(const TraceTriple& t, RealizeRotation rotation) {
  if (!t.is_valid()) {
    throw std::invalid_argument(
        "realize_matrices: triple is degenerate or off the Markov variety");
  }

  // Rotation r realizes (x, y, z) cycled r times; the marked generators are
  // recovered with (A, B) -> ((PQ)^-1, P) applied r times.
  auto build = [&](int r) -> GroupRep {
    cx c0 = t.coord(r % 3), c1 = t.coord((r + 1) % 3), c2 = t.coord((r + 2) % 3);
    GroupRep rep = assemble(c0, c1, c2);
    for (int k = 0; k < r; ++k) {
      Mat2c A = (rep.A * rep.B).inverse();
      Mat2c B = rep.A;
      rep = {A, B};
    }
    return rep;
  };

  std::vector<int> order;
  switch (rotation) {
    case RealizeRotation::XY: order = {0}; break;
    case RealizeRotation::YZ: order = {1}; break;
    case RealizeRotation::ZX: order = {2}; break;
    case RealizeRotation::Auto: {
      order = {0, 1, 2};
      std::sort(order.begin(), order.end(), [&](int lhs, int rhs) {
        return slot_margin(t.coord((lhs + 2) % 3)) >
               slot_margin(t.coord((rhs + 2) % 3));
      });
      break;
    }
  }

  for (int r : order) {
    if (slot_margin(t.coord((r + 2) % 3)) < 1e-6) continue;
    GroupRep rep = build(r);
    if (realization_ok(rep, t)) return rep;
  }
  throw std::domain_error(
      "realize_matrices: no nondegenerate normal form for triple " +
      to_string(t));
}

Mat2c word_for_slope(const GroupRep& rep, const Slope& s,
                     const TraceWalkOptions& opt) {
  FareyPath path = farey_path(s, opt);
  using Base = FareyPath::Base;
  switch (path.base) {
    case Base::X: return rep.A;
    case Base::Y: return rep.B;
    case Base::Z: return rep.A * rep.B;
    case Base::MirrorZ: return rep.A * rep.B.inverse();
    case Base::Walk: break;
  }
  Mat2c wa = rep.A;
  Mat2c wb = path.negative ? rep.B.inverse() : rep.B;
  Mat2c wc = wa * wb;
  for (bool toward_b : path.steps) {
    if (toward_b) {
      Mat2c wn = wc * wb;
      wa = wc;
      wc = wn;
    } else {
      Mat2c wn = wa * wc;
      wb = wc;
      wc = wn;
    }
  }
  return wc;
}

FixedPoints fixed_points(const Mat2c& m) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  cx tr = m.trace();
  cx disc = std::sqrt(tr * tr - 4.0);
  cx mu_plus = (tr + disc) / 2.0;
  cx mu_minus = (tr - disc) / 2.0;
  if (std::abs(mu_plus) < std::abs(mu_minus)) std::swap(mu_plus, mu_minus);
  if (std::abs(m.c) < 1e-300) {
    cx other = std::abs(m.a - m.d) < 1e-300 ? cx{kInf, 0.0}
                                            : m.b / (m.d - m.a);
    bool inf_attracting = std::abs(m.a) >= std::abs(m.d);
    return inf_attracting ? FixedPoints{{kInf, 0.0}, other}
                          : FixedPoints{other, {kInf, 0.0}};
  }
  return {(mu_plus - m.d) / m.c, (mu_minus - m.d) / m.c};
}

}  // namespace qflab
