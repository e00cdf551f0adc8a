#pragma once

#include <array>

#include "qflab/markov.hpp"

namespace qflab {

/// 2x2 complex matrix, row major.
struct Mat2c {
  cx a{1}, b{0}, c{0}, d{1};

  cx trace() const { return a + d; }
  cx det() const { return a * d - b * c; }
  Mat2c inverse() const;  // assumes det == 1

  friend Mat2c operator*(const Mat2c& m, const Mat2c& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }

  std::array<cx, 4> flat() const { return {a, b, c, d}; }
};

/// Marked pair of unit-determinant matrices generating a punctured-torus
/// group: A is the 0/1 curve, B the 1/0 curve, and [A, B] is parabolic of
/// trace -2 whenever the source triple satisfies the Markov identity.
struct GroupRep {
  Mat2c A, B;

  Mat2c commutator() const;
};

/// Which coordinate of the triple sits in the diagonalized slot of the
/// normal form. Auto picks the first rotation whose slot trace stays away
/// from +-2, where the construction degenerates.
enum class RealizeRotation { Auto, XY, YZ, ZX };

/// Explicit normal form for a triple: matrices reproducing (x, y, z) and
/// the parabolic commutator within TraceTriple::kRelTol. The normalization
/// pins the AB axis of the rotated slot; it is an internal convention, and
/// any rotation yields PSL(2, C)-conjugate groups.
GroupRep realize_matrices(const TraceTriple& t,
                          RealizeRotation rotation = RealizeRotation::Auto);

/// The word in (A, B) representing the simple closed curve of slope s,
/// built along the same Farey path as the trace recursion, so
/// word_for_slope(...).trace() agrees with trace_of_slope.
Mat2c word_for_slope(const GroupRep& rep, const Slope& s,
                     const TraceWalkOptions& opt = {});

/// Fixed points on the Riemann sphere; second entry may be infinity for
/// parabolic or upper triangular input. For loxodromic input the first
/// entry is the attracting point.
struct FixedPoints {
  cx attracting;
  cx repelling;
};
FixedPoints fixed_points(const Mat2c& m);

}  // namespace qflab
