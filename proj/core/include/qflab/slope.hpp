#pragma once

#include <string>
#include <variant>
#include <vector>

namespace qflab {

/// Unoriented essential simple closed curve on the once punctured torus,
/// stored as a reduced fraction p/q. The curve "at infinity" is 1/0; for
/// q > 0 the sign lives in the numerator. Always construct through
/// normalize_slope so the canonical form is an invariant, not a convention.
struct Slope {
  long long p = 0;
  long long q = 1;

  friend bool operator==(const Slope&, const Slope&) = default;
  friend auto operator<=>(const Slope&, const Slope&) = default;
};

/// Reduce and canonically sign p/q. Rejects (0, 0); (p, 0) normalizes to 1/0.
Slope normalize_slope(long long p, long long q);

/// |p_a q_b - q_a p_b|, the geometric intersection number of the two curves.
long long intersection_number(const Slope& a, const Slope& b);

/// True iff the two slopes span an edge of the Farey tessellation.
bool is_farey_neighbor(const Slope& a, const Slope& b);

/// (p_a + p_b)/(q_a + q_b) for Farey neighbors; throws otherwise.
/// The 1/0 slope participates with sign matching the companion, so
/// mediants on the negative side come out right.
Slope farey_mediant(const Slope& a, const Slope& b);

/// A Farey neighbor of s, canonical among the infinitely many choices:
/// the parent with the smallest denominator (0 <= q' < q for q >= 1).
Slope farey_parent(const Slope& s);

std::string to_string(const Slope& s);
Slope parse_slope(const std::string& text);

/// Irrational slope given by an eventually periodic continued fraction
/// [a0; a1, a2, ...]: an initial block followed by a cycle repeating
/// forever. a0 >= 0 and all later quotients >= 1, so the value is a
/// positive irrational and convergents obey |value - p_n/q_n| < 1/q_n^2.
///
/// Instances are canonicalized (primitive cycle, trailing head terms
/// absorbed), so equality of representations is equality of values.
class IrrationalSlope {
 public:
  /// head = leading quotients, cycle = repeating tail (must be nonempty).
  IrrationalSlope(std::vector<long long> head, std::vector<long long> cycle);

  long long quotient(int i) const;
  double value() const { return value_; }

  /// Number of convergents behind value(); the finest index used by
  /// intersection computations against this slope.
  int value_terms() const { return value_terms_; }

  const std::vector<long long>& head() const { return head_; }
  const std::vector<long long>& cycle() const { return cycle_; }

  /// Preferred truncation length for serialization; not part of the value.
  int serialization_terms() const { return serialization_terms_; }
  void set_serialization_terms(int n);

  friend bool operator==(const IrrationalSlope& a, const IrrationalSlope& b) {
    return a.head_ == b.head_ && a.cycle_ == b.cycle_;
  }

 private:
  std::vector<long long> head_;
  std::vector<long long> cycle_;
  double value_ = 0.0;
  int value_terms_ = 0;
  int serialization_terms_ = 24;
};

/// First n continued-fraction convergents p_k/q_k. Throws on n < 1 or on
/// 64-bit overflow of the recurrence.
std::vector<Slope> convergents(const IrrationalSlope& s, int n);

/// "[a0;a1,...,ak]xN" with N explicit truncation terms.
std::string to_string(const IrrationalSlope& s);
std::string to_string(const IrrationalSlope& s, int terms);

/// Parses "[a0;a1,...,ak]xN". The listed quotients are taken verbatim and
/// the final one repeats forever; N records the truncation used downstream.
IrrationalSlope parse_irrational_slope(const std::string& text);

/// Measured lamination: a (rational or irrational) slope with a positive
/// transverse weight. The projective class is the support alone.
struct Lamination {
  std::variant<Slope, IrrationalSlope> support;
  double weight = 1.0;

  bool is_rational() const { return std::holds_alternative<Slope>(support); }
  const Slope& slope() const { return std::get<Slope>(support); }
  const IrrationalSlope& irrational() const {
    return std::get<IrrationalSlope>(support);
  }
};

Lamination make_lamination(const Slope& s, double weight = 1.0);
Lamination make_lamination(const IrrationalSlope& s, double weight = 1.0);

bool same_projective_class(const Lamination& a, const Lamination& b);

struct IntersectionDetail {
  double value = 0.0;
  /// Index of the finest convergent used; -1 when the computation is exact.
  int convergent_index = -1;
};

/// i(a, b). Exact integer arithmetic for two rational supports; otherwise
/// evaluated at the finest convergent of the irrational side(s), with the
/// index used reported in the detail. Weighted convergents c_n = w/q_n give
/// the normalization i(mu, delta_{p/q}) = w |v q - p| for irrational value v.
IntersectionDetail intersection_detail(const Lamination& a,
                                       const Lamination& b);
double intersection(const Lamination& a, const Lamination& b);

std::string to_string(const Lamination& m);

}  // namespace qflab
