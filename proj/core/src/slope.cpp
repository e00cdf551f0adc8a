#include "qflab/slope.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qflab {

Slope normalize_slope(long long p, long long q) {
  if (p == 0 && q == 0) {
    throw std::invalid_argument("normalize_slope: (0, 0) is not a slope");
  }
  if (q == 0) {
    return Slope{1, 0};
  }
  long long g = std::gcd(std::llabs(p), std::llabs(q));
  p /= g;
  q /= g;
  if (q < 0) {
    p = -p;
    q = -q;
  }
  return Slope{p, q};
}

long long intersection_number(const Slope& a, const Slope& b) {
  return std::llabs(a.p * b.q - a.q * b.p);
}

bool is_farey_neighbor(const Slope& a, const Slope& b) {
  return intersection_number(a, b) == 1;
}

Slope farey_mediant(const Slope& a, const Slope& b) {
  if (!is_farey_neighbor(a, b)) {
    throw std::invalid_argument("farey_mediant: slopes are not Farey neighbors");
  }
  // 1/0 must enter with the sign of the finite companion, else the mediant
  // of e.g. (-1/1, 1/0) would land on the wrong side.
  long long pa = a.p, qa = a.q, pb = b.p, qb = b.q;
  if (qa == 0 && pb < 0) pa = -pa;
  if (qb == 0 && pa < 0) pb = -pb;
  return normalize_slope(pa + pb, qa + qb);
}

Slope farey_parent(const Slope& s) {
  if (s.q == 0) return Slope{0, 1};
  if (s.q == 1) return Slope{1, 0};
  // Solve p q' - q p' = +-1 with 0 < q' < q by the extended Euclidean
  // algorithm; the smallest-denominator neighbor is unique up to that sign.
  long long r0 = s.q, r1 = ((s.p % s.q) + s.q) % s.q;
  long long t0 = 0, t1 = 1;
  while (r1 != 0) {
    long long k = r0 / r1;
    std::tie(r0, r1) = std::pair{r1, r0 - k * r1};
    std::tie(t0, t1) = std::pair{t1, t0 - k * t1};
  }
  long long qp = std::llabs(t0);
  if (qp == 0 || qp >= s.q) qp = s.q - qp;  // defensive, should not trigger
  // Recover p' from |p q' - q p'| = 1.
  long long num = s.p * qp;
  long long pp = (num - 1) % s.q == 0 ? (num - 1) / s.q : (num + 1) / s.q;
  Slope cand = normalize_slope(pp, qp);
  if (intersection_number(s, cand) != 1) {
    throw std::logic_error("farey_parent: internal inconsistency");
  }
  return cand;
}

std::string to_string(const Slope& s) {
  return std::to_string(s.p) + "/" + std::to_string(s.q);
}

Slope parse_slope(const std::string& text) {
  auto bar = text.find('/');
  if (bar == std::string::npos) {
    throw std::invalid_argument("parse_slope: expected \"p/q\", got \"" + text +
                                "\"");
  }
  try {
    size_t used_p = 0, used_q = 0;
    long long p = std::stoll(text.substr(0, bar), &used_p);
    long long q = std::stoll(text.substr(bar + 1), &used_q);
    if (used_p != bar || used_q != text.size() - bar - 1) {
      throw std::invalid_argument("trailing characters");
    }
    return normalize_slope(p, q);
  } catch (const std::exception&) {
    throw std::invalid_argument("parse_slope: malformed slope \"" + text +
                                "\"");
  }
}

namespace {

// Minimal rotation/primitive-block canonical form of the cycle, with
// trailing head quotients absorbed into the rotation. Two eventually
// periodic sequences are equal iff their canonical forms are.
void canonicalize(std::vector<long long>& head, std::vector<long long>& cycle) {
  for (size_t d = 1; d < cycle.size(); ++d) {
    if (cycle.size() % d != 0) continue;
    bool periodic = true;
    for (size_t i = d; i < cycle.size() && periodic; ++i) {
      periodic = cycle[i] == cycle[i % d];
    }
    if (periodic) {
      cycle.resize(d);
      break;
    }
  }
  while (!head.empty() && head.back() == cycle.back()) {
    head.pop_back();
    std::rotate(cycle.begin(), cycle.end() - 1, cycle.end());
  }
}

std::pair<double, int> evaluate_cf(const IrrationalSlope& s) {
  // Forward convergent recurrence; all terms positive so there is no
  // cancellation. Stop once the q_n^2 error bound is below double epsilon.
  long double pm1 = 1, qm1 = 0;
  long double p0 = s.quotient(0), q0 = 1;
  int used = 1;
  for (int i = 1; i < 256; ++i) {
    long double a = static_cast<long double>(s.quotient(i));
    long double p1 = a * p0 + pm1;
    long double q1 = a * q0 + qm1;
    pm1 = p0;
    qm1 = q0;
    p0 = p1;
    q0 = q1;
    used = i + 1;
    if (q0 > 3e9L) break;  // 1/q^2 < 1e-19
  }
  return {static_cast<double>(p0 / q0), used};
}

}  // namespace

IrrationalSlope::IrrationalSlope(std::vector<long long> head,
                                 std::vector<long long> cycle)
    : head_(std::move(head)), cycle_(std::move(cycle)) {
  if (cycle_.empty()) {
    throw std::invalid_argument("IrrationalSlope: cycle must be nonempty");
  }
  for (size_t i = 0; i < head_.size(); ++i) {
    if (head_[i] < (i == 0 ? 0 : 1)) {
      throw std::invalid_argument("IrrationalSlope: invalid partial quotient");
    }
  }
  for (long long a : cycle_) {
    if (a < 1) {
      throw std::invalid_argument("IrrationalSlope: cycle quotients must be >= 1");
    }
  }
  canonicalize(head_, cycle_);
  std::tie(value_, value_terms_) = evaluate_cf(*this);
}

long long IrrationalSlope::quotient(int i) const {
  if (i < 0) throw std::out_of_range("IrrationalSlope::quotient");
  size_t k = static_cast<size_t>(i);
  if (k < head_.size()) return head_[k];
  return cycle_[(k - head_.size()) % cycle_.size()];
}

void IrrationalSlope::set_serialization_terms(int n) {
  if (n < 1) throw std::invalid_argument("serialization_terms must be >= 1");
  serialization_terms_ = n;
}

std::vector<Slope> convergents(const IrrationalSlope& s, int n) {
  if (n < 1) throw std::invalid_argument("convergents: n must be >= 1");
  std::vector<Slope> out;
  out.reserve(n);
  long long pm1 = 1, qm1 = 0;
  long long p0 = s.quotient(0), q0 = 1;
  out.push_back(Slope{p0, q0});
  for (int i = 1; i < n; ++i) {
    long long a = s.quotient(i);
    long long p1 = 0, q1 = 0;
    if (__builtin_mul_overflow(a, p0, &p1) || __builtin_add_overflow(p1, pm1, &p1) ||
        __builtin_mul_overflow(a, q0, &q1) || __builtin_add_overflow(q1, qm1, &q1)) {
      throw std::overflow_error("convergents: recurrence overflows 64 bits");
    }
    pm1 = p0;
    qm1 = q0;
    p0 = p1;
    q0 = q1;
    out.push_back(Slope{p0, q0});
  }
  return out;
}

std::string to_string(const IrrationalSlope& s) {
  return to_string(s, s.serialization_terms());
}

std::string to_string(const IrrationalSlope& s, int terms) {
  std::ostringstream os;
  os << "[" << s.quotient(0);
  for (int i = 1; i < terms; ++i) {
    os << (i == 1 ? ";" : ",") << s.quotient(i);
  }
  os << "]x" << terms;
  return os.str();
}

IrrationalSlope parse_irrational_slope(const std::string& text) {
  auto fail = [&]() -> IrrationalSlope {
    throw std::invalid_argument(
        "parse_irrational_slope: expected \"[a0;a1,...]xN\", got \"" + text +
        "\"");
  };
  auto close = text.find(']');
  if (text.empty() || text.front() != '[' || close == std::string::npos)
    return fail();
  std::string body = text.substr(1, close - 1);
  std::string tail = text.substr(close + 1);
  int terms = 24;
  if (!tail.empty()) {
    if (tail.front() != 'x') return fail();
    try {
      terms = std::stoi(tail.substr(1));
    } catch (const std::exception&) {
      return fail();
    }
    if (terms < 1) return fail();
  }
  std::vector<long long> quotients;
  std::string tok;
  for (char& c : body) {
    if (c == ';') c = ',';
  }
  std::istringstream is(body);
  while (std::getline(is, tok, ',')) {
    try {
      quotients.push_back(std::stoll(tok));
    } catch (const std::exception&) {
      return fail();
    }
  }
  if (quotients.empty()) return fail();
  std::vector<long long> cycle{quotients.back()};
  quotients.pop_back();
  IrrationalSlope s(std::move(quotients), std::move(cycle));
  s.set_serialization_terms(terms);
  return s;
}

Lamination make_lamination(const Slope& s, double weight) {
  if (!(weight > 0.0)) {
    throw std::invalid_argument("Lamination weight must be positive");
  }
  return Lamination{s, weight};
}

Lamination make_lamination(const IrrationalSlope& s, double weight) {
  if (!(weight > 0.0)) {
    throw std::invalid_argument("Lamination weight must be positive");
  }
  return Lamination{s, weight};
}

bool same_projective_class(const Lamination& a, const Lamination& b) {
  if (a.is_rational() != b.is_rational()) return false;
  if (a.is_rational()) return a.slope() == b.slope();
  return a.irrational() == b.irrational();
}

IntersectionDetail intersection_detail(const Lamination& a,
                                       const Lamination& b) {
  if (a.is_rational() && b.is_rational()) {
    double i = static_cast<double>(intersection_number(a.slope(), b.slope()));
    return {a.weight * b.weight * i, -1};
  }
  // Homogeneous coordinates (alpha, beta): (p, q) for a rational support,
  // (v, 1) for an irrational one evaluated at its finest convergent.
  auto coords = [](const Lamination& m, int& index) -> std::pair<double, double> {
    if (m.is_rational()) {
      return {static_cast<double>(m.slope().p),
              static_cast<double>(m.slope().q)};
    }
    index = std::max(index, m.irrational().value_terms());
    return {m.irrational().value(), 1.0};
  };
  int index = 0;
  auto [aa, ab] = coords(a, index);
  auto [ba, bb] = coords(b, index);
  if (!a.is_rational() && !b.is_rational() &&
      a.irrational() == b.irrational()) {
    return {0.0, index};
  }
  double det = std::abs(aa * bb - ab * ba);
  return {a.weight * b.weight * det, index};
}

double intersection(const Lamination& a, const Lamination& b) {
  return intersection_detail(a, b).value;
}

std::string to_string(const Lamination& m) {
  std::ostringstream os;
  os << m.weight << "*";
  if (m.is_rational()) {
    os << to_string(m.slope());
  } else {
    os << to_string(m.irrational());
  }
  return os.str();
}

}  // namespace qflab
