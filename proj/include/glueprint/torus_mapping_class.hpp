#pragma once

// Automorphisms of H_1(T^2) = Z^2: Dehn twists, form stabilizers and
// double cosets of form stabilizers.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "glueprint/exact_lattice.hpp"

namespace glueprint::torus {

using Slope = std::array<std::int64_t, 2>;

/// 2x2 integer matrix with determinant +1 or -1, acting on column vectors.
/// Products are overflow-checked.
class TorusAuto {
 public:
  TorusAuto() = default;

  /// Throws ValidationError when |det| != 1.
  static TorusAuto from_entries(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);
  static TorusAuto identity() { return TorusAuto(); }
  static TorusAuto minus_identity() { return from_entries(-1, 0, 0, -1); }

  std::int64_t operator()(int i, int j) const { return m_[2 * i + j]; }
  int det() const { return det_; }
  std::int64_t trace() const { return m_[0] + m_[3]; }

  TorusAuto inverse() const;
  TorusAuto negated() const;
  TorusAuto transpose() const;
  Slope apply(const Slope& v) const;
  IntMatrix matrix() const;
  RatMatrix rational() const;

  friend TorusAuto operator*(const TorusAuto& a, const TorusAuto& b);
  friend bool operator==(const TorusAuto& a, const TorusAuto& b) { return a.m_ == b.m_; }
  /// Lexicographic on (a, b, c, d).
  friend bool operator<(const TorusAuto& a, const TorusAuto& b) { return a.m_ < b.m_; }

  std::array<std::int64_t, 4> entries() const { return m_; }
  std::string to_string() const;

 private:
  std::array<std::int64_t, 4> m_{1, 0, 0, 1};
  int det_ = 1;
};

/// <a, b> = a0*b1 - a1*b0, so <e1, e2> = +1.
std::int64_t intersection(const Slope& a, const Slope& b);

/// zeta -> zeta + <zeta, gamma> gamma. Throws InvalidSlopeError unless gamma
/// is primitive.
TorusAuto dehn_twist(const Slope& gamma);

/// k-th power of dehn_twist(gamma), any integer k.
TorusAuto dehn_twist_power(const Slope& gamma, std::int64_t k);

/// k-th power of the twist along the fiber slope e2, i.e. [[1,0],[k,1]].
TorusAuto fiber_twist(std::int64_t k);

/// Gram of the result is a^T gram a.
lattice::QForm pullback_form(const lattice::QForm& q, const TorusAuto& a);
RatMatrix pullback_gram(const RatMatrix& gram, const TorusAuto& a);

/// Primitive integer vector spanning the kernel of a rank-2 form with kernel
/// rank 1, normalized so its first nonzero entry is positive.
Slope kernel_slope(const lattice::QForm& q);

/// Determinant-one stabilizer of a positive-definite rank-2 form, sorted.
std::vector<TorusAuto> finite_stabilizer(const lattice::QForm& q);

/// Kernel rank 1: {-I, twist along the kernel slope}. Kernel rank 0: every
/// element of the (finite) determinant-one stabilizer. Kernel rank 2 throws
/// UnsupportedError.
std::vector<TorusAuto> stabilizer_generators(const lattice::QForm& q);

struct DoubleCosetRep {
  TorusAuto rep;  // determinant +1
  Rational delta;
};

struct DoubleCosetCertificate {
  std::string regime;
  Rational search_bound;
  std::size_t candidates = 0;
  std::vector<std::string> steps;
};

struct DoubleCosetResult {
  std::vector<DoubleCosetRep> reps;  // sorted by (delta, entries)
  DoubleCosetCertificate certificate;
};

/// One representative per double coset G_q s G_qp (stabilizers inside SL)
/// with 0 < disc(q s + qp) < bound. Forms must have kernel rank <= 1, except
/// that a single zero form is accepted. A nonzero candidate_cap raises
/// ResourceCapError once the search would examine more candidates.
DoubleCosetResult double_coset_reps(const lattice::QForm& q, const lattice::QForm& qp, const Rational& bound,
                                    std::uint64_t candidate_cap = 0);

/// det(s^T G s + G').
Rational coset_discriminant(const RatMatrix& g, const TorusAuto& s, const RatMatrix& gp);

/// Determinant-one P with P e2 = gamma (gamma primitive).
TorusAuto slope_frame(const Slope& gamma);

}  // namespace glueprint::torus
