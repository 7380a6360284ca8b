#pragma once

// Exact linear algebra for quadratic forms on free Z-modules.

#include <cstddef>
#include <span>
#include <vector>

#include "glueprint/numeric.hpp"

namespace glueprint::lattice {

/// Outcome of an exact LDL^T sweep with diagonal pivoting.
struct PsdReport {
  bool positive_semidefinite = false;
  std::size_t rank = 0;
};

/// Decides positive semidefiniteness of a symmetric rational matrix exactly.
PsdReport ldlt_psd(const RatMatrix& symmetric);

/// Positive-semidefinite quadratic form on Z^n, stored as its Gram matrix.
class QForm {
 public:
  QForm() = default;

  /// Validates symmetry and positive semidefiniteness; throws ValidationError.
  static QForm from_gram(RatMatrix gram);
  static QForm identity(std::size_t n);
  static QForm diagonal(const std::vector<Rational>& entries);

  std::size_t rank() const { return gram_.rows(); }
  const RatMatrix& gram() const { return gram_; }
  std::size_t kernel_rank() const { return kernel_rank_; }
  bool is_positive_definite() const { return kernel_rank_ == 0; }

  Rational value(std::span<const Integer> v) const;
  Rational bilinear(std::span<const Integer> a, std::span<const Integer> b) const;

  /// Saturated integer basis (rows) of the kernel.
  IntMatrix kernel_basis() const;

  friend bool operator==(const QForm& a, const QForm& b) { return a.gram_ == b.gram_; }

 private:
  RatMatrix gram_;
  std::size_t kernel_rank_ = 0;
};

enum class SublatticeScope {
  saturated,  // W = (W tensor Q) cap Z^n
  all,        // every rank-k submodule
};

/// Submodule of Z^n given by Q-independent integer row vectors.
class Sublattice {
 public:
  Sublattice() = default;

  /// Throws ValidationError when rows are dependent or of the wrong length.
  Sublattice(std::size_t ambient_rank, IntMatrix basis);
  static Sublattice from_rows(std::size_t ambient_rank, const std::vector<IntVector>& rows);
  static Sublattice standard(std::size_t n);

  std::size_t ambient_rank() const { return ambient_rank_; }
  std::size_t rank() const { return basis_.rows(); }
  const IntMatrix& basis() const { return basis_; }

  /// Row-style Hermite normal form of the basis; equal iff same submodule.
  IntMatrix hermite_form() const;
  bool same_module(const Sublattice& other) const;

 private:
  std::size_t ambient_rank_ = 0;
  IntMatrix basis_;
};

/// det(B * gram * B^T); 1 for the zero module.
Rational discriminant(const Sublattice& w, const QForm& q);

/// Gram matrix of q restricted to the rows of w.
RatMatrix restricted_gram(const Sublattice& w, const QForm& q);

/// All rank-k submodules W of Z^n with discriminant(W, q) < bound, each in
/// Hermite form, ordered by (discriminant, Hermite entries).
std::vector<Sublattice> enumerate_small_sublattices(const QForm& q, std::size_t k, const Rational& bound,
                                                     SublatticeScope scope = SublatticeScope::saturated);

/// True iff q1 - q2 is positive semidefinite.
bool dominates(const QForm& q1, const QForm& q2);

/// Integer vectors v with q(v) < bound (strict) or <= bound; q positive
/// definite. Includes the zero vector when it qualifies. Fincke-Pohst over Q.
std::vector<IntVector> short_vectors(const QForm& q, const Rational& bound, bool strict = true);

/// Row-style Hermite normal form (nonzero rows only, positive pivots,
/// entries above each pivot reduced into [0, pivot)).
IntMatrix hermite_normal_form(const IntMatrix& rows);

/// Saturated basis (rows) of {x in Z^n : M x = 0}.
IntMatrix integer_kernel(const IntMatrix& m);

/// Saturation (W tensor Q) cap Z^n of a row lattice.
IntMatrix saturate(const IntMatrix& rows);

std::size_t rational_rank(const RatMatrix& m);

Integer content(std::span<const Integer> v);

/// Plucker coordinates of the rows (k x k minors in lexicographic column order).
IntVector plucker_coordinates(const IntMatrix& rows);

}  // namespace glueprint::lattice
