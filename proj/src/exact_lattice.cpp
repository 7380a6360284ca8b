#include "glueprint/exact_lattice.hpp"

#include <algorithm>
#include <functional>
#include <utility>

#include "glueprint/errors.hpp"

namespace glueprint::lattice {

namespace {

std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return out;
  while (true) {
    out.push_back(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

// Unimodular row reduction to echelon form. Applies the same row operations
// to `companion` when it is non-null.
std::size_t echelonize(IntMatrix& a, IntMatrix* companion) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  auto swap_rows = [&](std::size_t r1, std::size_t r2) {
    if (r1 == r2) return;
    for (std::size_t j = 0; j < cols; ++j) std::swap(a(r1, j), a(r2, j));
    if (companion)
      for (std::size_t j = 0; j < companion->cols(); ++j) std::swap((*companion)(r1, j), (*companion)(r2, j));
  };
  auto axpy = [&](std::size_t dst, std::size_t src, const Integer& f) {  // row dst -= f * row src
    for (std::size_t j = 0; j < cols; ++j) a(dst, j) -= f * a(src, j);
    if (companion)
      for (std::size_t j = 0; j < companion->cols(); ++j) (*companion)(dst, j) -= f * (*companion)(src, j);
  };

  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < cols && pivot_row < rows; ++c) {
    while (true) {
      std::size_t best = rows;
      for (std::size_t r = pivot_row; r < rows; ++r)
        if (a(r, c) != 0 && (best == rows || abs(a(r, c)) < abs(a(best, c)))) best = r;
      if (best == rows) break;
      swap_rows(pivot_row, best);
      bool done = true;
      for (std::size_t r = pivot_row + 1; r < rows; ++r) {
        if (a(r, c) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a(r, c).get_mpz_t(), a(pivot_row, c).get_mpz_t());
        axpy(r, pivot_row, q);
        if (a(r, c) != 0) done = false;
      }
      if (done) break;
    }
    if (a(pivot_row, c) != 0) ++pivot_row;
  }
  return pivot_row;
}

IntMatrix integerize(const RatMatrix& m) {
  Integer scale = 1;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), m(i, j).get_den_mpz_t());
  IntMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Rational v = m(i, j) * scale;
      out(i, j) = v.get_num();
    }
  return out;
}

bool is_symmetric(const RatMatrix& m) {
  if (m.rows() != m.cols()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (m(i, j) != m(j, i)) return false;
  return true;
}

RatMatrix compound_gram(const RatMatrix& g, const std::vector<std::vector<std::size_t>>& subsets) {
  const std::size_t m = subsets.size();
  const std::size_t k = subsets.empty() ? 0 : subsets.front().size();
  RatMatrix out(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a; b < m; ++b) {
      RatMatrix minor(k, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) minor(i, j) = g(subsets[a][i], subsets[b][j]);
      out(a, b) = determinant(minor);
      out(b, a) = out(a, b);
    }
  return out;
}

bool lex_less(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) return a.rows() < b.rows();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return a(i, j) < b(i, j);
  return false;
}

}  // namespace

PsdReport ldlt_psd(const RatMatrix& symmetric) {
  if (!is_symmetric(symmetric)) throw ValidationError("", "matrix is not symmetric");
  RatMatrix a = symmetric;
  const std::size_t n = a.rows();
  std::vector<bool> active(n, true);
  PsdReport report;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pivot = n;
    for (std::size_t i = 0; i < n; ++i)
      if (active[i] && a(i, i) != 0) {
        pivot = i;
        break;
      }
    if (pivot == n) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (active[i] && active[j] && a(i, j) != 0) return report;
      report.positive_semidefinite = true;
      return report;
    }
    if (a(pivot, pivot) < 0) return report;
    active[pivot] = false;
    ++report.rank;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i] || a(i, pivot) == 0) continue;
      const Rational f = a(i, pivot) / a(pivot, pivot);
      for (std::size_t j = 0; j < n; ++j)
        if (active[j]) a(i, j) -= f * a(pivot, j);
    }
  }
  report.positive_semidefinite = true;
  return report;
}

QForm QForm::from_gram(RatMatrix gram) {
  if (gram.rows() != gram.cols()) throw ValidationError("gram", "Gram matrix must be square");
  if (!is_symmetric(gram)) throw ValidationError("gram", "Gram matrix must be symmetric");
  const PsdReport r = ldlt_psd(gram);
  if (!r.positive_semidefinite) throw ValidationError("gram", "quadratic form is not positive semidefinite");
  QForm q;
  q.gram_ = std::move(gram);
  q.kernel_rank_ = q.gram_.rows() - r.rank;
  return q;
}

QForm QForm::identity(std::size_t n) { return from_gram(RatMatrix::identity(n)); }

QForm QForm::diagonal(const std::vector<Rational>& entries) {
  RatMatrix g(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) g(i, i) = entries[i];
  return from_gram(std::move(g));
}

Rational QForm::bilinear(std::span<const Integer> a, std::span<const Integer> b) const {
  if (a.size() != rank() || b.size() != rank()) throw DimensionError("vector length differs from form rank");
  Rational s = 0;
  for (std::size_t i = 0; i < rank(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < rank(); ++j)
      if (b[j] != 0) s += gram_(i, j) * Rational(a[i] * b[j]);
  }
  return s;
}

Rational QForm::value(std::span<const Integer> v) const { return bilinear(v, v); }

IntMatrix QForm::kernel_basis() const { return integer_kernel(integerize(gram_)); }

Sublattice::Sublattice(std::size_t ambient_rank, IntMatrix basis) : ambient_rank_(ambient_rank), basis_(std::move(basis)) {
  if (basis_.rows() > 0 && basis_.cols() != ambient_rank_)
    throw ValidationError("basis", "basis vectors must have length " + std::to_string(ambient_rank_));
  if (basis_.rows() == 0) basis_ = IntMatrix(0, ambient_rank_);
  if (rational_rank(to_rational(basis_)) != basis_.rows())
    throw ValidationError("basis", "basis vectors are linearly dependent over Q");
}

Sublattice Sublattice::from_rows(std::size_t ambient_rank, const std::vector<IntVector>& rows) {
  IntMatrix m(rows.size(), ambient_rank);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != ambient_rank)
      throw ValidationError("basis[" + std::to_string(i) + "]", "wrong vector length");
    for (std::size_t j = 0; j < ambient_rank; ++j) m(i, j) = rows[i][j];
  }
  return Sublattice(ambient_rank, std::move(m));
}

Sublattice Sublattice::standard(std::size_t n) { return Sublattice(n, IntMatrix::identity(n)); }

IntMatrix Sublattice::hermite_form() const { return hermite_normal_form(basis_); }

bool Sublattice::same_module(const Sublattice& other) const {
  return ambient_rank_ == other.ambient_rank_ && hermite_form() == other.hermite_form();
}

RatMatrix restricted_gram(const Sublattice& w, const QForm& q) {
  if (w.ambient_rank() != q.rank()) throw DimensionError("sublattice ambient rank differs from form rank");
  const RatMatrix b = to_rational(w.basis());
  return multiply(multiply(b, q.gram()), b.transpose());
}

Rational discriminant(const Sublattice& w, const QForm& q) {
  const RatMatrix g = restricted_gram(w, q);
  if (g.rows() == 0) return 1;
  return determinant(g);
}

bool dominates(const QForm& q1, const QForm& q2) {
  if (q1.rank() != q2.rank()) throw DimensionError("dominates: forms of different rank");
  return ldlt_psd(subtract(q1.gram(), q2.gram())).positive_semidefinite;
}

std::vector<IntVector> short_vectors(const QForm& q, const Rational& bound, bool strict) {
  if (!q.is_positive_definite()) throw PreconditionError("short_vectors requires a positive-definite form");
  const std::size_t n = q.rank();
  const RatMatrix& g = q.gram();
  // g = U^T diag(d) U with U unit upper triangular.
  std::vector<Rational> d(n);
  RatMatrix u = RatMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rational s = g(i, i);
    for (std::size_t k = 0; k < i; ++k) s -= d[k] * u(k, i) * u(k, i);
    d[i] = s;
    for (std::size_t j = i + 1; j < n; ++j) {
      Rational t = g(i, j);
      for (std::size_t k = 0; k < i; ++k) t -= d[k] * u(k, i) * u(k, j);
      u(i, j) = t / d[i];
    }
  }

  std::vector<IntVector> out;
  IntVector x(n);
  std::function<void(std::size_t, const Rational&)> descend = [&](std::size_t level, const Rational& used) {
    const std::size_t i = level - 1;
    Rational center = 0;
    for (std::size_t j = i + 1; j < n; ++j) center -= u(i, j) * Rational(x[j]);
    const Rational room = bound - used;
    if (room < 0 || (strict && room == 0)) return;
    const Integer reach = floor_sqrt(room / d[i]) + 1;
    const Integer lo = floor_of(center) - reach;
    const Integer hi = ceil_of(center) + reach;
    for (Integer xi = lo; xi <= hi; ++xi) {
      const Rational diff = Rational(xi) - center;
      const Rational term = d[i] * diff * diff;
      if (strict ? !(term < room) : !(term <= room)) continue;
      x[i] = xi;
      if (i == 0)
        out.push_back(x);
      else
        descend(i, used + term);
    }
    x[i] = 0;
  };
  if (n == 0) {
    if (strict ? Rational(0) < bound : Rational(0) <= bound) out.emplace_back();
    return out;
  }
  descend(n, Rational(0));
  return out;
}

IntMatrix hermite_normal_form(const IntMatrix& rows) {
  IntMatrix a = rows;
  const std::size_t r = echelonize(a, nullptr);
  IntMatrix h(r, a.cols());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) h(i, j) = a(i, j);
  std::size_t col = 0;
  for (std::size_t i = 0; i < r; ++i) {
    while (h(i, col) == 0) ++col;
    if (h(i, col) < 0)
      for (std::size_t j = 0; j < h.cols(); ++j) h(i, j) = -h(i, j);
    for (std::size_t k = 0; k < i; ++k) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), h(k, col).get_mpz_t(), h(i, col).get_mpz_t());
      if (q != 0)
        for (std::size_t j = 0; j < h.cols(); ++j) h(k, j) -= q * h(i, j);
    }
  }
  return h;
}

IntMatrix integer_kernel(const IntMatrix& m) {
  const std::size_t n = m.cols();
  IntMatrix t = m.transpose();  // n x rows
  IntMatrix track = IntMatrix::identity(n);
  const std::size_t r = echelonize(t, &track);
  IntMatrix k(n - r, n);
  for (std::size_t i = r; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) k(i - r, j) = track(i, j);
  return hermite_normal_form(k);
}

IntMatrix saturate(const IntMatrix& rows) {
  if (rows.rows() == 0) return IntMatrix(0, rows.cols());
  const IntMatrix k = integer_kernel(rows);
  if (k.rows() == 0) return IntMatrix::identity(rows.cols());
  return integer_kernel(k);
}

std::size_t rational_rank(const RatMatrix& m) {
  RatMatrix a = m;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < a.cols() && rank < a.rows(); ++c) {
    std::size_t p = rank;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(rank, j));
    for (std::size_t i = rank + 1; i < a.rows(); ++i) {
      if (a(i, c) == 0) continue;
      const Rational f = a(i, c) / a(rank, c);
      for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(rank, j);
    }
    ++rank;
  }
  return rank;
}

Integer content(std::span<const Integer> v) {
  Integer g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

IntVector plucker_coordinates(const IntMatrix& rows) {
  const std::size_t k = rows.rows();
  IntVector out;
  for (const auto& cols : combinations(rows.cols(), k)) {
    IntMatrix minor(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) minor(i, j) = rows(i, cols[j]);
    out.push_back(determinant(minor));
  }
  return out;
}

std::vector<Sublattice> enumerate_small_sublattices(const QForm& q, std::size_t k, const Rational& bound,
                                                     SublatticeScope scope) {
  if (!q.is_positive_definite())
    throw PreconditionError("enumerate_small_sublattices requires a positive-definite form");
  const std::size_t n = q.rank();
  if (k > n) throw DimensionError("sublattice rank exceeds ambient rank");

  std::vector<std::pair<Rational, Sublattice>> found;
  if (k == 0) {
    if (Rational(1) < bound) found.emplace_back(Rational(1), Sublattice(n, IntMatrix(0, n)));
  } else {
    // Cauchy-Binet: discriminant(W) is the compound form evaluated on the
    // Plucker vector of W.
    const auto subsets = combinations(n, k);
    const QForm compound = QForm::from_gram(compound_gram(q.gram(), subsets));
    for (auto& p : short_vectors(compound, bound, true)) {
      std::size_t lead = 0;
      while (lead < p.size() && p[lead] == 0) ++lead;
      if (lead == p.size() || p[lead] < 0) continue;
      if (content(p) != 1) continue;
      // Recover W tensor Q from the Plucker vector, using the first nonzero
      // coordinate's index set.
      const auto& base = subsets[lead];
      IntMatrix span(k, n);
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t j = 0; j < n; ++j) {
          std::vector<std::size_t> idx = base;
          idx[a] = j;
          std::vector<std::size_t> sorted = idx;
          std::sort(sorted.begin(), sorted.end());
          if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
          int sign = 1;
          for (std::size_t s = 0; s < k; ++s)
            for (std::size_t t = s + 1; t < k; ++t)
              if (idx[s] > idx[t]) sign = -sign;
          const auto pos = std::find(subsets.begin(), subsets.end(), sorted) - subsets.begin();
          span(a, j) = sign * p[static_cast<std::size_t>(pos)];
        }
      if (rational_rank(to_rational(span)) != k) continue;
      const IntMatrix w = saturate(span);
      IntVector pw = plucker_coordinates(w);
      if (pw != p) {
        for (auto& x : pw) x = -x;
        if (pw != p) continue;  // not decomposable
      }
      Sublattice sat(n, w);
      const Rational disc = discriminant(sat, q);
      if (scope == SublatticeScope::saturated) {
        found.emplace_back(disc, Sublattice(n, sat.hermite_form()));
        continue;
      }
      // Every finite-index submodule of the saturation, via Hermite matrices.
      for (Integer index = 1; Rational(index * index) * disc < bound; ++index) {
        std::vector<std::vector<Integer>> diagonals;
        std::vector<Integer> current;
        std::function<void(const Integer&, std::size_t)> split = [&](const Integer& rest, std::size_t slot) {
          if (slot + 1 == k) {
            current.push_back(rest);
            diagonals.push_back(current);
            current.pop_back();
            return;
          }
          for (Integer dvd = 1; dvd <= rest; ++dvd)
            if (rest % dvd == 0) {
              current.push_back(dvd);
              split(rest / dvd, slot + 1);
              current.pop_back();
            }
        };
        split(index, 0);
        for (const auto& diag : diagonals) {
          IntMatrix h(k, k);
          for (std::size_t i = 0; i < k; ++i) h(i, i) = diag[i];
          std::function<void(std::size_t, std::size_t)> fill = [&](std::size_t i, std::size_t j) {
            if (i == k) {
              IntMatrix rows(k, n);
              for (std::size_t a = 0; a < k; ++a)
                for (std::size_t b = 0; b < n; ++b)
                  for (std::size_t c = 0; c < k; ++c) rows(a, b) += h(a, c) * w(c, b);
              Sublattice sub(n, hermite_normal_form(rows));
              found.emplace_back(disc * Rational(index * index), std::move(sub));
              return;
            }
            if (j == k) {
              fill(i + 1, i + 2);
              return;
            }
            for (Integer v = 0; v < diag[j]; ++v) {
              h(i, j) = v;
              fill(i, j + 1);
            }
            h(i, j) = 0;
          };
          fill(0, 1);
        }
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return lex_less(a.second.basis(), b.second.basis());
  });
  std::vector<Sublattice> out;
  out.reserve(found.size());
  for (auto& f : found) out.push_back(std::move(f.second));
  return out;
}

}  // namespace glueprint::lattice
