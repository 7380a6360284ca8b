#include "glueprint/geometric_pieces.hpp"

#include "glueprint/errors.hpp"

namespace glueprint::pieces {

bool is_seifert(const Piece& p) { return std::holds_alternative<SeifertPieceData>(p); }
bool is_hyperbolic(const Piece& p) { return std::holds_alternative<HyperbolicPieceData>(p); }

bool needs_orientation_cover(const Piece& p) {
  const auto* s = std::get_if<SeifertPieceData>(&p);
  return s && !s->base_orientable;
}

std::size_t torus_count(const Piece& p) {
  if (const auto* h = std::get_if<HyperbolicPieceData>(&p)) return h->cusp_forms.size();
  return std::get<SeifertPieceData>(p).tori.size();
}

Rational orbifold_euler_characteristic(const SeifertPieceData& s) {
  Rational chi = s.base_orientable ? Rational(2 - 2 * static_cast<long>(s.genus)) : Rational(2 - static_cast<long>(s.genus));
  chi -= static_cast<long>(s.tori.size());
  for (const auto& a : s.cone_orders) chi -= Rational(1) - Rational(1) / Rational(a);
  return chi;
}

Integer fiber_multiplicity(const SeifertPieceData& s) {
  Integer m = 1;
  for (const auto& a : s.cone_orders) mpz_lcm(m.get_mpz_t(), m.get_mpz_t(), a.get_mpz_t());
  return m;
}

void validate(const Piece& p, const std::string& path) {
  if (const auto* h = std::get_if<HyperbolicPieceData>(&p)) {
    for (std::size_t t = 0; t < h->cusp_forms.size(); ++t) {
      const std::string tp = path + ".cusp_forms[" + std::to_string(t) + "]";
      const auto& q = h->cusp_forms[t];
      if (q.rank() != 2) throw ValidationError(tp, "cusp form must have rank 2");
      if (!q.is_positive_definite()) throw ValidationError(tp, "cusp form must be positive definite");
      Rational least = -1;
      for (const auto& v : lattice::short_vectors(q, 1, false)) {
        if (v[0] == 0 && v[1] == 0) continue;
        const Rational val = q.value(v);
        if (least < 0 || val < least) least = val;
      }
      if (least != 1) throw ValidationError(tp, "cusp form is not normalized (shortest primitive value must be 1)");
    }
    const std::size_t n = h->cusp_forms.size();
    if (h->del_h2.ambient_rank() != 2 * n)
      throw ValidationError(path + ".del_h2", "basis vectors must have length " + std::to_string(2 * n));
    if (h->del_h2.rank() != n)
      throw ValidationError(path + ".del_h2", "rank must equal the number of cusps (" + std::to_string(n) + ")");
    return;
  }
  const auto& s = std::get<SeifertPieceData>(p);
  if (!s.base_orientable && s.genus == 0)
    throw ValidationError(path + ".genus", "a non-orientable base needs genus at least 1");
  for (std::size_t i = 0; i < s.cone_orders.size(); ++i)
    if (s.cone_orders[i] < 2)
      throw ValidationError(path + ".cone_orders[" + std::to_string(i) + "]", "cone orders must be at least 2");
  if (orbifold_euler_characteristic(s) >= 0)
    throw ValidationError(path, "base orbifold must be hyperbolic (Euler characteristic " +
                                    to_string(orbifold_euler_characteristic(s)) + ")");
  const Integer m = fiber_multiplicity(s);
  for (std::size_t t = 0; t < s.tori.size(); ++t) {
    const std::string tp = path + ".tori[" + std::to_string(t) + "]";
    if (s.tori[t].divisibility < 1) throw ValidationError(tp + ".divisibility", "divisibility must be positive");
    // <mu, lambda> = mu_x for lambda = e2.
    if (s.tori[t].mu_x != m)
      throw ValidationError(tp + ".mu", "mu must pair with the fiber to " + to_string(m) + ", got " +
                                            to_string(s.tori[t].mu_x));
  }
}

RatMatrix torus_form(const Piece& p, std::size_t t) {
  if (t >= torus_count(p)) throw DimensionError("torus index out of range");
  if (const auto* h = std::get_if<HyperbolicPieceData>(&p)) return h->cusp_forms[t].gram();
  const Integer d = std::get<SeifertPieceData>(p).tori[t].divisibility;
  return RatMatrix{{Rational(d * d), Rational(0)}, {Rational(0), Rational(0)}};
}

lattice::QForm boundary_form(const Piece& p) {
  std::vector<RatMatrix> blocks;
  for (std::size_t t = 0; t < torus_count(p); ++t) blocks.push_back(torus_form(p, t));
  return lattice::QForm::from_gram(direct_sum(blocks));
}

lattice::Sublattice del_h2_lattice(const Piece& p) {
  if (const auto* h = std::get_if<HyperbolicPieceData>(&p)) return h->del_h2;
  const auto& s = std::get<SeifertPieceData>(p);
  if (!s.base_orientable)
    throw PreconditionError("boundary image of a piece over a non-orientable base: pass to the double cover first");
  const std::size_t n = s.tori.size();
  if (n == 0) return lattice::Sublattice(0, IntMatrix(0, 0));
  IntMatrix b(n, 2 * n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    b(i, 2 * i + 1) = 1;
    b(i, 2 * i + 3) = -1;
  }
  for (std::size_t t = 0; t < n; ++t) {
    b(n - 1, 2 * t) = s.tori[t].mu_x;
    b(n - 1, 2 * t + 1) = s.tori[t].mu_lambda;
  }
  return lattice::Sublattice(2 * n, std::move(b));
}

SeifertPieceData piece_double_cover(const SeifertPieceData& s) {
  if (s.base_orientable) throw PreconditionError("piece_double_cover needs a non-orientable base");
  if (s.genus == 0) throw PreconditionError("non-orientable base of genus 0");
  SeifertPieceData c;
  c.base_orientable = true;
  c.genus = s.genus - 1;
  c.cone_orders = s.cone_orders;
  c.cone_orders.insert(c.cone_orders.end(), s.cone_orders.begin(), s.cone_orders.end());
  c.tori = s.tori;
  c.tori.insert(c.tori.end(), s.tori.begin(), s.tori.end());
  return c;
}

}  // namespace glueprint::pieces
