#include "glueprint/torus_mapping_class.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "glueprint/errors.hpp"

namespace glueprint::torus {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("integer overflow in torus automorphism arithmetic");
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error("integer overflow in torus automorphism arithmetic");
  return r;
}

std::int64_t to_i64(const Integer& v) {
  if (!v.fits_slong_p()) throw Error("integer does not fit in 64 bits");
  return v.get_si();
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// s*a + t*b = gcd(a, b) >= 0.
std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& s, std::int64_t& t) {
  std::int64_t old_r = a, r = b, old_s = 1, s1 = 0, old_t = 0, t1 = 1;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s1;
    old_s = s1;
    s1 = tmp;
    tmp = old_t - q * t1;
    old_t = t1;
    t1 = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  s = old_s;
  t = old_t;
  return old_r;
}

bool is_primitive(const Slope& v) { return std::gcd(v[0], v[1]) == 1; }

Slope slope_of(const IntVector& v) { return {to_i64(v[0]), to_i64(v[1])}; }

// Lexicographically least element of {f * s * g : f in left, g in right}.
TorusAuto orbit_min(const TorusAuto& s, const std::vector<TorusAuto>& left, const std::vector<TorusAuto>& right) {
  TorusAuto best = s;
  for (const auto& f : left)
    for (const auto& g : right) best = std::min(best, f * s * g);
  return best;
}

void sort_reps(std::vector<DoubleCosetRep>& reps) {
  std::sort(reps.begin(), reps.end(), [](const DoubleCosetRep& a, const DoubleCosetRep& b) {
    if (a.delta != b.delta) return a.delta < b.delta;
    return a.rep < b.rep;
  });
}

// Row (u, v) with r0*v - r1*u = 1, reduced modulo (r0, r1).
Slope complete_row(const Slope& r) {
  std::int64_t s, t;
  ext_gcd(r[0], r[1], s, t);  // s*r0 + t*r1 = 1
  std::int64_t u = -t, v = s;
  if (r[0] != 0) {
    const std::int64_t m = std::abs(r[0]);
    const std::int64_t target = floor_mod(u, m);
    const std::int64_t k = (target - u) / r[0];
    u = checked_add(u, checked_mul(k, r[0]));
    v = checked_add(v, checked_mul(k, r[1]));
  } else {
    const std::int64_t m = std::abs(r[1]);
    const std::int64_t target = floor_mod(v, m);
    const std::int64_t k = (target - v) / r[1];
    u = checked_add(u, checked_mul(k, r[0]));
    v = checked_add(v, checked_mul(k, r[1]));
  }
  return {u, v};
}

Rational det2(const RatMatrix& g) { return g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0); }

void require_rank_two(const lattice::QForm& q) {
  if (q.rank() != 2) throw DimensionError("torus forms must have rank 2");
}

}  // namespace

TorusAuto TorusAuto::from_entries(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  const std::int64_t det = checked_add(checked_mul(a, d), -checked_mul(b, c));
  if (det != 1 && det != -1)
    throw ValidationError("", "torus automorphism must have determinant +1 or -1, got " + std::to_string(det));
  TorusAuto t;
  t.m_ = {a, b, c, d};
  t.det_ = static_cast<int>(det);
  return t;
}

TorusAuto TorusAuto::inverse() const {
  // det = +-1, so the inverse is det * adj.
  const std::int64_t s = det_;
  return from_entries(s * m_[3], -s * m_[1], -s * m_[2], s * m_[0]);
}

TorusAuto TorusAuto::negated() const { return from_entries(-m_[0], -m_[1], -m_[2], -m_[3]); }

TorusAuto TorusAuto::transpose() const { return from_entries(m_[0], m_[2], m_[1], m_[3]); }

Slope TorusAuto::apply(const Slope& v) const {
  return {checked_add(checked_mul(m_[0], v[0]), checked_mul(m_[1], v[1])),
          checked_add(checked_mul(m_[2], v[0]), checked_mul(m_[3], v[1]))};
}

IntMatrix TorusAuto::matrix() const {
  return IntMatrix{{Integer(static_cast<long>(m_[0])), Integer(static_cast<long>(m_[1]))},
                   {Integer(static_cast<long>(m_[2])), Integer(static_cast<long>(m_[3]))}};
}

RatMatrix TorusAuto::rational() const { return to_rational(matrix()); }

TorusAuto operator*(const TorusAuto& a, const TorusAuto& b) {
  auto dot = [](std::int64_t x1, std::int64_t y1, std::int64_t x2, std::int64_t y2) {
    return checked_add(checked_mul(x1, y1), checked_mul(x2, y2));
  };
  TorusAuto r;
  r.m_ = {dot(a.m_[0], b.m_[0], a.m_[1], b.m_[2]), dot(a.m_[0], b.m_[1], a.m_[1], b.m_[3]),
          dot(a.m_[2], b.m_[0], a.m_[3], b.m_[2]), dot(a.m_[2], b.m_[1], a.m_[3], b.m_[3])};
  r.det_ = a.det_ * b.det_;
  return r;
}

std::string TorusAuto::to_string() const {
  std::ostringstream os;
  os << "[[" << m_[0] << "," << m_[1] << "],[" << m_[2] << "," << m_[3] << "]]";
  return os.str();
}

std::int64_t intersection(const Slope& a, const Slope& b) {
  return checked_add(checked_mul(a[0], b[1]), -checked_mul(a[1], b[0]));
}

TorusAuto dehn_twist_power(const Slope& gamma, std::int64_t k) {
  if (!is_primitive(gamma))
    throw InvalidSlopeError("slope (" + std::to_string(gamma[0]) + "," + std::to_string(gamma[1]) +
                            ") is not primitive");
  // zeta -> zeta + k <zeta, gamma> gamma; <e1, gamma> = g1, <e2, gamma> = -g0.
  const std::int64_t g0 = gamma[0], g1 = gamma[1];
  const std::int64_t kg01 = checked_mul(k, checked_mul(g0, g1));
  return TorusAuto::from_entries(checked_add(1, kg01), -checked_mul(k, checked_mul(g0, g0)),
                                 checked_mul(k, checked_mul(g1, g1)), checked_add(1, -kg01));
}

TorusAuto dehn_twist(const Slope& gamma) { return dehn_twist_power(gamma, 1); }

TorusAuto fiber_twist(std::int64_t k) { return TorusAuto::from_entries(1, 0, k, 1); }

RatMatrix pullback_gram(const RatMatrix& gram, const TorusAuto& a) {
  if (gram.rows() != 2 || gram.cols() != 2) throw DimensionError("pullback of a non-rank-2 form");
  const RatMatrix m = a.rational();
  return multiply(multiply(m.transpose(), gram), m);
}

lattice::QForm pullback_form(const lattice::QForm& q, const TorusAuto& a) {
  require_rank_two(q);
  return lattice::QForm::from_gram(pullback_gram(q.gram(), a));
}

Slope kernel_slope(const lattice::QForm& q) {
  require_rank_two(q);
  if (q.kernel_rank() != 1) throw PreconditionError("kernel slope needs a form with kernel rank 1");
  const IntMatrix k = q.kernel_basis();
  Slope s = slope_of(k.row(0));
  if (s[0] < 0 || (s[0] == 0 && s[1] < 0)) s = {-s[0], -s[1]};
  return s;
}

TorusAuto slope_frame(const Slope& gamma) {
  if (!is_primitive(gamma)) throw InvalidSlopeError("frame of a non-primitive slope");
  std::int64_t s, t;
  ext_gcd(gamma[0], gamma[1], s, t);
  // [[u, g0], [w, g1]] with u*g1 - w*g0 = 1.
  return TorusAuto::from_entries(t, gamma[0], -s, gamma[1]);
}

std::vector<TorusAuto> finite_stabilizer(const lattice::QForm& q) {
  require_rank_two(q);
  if (!q.is_positive_definite()) throw PreconditionError("finite stabilizer needs a positive-definite form");
  const RatMatrix& g = q.gram();
  const Rational reach = std::max(g(0, 0), g(1, 1));
  std::vector<Slope> first, second;
  for (const auto& v : lattice::short_vectors(q, reach, false)) {
    const Rational val = q.value(v);
    if (val == g(0, 0)) first.push_back(slope_of(v));
    if (val == g(1, 1)) second.push_back(slope_of(v));
  }
  std::vector<TorusAuto> out;
  for (const auto& c1 : first)
    for (const auto& c2 : second) {
      if (intersection(c1, c2) != 1) continue;
      const IntVector a{Integer(static_cast<long>(c1[0])), Integer(static_cast<long>(c1[1]))};
      const IntVector b{Integer(static_cast<long>(c2[0])), Integer(static_cast<long>(c2[1]))};
      if (q.bilinear(a, b) != g(0, 1)) continue;
      out.push_back(TorusAuto::from_entries(c1[0], c2[0], c1[1], c2[1]));
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<TorusAuto> stabilizer_generators(const lattice::QForm& q) {
  require_rank_two(q);
  switch (q.kernel_rank()) {
    case 0:
      return finite_stabilizer(q);
    case 1:
      return {TorusAuto::minus_identity(), dehn_twist(kernel_slope(q))};
    default:
      throw UnsupportedError("stabilizer of the zero form is all of SL(2,Z)");
  }
}

Rational coset_discriminant(const RatMatrix& g, const TorusAuto& s, const RatMatrix& gp) {
  return det2(add(pullback_gram(g, s), gp));
}

namespace {

// #{v : q(v) < t} is at most the box |v_0|^2 <= t G11 / det, |v_1|^2 <= t G00 / det.
Integer ellipse_box_count(const RatMatrix& g, const Rational& t) {
  const Rational det = det2(g);
  const Integer x = floor_sqrt(t * g(1, 1) / det);
  const Integer y = floor_sqrt(t * g(0, 0) / det);
  return (2 * x + 1) * (2 * y + 1);
}

void charge(std::uint64_t cap, const Integer& needed) {
  if (cap == 0 || needed <= Integer(static_cast<unsigned long>(cap))) return;
  throw ResourceCapError(cap, needed.fits_ulong_p() ? needed.get_ui() : ~0ULL);
}

void tick(std::uint64_t cap, std::uint64_t& count) {
  if (++count > cap && cap != 0) throw ResourceCapError(cap, count);
}

}  // namespace

DoubleCosetResult double_coset_reps(const lattice::QForm& q, const lattice::QForm& qp, const Rational& bound,
                                    std::uint64_t candidate_cap) {
  require_rank_two(q);
  require_rank_two(qp);
  if (bound <= 0) throw PreconditionError("double-coset budget must be positive");
  const RatMatrix& g = q.gram();
  const RatMatrix& gp = qp.gram();
  DoubleCosetResult result;
  auto& cert = result.certificate;
  auto& reps = result.reps;
  const std::size_t kq = q.kernel_rank();
  const std::size_t kp = qp.kernel_rank();

  if (kq == 2 && kp == 2) throw UnsupportedError("double cosets of two zero forms");
  if (kq == 2 || kp == 2) {
    // One side is stabilized by all of SL(2,Z): a single double coset.
    cert.regime = "zero-form";
    const Rational d = det2(kq == 2 ? gp : g);
    cert.steps.push_back("one stabilizer is SL(2,Z), so there is one double coset with delta = " + to_string(d));
    cert.search_bound = 0;
    if (d > 0 && d < bound) reps.push_back({TorusAuto::identity(), d});
    return result;
  }

  if (kq == 1 && kp == 1) {
    // Frame both kernels onto e2: forms become diag(a, 0) and diag(a', 0)
    // and delta = a a' x12^2 for s_hat = P^-1 s P'.
    const TorusAuto p = slope_frame(kernel_slope(q));
    const TorusAuto pp = slope_frame(kernel_slope(qp));
    const Rational a = pullback_gram(g, p)(0, 0);
    const Rational ap = pullback_gram(gp, pp)(0, 0);
    cert.regime = "kernel-kernel";
    cert.search_bound = bound / (a * ap);
    cert.steps.push_back("framed forms diag(" + to_string(a) + ",0) and diag(" + to_string(ap) + ",0)");
    cert.steps.push_back("delta = " + to_string(a * ap) + " * x12^2; twists reduce x11 and x22 modulo x12");
    cert.steps.push_back("search 1 <= x12 with x12^2 < " + to_string(cert.search_bound));
    const Integer m_max = ceil_sqrt(cert.search_bound);
    charge(candidate_cap, m_max * m_max);
    const TorusAuto pp_inv = pp.inverse();
    for (std::int64_t m = 1; Rational(m * m) < cert.search_bound; ++m) {
      for (std::int64_t x11 = 0; x11 < m; ++x11) {
        tick(candidate_cap, cert.candidates);
        if (std::gcd(x11, m) != 1) continue;
        std::int64_t s, t;
        ext_gcd(x11, m, s, t);
        const std::int64_t x22 = floor_mod(s, m);
        const std::int64_t x21 = (checked_mul(x11, x22) - 1) / m;
        const TorusAuto hat = TorusAuto::from_entries(x11, m, x21, x22);
        reps.push_back({p * hat * pp_inv, a * ap * Rational(m * m)});
      }
    }
    sort_reps(reps);
    return result;
  }

  if (kq == 1 && kp == 0) {
    // s_tilde = P^-1 s has first row r; delta = det G' + a * r adj(G') r^T.
    const TorusAuto p = slope_frame(kernel_slope(q));
    const Rational a = pullback_gram(g, p)(0, 0);
    const RatMatrix adj{{gp(1, 1), -gp(0, 1)}, {-gp(1, 0), gp(0, 0)}};
    const auto fp = finite_stabilizer(qp);
    cert.regime = "kernel-definite";
    cert.search_bound = (bound - det2(gp)) / a;
    cert.steps.push_back("framed left form diag(" + to_string(a) + ",0)");
    cert.steps.push_back("delta = det G' + a * r adj(G') r^T for the first row r of P^-1 s");
    cert.steps.push_back("rows r with r adj(G') r^T < " + to_string(cert.search_bound) +
                         ", modulo sign and the right action of a stabilizer of order " + std::to_string(fp.size()));
    if (cert.search_bound <= 0) return result;
    charge(candidate_cap, ellipse_box_count(adj, cert.search_bound));
    std::set<Slope> seen;
    for (const auto& v : lattice::short_vectors(lattice::QForm::from_gram(adj), cert.search_bound, true)) {
      tick(candidate_cap, cert.candidates);
      const Slope r = slope_of(v);
      if (!is_primitive(r)) continue;
      Slope canon = r;
      for (const auto& f : fp) {
        // Row vector times f.
        const Slope rf{checked_add(checked_mul(r[0], f(0, 0)), checked_mul(r[1], f(1, 0))),
                       checked_add(checked_mul(r[0], f(0, 1)), checked_mul(r[1], f(1, 1)))};
        canon = std::min({canon, rf, Slope{-rf[0], -rf[1]}});
      }
      if (!seen.insert(canon).second) continue;
      const Slope row2 = complete_row(canon);
      const TorusAuto hat = TorusAuto::from_entries(canon[0], canon[1], row2[0], row2[1]);
      const TorusAuto s = p * hat;
      reps.push_back({s, coset_discriminant(g, s, gp)});
    }
    sort_reps(reps);
    return result;
  }

  if (kq == 0 && kp == 1) {
    // s_tilde = s P' has second column c; delta = det G + a' q(c).
    const TorusAuto pp = slope_frame(kernel_slope(qp));
    const Rational ap = pullback_gram(gp, pp)(0, 0);
    const auto f = finite_stabilizer(q);
    cert.regime = "definite-kernel";
    cert.search_bound = (bound - det2(g)) / ap;
    cert.steps.push_back("framed right form diag(" + to_string(ap) + ",0)");
    cert.steps.push_back("delta = det G + a' q(c) for the second column c of s P'");
    cert.steps.push_back("columns c with q(c) < " + to_string(cert.search_bound) +
                         ", modulo sign and the left action of a stabilizer of order " + std::to_string(f.size()));
    if (cert.search_bound <= 0) return result;
    charge(candidate_cap, ellipse_box_count(g, cert.search_bound));
    std::set<Slope> seen;
    const TorusAuto pp_inv = pp.inverse();
    for (const auto& v : lattice::short_vectors(q, cert.search_bound, true)) {
      tick(candidate_cap, cert.candidates);
      const Slope c = slope_of(v);
      if (!is_primitive(c)) continue;
      Slope canon = c;
      for (const auto& t : f) {
        const Slope tc = t.apply(c);
        canon = std::min({canon, tc, Slope{-tc[0], -tc[1]}});
      }
      if (!seen.insert(canon).second) continue;
      // First column (u, w) with u*c1 - w*c0 = 1, reduced modulo c.
      const Slope row = complete_row({canon[1], canon[0]});
      const TorusAuto hat = TorusAuto::from_entries(row[1], canon[0], row[0], canon[1]);
      const TorusAuto s = hat * pp_inv;
      reps.push_back({s, coset_discriminant(g, s, gp)});
    }
    sort_reps(reps);
    return result;
  }

  // Both definite: det(A + B) >= det A + det B + lambda_min(B) tr(A) with
  // lambda_min(B) >= det B / tr B bounds tr(s^T G s).
  const auto f = finite_stabilizer(q);
  const auto fp = finite_stabilizer(qp);
  cert.regime = "definite-definite";
  cert.search_bound = (bound - det2(g) - det2(gp)) * (gp(0, 0) + gp(1, 1)) / det2(gp);
  cert.steps.push_back("tr(s^T G s) < (C - det G - det G') tr(G') / det(G') = " + to_string(cert.search_bound));
  cert.steps.push_back("both columns of s lie in the ball q < bound; orbits under stabilizers of orders " +
                       std::to_string(f.size()) + " and " + std::to_string(fp.size()));
  if (cert.search_bound <= 0) return result;
  charge(candidate_cap, ellipse_box_count(g, cert.search_bound));
  const Rational& reach = cert.search_bound;
  std::set<TorusAuto> seen;
  // For each first column c1 the second columns with <c1, c2> = 1 form the
  // line c2_0 + t c1; keep the t with q(c2) < reach.
  for (const auto& v1 : lattice::short_vectors(q, reach, true)) {
    const Slope c1 = slope_of(v1);
    if (!is_primitive(c1)) continue;
    const Slope c20 = complete_row(c1);
    const IntVector w{Integer(static_cast<long>(c20[0])), Integer(static_cast<long>(c20[1]))};
    const Rational alpha = q.value(v1);
    const Rational beta = q.bilinear(v1, w);
    const Rational disc = beta * beta - alpha * (q.value(w) - reach);
    if (disc <= 0) continue;
    const Integer root = floor_sqrt(disc) + 1;
    const Integer t_lo = floor_of(Rational((-beta - Rational(root)) / alpha));
    const Integer t_hi = ceil_of(Rational((-beta + Rational(root)) / alpha));
    for (Integer tt = t_lo; tt <= t_hi; ++tt) {
      const std::int64_t t = to_i64(tt);
      const Slope c2{checked_add(c20[0], checked_mul(t, c1[0])), checked_add(c20[1], checked_mul(t, c1[1]))};
      const IntVector v2{Integer(static_cast<long>(c2[0])), Integer(static_cast<long>(c2[1]))};
      if (q.value(v2) >= reach) continue;
      tick(candidate_cap, cert.candidates);
      const TorusAuto s = TorusAuto::from_entries(c1[0], c2[0], c1[1], c2[1]);
      const Rational d = coset_discriminant(g, s, gp);
      if (!(d > 0 && d < bound)) continue;
      const TorusAuto canon = orbit_min(s, f, fp);
      if (seen.insert(canon).second) reps.push_back({canon, d});
    }
  }
  sort_reps(reps);
  return result;
}

}  // namespace glueprint::torus
