#include "glueprint/seifert_arithmetic.hpp"

#include <mpfr.h>

#include <algorithm>
#include <functional>

#include "glueprint/errors.hpp"

namespace glueprint::seifert {

namespace {

constexpr mpfr_prec_t kPrecision = 256;

Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Rational abs_of(const Rational& a) { return a < 0 ? Rational(-a) : a; }

Integer product_of_orders(const SeifertInvariants& s) {
  Integer p = 1;
  for (const auto& [a, b] : s.pairs) p *= a;
  return p;
}

Rational fiber_sum(const SeifertInvariants& s) {
  Rational x = 0;
  for (const auto& [a, b] : s.pairs) x += Rational(b, a);
  x.canonicalize();
  return x;
}

std::string decimal(const mpfr_t x, mpfr_rnd_t rnd) {
  char* text = nullptr;
  if (rnd == MPFR_RNDD)
    mpfr_asprintf(&text, "%.20RDe", x);
  else
    mpfr_asprintf(&text, "%.20RUe", x);
  std::string out(text);
  mpfr_free_str(text);
  return out;
}

Interval make_interval(const mpfr_t lo, const mpfr_t hi) {
  Interval out;
  out.lower = decimal(lo, MPFR_RNDD);
  out.upper = decimal(hi, MPFR_RNDU);
  out.lower_value = mpfr_get_d(lo, MPFR_RNDD);
  out.upper_value = mpfr_get_d(hi, MPFR_RNDU);
  mpfr_t w;
  mpfr_init2(w, kPrecision);
  mpfr_sub(w, hi, lo, MPFR_RNDU);
  mpfr_div(w, w, lo, MPFR_RNDU);
  out.relative_width = mpfr_get_d(w, MPFR_RNDU);
  mpfr_clear(w);
  return out;
}

// Residues 0 < b < a coprime to a.
std::vector<Integer> units_mod(const Integer& a) {
  std::vector<Integer> out;
  for (Integer b = 1; b < a; ++b)
    if (gcd(a, b) == 1) out.push_back(b);
  return out;
}

class Collector {
 public:
  Collector(TargetReport& report, unsigned long long cap) : report_(report), cap_(cap) {}

  void add(std::string family, SeifertInvariants inv, std::optional<Rational> e_floor = std::nullopt) {
    if (report_.candidates.size() >= cap_) throw ResourceCapError(cap_, cap_ + 1);
    TargetCandidate c;
    c.family = std::move(family);
    c.chi = chi(inv);
    c.e = euler_number(inv);
    c.torsion = torsion_order(inv);
    c.e_floor = std::move(e_floor);
    c.invariants = std::move(inv);
    report_.candidates.push_back(std::move(c));
  }

 private:
  TargetReport& report_;
  unsigned long long cap_;
};

// Every choice of b_i for the given cone orders, then every b0 with
// 0 < |e| prod a <= T; `accept` filters on e.
void sweep_fibers(unsigned g, const std::vector<Integer>& orders, const Integer& t,
                  const std::function<bool(const Rational&)>& accept,
                  const std::function<void(SeifertInvariants)>& emit) {
  Integer prod = 1;
  for (const auto& a : orders) prod *= a;
  Rational reach(t, prod);
  reach.canonicalize();
  std::vector<std::vector<Integer>> choices;
  for (const auto& a : orders) choices.push_back(units_mod(a));
  std::vector<std::size_t> at(orders.size(), 0);
  auto advance = [&] {
    std::size_t i = 0;
    while (i < at.size() && ++at[i] == choices[i].size()) at[i++] = 0;
    return i < at.size();
  };
  // Equal orders carry nondecreasing b, so each manifold appears once.
  auto sorted = [&] {
    for (std::size_t i = 1; i < at.size(); ++i)
      if (orders[i] == orders[i - 1] && at[i] < at[i - 1]) return false;
    return true;
  };
  do {
    if (!sorted()) continue;
    SeifertInvariants s;
    s.g = g;
    for (std::size_t i = 0; i < orders.size(); ++i) s.pairs.emplace_back(orders[i], choices[i][at[i]]);
    const Rational x = fiber_sum(s);
    // |b0 + x| <= T / prod
    const Integer lo = ceil_of(Rational(-x - reach));
    const Integer hi = floor_of(Rational(-x + reach));
    for (Integer b0 = lo; b0 <= hi; ++b0) {
      s.b0 = b0;
      const Rational e = euler_number(s);
      if (e == 0 || !accept(e)) continue;
      emit(s);
    }
  } while (advance());
}

}  // namespace

std::string SeifertInvariants::to_string() const {
  std::string out = "Sigma(" + std::to_string(g) + "; " + glueprint::to_string(b0);
  for (const auto& [a, b] : pairs) out += ", " + glueprint::to_string(b) + "/" + glueprint::to_string(a);
  return out + ")";
}

SeifertInvariants normalize(unsigned g, const Integer& b0, const std::vector<std::pair<Integer, Integer>>& raw) {
  SeifertInvariants s;
  s.g = g;
  s.b0 = b0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto& [a, b] = raw[i];
    const std::string path = "pairs[" + std::to_string(i) + "]";
    if (a < 2) throw ValidationError(path, "invalid cone order " + glueprint::to_string(a));
    if (gcd(a, b) != 1) throw ValidationError(path, "b and a are not coprime");
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), b.get_mpz_t(), a.get_mpz_t());
    s.b0 += (b - r) / a;
    if (r != 0) s.pairs.emplace_back(a, r);
  }
  std::sort(s.pairs.begin(), s.pairs.end());
  return s;
}

bool is_normalized(const SeifertInvariants& s) {
  for (const auto& [a, b] : s.pairs)
    if (a < 2 || b <= 0 || b >= a || gcd(a, b) != 1) return false;
  return std::is_sorted(s.pairs.begin(), s.pairs.end());
}

Rational chi(unsigned g, const std::vector<Integer>& cone_orders) {
  Rational x = 2 - 2 * static_cast<long>(g);
  for (const auto& a : cone_orders) {
    if (a < 2) throw ValidationError("cone_orders", "invalid cone order " + glueprint::to_string(a));
    x -= 1 - Rational(1, a);
  }
  x.canonicalize();
  return x;
}

Rational chi(const SeifertInvariants& s) {
  std::vector<Integer> orders;
  for (const auto& [a, b] : s.pairs) orders.push_back(a);
  return chi(s.g, orders);
}

Rational euler_number(const SeifertInvariants& s) {
  Rational e = -Rational(s.b0) - fiber_sum(s);
  e.canonicalize();
  return e;
}

Integer torsion_order(const SeifertInvariants& s) {
  const Rational e = euler_number(s);
  if (e == 0) throw FormulaInapplicableError("torsion order needs e != 0");
  Rational t = abs_of(e) * Rational(product_of_orders(s));
  t.canonicalize();
  if (t.get_den() != 1) throw PreconditionError("|e| prod a is not integral; input is not a valid Seifert datum");
  return t.get_num();
}

Integer torsion_bound(const Integer& d, const Integer& h1_mod_d_order, const Integer& tor_m_order) {
  if (d < 1 || h1_mod_d_order < 1 || tor_m_order < 1)
    throw PreconditionError("torsion bound needs d and both orders >= 1");
  return d * h1_mod_d_order * tor_m_order;
}

Integer area_constant(unsigned long n) {
  if (n < 1) throw PreconditionError("area constant needs n >= 1");
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 27, n);
  const Integer nn(static_cast<unsigned long>(n));
  return p * (9 * nn * nn + 4 * nn);
}

BudgetReport distortion_budget(const DominationBudget& budget) {
  if (budget.t < 1) throw PreconditionError("budget needs t >= 1");
  if (budget.eps3 <= 0) throw PreconditionError("budget needs eps3 > 0");
  BudgetReport out;
  out.area_coefficient = area_constant(2 * budget.t);
  out.max_pieces = budget.h + 1;
  out.max_tori = budget.h;

  mpfr_t s_lo, s_hi, pi_lo, pi_hi, lo, hi, a;
  for (auto* x : {&s_lo, &s_hi, &pi_lo, &pi_hi, &lo, &hi, &a}) mpfr_init2(*x, kPrecision);
  const Rational half = budget.eps3 / 2;
  mpfr_set_q(s_lo, half.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(s_hi, half.get_mpq_t(), MPFR_RNDU);
  mpfr_sinh(s_lo, s_lo, MPFR_RNDD);
  mpfr_sinh(s_hi, s_hi, MPFR_RNDU);
  out.sinh_half_eps = make_interval(s_lo, s_hi);

  mpfr_const_pi(pi_lo, MPFR_RNDD);
  mpfr_const_pi(pi_hi, MPFR_RNDU);
  mpfr_set_z(a, out.area_coefficient.get_mpz_t(), MPFR_RNDD);
  mpfr_mul(lo, a, pi_lo, MPFR_RNDD);
  mpfr_set_z(a, out.area_coefficient.get_mpz_t(), MPFR_RNDU);
  mpfr_mul(hi, a, pi_hi, MPFR_RNDU);
  mpfr_div(lo, lo, s_hi, MPFR_RNDD);
  mpfr_div(hi, hi, s_lo, MPFR_RNDU);
  mpfr_div_ui(lo, lo, 4, MPFR_RNDD);
  mpfr_div_ui(hi, hi, 4, MPFR_RNDU);
  out.vertex_budget = make_interval(lo, hi);
  for (auto* x : {&s_lo, &s_hi, &pi_lo, &pi_hi, &lo, &hi, &a}) mpfr_clear(*x);
  return out;
}

std::vector<std::pair<unsigned, std::vector<Integer>>> euclidean_bases() {
  return {{1, {}}, {0, {2, 3, 6}}, {0, {2, 4, 4}}, {0, {3, 3, 3}}, {0, {2, 2, 2, 2}}};
}

TargetReport enumerate_targets(const TargetQuery& q) {
  if (q.d < 1) throw PreconditionError("targets need d >= 1");
  if (q.torsion_bound < 1) throw PreconditionError("targets need a torsion bound >= 1");
  const Integer& t = q.torsion_bound;
  TargetReport report;
  report.torsion_bound = t;
  Collector out(report, q.max_candidates);
  const auto any = [](const Rational&) { return true; };

  // chi > 0, at most two cone points: lens spaces, by |H_1| only.
  for (Integer p = 1; p <= t; ++p) {
    SeifertInvariants s;
    s.b0 = -p;
    out.add("lens", s);
  }
  report.notes.push_back("lens candidates listed by torsion order only (COARSE)");

  // chi > 0 with cone orders (2, 3, q), q in {3, 4, 5}.
  for (int qq : {3, 4, 5})
    sweep_fibers(0, {2, 3, qq}, t, any, [&](SeifertInvariants s) { out.add("platonic", std::move(s)); });

  // Prism manifolds: cone orders (2, 2, a3). The torsion comparison bounds
  // |a3 b0 + b3 + a3| <= T/4; the lens quotient bounds |a3 b0 + b3 - a3|.
  if (q.lens_cap) {
    report.prism_bounded = true;
    const Integer& lc = *q.lens_cap;
    const Integer a_max = (t + 4 * lc) / 8;  // both nonnegative, so truncation is floor
    for (Integer a3 = 2; a3 <= a_max; ++a3) {
      sweep_fibers(
          0, {2, 2, a3}, t,
          [&](const Rational& e) {
            // x = a3 b0 + b3 - a3 = -a3 e - 2 a3
            const Rational x = -Rational(a3) * e - 2 * Rational(a3);
            return abs_of(x) <= Rational(lc);
          },
          [&](SeifertInvariants s) { out.add("prism", std::move(s)); });
    }
  } else {
    report.notes.push_back("prism family UNBOUNDED-BY-INPUTS: no lens-order cap supplied");
  }

  // chi = 0.
  for (const auto& [g, orders] : euclidean_bases())
    sweep_fibers(g, orders, t, any, [&](SeifertInvariants s) { out.add("euclidean", std::move(s)); });

  // chi < 0: SV(M) >= d chi^2 / |e| gives |e| >= d chi^2 / sv_M, and
  // T >= |e| prod a, so chi^2 prod a <= sv_M T / d.
  if (!q.sv_m) {
    report.notes.push_back("hyperbolic-base case UNBOUNDED-BY-INPUTS: sv_M not supplied");
    return report;
  }
  report.hyperbolic_bounded = true;
  const Rational sv = *q.sv_m;
  if (sv <= 0) {
    report.notes.push_back("sv_M = 0 admits no hyperbolic-base target");
    return report;
  }
  const Rational budget = sv * Rational(t) / Rational(q.d);
  const Rational min_chi_sq(1, 1764);  // chi <= -1/42
  const Rational prod_cap = budget / min_chi_sq;

  std::vector<std::pair<unsigned, std::vector<Integer>>> bases;
  std::vector<Integer> orders;
  std::function<void(unsigned, const Integer&, const Integer&)> grow = [&](unsigned g, const Integer& prod,
                                                                            const Integer& min_a) {
    const Rational x = chi(g, orders);
    if (x < 0) {
      if (x * x * Rational(prod) > budget) return;  // adding cone points only grows both factors
      bases.emplace_back(g, orders);
    }
    for (Integer a = min_a; Rational(prod * a) <= prod_cap; ++a) {
      orders.push_back(a);
      const Rational y = chi(g, orders);
      orders.pop_back();
      if (y < 0) {
        // chi and prod a both grow in absolute value with a
        if (y * y * Rational(prod * a) > budget) break;
      } else if (Rational(prod * a * a) > prod_cap) {
        // still needs another cone point of order >= a; jump to where chi turns negative
        if (x >= 1) break;
        const Integer turn = floor_of(Rational(1) / (1 - x));
        if (turn > a) a = turn;
        continue;
      }
      orders.push_back(a);
      grow(g, prod * a, a);
      orders.pop_back();
    }
  };
  for (unsigned g = 0;; ++g) {
    if (g >= 2 && Rational((2 * g - 2) * (2 * g - 2)) > budget) break;
    grow(g, 1, 2);
  }
  std::sort(bases.begin(), bases.end());
  for (const auto& [g, os] : bases) {
    const Rational x = chi(g, os);
    Rational floor_e = Rational(q.d) * x * x / sv;
    floor_e.canonicalize();
    sweep_fibers(
        g, os, t, [&](const Rational& e) { return abs_of(e) >= floor_e; },
        [&](SeifertInvariants s) { out.add("hyperbolic-base", std::move(s), floor_e); });
  }
  return report;
}

}  // namespace glueprint::seifert
