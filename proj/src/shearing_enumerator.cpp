#include "glueprint/shearing_enumerator.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <thread>

#include "glueprint/errors.hpp"

namespace glueprint::shearing {

namespace {

using gluing::Gluing;
using gluing::PreglueGraph;
using torus::TorusAuto;

bool seifert_at(const PreglueGraph& pg, std::size_t end) {
  return pieces::is_seifert(pg.pieces[pg.graph.ends()[end].vertex]);
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Shift k with value + k*step in [0, |step|).
std::int64_t reduction_shift(std::int64_t value, std::int64_t step) {
  return (floor_mod(value, std::abs(step)) - value) / step;
}

// Twist-class representative of an orientation-reversing map between two
// tori; twists act on the left when the far side is Seifert and on the right
// when the near side is.
TorusAuto twist_canonical(TorusAuto f, bool near_seifert, bool far_seifert) {
  if (near_seifert) {
    // f L^b: column 1 += b column 2.
    const std::int64_t b = f(0, 1) != 0 ? reduction_shift(f(0, 0), f(0, 1)) : reduction_shift(f(1, 0), f(1, 1));
    f = f * torus::fiber_twist(b);
  }
  if (far_seifert) {
    // L^a f: row 2 += a row 1.
    const std::int64_t a = f(0, 1) != 0 ? reduction_shift(f(1, 1), f(0, 1)) : reduction_shift(f(1, 0), f(0, 0));
    f = torus::fiber_twist(a) * f;
  }
  return f;
}

std::vector<TorusAuto> finite_part(const RatMatrix& form, bool seifert) {
  if (seifert) return {TorusAuto::minus_identity(), TorusAuto::identity()};
  return torus::finite_stabilizer(lattice::QForm::from_gram(form));
}

unsigned worker_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("GLUEPRINT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

void validate(const PreglueGraph& pg, const FiberShearing& tau) {
  if (tau.twists.size() != pg.graph.ends().size())
    throw ValidationError("shearing", "expected one twist count per end (" + std::to_string(pg.graph.ends().size()) +
                                          ")");
  for (std::size_t d = 0; d < tau.twists.size(); ++d)
    if (tau.twists[d] != 0 && !seifert_at(pg, d))
      throw ValidationError("shearing[" + std::to_string(d) + "]", "twists are only allowed at Seifert ends");
}

Gluing apply_shearing(const PreglueGraph& pg, const Gluing& phi, const FiberShearing& tau) {
  validate(pg, tau);
  Gluing out = phi;
  for (std::size_t d = 0; d < phi.maps.size(); ++d) {
    const std::size_t o = pg.graph.opposite(d);
    out.maps[d] = torus::fiber_twist(-tau.twists[o]) * phi.maps[d] * torus::fiber_twist(tau.twists[d]);
  }
  return out;
}

std::int64_t shearing_index(const PreglueGraph& pg, const FiberShearing& tau, std::size_t vertex) {
  if (!pieces::is_seifert(pg.pieces.at(vertex)))
    throw PreconditionError("shearing index is undefined at hyperbolic vertex " + std::to_string(vertex));
  std::int64_t sum = 0;
  for (std::size_t d : pg.graph.ends_at(vertex)) sum += tau.twists.at(d);
  return sum;
}

FiberShearing shearing_with_indices(const PreglueGraph& pg, const std::vector<std::int64_t>& indices) {
  FiberShearing tau{std::vector<std::int64_t>(pg.graph.ends().size(), 0)};
  for (std::size_t v = 0; v < pg.graph.vertices().size(); ++v) {
    if (!pieces::is_seifert(pg.pieces[v]) || pg.graph.valence(v) == 0) continue;
    tau.twists[pg.graph.ends_at(v).front()] = indices.at(v);
  }
  return tau;
}

FiberShearing canonical_shearing_form(const PreglueGraph& pg, const FiberShearing& tau) {
  validate(pg, tau);
  std::vector<std::int64_t> indices(pg.graph.vertices().size(), 0);
  for (std::size_t v = 0; v < indices.size(); ++v)
    if (pieces::is_seifert(pg.pieces[v])) indices[v] = shearing_index(pg, tau, v);
  return shearing_with_indices(pg, indices);
}

IndexBound index_bound(const PreglueGraph& pg, const Gluing& phi, std::size_t vertex, const Rational& c) {
  if (!pieces::is_seifert(pg.pieces.at(vertex)))
    throw PreconditionError("index bound needs a Seifert vertex");
  if (c <= 0) throw PreconditionError("budget must be positive");
  const std::size_t valence = pg.graph.valence(vertex);
  if (valence == 0) throw PreconditionError("index bound needs a vertex with boundary");
  IndexBound out;
  out.semi = pieces::needs_orientation_cover(pg.pieces[vertex]);
  const auto piece = std::get<pieces::SeifertPieceData>(gluing::distortion_piece(pg, vertex));
  const RatMatrix g = gluing::distortion_gram(pg, phi, vertex);
  const std::size_t n = piece.tori.size();
  out.ends = n;
  out.m = pieces::fiber_multiplicity(piece);
  bool first = true;
  for (std::size_t t = 0; t < n; ++t) {
    const Rational lambda = g(2 * t + 1, 2 * t + 1);
    const Rational x = Rational(piece.tori[t].mu_x);
    const Rational y = Rational(piece.tori[t].mu_lambda);
    const Rational mu = g(2 * t, 2 * t) * x * x + 2 * g(2 * t, 2 * t + 1) * x * y + lambda * y * y;
    if (first || lambda < out.r) out.r = lambda;
    if (first || mu > out.R) out.R = mu;
    out.S += mu;
    first = false;
  }
  const lattice::Sublattice full = pieces::del_h2_lattice(piece);
  IntMatrix l(n - 1, 2 * n);
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = 0; j < 2 * n; ++j) l(i, j) = full.basis()(i, j);
  if (n == 1) {
    out.delta_l = 1;
  } else {
    const RatMatrix b = to_rational(l);
    out.delta_l = determinant(multiply(multiply(b, g), b.transpose()));
  }
  if (out.r == 0 || out.delta_l == 0)
    throw PreconditionError("index bound needs a nondegenerate gluing at vertex " + std::to_string(vertex));
  // K^2 >= (C^(2n) / delta_l + S) * 2n / (r m^2).
  const Rational target = (power(c, 2 * n) / out.delta_l + out.S) * Rational(static_cast<long>(2 * n)) /
                          (out.r * Rational(out.m * out.m));
  out.cover_bound = std::max(Integer(1), ceil_sqrt(target));
  out.bound = out.semi ? Integer((out.cover_bound + 1) / 2) : out.cover_bound;
  return out;
}

std::vector<EdgeClass> edge_classes(const PreglueGraph& pg, std::size_t edge, const Rational& bound,
                                    std::uint64_t candidate_cap) {
  const std::size_t d0 = pg.graph.end_id(edge, 0);
  const std::size_t d1 = pg.graph.opposite(d0);
  const bool semi_edge = d0 == d1;
  const RatMatrix a = gluing::side_form(pg, d0);
  const RatMatrix b = gluing::side_form(pg, d1);
  const bool near_seifert = seifert_at(pg, d0);
  const bool far_seifert = seifert_at(pg, d1);
  const TorusAuto psi = TorusAuto::from_entries(1, 0, 0, -1);
  // phi = psi s with s in SL; q_phi block = s^T (psi^T B psi) s + A.
  const auto cosets = torus::double_coset_reps(lattice::QForm::from_gram(torus::pullback_gram(b, psi)),
                                               lattice::QForm::from_gram(a), bound, candidate_cap);
  const auto left = finite_part(b, far_seifert);
  const auto right = finite_part(a, near_seifert);
  std::map<TorusAuto, EdgeClass> found;
  for (const auto& rep : cosets.reps) {
    const TorusAuto base = psi * rep.rep;
    for (const auto& f : left)
      for (const auto& g : right) {
        TorusAuto cand = f * base * g;
        if (semi_edge) {
          if (near_seifert) {
            // Some twist-translate is an involution iff the fiber image
            // coordinate divides the trace; then normalize the conjugacy
            // class under fiber twists.
            const std::int64_t q = cand(0, 1);
            if (q == 0 || cand.trace() % q != 0) continue;
            cand = cand * torus::fiber_twist(-cand.trace() / q);
            const std::int64_t k = reduction_shift(cand(0, 0), cand(0, 1));
            cand = torus::fiber_twist(-k) * cand * torus::fiber_twist(k);
          } else if (cand.trace() != 0) {
            continue;
          }
        } else {
          cand = twist_canonical(cand, near_seifert, far_seifert);
        }
        found.emplace(cand, EdgeClass{cand, rep.rep, rep.delta});
      }
  }
  std::vector<EdgeClass> out;
  for (auto& [key, cls] : found) out.push_back(cls);
  return out;
}

EnumerationResult enumerate_gluings(const PreglueGraph& pg, const Rational& c, const EnumerationOptions& options) {
  gluing::validate(pg);
  if (c <= 0) throw PreconditionError("budget must be positive");
  EnumerationResult result;
  const std::size_t edges = pg.graph.edges().size();
  const std::size_t verts = pg.graph.vertices().size();
  const Rational edge_bound = power(c, 4);
  unsigned long long combos = 1;
  for (std::size_t e = 0; e < edges; ++e) {
    result.classes.push_back(edge_classes(pg, e, edge_bound, options.cap));
    const unsigned long long size = result.classes.back().size();
    if (size == 0) return result;
    if (combos > options.cap / size) throw ResourceCapError(options.cap, combos * size);
    combos *= size;
  }

  auto base_gluing = [&](unsigned long long code, std::vector<std::size_t>& choice) {
    Gluing phi{std::vector<TorusAuto>(pg.graph.ends().size())};
    choice.assign(edges, 0);
    for (std::size_t e = edges; e-- > 0;) {
      const std::size_t size = result.classes[e].size();
      choice[e] = code % size;
      code /= size;
      const TorusAuto& f = result.classes[e][choice[e]].phi;
      const std::size_t d0 = pg.graph.end_id(e, 0);
      phi.maps[d0] = f;
      phi.maps[pg.graph.opposite(d0)] = f.inverse();
      if (pg.graph.opposite(d0) == d0) phi.maps[d0] = f;
    }
    return phi;
  };

  std::vector<std::size_t> sheared;
  for (std::size_t v = 0; v < verts; ++v)
    if (pieces::is_seifert(pg.pieces[v]) && pg.graph.valence(v) > 0) sheared.push_back(v);

  // Index boxes per combination, and the total cell count before any sweep.
  std::vector<std::vector<std::int64_t>> bounds(combos);
  unsigned __int128 total = 0;
  const unsigned __int128 saturate = static_cast<unsigned __int128>(~0ULL);
  auto clamp = [&](unsigned __int128 x) { return static_cast<unsigned long long>(std::min(x, saturate)); };
  for (unsigned long long code = 0; code < combos; ++code) {
    std::vector<std::size_t> choice;
    const Gluing phi = base_gluing(code, choice);
    unsigned __int128 cells = 1;
    for (std::size_t v : sheared) {
      const Integer k = index_bound(pg, phi, v, c).bound;
      if (!k.fits_slong_p()) throw ResourceCapError(options.cap, ~0ULL);
      bounds[code].push_back(k.get_si());
      cells *= 2 * static_cast<unsigned __int128>(k.get_si()) - 1;
      cells = std::min(cells, saturate);
    }
    total += cells;
    if (total > options.cap) throw ResourceCapError(options.cap, clamp(total));
  }
  result.cells = clamp(total);

  std::vector<std::vector<GluingRecord>> per_combo(combos);
  std::atomic<unsigned long long> next{0};
  auto work = [&]() {
    while (true) {
      const unsigned long long code = next++;
      if (code >= combos) return;
      std::vector<std::size_t> choice;
      const Gluing phi0 = base_gluing(code, choice);
      const auto& box = bounds[code];
      std::vector<std::int64_t> idx(sheared.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = 1 - box[i];
      while (true) {
        std::vector<std::int64_t> indices(verts, 0);
        for (std::size_t i = 0; i < sheared.size(); ++i) indices[sheared[i]] = idx[i];
        Gluing phi = apply_shearing(pg, phi0, shearing_with_indices(pg, indices));
        if (gluing::is_nondegenerate(pg, phi)) {
          auto report = gluing::distortion_report(pg, phi);
          if (gluing::below(report.primary, c))
            per_combo[code].push_back({std::move(phi), std::move(report), choice, indices});
        }
        std::size_t i = idx.size();
        while (i > 0 && idx[i - 1] == box[i - 1] - 1) {
          idx[i - 1] = 1 - box[i - 1];
          --i;
        }
        if (i == 0) break;
        ++idx[i - 1];
      }
    }
  };
  const unsigned n_workers = static_cast<unsigned>(std::min<unsigned long long>(worker_count(options.threads), combos));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& recs : per_combo)
    for (auto& r : recs) result.gluings.push_back(std::move(r));
  return result;
}

}  // namespace glueprint::shearing
