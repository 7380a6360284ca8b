#include "glueprint/cli_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "glueprint/errors.hpp"
#include "glueprint/shearing_enumerator.hpp"

namespace glueprint::io {

using nlohmann::json;
using pieces::HyperbolicPieceData;
using pieces::SeifertPieceData;

namespace {

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }
std::string dot(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ValidationError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(dot(path, key), "missing field");
  return *it;
}

const json* optional_field(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

const json& array_at(const json& j, const std::string& path) {
  if (!j.is_array()) throw ValidationError(path, "expected an array");
  return j;
}

Rational rational_of(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(Integer(j.dump(), 10));
  if (!j.is_string()) throw ValidationError(path, "expected a rational as a \"p/q\" string");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const ValidationError& e) {
    throw ValidationError(path, e.what());
  }
}

Integer integer_of(const json& j, const std::string& path) {
  const Rational r = rational_of(j, path);
  if (r.get_den() != 1) throw ValidationError(path, "expected an integer");
  return r.get_num();
}

std::int64_t small_of(const json& j, const std::string& path) {
  const Integer z = integer_of(j, path);
  if (!z.fits_slong_p()) throw ValidationError(path, "integer out of range");
  return z.get_si();
}

std::size_t index_of(const json& j, const std::string& path) {
  const std::int64_t v = small_of(j, path);
  if (v < 0) throw ValidationError(path, "expected a nonnegative index");
  return static_cast<std::size_t>(v);
}

json integer_json(const Integer& z) {
  if (z.fits_slong_p()) return json(z.get_si());
  return json(z.get_str());
}

json rational_json(const Rational& q) { return json(to_string(q)); }

graph::Kind kind_of(const json& j, const std::string& path) {
  if (!j.is_string()) throw ValidationError(path, "expected \"entire\" or \"semi\"");
  const auto s = j.get<std::string>();
  if (s == "entire") return graph::Kind::entire;
  if (s == "semi") return graph::Kind::semi;
  throw ValidationError(path, "unknown kind '" + s + "'");
}

const char* kind_name(graph::Kind k) { return k == graph::Kind::entire ? "entire" : "semi"; }

pieces::Piece piece_of(const json& j, const std::string& path) {
  const json& type = field(j, "type", path);
  const std::string t = type.is_string() ? type.get<std::string>() : "";
  if (t == "hyperbolic") {
    HyperbolicPieceData h;
    const std::string cp = dot(path, "cusp_forms");
    const json& forms = array_at(field(j, "cusp_forms", path), cp);
    for (std::size_t c = 0; c < forms.size(); ++c) {
      const std::string fp = at(cp, c);
      const json& rows = array_at(forms[c], fp);
      RatMatrix g(rows.size(), rows.size());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const json& row = array_at(rows[r], at(fp, r));
        if (row.size() != rows.size()) throw ValidationError(at(fp, r), "Gram matrix must be square");
        for (std::size_t k = 0; k < row.size(); ++k) g(r, k) = rational_of(row[k], at(at(fp, r), k));
      }
      try {
        h.cusp_forms.push_back(lattice::QForm::from_gram(std::move(g)));
      } catch (const Error& e) {
        throw ValidationError(fp, e.what());
      }
    }
    const std::string dp = dot(path, "del_h2");
    const json& basis = array_at(field(j, "del_h2", path), dp);
    std::vector<IntVector> rows;
    for (std::size_t r = 0; r < basis.size(); ++r) {
      const json& row = array_at(basis[r], at(dp, r));
      IntVector v;
      for (std::size_t k = 0; k < row.size(); ++k) v.push_back(integer_of(row[k], at(at(dp, r), k)));
      rows.push_back(std::move(v));
    }
    try {
      h.del_h2 = lattice::Sublattice::from_rows(2 * h.cusp_forms.size(), rows);
    } catch (const ValidationError& e) {
      throw ValidationError(dp, e.what());
    }
    return h;
  }
  if (t == "seifert") {
    SeifertPieceData s;
    if (const json* b = optional_field(j, "base")) {
      const std::string base = b->is_string() ? b->get<std::string>() : "";
      if (base != "orientable" && base != "nonorientable")
        throw ValidationError(dot(path, "base"), "expected \"orientable\" or \"nonorientable\"");
      s.base_orientable = base == "orientable";
    }
    s.genus = static_cast<unsigned>(index_of(field(j, "genus", path), dot(path, "genus")));
    if (const json* c = optional_field(j, "cone_orders")) {
      const std::string cp = dot(path, "cone_orders");
      array_at(*c, cp);
      for (std::size_t i = 0; i < c->size(); ++i) s.cone_orders.push_back(integer_of((*c)[i], at(cp, i)));
    }
    const std::string tp = dot(path, "tori");
    const json& tori = array_at(field(j, "tori", path), tp);
    for (std::size_t i = 0; i < tori.size(); ++i) {
      const std::string p = at(tp, i);
      pieces::SeifertTorus torus;
      if (const json* d = optional_field(tori[i], "divisibility")) torus.divisibility = integer_of(*d, dot(p, "divisibility"));
      const json& mu = array_at(field(tori[i], "mu", p), dot(p, "mu"));
      if (mu.size() != 2) throw ValidationError(dot(p, "mu"), "expected [mu_x, mu_lambda]");
      torus.mu_x = integer_of(mu[0], dot(p, "mu") + "[0]");
      torus.mu_lambda = integer_of(mu[1], dot(p, "mu") + "[1]");
      s.tori.push_back(torus);
    }
    return s;
  }
  throw ValidationError(dot(path, "type"), "expected \"hyperbolic\" or \"seifert\"");
}

json piece_json(const pieces::Piece& p) {
  json j;
  if (const auto* h = std::get_if<HyperbolicPieceData>(&p)) {
    j["type"] = "hyperbolic";
    json forms = json::array();
    for (const auto& q : h->cusp_forms) {
      json rows = json::array();
      for (std::size_t r = 0; r < q.rank(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < q.rank(); ++c) row.push_back(rational_json(q.gram()(r, c)));
        rows.push_back(row);
      }
      forms.push_back(rows);
    }
    j["cusp_forms"] = forms;
    json basis = json::array();
    for (std::size_t r = 0; r < h->del_h2.rank(); ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < h->del_h2.ambient_rank(); ++c) row.push_back(integer_json(h->del_h2.basis()(r, c)));
      basis.push_back(row);
    }
    j["del_h2"] = basis;
    return j;
  }
  const auto& s = std::get<SeifertPieceData>(p);
  j["type"] = "seifert";
  j["base"] = s.base_orientable ? "orientable" : "nonorientable";
  j["genus"] = s.genus;
  json cones = json::array();
  for (const auto& a : s.cone_orders) cones.push_back(integer_json(a));
  j["cone_orders"] = cones;
  json tori = json::array();
  for (const auto& t : s.tori)
    tori.push_back({{"divisibility", integer_json(t.divisibility)},
                    {"mu", json::array({integer_json(t.mu_x), integer_json(t.mu_lambda)})}});
  j["tori"] = tori;
  return j;
}

torus::TorusAuto matrix_of(const json& j, const std::string& path) {
  const json& rows = array_at(j, path);
  if (rows.size() != 2) throw ValidationError(path, "expected a 2x2 integer matrix");
  std::int64_t e[4];
  for (std::size_t r = 0; r < 2; ++r) {
    const json& row = array_at(rows[r], at(path, r));
    if (row.size() != 2) throw ValidationError(path, "expected a 2x2 integer matrix");
    for (std::size_t c = 0; c < 2; ++c) e[2 * r + c] = small_of(row[c], at(at(path, r), c));
  }
  try {
    return torus::TorusAuto::from_entries(e[0], e[1], e[2], e[3]);
  } catch (const ValidationError& err) {
    throw ValidationError(path, err.what());
  }
}

json matrix_json(const torus::TorusAuto& a) {
  const auto e = a.entries();
  return json::array({json::array({e[0], e[1]}), json::array({e[2], e[3]})});
}

BudgetSection budget_of(const json& j, const std::string& path) {
  BudgetSection b;
  auto positive = [&](const char* key) -> std::optional<Integer> {
    const json* f = optional_field(j, key);
    if (!f) return std::nullopt;
    Integer z = integer_of(*f, dot(path, key));
    if (z < 1) throw ValidationError(dot(path, key), "must be a positive integer");
    return z;
  };
  auto small = [&](const char* key, unsigned long fallback) {
    auto z = positive(key);
    if (!z) return fallback;
    if (!z->fits_ulong_p()) throw ValidationError(dot(path, key), "integer out of range");
    return z->get_ui();
  };
  if (!j.is_object()) throw ValidationError(path, "expected an object");
  b.budget.t = small("t", 1);
  b.budget.h = small("h", 1);
  if (const json* e = optional_field(j, "eps3")) {
    b.budget.eps3 = rational_of(*e, dot(path, "eps3"));
    if (b.budget.eps3 <= 0) throw ValidationError(dot(path, "eps3"), "must be positive");
  }
  if (const json* s = optional_field(j, "sv_M")) {
    b.budget.sv_m = rational_of(*s, dot(path, "sv_M"));
    if (*b.budget.sv_m < 0) throw ValidationError(dot(path, "sv_M"), "must be nonnegative");
  }
  b.budget.d = positive("d");
  b.h1_mod_d_order = positive("h1_mod_d_order");
  b.tor_order = positive("tor_order");
  b.lens_cap = positive("lens_cap");
  return b;
}

json budget_json(const BudgetSection& b) {
  json j;
  j["t"] = b.budget.t;
  j["h"] = b.budget.h;
  j["eps3"] = rational_json(b.budget.eps3);
  if (b.budget.sv_m) j["sv_M"] = rational_json(*b.budget.sv_m);
  if (b.budget.d) j["d"] = integer_json(*b.budget.d);
  if (b.h1_mod_d_order) j["h1_mod_d_order"] = integer_json(*b.h1_mod_d_order);
  if (b.tor_order) j["tor_order"] = integer_json(*b.tor_order);
  if (b.lens_cap) j["lens_cap"] = integer_json(*b.lens_cap);
  return j;
}

json document_json(const ManifoldDocument& doc) {
  const auto& g = doc.pg.graph;
  json j;
  j["schema_version"] = kSchemaVersion;
  json vertices = json::array();
  for (const auto& v : g.vertices()) vertices.push_back({{"kind", kind_name(v.kind)}});
  j["vertices"] = vertices;
  json edges = json::array();
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    json ends = json::array();
    const std::size_t slots = g.edges()[e].kind == graph::Kind::semi ? 1 : 2;
    for (std::size_t s = 0; s < slots; ++s) {
      const std::size_t d = g.end_id(e, s);
      ends.push_back({{"vertex", g.ends()[d].vertex}, {"torus", doc.pg.torus_of_end[d]}});
    }
    edges.push_back({{"kind", kind_name(g.edges()[e].kind)}, {"ends", ends}});
  }
  j["edges"] = edges;
  json ps = json::array();
  for (const auto& p : doc.pg.pieces) ps.push_back(piece_json(p));
  j["pieces"] = ps;
  if (doc.phi) {
    json gl = json::array();
    for (std::size_t d = 0; d < doc.phi->maps.size(); ++d)
      gl.push_back({{"end", d}, {"matrix", matrix_json(doc.phi->maps[d])}});
    j["gluing"] = gl;
  }
  if (doc.budget) j["budget"] = budget_json(*doc.budget);
  return j;
}

bool same_piece(const pieces::Piece& a, const pieces::Piece& b) {
  if (a.index() != b.index()) return false;
  if (const auto* h = std::get_if<HyperbolicPieceData>(&a)) {
    const auto& k = std::get<HyperbolicPieceData>(b);
    return h->cusp_forms == k.cusp_forms && h->del_h2.ambient_rank() == k.del_h2.ambient_rank() &&
           h->del_h2.basis() == k.del_h2.basis();
  }
  const auto& s = std::get<SeifertPieceData>(a);
  const auto& t = std::get<SeifertPieceData>(b);
  if (s.base_orientable != t.base_orientable || s.genus != t.genus || s.cone_orders != t.cone_orders ||
      s.tori.size() != t.tori.size())
    return false;
  for (std::size_t i = 0; i < s.tori.size(); ++i)
    if (s.tori[i].divisibility != t.tori[i].divisibility || s.tori[i].mu_x != t.tori[i].mu_x ||
        s.tori[i].mu_lambda != t.tori[i].mu_lambda)
      return false;
  return true;
}

bool same_budget(const BudgetSection& a, const BudgetSection& b) {
  return a.budget.t == b.budget.t && a.budget.h == b.budget.h && a.budget.eps3 == b.budget.eps3 &&
         a.budget.sv_m == b.budget.sv_m && a.budget.d == b.budget.d && a.h1_mod_d_order == b.h1_mod_d_order &&
         a.tor_order == b.tor_order && a.lens_cap == b.lens_cap;
}

}  // namespace

ManifoldDocument parse_document(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("", std::string("syntax error: ") + e.what());
  }
  if (!root.is_object()) throw ValidationError("", "document must be a JSON object");
  const json& version = field(root, "schema_version", "");
  if (!version.is_number_integer() || version.get<long long>() != kSchemaVersion)
    throw ValidationError("schema_version", "unsupported schema version (expected " + std::to_string(kSchemaVersion) + ")");

  std::vector<graph::Vertex> vertices;
  const json& vs = array_at(field(root, "vertices", ""), "vertices");
  for (std::size_t v = 0; v < vs.size(); ++v) {
    graph::Vertex vertex;
    if (const json* k = optional_field(vs[v], "kind")) vertex.kind = kind_of(*k, dot(at("vertices", v), "kind"));
    vertices.push_back(vertex);
  }

  std::vector<graph::Edge> edges;
  std::vector<std::vector<std::size_t>> tori;
  const json& es = array_at(field(root, "edges", ""), "edges");
  for (std::size_t e = 0; e < es.size(); ++e) {
    const std::string ep = at("edges", e);
    graph::Edge edge;
    if (const json* k = optional_field(es[e], "kind")) edge.kind = kind_of(*k, dot(ep, "kind"));
    const std::string np = dot(ep, "ends");
    const json& ends = array_at(field(es[e], "ends", ep), np);
    const std::size_t want = edge.kind == graph::Kind::semi ? 1 : 2;
    if (ends.size() != want)
      throw ValidationError(np, std::string(edge.kind == graph::Kind::semi ? "a semi-edge" : "an entire edge") +
                                    " has " + std::to_string(want) + (want == 1 ? " end" : " ends"));
    std::vector<std::size_t> ts;
    for (std::size_t s = 0; s < ends.size(); ++s) {
      const std::size_t v = index_of(field(ends[s], "vertex", at(np, s)), dot(at(np, s), "vertex"));
      if (v >= vertices.size()) throw ValidationError(dot(at(np, s), "vertex"), "unknown vertex " + std::to_string(v));
      edge.endpoints.push_back(v);
      ts.push_back(index_of(field(ends[s], "torus", at(np, s)), dot(at(np, s), "torus")));
    }
    edges.push_back(std::move(edge));
    tori.push_back(std::move(ts));
  }

  ManifoldDocument doc;
  doc.pg.graph = graph::DecompGraph(std::move(vertices), std::move(edges));
  doc.pg.torus_of_end.assign(doc.pg.graph.ends().size(), 0);
  for (std::size_t e = 0; e < tori.size(); ++e)
    for (std::size_t s = 0; s < tori[e].size(); ++s) doc.pg.torus_of_end[doc.pg.graph.end_id(e, s)] = tori[e][s];

  const json& ps = array_at(field(root, "pieces", ""), "pieces");
  for (std::size_t v = 0; v < ps.size(); ++v) doc.pg.pieces.push_back(piece_of(ps[v], at("pieces", v)));
  gluing::validate(doc.pg);

  if (const json* gl = optional_field(root, "gluing")) {
    array_at(*gl, "gluing");
    gluing::Gluing phi;
    for (std::size_t d = 0; d < gl->size(); ++d) {
      const std::string p = at("gluing", d);
      if (index_of(field((*gl)[d], "end", p), dot(p, "end")) != d)
        throw ValidationError(dot(p, "end"), "gluing entries must be listed in end order; expected end " + std::to_string(d));
      phi.maps.push_back(matrix_of(field((*gl)[d], "matrix", p), dot(p, "matrix")));
    }
    gluing::validate(doc.pg, phi);
    doc.phi = std::move(phi);
  }
  if (const json* b = optional_field(root, "budget")) doc.budget = budget_of(*b, "budget");
  return doc;
}

std::string print_document(const ManifoldDocument& doc) { return document_json(doc).dump(2) + "\n"; }

bool same_document(const ManifoldDocument& a, const ManifoldDocument& b) {
  const auto& ga = a.pg.graph;
  const auto& gb = b.pg.graph;
  if (ga.vertices().size() != gb.vertices().size() || ga.edges().size() != gb.edges().size()) return false;
  for (std::size_t v = 0; v < ga.vertices().size(); ++v)
    if (ga.vertices()[v].kind != gb.vertices()[v].kind) return false;
  for (std::size_t e = 0; e < ga.edges().size(); ++e)
    if (ga.edges()[e].kind != gb.edges()[e].kind || ga.edges()[e].endpoints != gb.edges()[e].endpoints) return false;
  if (a.pg.torus_of_end != b.pg.torus_of_end || a.pg.pieces.size() != b.pg.pieces.size()) return false;
  for (std::size_t v = 0; v < a.pg.pieces.size(); ++v)
    if (!same_piece(a.pg.pieces[v], b.pg.pieces[v])) return false;
  if (a.phi.has_value() != b.phi.has_value()) return false;
  if (a.phi && a.phi->maps != b.phi->maps) return false;
  if (a.budget.has_value() != b.budget.has_value()) return false;
  return !a.budget || same_budget(*a.budget, *b.budget);
}

// ---------------------------------------------------------------------------
// reports

namespace {

struct Enclosure {
  std::string lo, hi;
};

Enclosure split_enclosure(const std::string& s) {
  const auto comma = s.find(", ");
  return {s.substr(1, comma - 1), s.substr(comma + 2, s.size() - comma - 3)};
}

json value_json(const gluing::DistortionValue& v) {
  json j{{"delta", rational_json(v.delta)}, {"root", v.root}};
  if (v.is_zero()) {
    j["enclosure"] = json::array({"0", "0"});
  } else {
    const auto e = split_enclosure(v.enclosure(12));
    j["enclosure"] = json::array({e.lo, e.hi});
  }
  return j;
}

std::string value_text(const gluing::DistortionValue& v) {
  if (v.is_zero()) return "0";
  return to_string(v.delta) + "^(1/" + std::to_string(v.root) + ") in " + v.enclosure(12);
}

ManifoldDocument load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("", "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str());
}

const gluing::Gluing& require_gluing(const ManifoldDocument& doc) {
  if (!doc.phi) throw ValidationError("gluing", "this command needs a gluing section");
  return *doc.phi;
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

int cmd_distortion(const ManifoldDocument& doc, bool as_json, std::ostream& out) {
  const auto& phi = require_gluing(doc);
  const auto report = gluing::distortion_report(doc.pg, phi);
  const bool nondegenerate = gluing::is_nondegenerate(doc.pg, phi);
  if (as_json) {
    json j;
    j["nondegenerate"] = nondegenerate;
    json es = json::array();
    for (std::size_t e = 0; e < report.edges.size(); ++e) {
      json x = value_json(report.edges[e]);
      x["edge"] = e;
      es.push_back(x);
    }
    json vs = json::array();
    for (std::size_t v = 0; v < report.vertices.size(); ++v) {
      json x = value_json(report.vertices[v]);
      x["vertex"] = v;
      vs.push_back(x);
    }
    j["edges"] = es;
    j["vertices"] = vs;
    j["primary"] = value_json(report.primary);
    emit(out, j);
    return kExitOk;
  }
  out << "nondegenerate: " << (nondegenerate ? "yes" : "no") << "\n";
  for (std::size_t e = 0; e < report.edges.size(); ++e)
    out << "edge " << e << ": Delta_e = " << to_string(report.edges[e].delta) << ", D_e = " << value_text(report.edges[e])
        << "\n";
  for (std::size_t v = 0; v < report.vertices.size(); ++v)
    out << "vertex " << v << ": Delta_v = " << to_string(report.vertices[v].delta)
        << ", D_v = " << value_text(report.vertices[v]) << "\n";
  out << "primary: " << value_text(report.primary) << "\n";
  return kExitOk;
}

int cmd_check(const ManifoldDocument& doc, bool as_json, std::ostream& out) {
  const auto& g = doc.pg.graph;
  json j;
  j["valid"] = true;
  j["vertices"] = g.vertices().size();
  j["edges"] = g.edges().size();
  j["components"] = g.component_count();
  j["entire"] = g.is_entire();
  j["loops"] = g.has_loops();
  if (doc.phi) {
    const bool nd = gluing::is_nondegenerate(doc.pg, *doc.phi);
    const bool pd = gluing::blocks_positive_definite(doc.pg, *doc.phi);
    j["nondegenerate"] = nd;
    j["blocks_positive_definite"] = pd;
    json hyp = json::array();
    if (nd)
      for (std::size_t v = 0; v < g.vertices().size(); ++v) {
        if (!pieces::is_hyperbolic(doc.pg.pieces[v])) continue;
        const auto r = gluing::atoroidal_vertex_bound_check(doc.pg, *doc.phi, v);
        hyp.push_back({{"vertex", v},
                       {"blockwise_domination", r.blockwise_domination},
                       {"discriminant_monotone", r.discriminant_monotone}});
      }
    j["hyperbolic_vertices"] = hyp;
  }
  if (as_json) {
    emit(out, j);
    return kExitOk;
  }
  out << "valid: yes\n";
  out << "graph: " << g.vertices().size() << " vertices, " << g.edges().size() << " edges, " << g.component_count()
      << (g.component_count() == 1 ? " component" : " components") << (g.is_entire() ? "" : ", has semi-objects")
      << (g.has_loops() ? ", has loops" : "") << "\n";
  if (!doc.phi) {
    out << "gluing: absent\n";
    return kExitOk;
  }
  out << "nondegenerate: " << (j["nondegenerate"].get<bool>() ? "yes" : "no") << "\n";
  out << "blocks positive definite: " << (j["blocks_positive_definite"].get<bool>() ? "yes" : "no") << "\n";
  for (const auto& h : j["hyperbolic_vertices"])
    out << "vertex " << h["vertex"].get<std::size_t>()
        << ": blockwise domination " << (h["blockwise_domination"].get<bool>() ? "yes" : "no")
        << ", discriminant monotone " << (h["discriminant_monotone"].get<bool>() ? "yes" : "no") << "\n";
  return kExitOk;
}

int cmd_enumerate(const ManifoldDocument& doc, const Rational& c, unsigned long long cap, bool as_json,
                  std::ostream& out) {
  shearing::EnumerationOptions options;
  options.cap = cap;
  const auto result = shearing::enumerate_gluings(doc.pg, c, options);
  if (as_json) {
    json j;
    j["budget"] = rational_json(c);
    j["cells"] = result.cells;
    json classes = json::array();
    for (const auto& per_edge : result.classes) {
      json list = json::array();
      for (const auto& k : per_edge) list.push_back({{"phi", matrix_json(k.phi)}, {"delta", rational_json(k.delta)}});
      classes.push_back(list);
    }
    j["edge_classes"] = classes;
    json gl = json::array();
    for (const auto& rec : result.gluings) {
      json maps = json::array();
      for (const auto& m : rec.phi.maps) maps.push_back(matrix_json(m));
      gl.push_back({{"maps", maps},
                    {"edge_class", rec.edge_class},
                    {"indices", rec.indices},
                    {"primary", value_json(rec.report.primary)}});
    }
    j["gluings"] = gl;
    j["count"] = result.gluings.size();
    emit(out, j);
    return kExitOk;
  }
  out << "budget C = " << to_string(c) << ", cells swept: " << result.cells << "\n";
  for (std::size_t e = 0; e < result.classes.size(); ++e) {
    out << "edge " << e << ": " << result.classes[e].size() << " classes with Delta_e < C^4\n";
    for (std::size_t k = 0; k < result.classes[e].size(); ++k)
      out << "  [" << k << "] phi = " << result.classes[e][k].phi.to_string()
          << ", Delta_e = " << to_string(result.classes[e][k].delta) << "\n";
  }
  out << result.gluings.size() << " gluings\n";
  for (std::size_t i = 0; i < result.gluings.size(); ++i) {
    const auto& rec = result.gluings[i];
    out << "  #" << i << " classes (";
    for (std::size_t e = 0; e < rec.edge_class.size(); ++e) out << (e ? "," : "") << rec.edge_class[e];
    out << ") indices (";
    for (std::size_t v = 0; v < rec.indices.size(); ++v) out << (v ? "," : "") << rec.indices[v];
    out << ") primary " << value_text(rec.report.primary) << "\n";
  }
  return kExitOk;
}

int cmd_cover(const ManifoldDocument& doc, bool entire, std::size_t component, bool as_json, std::ostream& out) {
  // Without a gluing the graph and pieces are still lifted; a placeholder
  // gluing is carried along and dropped.
  gluing::Gluing phi;
  if (doc.phi)
    phi = *doc.phi;
  else
    phi.maps.assign(doc.pg.graph.ends().size(), torus::TorusAuto::from_entries(1, 0, 0, -1));
  const auto lifted = entire ? gluing::entire_cover(doc.pg, phi, component) : gluing::loopless_cover(doc.pg, phi, component);
  ManifoldDocument cover;
  cover.pg = lifted.pg;
  if (doc.phi) cover.phi = lifted.phi;
  cover.budget = doc.budget;

  std::optional<gluing::DistortionValue> base_primary, cover_primary;
  if (doc.phi) {
    base_primary = gluing::primary_distortion(doc.pg, *doc.phi);
    cover_primary = gluing::primary_distortion(cover.pg, *cover.phi);
  }
  const auto& g = cover.pg.graph;
  if (as_json) {
    json j;
    j["kind"] = entire ? "entire" : "loopless";
    j["component"] = component;
    j["document"] = document_json(cover);
    j["covering_map"] = {{"vertex", lifted.map.vertex},
                         {"edge", lifted.map.edge},
                         {"end", lifted.map.end},
                         {"vertex_copy", lifted.map.vertex_copy},
                         {"end_copy", lifted.map.end_copy}};
    if (base_primary) {
      j["base_primary"] = value_json(*base_primary);
      j["cover_primary"] = value_json(*cover_primary);
    }
    emit(out, j);
    return kExitOk;
  }
  out << (entire ? "entire" : "loopless") << " double cover, component " << component << ": " << g.vertices().size()
      << " vertices, " << g.edges().size() << " edges (base " << doc.pg.graph.vertices().size() << " vertices, "
      << doc.pg.graph.edges().size() << " edges)\n";
  for (std::size_t v = 0; v < g.vertices().size(); ++v)
    out << "  vertex " << v << " -> base " << lifted.map.vertex[v] << " copy " << lifted.map.vertex_copy[v] << "\n";
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    out << "  edge " << e << " -> base " << lifted.map.edge[e] << " (";
    for (std::size_t k = 0; k < g.edges()[e].endpoints.size(); ++k) out << (k ? "," : "") << g.edges()[e].endpoints[k];
    out << ")\n";
  }
  if (base_primary)
    out << "primary distortion: base " << value_text(*base_primary) << ", cover " << value_text(*cover_primary) << "\n";
  return kExitOk;
}

seifert::SeifertInvariants parse_invariants(const std::vector<std::string>& words) {
  if (words.size() < 2) throw ValidationError("invariants", "expected: g b0 [b1/a1 ...]");
  const Rational g = parse_rational(words[0]);
  if (g.get_den() != 1 || g < 0 || !g.get_num().fits_uint_p())
    throw ValidationError("invariants[0]", "genus must be a nonnegative integer");
  const Rational b0 = parse_rational(words[1]);
  if (b0.get_den() != 1) throw ValidationError("invariants[1]", "b0 must be an integer");
  std::vector<std::pair<Integer, Integer>> raw;
  for (std::size_t i = 2; i < words.size(); ++i) {
    const std::string& w = words[i];
    const auto slash = w.find('/');
    const std::string path = "invariants[" + std::to_string(i) + "]";
    if (slash == std::string::npos) throw ValidationError(path, "expected b/a");
    try {
      // read b and a separately; "2/4" must not silently become 1/2
      const Rational b = parse_rational(w.substr(0, slash));
      const Rational a = parse_rational(w.substr(slash + 1));
      if (b.get_den() != 1 || a.get_den() != 1) throw ValidationError(path, "expected integers b/a");
      raw.emplace_back(a.get_num(), b.get_num());
    } catch (const ValidationError& e) {
      throw ValidationError(path, e.what());
    }
  }
  return seifert::normalize(static_cast<unsigned>(g.get_num().get_ui()), b0.get_num(), raw);
}

int cmd_seifert(const std::vector<std::string>& words, bool as_json, std::ostream& out) {
  const auto s = parse_invariants(words);
  const Rational x = seifert::chi(s);
  const Rational e = seifert::euler_number(s);
  std::optional<Integer> tor;
  if (e != 0) tor = seifert::torsion_order(s);
  if (as_json) {
    json pairs = json::array();
    for (const auto& [a, b] : s.pairs) pairs.push_back(json::array({integer_json(a), integer_json(b)}));
    json j{{"normalized", s.to_string()},
           {"g", s.g},
           {"b0", integer_json(s.b0)},
           {"pairs", pairs},
           {"chi", rational_json(x)},
           {"e", rational_json(e)}};
    j["torsion_order"] = tor ? integer_json(*tor) : json(nullptr);
    emit(out, j);
    return kExitOk;
  }
  out << "normalized: " << s.to_string() << "\n";
  out << "chi = " << to_string(x) << "\n";
  out << "e = " << to_string(e) << "\n";
  if (tor)
    out << "|Tor H_1| = " << to_string(*tor) << "\n";
  else
    out << "|Tor H_1|: formula needs e != 0\n";
  return kExitOk;
}

struct TargetFlags {
  std::string file;
  std::string d, h1, tor, sv, lens_cap;
  unsigned long long max = 200000;
};

int cmd_targets(const TargetFlags& f, bool as_json, std::ostream& out) {
  BudgetSection b;
  if (!f.file.empty()) {
    const auto doc = load(f.file);
    if (doc.budget) b = *doc.budget;
  }
  auto integer_flag = [](const std::string& text, const char* name) {
    const Rational r = parse_rational(text);
    if (r.get_den() != 1 || r < 1) throw ValidationError(name, "must be a positive integer");
    return r.get_num();
  };
  if (!f.d.empty()) b.budget.d = integer_flag(f.d, "--d");
  if (!f.h1.empty()) b.h1_mod_d_order = integer_flag(f.h1, "--h1-mod-d");
  if (!f.tor.empty()) b.tor_order = integer_flag(f.tor, "--tor");
  if (!f.lens_cap.empty()) b.lens_cap = integer_flag(f.lens_cap, "--lens-cap");
  if (!f.sv.empty()) {
    b.budget.sv_m = parse_rational(f.sv);
    if (*b.budget.sv_m < 0) throw ValidationError("--sv", "must be nonnegative");
  }
  if (!b.budget.d) throw ValidationError("budget.d", "targets need the degree d");
  seifert::TargetQuery q;
  q.d = *b.budget.d;
  q.torsion_bound = seifert::torsion_bound(q.d, b.h1_mod_d_order.value_or(1), b.tor_order.value_or(1));
  q.sv_m = b.budget.sv_m;
  q.lens_cap = b.lens_cap;
  q.max_candidates = f.max;
  const auto report = seifert::enumerate_targets(q);

  std::map<std::string, std::size_t> counts;
  for (const auto& c : report.candidates) ++counts[c.family];
  if (as_json) {
    json j;
    j["torsion_bound"] = integer_json(report.torsion_bound);
    j["lens_coarse"] = report.lens_coarse;
    j["prism_bounded"] = report.prism_bounded;
    j["hyperbolic_bounded"] = report.hyperbolic_bounded;
    j["notes"] = report.notes;
    j["counts"] = counts;
    json cs = json::array();
    for (const auto& c : report.candidates) {
      json x{{"family", c.family},
             {"invariants", c.invariants.to_string()},
             {"chi", rational_json(c.chi)},
             {"e", rational_json(c.e)},
             {"torsion_order", integer_json(c.torsion)}};
      if (c.e_floor) x["e_floor"] = rational_json(*c.e_floor);
      cs.push_back(x);
    }
    j["candidates"] = cs;
    emit(out, j);
    return kExitOk;
  }
  out << "torsion bound T = " << to_string(report.torsion_bound) << "\n";
  for (const auto& n : report.notes) out << "note: " << n << "\n";
  for (const auto& [family, n] : counts) out << family << ": " << n << " candidates\n";
  for (const auto& c : report.candidates) {
    out << "  " << c.family << " " << c.invariants.to_string() << " chi=" << to_string(c.chi) << " e=" << to_string(c.e)
        << " |Tor|=" << to_string(c.torsion);
    if (c.e_floor) out << " e_floor=" << to_string(*c.e_floor);
    out << "\n";
  }
  return kExitOk;
}

struct BudgetFlags {
  std::string file;
  unsigned long t = 0;
  unsigned long h = 0;
  std::string eps3;
};

int cmd_budget(const BudgetFlags& f, bool as_json, std::ostream& out) {
  seifert::DominationBudget b;
  if (!f.file.empty()) {
    const auto doc = load(f.file);
    if (doc.budget) b = doc.budget->budget;
  }
  if (f.t) b.t = f.t;
  if (f.h) b.h = f.h;
  if (!f.eps3.empty()) {
    b.eps3 = parse_rational(f.eps3);
    if (b.eps3 <= 0) throw ValidationError("--eps3", "must be positive");
  }
  const auto r = seifert::distortion_budget(b);
  if (as_json) {
    json j{{"t", b.t},
           {"h", b.h},
           {"eps3", rational_json(b.eps3)},
           {"area_coefficient", integer_json(r.area_coefficient)},
           {"sinh_half_eps3", json::array({r.sinh_half_eps.lower, r.sinh_half_eps.upper})},
           {"vertex_budget", json::array({r.vertex_budget.lower, r.vertex_budget.upper})},
           {"relative_width", r.vertex_budget.relative_width},
           {"max_pieces", r.max_pieces},
           {"max_tori", r.max_tori}};
    emit(out, j);
    return kExitOk;
  }
  out << "A(2t) = " << to_string(r.area_coefficient) << " pi  (t = " << b.t << ")\n";
  out << "sinh(eps3/2) in [" << r.sinh_half_eps.lower << ", " << r.sinh_half_eps.upper << "]  (eps3 = "
      << to_string(b.eps3) << ")\n";
  out << "D_v <= A(2t) / (4 sinh(eps3/2)) in [" << r.vertex_budget.lower << ", " << r.vertex_budget.upper << "]\n";
  out << "pieces <= " << r.max_pieces << ", tori <= " << r.max_tori << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Average-distortion invariants of glued graph manifolds", "glueprint"};
  app.require_subcommand(1);
  bool as_json = false;
  std::string file;

  auto* distortion = app.add_subcommand("distortion", "edge, vertex and primary distortions of a glued document");
  distortion->add_option("document", file, "manifold document (JSON)")->required();

  auto* check = app.add_subcommand("check", "validate a document and test nondegeneracy");
  check->add_option("document", file, "manifold document (JSON)")->required();

  std::string budget_text;
  unsigned long long cap = shearing::EnumerationOptions{}.cap;
  auto* enumerate = app.add_subcommand("enumerate-gluings", "nondegenerate gluings with primary distortion below C");
  enumerate->add_option("document", file, "manifold document (JSON)")->required();
  enumerate->add_option("--budget", budget_text, "distortion budget C (rational)")->required();
  enumerate->add_option("--cap", cap, "maximum number of sweep cells");

  bool entire = false, loopless = false;
  std::size_t component = 0;
  auto* cover = app.add_subcommand("cover", "entire or loopless double cover");
  cover->add_option("document", file, "manifold document (JSON)")->required();
  auto* entire_flag = cover->add_flag("--entire", entire, "remove semi-edges and semi-vertices");
  auto* loopless_flag = cover->add_flag("--loopless", loopless, "remove loops");
  entire_flag->excludes(loopless_flag);
  cover->add_option("--component", component, "component of the cover to keep");

  std::vector<std::string> words;
  auto* seif = app.add_subcommand("seifert", "normalize Seifert invariants: g b0 b1/a1 ...");
  seif->add_option("invariants", words, "g b0 b1/a1 ...")->required()->allow_extra_args();
  seif->prefix_command();  // negative b0 must not be read as a flag

  TargetFlags tf;
  auto* targets = app.add_subcommand("targets", "candidate Seifert targets of a d-domination");
  targets->add_option("document", tf.file, "document with a budget section");
  targets->add_option("--d", tf.d, "degree d");
  targets->add_option("--h1-mod-d", tf.h1, "|H_1(M; Z_d)|");
  targets->add_option("--tor", tf.tor, "|Tor H_1(M)|");
  targets->add_option("--sv", tf.sv, "Seifert volume of M (rational)");
  targets->add_option("--lens-cap", tf.lens_cap, "cap on the lens quotient order for prism targets");
  targets->add_option("--max", tf.max, "maximum number of candidates");

  BudgetFlags bf;
  auto* budget = app.add_subcommand("budget", "vertex distortion budget A(2t) / (4 sinh(eps3/2))");
  budget->add_option("document", bf.file, "document with a budget section");
  budget->add_option("--t", bf.t, "triangulation number t(M)");
  budget->add_option("--haken", bf.h, "Kneser-Haken number h(M)");
  budget->add_option("--eps3", bf.eps3, "Margulis parameter (rational, default 1/10)");

  for (auto* sub : {distortion, check, enumerate, cover, targets, budget})
    sub->add_flag("--json", as_json, "machine-readable output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, x;
    const int code = app.exit(e, o, x);
    out << o.str();
    err << x.str();
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*distortion) return cmd_distortion(load(file), as_json, out);
    if (*check) return cmd_check(load(file), as_json, out);
    if (*enumerate) return cmd_enumerate(load(file), parse_rational(budget_text), cap, as_json, out);
    if (*cover) {
      if (!entire && !loopless) throw ValidationError("cover", "pass --entire or --loopless");
      return cmd_cover(load(file), entire, component, as_json, out);
    }
    if (*seif) {
      // --json may trail the invariants since the subcommand takes the rest verbatim
      std::vector<std::string> rest;
      bool json_out = as_json;
      for (const auto& w : seif->remaining()) words.push_back(w);
      for (const auto& w : words) {
        if (w == "--json")
          json_out = true;
        else
          rest.push_back(w);
      }
      return cmd_seifert(rest, json_out, out);
    }
    if (*targets) return cmd_targets(tf, as_json, out);
    if (*budget) return cmd_budget(bf, as_json, out);
  } catch (const ResourceCapError& e) {
    err << "error: " << e.what() << "\n";
    return kExitResourceCap;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace glueprint::io
