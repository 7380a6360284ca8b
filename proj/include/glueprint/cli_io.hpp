#pragma once

// JSON manifold documents and the command-line front end.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "glueprint/gluing_engine.hpp"
#include "glueprint/seifert_arithmetic.hpp"

namespace glueprint::io {

inline constexpr int kSchemaVersion = 1;

struct BudgetSection {
  seifert::DominationBudget budget;
  // inputs of the torsion bound and the prism cap, used by `targets`
  std::optional<Integer> h1_mod_d_order;
  std::optional<Integer> tor_order;
  std::optional<Integer> lens_cap;
};

struct ManifoldDocument {
  gluing::PreglueGraph pg;
  std::optional<gluing::Gluing> phi;
  std::optional<BudgetSection> budget;
};

/// Parses and validates; throws ValidationError whose path names the field.
ManifoldDocument parse_document(std::string_view text);

/// Canonical JSON text (two-space indent, trailing newline).
std::string print_document(const ManifoldDocument& doc);

bool same_document(const ManifoldDocument& a, const ManifoldDocument& b);

/// Exit status 0 on success, 1 on invalid input, 2 when a resource cap is hit.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitResourceCap = 2;

}  // namespace glueprint::io
