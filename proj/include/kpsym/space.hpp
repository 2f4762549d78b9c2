#pragma once

#include "kpsym/expr.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kpsym {

/// A dependent-field derivative coordinate on the jet space: field name and a
/// multi-index over the independent coordinates (order = sum of entries).
/// Multi-indices are symmetric; names list coordinates in space order, so
/// u_{xy} and u_{yx} share the name "u_xy".
struct JetVar {
  std::string field;
  std::vector<int> index;

  int order() const {
    int s = 0;
    for (int i : index) s += i;
    return s;
  }
};

/// Ordered independent coordinates and dependent fields.
class Space {
public:
  Space() = default;
  Space(std::vector<std::string> coords, std::vector<std::string> fields);

  const std::vector<std::string>& coords() const { return coords_; }
  const std::vector<std::string>& fields() const { return fields_; }

  int coord_index(const std::string& name) const;   // -1 if absent
  int field_index(const std::string& name) const;   // -1 if absent

  std::string jet_name(const JetVar& j) const;
  /// Parses "u_xxy" style names; returns nullopt for non-jet identifiers.
  /// Order-0 jets are the bare fields ("u"). Throws on ambiguous suffixes.
  std::optional<JetVar> parse_jet(const std::string& name) const;

  Expr jet(const std::string& field, const std::vector<int>& index) const;
  Expr jet(const JetVar& j) const { return jet(j.field, j.index); }

private:
  std::vector<std::string> coords_;
  std::vector<std::string> fields_;
};

}  // namespace kpsym
