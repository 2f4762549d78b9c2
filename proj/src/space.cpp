#include "kpsym/space.hpp"

#include <algorithm>
#include <set>

namespace kpsym {

Space::Space(std::vector<std::string> coords, std::vector<std::string> fields)
    : coords_(std::move(coords)), fields_(std::move(fields)) {
  std::set<std::string> seen;
  for (const auto& c : coords_)
    if (c.empty() || !seen.insert(c).second)
      throw Error("domain", "duplicate or empty coordinate name: " + c);
  for (const auto& f : fields_)
    if (f.empty() || !seen.insert(f).second)
      throw Error("domain", "field name clashes with another name: " + f);
}

int Space::coord_index(const std::string& name) const {
  auto it = std::find(coords_.begin(), coords_.end(), name);
  return it == coords_.end() ? -1 : static_cast<int>(it - coords_.begin());
}

int Space::field_index(const std::string& name) const {
  auto it = std::find(fields_.begin(), fields_.end(), name);
  return it == fields_.end() ? -1 : static_cast<int>(it - fields_.begin());
}

std::string Space::jet_name(const JetVar& j) const {
  if (j.index.size() != coords_.size())
    throw Error("domain", "jet multi-index size mismatch");
  if (j.order() == 0) return j.field;
  std::string s = j.field + "_";
  for (size_t i = 0; i < coords_.size(); ++i)
    for (int r = 0; r < j.index[i]; ++r) s += coords_[i];
  return s;
}

namespace {

// All decompositions of `s` into a concatenation of coordinate names.
void decompose(const std::string& s, size_t pos, const std::vector<std::string>& coords,
               std::vector<int>& counts, std::vector<std::vector<int>>& out) {
  if (pos == s.size()) {
    out.push_back(counts);
    return;
  }
  for (size_t i = 0; i < coords.size(); ++i) {
    const auto& c = coords[i];
    if (s.compare(pos, c.size(), c) == 0) {
      counts[i]++;
      decompose(s, pos + c.size(), coords, counts, out);
      counts[i]--;
    }
  }
}

}  // namespace

std::optional<JetVar> Space::parse_jet(const std::string& name) const {
  if (field_index(name) >= 0)
    return JetVar{name, std::vector<int>(coords_.size(), 0)};
  auto us = name.find('_');
  if (us == std::string::npos) return std::nullopt;
  std::string field = name.substr(0, us);
  if (field_index(field) < 0) return std::nullopt;
  std::string suffix = name.substr(us + 1);
  if (suffix.empty()) return std::nullopt;
  std::vector<int> counts(coords_.size(), 0);
  std::vector<std::vector<int>> found;
  decompose(suffix, 0, coords_, counts, found);
  if (found.empty()) return std::nullopt;
  // symmetric multi-index: different orderings give the same counts
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  if (found.size() > 1)
    throw Error("parse", "ambiguous jet suffix in " + name);
  return JetVar{field, found[0]};
}

Expr Space::jet(const std::string& field, const std::vector<int>& index) const {
  return sym(jet_name(JetVar{field, index}));
}

}  // namespace kpsym
