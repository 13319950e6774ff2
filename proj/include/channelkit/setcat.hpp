#ifndef CHANNELKIT_SETCAT_HPP
#define CHANNELKIT_SETCAT_HPP

// Finite sets, total functions between them, and finite limits/colimits of
// graph-shaped set diagrams.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "channelkit/error.hpp"

namespace channelkit {

/// An ordered finite set of distinct names. Immutable and cheap to copy;
/// copies share storage.
class FinSet {
 public:
  FinSet() : data_(empty_data()) {}

  explicit FinSet(std::vector<std::string> names) {
    auto data = std::make_shared<Data>();
    data->index.reserve(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
      auto [it, inserted] = data->index.emplace(names[i], i);
      detail::require(inserted, ErrorKind::InvalidArgument,
                      "duplicate set element '" + names[i] + "'");
    }
    data->names = std::move(names);
    data_ = std::move(data);
  }

  FinSet(std::initializer_list<std::string> names)
      : FinSet(std::vector<std::string>(names)) {}

  std::size_t size() const noexcept { return data_->names.size(); }
  bool empty() const noexcept { return data_->names.empty(); }

  const std::string& operator[](std::size_t i) const { return data_->names[i]; }
  const std::vector<std::string>& elements() const noexcept { return data_->names; }
  auto begin() const noexcept { return data_->names.begin(); }
  auto end() const noexcept { return data_->names.end(); }

  std::optional<std::size_t> index_of(std::string_view name) const {
    auto it = data_->index.find(std::string(name));
    if (it == data_->index.end()) return std::nullopt;
    return it->second;
  }

  std::size_t at(std::string_view name) const {
    auto i = index_of(name);
    detail::require(i.has_value(), ErrorKind::InvalidArgument,
                    "'" + std::string(name) + "' is not an element of " + to_string());
    return *i;
  }

  bool contains(std::string_view name) const { return index_of(name).has_value(); }

  /// True when both values share storage (always implies equality).
  bool same_storage(const FinSet& other) const noexcept { return data_ == other.data_; }

  std::string to_string() const {
    std::string out = "{";
    for (std::size_t i = 0; i < size(); ++i) {
      if (i) out += ", ";
      out += (*this)[i];
    }
    return out + "}";
  }

  friend bool operator==(const FinSet& a, const FinSet& b) {
    return a.data_ == b.data_ || a.data_->names == b.data_->names;
  }

 private:
  struct Data {
    std::vector<std::string> names;
    std::unordered_map<std::string, std::size_t> index;
  };

  static std::shared_ptr<const Data> empty_data() {
    static const auto empty = std::make_shared<const Data>();
    return empty;
  }

  std::shared_ptr<const Data> data_;
};

/// A total function between finite sets, stored as an index table.
class SetFn {
 public:
  SetFn() = default;

  SetFn(FinSet source, FinSet target, std::vector<std::size_t> table)
      : source_(std::move(source)), target_(std::move(target)), table_(std::move(table)) {
    detail::require(table_.size() == source_.size(), ErrorKind::InvalidArgument,
                    "function table does not cover its source " + source_.to_string());
    for (std::size_t v : table_) {
      detail::require(v < target_.size(), ErrorKind::InvalidArgument,
                      "function image outside target " + target_.to_string());
    }
  }

  /// Builds from a name-to-name assignment; every source element must be mapped.
  static SetFn from_names(FinSet source, FinSet target,
                          const std::map<std::string, std::string>& assignment) {
    std::vector<std::size_t> table(source.size());
    for (std::size_t i = 0; i < source.size(); ++i) {
      auto it = assignment.find(source[i]);
      detail::require(it != assignment.end(), ErrorKind::InvalidArgument,
                      "no image given for '" + source[i] + "'");
      auto j = target.index_of(it->second);
      detail::require(j.has_value(), ErrorKind::InvalidArgument,
                      "image '" + it->second + "' of '" + source[i] +
                          "' is not in " + target.to_string());
      table[i] = *j;
    }
    for (const auto& [from, to] : assignment) {
      detail::require(source.contains(from), ErrorKind::InvalidArgument,
                      "'" + from + "' is not in " + source.to_string());
    }
    return SetFn(std::move(source), std::move(target), std::move(table));
  }

  static SetFn identity(const FinSet& set) {
    std::vector<std::size_t> table(set.size());
    std::iota(table.begin(), table.end(), std::size_t{0});
    return SetFn(set, set, std::move(table));
  }

  const FinSet& source() const noexcept { return source_; }
  const FinSet& target() const noexcept { return target_; }
  std::span<const std::size_t> table() const noexcept { return table_; }

  std::size_t operator()(std::size_t i) const { return table_[i]; }
  const std::string& operator()(std::string_view name) const {
    return target_[table_[source_.at(name)]];
  }

  friend bool operator==(const SetFn& a, const SetFn& b) {
    return a.table_ == b.table_ && a.source_ == b.source_ && a.target_ == b.target_;
  }

 private:
  FinSet source_;
  FinSet target_;
  std::vector<std::size_t> table_;
};

/// Diagrammatic composition: apply `first`, then `second`.
inline SetFn compose(const SetFn& first, const SetFn& second) {
  detail::require(first.target() == second.source(), ErrorKind::InvalidArgument,
                  "cannot compose: codomain " + first.target().to_string() +
                      " differs from domain " + second.source().to_string());
  std::vector<std::size_t> table(first.source().size());
  for (std::size_t i = 0; i < table.size(); ++i) table[i] = second(first(i));
  return SetFn(first.source(), second.target(), std::move(table));
}

inline bool is_injective(const SetFn& f) {
  std::vector<bool> hit(f.target().size(), false);
  for (std::size_t v : f.table()) {
    if (hit[v]) return false;
    hit[v] = true;
  }
  return true;
}

inline bool is_surjective(const SetFn& f) {
  std::vector<bool> hit(f.target().size(), false);
  for (std::size_t v : f.table()) hit[v] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

inline bool is_bijection(const SetFn& f) {
  return f.source().size() == f.target().size() && is_injective(f);
}

/// Inverse of a bijection.
inline SetFn inverse(const SetFn& f) {
  detail::require(is_bijection(f), ErrorKind::InvalidArgument,
                  "only bijections have inverses");
  std::vector<std::size_t> table(f.target().size());
  for (std::size_t i = 0; i < f.source().size(); ++i) table[f(i)] = i;
  return SetFn(f.target(), f.source(), std::move(table));
}

// ---------------------------------------------------------------------------
// Element naming for derived sets.

namespace detail {

inline std::string escape(std::string_view name, std::string_view specials) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    if (c == '\\' || specials.find(c) != std::string_view::npos) out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

/// "name@node", with '@' and '\' escaped inside the name.
inline std::string tag_element(std::string_view name, std::size_t node) {
  return detail::escape(name, "@") + "@" + std::to_string(node);
}

/// "(x,y,...)", with ',', '(' and ')' escaped inside each component.
inline std::string tuple_name(const std::vector<std::string_view>& parts) {
  std::string out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += detail::escape(parts[i], ",()");
  }
  return out + ")";
}

// ---------------------------------------------------------------------------
// Diagrams, cocones and cones.

struct SetEdge {
  std::size_t source = 0;
  std::size_t target = 0;
  SetFn map;
};

/// A finite directed multigraph labelled by sets and functions.
struct SetDiagram {
  std::vector<FinSet> nodes;
  std::vector<SetEdge> edges;

  void validate() const {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto& edge = edges[e];
      detail::require(edge.source < nodes.size() && edge.target < nodes.size(),
                      ErrorKind::MalformedDiagram,
                      "edge " + std::to_string(e) + " names a missing node");
      detail::require(edge.map.source() == nodes[edge.source] &&
                          edge.map.target() == nodes[edge.target],
                      ErrorKind::MalformedDiagram,
                      "edge " + std::to_string(e) + " does not match its endpoint sets");
    }
  }
};

struct Cocone {
  FinSet apex;
  std::vector<SetFn> legs;  ///< legs[i] : nodes[i] -> apex
};

struct Cone {
  FinSet apex;
  std::vector<SetFn> legs;  ///< legs[i] : apex -> nodes[i]
};

/// Checks legs against nodes and commutation on every generating edge.
inline bool commutes(const SetDiagram& d, const Cocone& c) {
  if (c.legs.size() != d.nodes.size()) return false;
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    if (!(c.legs[i].source() == d.nodes[i]) || !(c.legs[i].target() == c.apex)) return false;
  }
  for (const auto& e : d.edges) {
    if (!(compose(e.map, c.legs[e.target]) == c.legs[e.source])) return false;
  }
  return true;
}

inline bool commutes(const SetDiagram& d, const Cone& c) {
  if (c.legs.size() != d.nodes.size()) return false;
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    if (!(c.legs[i].target() == d.nodes[i]) || !(c.legs[i].source() == c.apex)) return false;
  }
  for (const auto& e : d.edges) {
    if (!(compose(c.legs[e.source], e.map) == c.legs[e.target])) return false;
  }
  return true;
}

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // The smaller index always becomes the root, so each root is the least
  // member of its class.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace detail

/// Colimit of a set diagram: the tagged disjoint union quotiented by the
/// least equivalence with x ~ e(x) for every edge e. Each class is named by
/// its least member in (node, insertion order), and classes are ordered the
/// same way.
inline Cocone set_colimit(const SetDiagram& d) {
  d.validate();
  std::vector<std::size_t> offset(d.nodes.size() + 1, 0);
  for (std::size_t i = 0; i < d.nodes.size(); ++i) offset[i + 1] = offset[i] + d.nodes[i].size();
  const std::size_t total = offset.back();

  detail::UnionFind classes(total);
  for (const auto& e : d.edges) {
    for (std::size_t x = 0; x < e.map.source().size(); ++x) {
      classes.unite(offset[e.source] + x, offset[e.target] + e.map(x));
    }
  }

  std::vector<std::string> apex_names;
  std::vector<std::size_t> class_of_root(total, total);
  std::vector<std::size_t> class_of(total);
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    for (std::size_t x = 0; x < d.nodes[i].size(); ++x) {
      const std::size_t flat = offset[i] + x;
      const std::size_t root = classes.find(flat);
      if (class_of_root[root] == total) {
        class_of_root[root] = apex_names.size();
        apex_names.push_back(tag_element(d.nodes[i][x], i));
      }
      class_of[flat] = class_of_root[root];
    }
  }

  Cocone out{FinSet(std::move(apex_names)), {}};
  out.legs.reserve(d.nodes.size());
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    std::vector<std::size_t> table(class_of.begin() + static_cast<std::ptrdiff_t>(offset[i]),
                                   class_of.begin() + static_cast<std::ptrdiff_t>(offset[i + 1]));
    out.legs.emplace_back(d.nodes[i], out.apex, std::move(table));
  }
  return out;
}

/// Binary coproduct with its two injections.
inline std::tuple<FinSet, SetFn, SetFn> coproduct(const FinSet& a, const FinSet& b) {
  Cocone c = set_colimit(SetDiagram{{a, b}, {}});
  return {c.apex, c.legs[0], c.legs[1]};
}

/// The tuples of a limit cone, as per-node element indices.
inline std::vector<std::vector<std::size_t>> limit_tuples(const SetDiagram& d,
                                                          const Caps& caps = {}) {
  d.validate();
  const std::size_t n = d.nodes.size();
  // Edges become checkable once both endpoints are assigned.
  std::vector<std::vector<std::size_t>> ready(n);
  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    ready[std::max(d.edges[e].source, d.edges[e].target)].push_back(e);
  }

  std::vector<std::vector<std::size_t>> layer{{}};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& partial : layer) {
      for (std::size_t x = 0; x < d.nodes[k].size(); ++x) {
        auto candidate = partial;
        candidate.push_back(x);
        bool ok = true;
        for (std::size_t e : ready[k]) {
          const auto& edge = d.edges[e];
          if (edge.map(candidate[edge.source]) != candidate[edge.target]) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        next.push_back(std::move(candidate));
        check_cap("max-product", caps.max_product, next.size());
      }
    }
    layer = std::move(next);
  }
  return layer;
}

/// Limit of a set diagram: all tuples compatible with every edge, with the
/// projections as legs. Tuples are named "(x,y,...)" and ordered
/// lexicographically by node.
inline Cone set_limit(const SetDiagram& d, const Caps& caps = {}) {
  auto tuples = limit_tuples(d, caps);
  std::vector<std::string> names;
  names.reserve(tuples.size());
  for (const auto& t : tuples) {
    std::vector<std::string_view> parts;
    parts.reserve(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) parts.emplace_back(d.nodes[i][t[i]]);
    names.push_back(tuple_name(parts));
  }
  Cone out{FinSet(std::move(names)), {}};
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    std::vector<std::size_t> table(tuples.size());
    for (std::size_t r = 0; r < tuples.size(); ++r) table[r] = tuples[r][i];
    out.legs.emplace_back(out.apex, d.nodes[i], std::move(table));
  }
  return out;
}

/// The unique map from a colimit apex to another cocone's apex that commutes
/// with the legs. Throws when `other` identifies less than the colimit does.
inline SetFn mediator_set(const Cocone& colim, const Cocone& other) {
  detail::require(colim.legs.size() == other.legs.size(), ErrorKind::InvalidArgument,
                  "cocones have different numbers of legs");
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> table(colim.apex.size(), unset);
  for (std::size_t i = 0; i < colim.legs.size(); ++i) {
    const auto& from = colim.legs[i];
    const auto& to = other.legs[i];
    detail::require(from.source() == to.source(), ErrorKind::InvalidArgument,
                    "cocone legs " + std::to_string(i) + " start at different sets");
    for (std::size_t x = 0; x < from.source().size(); ++x) {
      std::size_t& slot = table[from(x)];
      if (slot == unset) {
        slot = to(x);
      } else if (slot != to(x)) {
        detail::fail(ErrorKind::InvalidArgument,
                     "not a commuting cocone: class " + colim.apex[from(x)] +
                         " has images " + other.apex[slot] + " and " + other.apex[to(x)]);
      }
    }
  }
  for (std::size_t c = 0; c < table.size(); ++c) {
    detail::require(table[c] != unset, ErrorKind::InvalidArgument,
                    "apex element " + colim.apex[c] + " is not reached by any leg");
  }
  return SetFn(colim.apex, other.apex, std::move(table));
}

}  // namespace channelkit

#endif  // CHANNELKIT_SETCAT_HPP
