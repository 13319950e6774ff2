#ifndef CHANNELKIT_CLASSIFICATION_HPP
#define CHANNELKIT_CLASSIFICATION_HPP

// Classifications, infomorphisms, satisfaction and intent, reducts along
// language maps, the structure preorder, and colimits of classification
// diagrams.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "channelkit/sequent.hpp"
#include "channelkit/setcat.hpp"

namespace channelkit {

/// Instances, types and an incidence relation, stored as one bit row per
/// instance. Immutable; copies share storage.
class Classification {
 public:
  Classification() : data_(std::make_shared<const Data>()) {}

  Classification(FinSet instances, FinSet types, std::vector<TypeSet> rows) {
    require_mask_language(types);
    detail::require(rows.size() == instances.size(), ErrorKind::InvalidArgument,
                    "incidence has " + std::to_string(rows.size()) + " rows for " +
                        std::to_string(instances.size()) + " instances");
    const TypeSet all = full_set(types.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      detail::require((rows[i] & ~all) == 0, ErrorKind::InvalidArgument,
                      "row of '" + instances[i] + "' mentions types outside " + types.to_string());
    }
    data_ = std::make_shared<const Data>(
        Data{std::move(instances), std::move(types), std::move(rows)});
  }

  /// Rows given as type-name lists, one per instance in order.
  static Classification from_rows(FinSet instances, FinSet types,
                                  const std::vector<std::vector<std::string>>& rows) {
    std::vector<TypeSet> bits;
    bits.reserve(rows.size());
    for (const auto& r : rows) bits.push_back(type_set(types, r));
    return Classification(std::move(instances), std::move(types), std::move(bits));
  }

  const FinSet& instances() const noexcept { return data_->instances; }
  const FinSet& types() const noexcept { return data_->types; }
  const std::vector<TypeSet>& rows() const noexcept { return data_->rows; }
  TypeSet row(std::size_t instance) const { return data_->rows[instance]; }

  bool holds(std::size_t instance, std::size_t type) const {
    return contains_type(data_->rows[instance], type);
  }

  StateDescription state(std::size_t instance) const { return {types(), row(instance)}; }

  friend bool operator==(const Classification& a, const Classification& b) {
    return a.data_ == b.data_ ||
           (a.data_->rows == b.data_->rows && a.data_->instances == b.data_->instances &&
            a.data_->types == b.data_->types);
  }

 private:
  struct Data {
    FinSet instances;
    FinSet types;
    std::vector<TypeSet> rows;
  };
  std::shared_ptr<const Data> data_;
};

inline void require_same_language(const FinSet& a, const FinSet& b, const char* what) {
  detail::require(a == b, ErrorKind::LanguageMismatch,
                  std::string(what) + ": " + a.to_string() + " vs " + b.to_string());
}

/// First instance whose row fails the sequent.
inline std::optional<std::size_t> find_counterexample(const Classification& m, const Sequent& q) {
  require_same_language(m.types(), q.language(), "satisfies");
  for (std::size_t x = 0; x < m.instances().size(); ++x) {
    if (!row_satisfies(m.row(x), q.gamma(), q.delta())) return x;
  }
  return std::nullopt;
}

inline bool satisfies(const Classification& m, const Sequent& q) {
  return !find_counterexample(m, q).has_value();
}

inline bool satisfies_all(const Classification& m, const Theory& t) {
  require_same_language(m.types(), t.language(), "satisfies");
  return std::all_of(m.rows().begin(), m.rows().end(),
                     [&](TypeSet r) { return row_satisfies_all(r, t); });
}

/// Distinct rows, sorted.
inline std::vector<TypeSet> row_set(const Classification& m) {
  std::vector<TypeSet> rows = m.rows();
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return rows;
}

/// Every sequent over the type set that the classification satisfies.
inline Theory intent(const Classification& m, const Caps& caps = {}) {
  const std::size_t n = m.types().size();
  check_cap("max-closure-types", caps.max_closure_types, n);
  const auto rows = row_set(m);
  Theory out(m.types());
  for_each_sequent_mask(n, [&](TypeSet g, TypeSet d) {
    for (TypeSet r : rows) {
      if (!row_satisfies(r, g, d)) return;
    }
    out.insert(Sequent(m.types(), g, d));
  });
  return out;
}

/// Translation of a structure backwards along a language map:
/// x satisfies y in the result iff x satisfies sigma(y) in n.
inline Classification reduct(const SetFn& sigma, const Classification& n) {
  require_same_language(sigma.target(), n.types(), "reduct");
  std::vector<TypeSet> rows;
  rows.reserve(n.rows().size());
  for (TypeSet r : n.rows()) rows.push_back(preimage(sigma, r));
  return Classification(n.instances(), sigma.source(), std::move(rows));
}

/// M1 <= M2 in the structure preorder: intent(M1) contains intent(M2).
/// Decided on rows; a state is excluded by the sequent (state |- rest), so
/// intent containment is exactly row-set containment.
inline bool structure_leq(const Classification& m1, const Classification& m2) {
  require_same_language(m1.types(), m2.types(), "structure_leq");
  const auto rows2 = row_set(m2);
  return std::all_of(m1.rows().begin(), m1.rows().end(), [&](TypeSet r) {
    return std::binary_search(rows2.begin(), rows2.end(), r);
  });
}

/// Bare language map preserving every constraint of m1 into m2.
inline bool is_flat_morphism(const SetFn& sigma, const Classification& m1,
                             const Classification& m2) {
  require_same_language(sigma.source(), m1.types(), "is_flat_morphism source");
  return structure_leq(reduct(sigma, m2), m1);
}

// ---------------------------------------------------------------------------
// Infomorphisms.

/// Types travel forward (source -> target), instances backward
/// (target -> source).
class Infomorphism {
 public:
  Infomorphism() = default;

  Infomorphism(Classification source, Classification target, SetFn type_map,
               SetFn instance_map)
      : source_(std::move(source)),
        target_(std::move(target)),
        type_map_(std::move(type_map)),
        instance_map_(std::move(instance_map)) {
    detail::require(type_map_.source() == source_.types() && type_map_.target() == target_.types(),
                    ErrorKind::InvalidArgument,
                    "type map must go from source types to target types");
    detail::require(instance_map_.source() == target_.instances() &&
                        instance_map_.target() == source_.instances(),
                    ErrorKind::InvalidArgument,
                    "instance map must go from target instances to source instances");
  }

  static Infomorphism identity(const Classification& m) {
    return Infomorphism(m, m, SetFn::identity(m.types()), SetFn::identity(m.instances()));
  }

  const Classification& source() const noexcept { return source_; }
  const Classification& target() const noexcept { return target_; }
  const SetFn& type_map() const noexcept { return type_map_; }
  const SetFn& instance_map() const noexcept { return instance_map_; }

  friend bool operator==(const Infomorphism& a, const Infomorphism& b) {
    return a.type_map_ == b.type_map_ && a.instance_map_ == b.instance_map_ &&
           a.source_ == b.source_ && a.target_ == b.target_;
  }

 private:
  Classification source_;
  Classification target_;
  SetFn type_map_;
  SetFn instance_map_;
};

/// Apply `first`, then `second`.
inline Infomorphism compose(const Infomorphism& first, const Infomorphism& second) {
  detail::require(first.target() == second.source(), ErrorKind::InvalidArgument,
                  "infomorphisms are not composable");
  return Infomorphism(first.source(), second.target(),
                      compose(first.type_map(), second.type_map()),
                      compose(second.instance_map(), first.instance_map()));
}

/// A (target instance, source type) pair breaking the fundamental condition.
struct InfomorphismViolation {
  std::size_t instance = 0;
  std::size_t type = 0;
};

inline std::optional<InfomorphismViolation> find_violation(const Infomorphism& f) {
  const auto& g = f.instance_map();
  for (std::size_t x = 0; x < f.target().instances().size(); ++x) {
    const TypeSet pulled = preimage(f.type_map(), f.target().row(x));
    const TypeSet source_row = f.source().row(g(x));
    if (pulled == source_row) continue;
    const TypeSet diff = pulled ^ source_row;
    return InfomorphismViolation{x, static_cast<std::size_t>(std::countr_zero(diff))};
  }
  return std::nullopt;
}

/// g(x) satisfies y iff x satisfies f(y), for all target instances x and
/// source types y.
inline bool check_infomorphism(const Infomorphism& f) { return !find_violation(f).has_value(); }

// ---------------------------------------------------------------------------
// Colimits.

struct ClsEdge {
  std::size_t source = 0;
  std::size_t target = 0;
  Infomorphism map;
};

struct ClsDiagram {
  std::vector<Classification> nodes;
  std::vector<ClsEdge> edges;

  void validate() const {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto& edge = edges[e];
      const std::string name = "edge " + std::to_string(e);
      detail::require(edge.source < nodes.size() && edge.target < nodes.size(),
                      ErrorKind::MalformedDiagram, name + " names a missing node");
      detail::require(edge.map.source() == nodes[edge.source] &&
                          edge.map.target() == nodes[edge.target],
                      ErrorKind::MalformedDiagram, name + " does not match its endpoints");
      if (auto v = find_violation(edge.map)) {
        detail::fail(ErrorKind::InvalidMorphism,
                     name + " is not an infomorphism at (" +
                         edge.map.target().instances()[v->instance] + ", " +
                         edge.map.source().types()[v->type] + ")");
      }
    }
  }

  SetDiagram type_diagram() const {
    SetDiagram d;
    for (const auto& n : nodes) d.nodes.push_back(n.types());
    for (const auto& e : edges) d.edges.push_back({e.source, e.target, e.map.type_map()});
    return d;
  }

  /// Instances travel against the edges.
  SetDiagram instance_diagram() const {
    SetDiagram d;
    for (const auto& n : nodes) d.nodes.push_back(n.instances());
    for (const auto& e : edges) d.edges.push_back({e.target, e.source, e.map.instance_map()});
    return d;
  }
};

struct ClsColimit {
  Classification core;
  std::vector<Infomorphism> legs;
  Cocone types;
  Cone instances;
};

/// Core types are the colimit of the type diagram, core instances the limit
/// of the instance diagram, and a tuple is of a type class iff its component
/// at any representative's node is of that representative.
inline ClsColimit cls_colimit(const ClsDiagram& d, const Caps& caps = {}) {
  d.validate();
  Cocone types = set_colimit(d.type_diagram());
  Cone instances = set_limit(d.instance_diagram(), caps);
  require_mask_language(types.apex);

  std::vector<TypeSet> rows(instances.apex.size(), 0);
  for (std::size_t x = 0; x < rows.size(); ++x) {
    TypeSet value = 0;
    TypeSet seen = 0;
    for (std::size_t i = 0; i < d.nodes.size(); ++i) {
      const std::size_t component = instances.legs[i](x);
      for (std::size_t y = 0; y < d.nodes[i].types().size(); ++y) {
        const std::size_t c = types.legs[i](y);
        const bool bit = d.nodes[i].holds(component, y);
        if (contains_type(seen, c)) {
          if (contains_type(value, c) != bit) {
            detail::fail(ErrorKind::Internal,
                         "incidence of " + instances.apex[x] + " is ill-defined on class " +
                             types.apex[c]);
          }
          continue;
        }
        seen |= TypeSet{1} << c;
        if (bit) value |= TypeSet{1} << c;
      }
    }
    rows[x] = value;
  }

  ClsColimit out{Classification(instances.apex, types.apex, std::move(rows)), {}, types,
                 instances};
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    out.legs.emplace_back(d.nodes[i], out.core, types.legs[i], instances.legs[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Isomorphism search.

/// An invertible infomorphism m1 -> m2: a type bijection forward and an
/// instance bijection backward.
struct ClsIsomorphism {
  SetFn type_map;      ///< types(m1) -> types(m2)
  SetFn instance_map;  ///< instances(m2) -> instances(m1)

  Infomorphism as_infomorphism(const Classification& m1, const Classification& m2) const {
    return Infomorphism(m1, m2, type_map, instance_map);
  }
};

namespace detail {

class IsoSearch {
 public:
  IsoSearch(const Classification& m1, const Classification& m2, const Caps& caps)
      : m1_(m1), m2_(m2), caps_(caps), n_(m1.types().size()), assignment_(n_), used_(n_, false) {
    degree1_ = column_degrees(m1);
    degree2_ = column_degrees(m2);
  }

  std::optional<ClsIsomorphism> run() {
    if (!search(0)) return std::nullopt;
    SetFn type_map(m1_.types(), m2_.types(), assignment_);
    // Pair instances with equal pulled-back rows, in order.
    std::map<TypeSet, std::vector<std::size_t>> buckets;
    for (std::size_t x = m1_.instances().size(); x-- > 0;) buckets[m1_.row(x)].push_back(x);
    std::vector<std::size_t> table(m2_.instances().size());
    for (std::size_t x = 0; x < table.size(); ++x) {
      auto& bucket = buckets[preimage(type_map, m2_.row(x))];
      table[x] = bucket.back();
      bucket.pop_back();
    }
    return ClsIsomorphism{std::move(type_map),
                          SetFn(m2_.instances(), m1_.instances(), std::move(table))};
  }

 private:
  static std::vector<std::size_t> column_degrees(const Classification& m) {
    std::vector<std::size_t> out(m.types().size(), 0);
    for (TypeSet r : m.rows()) {
      for (std::size_t t = 0; t < out.size(); ++t) out[t] += contains_type(r, t);
    }
    return out;
  }

  // Row multisets must agree on the assigned prefix of types.
  bool prefix_consistent(std::size_t k) const {
    TypeSet image_mask = 0;
    for (std::size_t t = 0; t < k; ++t) image_mask |= TypeSet{1} << assignment_[t];
    std::vector<TypeSet> left;
    left.reserve(m1_.rows().size());
    for (TypeSet r : m1_.rows()) {
      TypeSet moved = 0;
      for (std::size_t t = 0; t < k; ++t) {
        if (contains_type(r, t)) moved |= TypeSet{1} << assignment_[t];
      }
      left.push_back(moved);
    }
    std::vector<TypeSet> right;
    right.reserve(m2_.rows().size());
    for (TypeSet r : m2_.rows()) right.push_back(r & image_mask);
    std::sort(left.begin(), left.end());
    std::sort(right.begin(), right.end());
    return left == right;
  }

  bool search(std::size_t k) {
    check_cap("max-iso-nodes", caps_.max_iso_nodes, ++visited_);
    if (!prefix_consistent(k)) return false;
    if (k == n_) return true;
    for (std::size_t c = 0; c < n_; ++c) {
      if (used_[c] || degree1_[k] != degree2_[c]) continue;
      used_[c] = true;
      assignment_[k] = c;
      if (search(k + 1)) return true;
      used_[c] = false;
    }
    return false;
  }

  const Classification& m1_;
  const Classification& m2_;
  const Caps& caps_;
  std::size_t n_;
  std::vector<std::size_t> assignment_;
  std::vector<bool> used_;
  std::vector<std::size_t> degree1_;
  std::vector<std::size_t> degree2_;
  std::size_t visited_ = 0;
};

}  // namespace detail

/// Searches for an invertible infomorphism m1 -> m2. Backtracks over type
/// bijections, pruning on column degree and on the row multiset restricted
/// to the types assigned so far.
inline std::optional<ClsIsomorphism> cls_iso(const Classification& m1, const Classification& m2,
                                             const Caps& caps = {}) {
  if (m1.types().size() != m2.types().size() ||
      m1.instances().size() != m2.instances().size()) {
    return std::nullopt;
  }
  return detail::IsoSearch(m1, m2, caps).run();
}

}  // namespace channelkit

#endif  // CHANNELKIT_CLASSIFICATION_HPP
