#ifndef CHANNELKIT_CHANNEL_HPP
#define CHANNELKIT_CHANNEL_HPP

// Distributed systems, channels covering them, refinements, minimal covers,
// fusion of component logics, the f-Intro/f-Elim rules and information-flow
// queries.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "channelkit/classification.hpp"
#include "channelkit/environment.hpp"
#include "channelkit/logic.hpp"
#include "channelkit/theory.hpp"

namespace channelkit {

/// A diagram of classifications and infomorphisms. Every edge is checked on
/// construction.
class DistributedSystem {
 public:
  DistributedSystem() = default;

  DistributedSystem(std::vector<Classification> nodes, std::vector<ClsEdge> edges,
                    std::vector<std::string> labels = {})
      : diagram_{std::move(nodes), std::move(edges)}, labels_(std::move(labels)) {
    diagram_.validate();
    if (labels_.empty()) {
      for (std::size_t i = 0; i < diagram_.nodes.size(); ++i) labels_.push_back(std::to_string(i));
    }
    detail::require(labels_.size() == diagram_.nodes.size(), ErrorKind::InvalidArgument,
                    "one label per node is required");
  }

  const ClsDiagram& diagram() const noexcept { return diagram_; }
  const std::vector<Classification>& nodes() const noexcept { return diagram_.nodes; }
  const std::vector<ClsEdge>& edges() const noexcept { return diagram_.edges; }
  const std::string& label(std::size_t node) const { return labels_.at(node); }

  friend bool operator==(const DistributedSystem& a, const DistributedSystem& b) {
    if (a.diagram_.nodes != b.diagram_.nodes) return false;
    if (a.diagram_.edges.size() != b.diagram_.edges.size()) return false;
    for (std::size_t e = 0; e < a.diagram_.edges.size(); ++e) {
      const auto& x = a.diagram_.edges[e];
      const auto& y = b.diagram_.edges[e];
      if (x.source != y.source || x.target != y.target || !(x.map == y.map)) return false;
    }
    return true;
  }

 private:
  ClsDiagram diagram_;
  std::vector<std::string> labels_;
};

/// A family of infomorphisms from every node of a system into one core.
/// Legs are validated on construction; covering is a separate check.
class Channel {
 public:
  Channel() = default;

  Channel(DistributedSystem system, Classification core, std::vector<Infomorphism> legs)
      : system_(std::move(system)), core_(std::move(core)), legs_(std::move(legs)) {
    detail::require(legs_.size() == system_.nodes().size(), ErrorKind::MalformedDiagram,
                    "channel needs exactly one leg per node");
    for (std::size_t i = 0; i < legs_.size(); ++i) {
      const std::string name = "leg " + system_.label(i);
      detail::require(legs_[i].source() == system_.nodes()[i] && legs_[i].target() == core_,
                      ErrorKind::MalformedDiagram, name + " does not run from its node to the core");
      if (auto v = find_violation(legs_[i])) {
        detail::fail(ErrorKind::InvalidMorphism,
                     name + " is not an infomorphism at (" + core_.instances()[v->instance] +
                         ", " + system_.nodes()[i].types()[v->type] + ")");
      }
    }
  }

  const DistributedSystem& system() const noexcept { return system_; }
  const Classification& core() const noexcept { return core_; }
  const std::vector<Infomorphism>& legs() const noexcept { return legs_; }
  const Infomorphism& leg(std::size_t node) const { return legs_.at(node); }

 private:
  DistributedSystem system_;
  Classification core_;
  std::vector<Infomorphism> legs_;
};

/// First edge e : i -> j with leg_i != e ; leg_j.
inline std::optional<std::size_t> find_uncovered_edge(const Channel& ch) {
  const auto& edges = ch.system().edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& edge = edges[e];
    if (!(compose(edge.map, ch.leg(edge.target)) == ch.leg(edge.source))) return e;
  }
  return std::nullopt;
}

inline bool is_covering(const Channel& ch) { return !find_uncovered_edge(ch).has_value(); }

inline void require_covering(const Channel& ch) {
  if (auto e = find_uncovered_edge(ch)) {
    const auto& edge = ch.system().edges()[*e];
    detail::fail(ErrorKind::InvalidMorphism,
                 "channel does not cover edge " + std::to_string(*e) + " (" +
                     ch.system().label(edge.source) + " -> " + ch.system().label(edge.target) +
                     ")");
  }
}

/// A core morphism commuting with both channels' legs.
inline bool is_refinement(const Infomorphism& r, const Channel& c1, const Channel& c2) {
  detail::require(c1.system() == c2.system(), ErrorKind::InvalidArgument,
                  "refinement between channels over different systems");
  if (!(r.source() == c1.core()) || !(r.target() == c2.core())) return false;
  if (!check_infomorphism(r)) return false;
  for (std::size_t i = 0; i < c1.legs().size(); ++i) {
    if (!(compose(c1.leg(i), r) == c2.leg(i))) return false;
  }
  return true;
}

/// The colimiting channel. A lone node without edges is its own cover with
/// the identity leg; otherwise the core is the classification colimit.
inline Channel minimal_cover(const DistributedSystem& sys, const Caps& caps = {}) {
  if (sys.nodes().size() == 1 && sys.edges().empty()) {
    const auto& m = sys.nodes().front();
    return Channel(sys, m, {Infomorphism::identity(m)});
  }
  ClsColimit colim = cls_colimit(sys.diagram(), caps);
  return Channel(sys, colim.core, colim.legs);
}

/// The unique refinement from a minimal cover to another covering channel.
inline Infomorphism mediator(const Channel& min, const Channel& other) {
  detail::require(min.system() == other.system(), ErrorKind::InvalidArgument,
                  "mediator between channels over different systems");
  require_covering(other);
  const std::size_t nodes = min.legs().size();

  Cocone from{min.core().types(), {}};
  Cocone to{other.core().types(), {}};
  for (std::size_t i = 0; i < nodes; ++i) {
    from.legs.push_back(min.leg(i).type_map());
    to.legs.push_back(other.leg(i).type_map());
  }
  SetFn type_map = mediator_set(from, to);

  // Minimal-cover instances are determined by their components.
  std::map<std::vector<std::size_t>, std::size_t> by_tuple;
  for (std::size_t c = 0; c < min.core().instances().size(); ++c) {
    std::vector<std::size_t> tuple(nodes);
    for (std::size_t i = 0; i < nodes; ++i) tuple[i] = min.leg(i).instance_map()(c);
    auto [it, inserted] = by_tuple.emplace(std::move(tuple), c);
    detail::require(inserted, ErrorKind::InvalidArgument,
                    "core instances are not separated by the legs; not a minimal cover");
  }
  std::vector<std::size_t> table(other.core().instances().size());
  for (std::size_t y = 0; y < table.size(); ++y) {
    std::vector<std::size_t> tuple(nodes);
    for (std::size_t i = 0; i < nodes; ++i) tuple[i] = other.leg(i).instance_map()(y);
    auto it = by_tuple.find(tuple);
    detail::require(it != by_tuple.end(), ErrorKind::InvalidArgument,
                    "core instance " + other.core().instances()[y] +
                        " has no counterpart in the minimal cover");
    table[y] = it->second;
  }
  Infomorphism r(min.core(), other.core(), std::move(type_map),
                 SetFn(other.core().instances(), min.core().instances(), std::move(table)));
  detail::require(check_infomorphism(r), ErrorKind::Internal,
                  "mediator fails the fundamental condition");
  return r;
}

/// Meet over the core of the component logics pushed along the legs.
inline LocalLogic fusion_logic(const Channel& ch, const std::vector<LocalLogic>& components) {
  require_covering(ch);
  detail::require(components.size() == ch.legs().size(), ErrorKind::InvalidArgument,
                  "fusion needs one logic per node");
  std::vector<LocalLogic> images;
  images.reserve(components.size());
  for (std::size_t i = 0; i < components.size(); ++i) {
    detail::require(components[i].structure() == ch.system().nodes()[i],
                    ErrorKind::LanguageMismatch,
                    "logic for node " + ch.system().label(i) + " is over a different structure");
    images.push_back(dir_logic(ch.leg(i), components[i]));
  }
  if (images.empty()) return LocalLogic(ch.core(), Theory(ch.core().types()));
  return fiber_meet(images);
}

/// Forward along f: the translated sequent.
inline Sequent f_intro(const Infomorphism& f, const Sequent& s) {
  return environment_intro<IfcEnvironment>(f, s);
}

/// Backward along f: every source sequent translating to s2.
inline std::vector<Sequent> f_elim_candidates(const Infomorphism& f, const Sequent& s2,
                                              const Caps& caps = {}) {
  const SetFn& sigma = f.type_map();
  require_same_language(sigma.target(), s2.language(), "f_elim_candidates");
  check_cap("max-closure-types", caps.max_closure_types, sigma.source().size());
  auto preimages = [&](TypeSet wanted) {
    std::vector<TypeSet> out;
    const TypeSet pool = preimage(sigma, wanted);
    TypeSet sub = 0;
    do {
      if (image(sigma, sub) == wanted) out.push_back(sub);
      sub = (sub - pool) & pool;
    } while (sub != 0);
    return out;
  };
  std::vector<Sequent> out;
  for (TypeSet g : preimages(s2.gamma())) {
    for (TypeSet d : preimages(s2.delta())) out.emplace_back(sigma.source(), g, d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct FlowVerdict {
  bool carries = false;
  Sequent premise;     ///< a_i translated into the core
  Sequent conclusion;  ///< a_j translated into the core
  /// A core row satisfying the premise but not the conclusion.
  std::optional<StateDescription> defeating_state;
  std::optional<std::size_t> defeating_instance;
  /// Nodes among {i, j} whose leg is not, up to isomorphism, a projection.
  std::vector<std::size_t> projection_warnings;
};

/// Whether a_i at node i carries the information a_j at node j: the core's
/// intent plus the translated premise entails the translated conclusion.
/// The intent's models are exactly the core's rows, so the check runs over
/// rows.
inline FlowVerdict carries_info(const Channel& ch, std::size_t i, const Sequent& a_i,
                                std::size_t j, const Sequent& a_j, const Caps& caps = {}) {
  require_covering(ch);
  detail::require(i < ch.legs().size() && j < ch.legs().size(), ErrorKind::InvalidArgument,
                  "flow query names a missing node");
  FlowVerdict v;
  v.premise = sen_translate(ch.leg(i).type_map(), a_i);
  v.conclusion = sen_translate(ch.leg(j).type_map(), a_j);
  v.carries = true;
  const auto& core = ch.core();
  for (std::size_t x = 0; x < core.instances().size(); ++x) {
    const TypeSet r = core.row(x);
    if (row_satisfies(r, v.premise.gamma(), v.premise.delta()) &&
        !row_satisfies(r, v.conclusion.gamma(), v.conclusion.delta())) {
      v.carries = false;
      v.defeating_state = core.state(x);
      v.defeating_instance = x;
      break;
    }
  }
  std::vector<std::size_t> probe{i};
  if (j != i) probe.push_back(j);
  for (std::size_t k : probe) {
    const auto projected = reduct(ch.leg(k).type_map(), core);
    if (!cls_iso(projected, ch.system().nodes()[k], caps)) v.projection_warnings.push_back(k);
  }
  return v;
}

}  // namespace channelkit

#endif  // CHANNELKIT_CHANNEL_HPP
