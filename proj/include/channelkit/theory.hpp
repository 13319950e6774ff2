#ifndef CHANNELKIT_THEORY_HPP
#define CHANNELKIT_THEORY_HPP

// Semantic entailment between sequent theories, closure, the extent order,
// sentence translation, direct and inverse images, theory morphisms and
// colimits of theory diagrams.
//
// Entailment quantifies over all classifications of a language. A
// classification satisfies a sequent iff each of its rows does, so a
// counterexample can always be shrunk to one row; deciding over the 2^n
// state descriptions is therefore exact.

#include <optional>
#include <string>
#include <vector>

#include "channelkit/classification.hpp"
#include "channelkit/sequent.hpp"
#include "channelkit/setcat.hpp"

namespace channelkit {

/// All states (rows) over the theory's language that satisfy every sequent.
inline std::vector<TypeSet> extent(const Theory& t, const Caps& caps = {}) {
  const std::size_t n = t.language().size();
  check_cap("max-types", caps.max_types, n);
  std::vector<TypeSet> out;
  const TypeSet limit = TypeSet{1} << n;
  for (TypeSet s = 0; s < limit; ++s) {
    if (row_satisfies_all(s, t)) out.push_back(s);
  }
  return out;
}

/// A state satisfying t but not q, if one exists. Only states violating q
/// are visited, in increasing order.
inline std::optional<StateDescription> find_countermodel(const Theory& t, const Sequent& q,
                                                         const Caps& caps = {}) {
  require_same_language(t.language(), q.language(), "entails");
  check_cap("max-types", caps.max_types, t.language().size());
  if (q.gamma() & q.delta()) return std::nullopt;
  const TypeSet free = full_set(t.language().size()) & ~(q.gamma() | q.delta());
  TypeSet sub = 0;
  do {
    const TypeSet s = q.gamma() | sub;
    if (row_satisfies_all(s, t)) return StateDescription{t.language(), s};
    sub = (sub - free) & free;
  } while (sub != 0);
  return std::nullopt;
}

inline bool entails(const Theory& t, const Sequent& q, const Caps& caps = {}) {
  return !find_countermodel(t, q, caps).has_value();
}

/// Every sequent entailed by t.
inline Theory closure(const Theory& t, const Caps& caps = {}) {
  const std::size_t n = t.language().size();
  check_cap("max-closure-types", caps.max_closure_types, n);
  const auto states = extent(t, caps);
  Theory out(t.language());
  for_each_sequent_mask(n, [&](TypeSet g, TypeSet d) {
    for (TypeSet s : states) {
      if (!row_satisfies(s, g, d)) return;
    }
    out.insert(Sequent(t.language(), g, d));
  });
  return out;
}

/// A state satisfying t1 but not t2.
inline std::optional<StateDescription> find_leq_witness(const Theory& t1, const Theory& t2,
                                                        const Caps& caps = {}) {
  require_same_language(t1.language(), t2.language(), "theory_leq");
  for (TypeSet s : extent(t1, caps)) {
    if (!row_satisfies_all(s, t2)) return StateDescription{t1.language(), s};
  }
  return std::nullopt;
}

/// Extent order: every state satisfying t1 satisfies t2.
inline bool theory_leq(const Theory& t1, const Theory& t2, const Caps& caps = {}) {
  return !find_leq_witness(t1, t2, caps).has_value();
}

/// Mutual theory_leq.
inline bool equivalent(const Theory& t1, const Theory& t2, const Caps& caps = {}) {
  return theory_leq(t1, t2, caps) && theory_leq(t2, t1, caps);
}

/// Direct image on both sides of the turnstile.
inline Sequent sen_translate(const SetFn& sigma, const Sequent& q) {
  require_same_language(sigma.source(), q.language(), "sen_translate");
  return Sequent(sigma.target(), image(sigma, q.gamma()), image(sigma, q.delta()));
}

inline Theory dir_theory(const SetFn& sigma, const Theory& t) {
  require_same_language(sigma.source(), t.language(), "dir_theory");
  Theory out(sigma.target());
  for (const auto& q : t) out.insert(sen_translate(sigma, q));
  return out;
}

/// True iff t entails the translation of q.
inline bool in_inverse_image(const SetFn& sigma, const Theory& t, const Sequent& q,
                             const Caps& caps = {}) {
  require_same_language(sigma.target(), t.language(), "inv_theory");
  return entails(t, sen_translate(sigma, q), caps);
}

/// All source sequents whose translation t entails. When the source language
/// is too large to materialize every sequent, an entailment-equivalent
/// generator set is returned instead: one sequent (s |- rest) excluding each
/// source state that is not the pullback of a state of t.
inline Theory inv_theory(const SetFn& sigma, const Theory& t, const Caps& caps = {}) {
  require_same_language(sigma.target(), t.language(), "inv_theory");
  const std::size_t n = sigma.source().size();
  check_cap("max-types", caps.max_types, n);
  const auto target_states = extent(t, caps);
  Theory out(sigma.source());

  if (n <= caps.max_closure_types) {
    for_each_sequent_mask(n, [&](TypeSet g, TypeSet d) {
      const TypeSet tg = image(sigma, g);
      const TypeSet td = image(sigma, d);
      for (TypeSet s : target_states) {
        if (!row_satisfies(s, tg, td)) return;
      }
      out.insert(Sequent(sigma.source(), g, d));
    });
    return out;
  }

  std::vector<bool> pulled(std::size_t{1} << n, false);
  for (TypeSet s : target_states) pulled[preimage(sigma, s)] = true;
  const TypeSet all = full_set(n);
  for (TypeSet s = 0; s < pulled.size(); ++s) {
    if (!pulled[s]) out.insert(Sequent(sigma.source(), s, all & ~s));
  }
  return out;
}

struct TheoryMorphismWitness {
  SetFn sigma;
  Theory source;
  Theory target;
  bool verdict = false;
  /// A source generator whose translation the target fails to entail.
  std::optional<Sequent> counterexample;
};

/// sigma : t1 -> t2 is a theory morphism when t1 |- q implies t2 |- sigma(q).
/// Checking generators suffices: a state of t2 pulls back to a state of t1
/// whenever t2 entails every translated generator.
inline TheoryMorphismWitness is_theory_morphism(const SetFn& sigma, const Theory& t1,
                                                const Theory& t2, const Caps& caps = {}) {
  require_same_language(sigma.source(), t1.language(), "theory morphism source");
  require_same_language(sigma.target(), t2.language(), "theory morphism target");
  TheoryMorphismWitness w{sigma, t1, t2, true, std::nullopt};
  for (const auto& q : t1) {
    if (!entails(t2, sen_translate(sigma, q), caps)) {
      w.verdict = false;
      w.counterexample = q;
      break;
    }
  }
  return w;
}

struct TheoryEdge {
  std::size_t source = 0;
  std::size_t target = 0;
  SetFn map;
};

struct TheoryDiagram {
  std::vector<Theory> nodes;
  std::vector<TheoryEdge> edges;

  SetDiagram language_diagram() const {
    SetDiagram d;
    for (const auto& t : nodes) d.nodes.push_back(t.language());
    for (const auto& e : edges) d.edges.push_back({e.source, e.target, e.map});
    return d;
  }
};

struct TheoryColimit {
  Theory theory;
  Cocone languages;
};

/// Language colimit with the union of the pushed-forward node theories.
inline TheoryColimit th_colimit(const TheoryDiagram& d, const Caps& caps = {}) {
  const SetDiagram languages = d.language_diagram();
  languages.validate();
  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    const auto& edge = d.edges[e];
    auto w = is_theory_morphism(edge.map, d.nodes[edge.source], d.nodes[edge.target], caps);
    if (!w.verdict) {
      detail::fail(ErrorKind::InvalidMorphism,
                   "edge " + std::to_string(e) + " is not a theory morphism: '" +
                       w.counterexample->to_string() + "' is not preserved");
    }
  }
  Cocone cocone = set_colimit(languages);
  require_mask_language(cocone.apex);
  Theory out(cocone.apex);
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    for (const auto& q : dir_theory(cocone.legs[i], d.nodes[i])) out.insert(q);
  }
  return {std::move(out), std::move(cocone)};
}

}  // namespace channelkit

#endif  // CHANNELKIT_THEORY_HPP
