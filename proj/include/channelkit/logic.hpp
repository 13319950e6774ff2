#ifndef CHANNELKIT_LOGIC_HPP
#define CHANNELKIT_LOGIC_HPP

// Local logics: a classification paired with a theory over its types.
//
// Orders follow extents throughout: l1 <= l2 when l1's structure has no
// more rows and l1's theory has no more models. The meet of theories over
// one structure is therefore the union of generators.

#include <optional>
#include <string>
#include <vector>

#include "channelkit/classification.hpp"
#include "channelkit/theory.hpp"

namespace channelkit {

class LocalLogic {
 public:
  LocalLogic() = default;
  LocalLogic(Classification structure, Theory theory)
      : structure_(std::move(structure)), theory_(std::move(theory)) {
    require_same_language(structure_.types(), theory_.language(), "local logic");
  }

  const FinSet& language() const noexcept { return structure_.types(); }
  const Classification& structure() const noexcept { return structure_; }
  const Theory& theory() const noexcept { return theory_; }

  friend bool operator==(const LocalLogic&, const LocalLogic&) = default;

 private:
  Classification structure_;
  Theory theory_;
};

inline LocalLogic natural_logic(const Classification& m, const Caps& caps = {}) {
  return LocalLogic(m, intent(m, caps));
}

/// An instance failing a theory sequent.
struct SoundnessWitness {
  std::size_t instance = 0;
  Sequent sequent;
};

inline std::optional<SoundnessWitness> find_unsound(const LocalLogic& l) {
  for (const auto& q : l.theory()) {
    if (auto x = find_counterexample(l.structure(), q)) return SoundnessWitness{*x, q};
  }
  return std::nullopt;
}

inline bool is_sound(const LocalLogic& l) { return !find_unsound(l).has_value(); }

/// A sequent the structure satisfies but the theory does not entail.
/// Prefers the smallest such sequent (by side sizes, then masks) when the
/// language is small enough to enumerate; otherwise returns the sequent
/// excluding exactly one surplus model.
inline std::optional<Sequent> find_incomplete(const LocalLogic& l, const Caps& caps = {}) {
  const auto rows = row_set(l.structure());
  std::vector<TypeSet> surplus;
  for (TypeSet s : extent(l.theory(), caps)) {
    if (!std::binary_search(rows.begin(), rows.end(), s)) surplus.push_back(s);
  }
  if (surplus.empty()) return std::nullopt;

  const std::size_t n = l.language().size();
  if (n > caps.max_closure_types) {
    const TypeSet s = surplus.front();
    return Sequent(l.language(), s, full_set(n) & ~s);
  }
  std::optional<Sequent> best;
  auto key = [](TypeSet g, TypeSet d) {
    return std::tuple(std::popcount(g) + std::popcount(d), g, d);
  };
  for_each_sequent_mask(n, [&](TypeSet g, TypeSet d) {
    if (best && key(g, d) >= key(best->gamma(), best->delta())) return;
    for (TypeSet r : rows) {
      if (!row_satisfies(r, g, d)) return;
    }
    for (TypeSet s : surplus) {
      if (!row_satisfies(s, g, d)) {
        best = Sequent(l.language(), g, d);
        return;
      }
    }
  });
  return best;
}

/// Every sequent valid in the structure is entailed by the theory; i.e.
/// every model of the theory is a row of the structure.
inline bool is_complete(const LocalLogic& l, const Caps& caps = {}) {
  const auto rows = row_set(l.structure());
  for (TypeSet s : extent(l.theory(), caps)) {
    if (!std::binary_search(rows.begin(), rows.end(), s)) return false;
  }
  return true;
}

struct LogicMorphismWitness {
  enum class Failure { None, Structure, Theory };

  Infomorphism infomorphism;
  LocalLogic source;
  LocalLogic target;
  bool verdict = false;
  Failure failure = Failure::None;
  std::optional<InfomorphismViolation> structure_violation;
  std::optional<Sequent> theory_counterexample;
};

inline LogicMorphismWitness is_logic_morphism(const Infomorphism& f, const LocalLogic& l1,
                                              const LocalLogic& l2, const Caps& caps = {}) {
  detail::require(f.source() == l1.structure() && f.target() == l2.structure(),
                  ErrorKind::LanguageMismatch,
                  "infomorphism endpoints differ from the logics' structures");
  LogicMorphismWitness w{f, l1, l2, false, LogicMorphismWitness::Failure::None, {}, {}};
  if (auto v = find_violation(f)) {
    w.failure = LogicMorphismWitness::Failure::Structure;
    w.structure_violation = v;
    return w;
  }
  auto th = is_theory_morphism(f.type_map(), l1.theory(), l2.theory(), caps);
  if (!th.verdict) {
    w.failure = LogicMorphismWitness::Failure::Theory;
    w.theory_counterexample = th.counterexample;
    return w;
  }
  w.verdict = true;
  return w;
}

/// Greatest logic on the target structure that f maps l1 into.
inline LocalLogic dir_logic(const Infomorphism& f, const LocalLogic& l1) {
  detail::require(f.source() == l1.structure(), ErrorKind::LanguageMismatch,
                  "dir_logic: logic is not over the infomorphism's source");
  return LocalLogic(f.target(), dir_theory(f.type_map(), l1.theory()));
}

/// Least logic on the source structure that f maps into l2.
inline LocalLogic inv_logic(const Infomorphism& f, const LocalLogic& l2, const Caps& caps = {}) {
  detail::require(f.target() == l2.structure(), ErrorKind::LanguageMismatch,
                  "inv_logic: logic is not over the infomorphism's target");
  return LocalLogic(f.source(), inv_theory(f.type_map(), l2.theory(), caps));
}

inline bool logic_leq(const LocalLogic& l1, const LocalLogic& l2, const Caps& caps = {}) {
  require_same_language(l1.language(), l2.language(), "logic_leq");
  return structure_leq(l1.structure(), l2.structure()) &&
         theory_leq(l1.theory(), l2.theory(), caps);
}

/// Greatest lower bound over one structure: the union of generators, whose
/// extent is the intersection of extents.
inline LocalLogic fiber_meet(const std::vector<LocalLogic>& logics) {
  detail::require(!logics.empty(), ErrorKind::InvalidArgument, "fiber_meet of no logics");
  const auto& m = logics.front().structure();
  Theory out(m.types());
  for (const auto& l : logics) {
    detail::require(l.structure() == m, ErrorKind::LanguageMismatch,
                    "fiber_meet: logics are over different structures");
    for (const auto& q : l.theory()) out.insert(q);
  }
  return LocalLogic(m, std::move(out));
}

/// Least upper bound over one structure: sequents entailed by every input.
/// Not used by fusion.
inline LocalLogic fiber_join(const std::vector<LocalLogic>& logics, const Caps& caps = {}) {
  detail::require(!logics.empty(), ErrorKind::InvalidArgument, "fiber_join of no logics");
  const auto& m = logics.front().structure();
  Theory out = closure(logics.front().theory(), caps);
  for (std::size_t i = 1; i < logics.size(); ++i) {
    detail::require(logics[i].structure() == m, ErrorKind::LanguageMismatch,
                    "fiber_join: logics are over different structures");
    const Theory next = closure(logics[i].theory(), caps);
    Theory kept(m.types());
    for (const auto& q : out) {
      if (next.contains(q)) kept.insert(q);
    }
    out = std::move(kept);
  }
  return LocalLogic(m, std::move(out));
}

/// Identity l -> natural_logic(M); present (and valid) iff l is sound.
inline std::optional<LogicMorphismWitness> soundness_unit(const LocalLogic& l,
                                                          const Caps& caps = {}) {
  auto w = is_logic_morphism(Infomorphism::identity(l.structure()), l,
                             natural_logic(l.structure(), caps), caps);
  if (!w.verdict) return std::nullopt;
  return w;
}

/// Identity natural_logic(M) -> l; present (and valid) iff l is complete.
inline std::optional<LogicMorphismWitness> completeness_counit(const LocalLogic& l,
                                                               const Caps& caps = {}) {
  auto w = is_logic_morphism(Infomorphism::identity(l.structure()),
                             natural_logic(l.structure(), caps), l, caps);
  if (!w.verdict) return std::nullopt;
  return w;
}

}  // namespace channelkit

#endif  // CHANNELKIT_LOGIC_HPP
