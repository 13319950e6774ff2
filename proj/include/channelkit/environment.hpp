#ifndef CHANNELKIT_ENVIRONMENT_HPP
#define CHANNELKIT_ENVIRONMENT_HPP

// The logical-environment boundary. An environment supplies languages,
// sentences, structures and satisfaction, with translation of sentences
// forward and reduct of structures backward along language morphisms. The
// classification environment (IfcEnvironment) is the one instance shipped.

#include <concepts>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "channelkit/classification.hpp"
#include "channelkit/theory.hpp"

namespace channelkit {

template <class E>
concept LogicalEnvironment =
    std::equality_comparable<typename E::Language> &&
    std::equality_comparable<typename E::Sentence> &&
    std::equality_comparable<typename E::Structure> &&
    requires(const typename E::Language& lang, const typename E::LanguageMorphism& sigma,
             const typename E::Sentence& s, const typename E::Structure& m,
             const typename E::StructureMorphism& f) {
      { E::sentences(lang) } -> std::convertible_to<std::vector<typename E::Sentence>>;
      { E::translate(sigma, s) } -> std::convertible_to<typename E::Sentence>;
      { E::reduct(sigma, m) } -> std::convertible_to<typename E::Structure>;
      { E::satisfies(m, s) } -> std::same_as<bool>;
      { E::structure_leq(m, m) } -> std::same_as<bool>;
      { E::is_valid(f) } -> std::same_as<bool>;
      { E::language_of(m) } -> std::convertible_to<typename E::Language>;
      { E::language_map(f) } -> std::convertible_to<typename E::LanguageMorphism>;
      { E::source(f) } -> std::convertible_to<typename E::Structure>;
      { E::target(f) } -> std::convertible_to<typename E::Structure>;
      { E::identity(lang) } -> std::convertible_to<typename E::LanguageMorphism>;
      { E::compose(sigma, sigma) } -> std::convertible_to<typename E::LanguageMorphism>;
      { E::domain(sigma) } -> std::convertible_to<typename E::Language>;
      { E::codomain(sigma) } -> std::convertible_to<typename E::Language>;
      { E::describe(s) } -> std::convertible_to<std::string>;
    };

/// Classifications with sequents as sentences.
struct IfcEnvironment {
  using Language = FinSet;
  using Sentence = Sequent;
  using Structure = Classification;
  using LanguageMorphism = SetFn;
  using StructureMorphism = Infomorphism;

  static std::vector<Sequent> sentences(const FinSet& lang, const Caps& caps = {}) {
    check_cap("max-closure-types", caps.max_closure_types, lang.size());
    std::vector<Sequent> out;
    out.reserve(std::size_t{1} << (2 * lang.size()));
    for_each_sequent_mask(lang.size(), [&](TypeSet g, TypeSet d) { out.emplace_back(lang, g, d); });
    return out;
  }
  static Sequent translate(const SetFn& sigma, const Sequent& s) { return sen_translate(sigma, s); }
  static Classification reduct(const SetFn& sigma, const Classification& m) {
    return channelkit::reduct(sigma, m);
  }
  static bool satisfies(const Classification& m, const Sequent& s) {
    return channelkit::satisfies(m, s);
  }
  static bool structure_leq(const Classification& a, const Classification& b) {
    return channelkit::structure_leq(a, b);
  }
  static bool is_valid(const Infomorphism& f) { return check_infomorphism(f); }
  static const FinSet& language_of(const Classification& m) { return m.types(); }
  static const SetFn& language_map(const Infomorphism& f) { return f.type_map(); }
  static const Classification& source(const Infomorphism& f) { return f.source(); }
  static const Classification& target(const Infomorphism& f) { return f.target(); }
  static SetFn identity(const FinSet& lang) { return SetFn::identity(lang); }
  static SetFn compose(const SetFn& first, const SetFn& second) {
    return channelkit::compose(first, second);
  }
  static const FinSet& domain(const SetFn& sigma) { return sigma.source(); }
  static const FinSet& codomain(const SetFn& sigma) { return sigma.target(); }
  static std::string describe(const Sequent& s) { return s.to_string(); }
};

static_assert(LogicalEnvironment<IfcEnvironment>);

// ---------------------------------------------------------------------------
// Generic reasoning steps along a structure morphism.

template <LogicalEnvironment Env>
typename Env::Sentence environment_intro(const typename Env::StructureMorphism& f,
                                         const typename Env::Sentence& s) {
  return Env::translate(Env::language_map(f), s);
}

/// Every source sentence translating to s2, by enumeration.
template <LogicalEnvironment Env>
std::vector<typename Env::Sentence> environment_elim(const typename Env::StructureMorphism& f,
                                                     const typename Env::Sentence& s2) {
  const auto& sigma = Env::language_map(f);
  std::vector<typename Env::Sentence> out;
  for (const auto& s1 : Env::sentences(Env::domain(sigma))) {
    if (Env::translate(sigma, s1) == s2) out.push_back(s1);
  }
  return out;
}

template <LogicalEnvironment Env>
bool environment_satisfies_all(const typename Env::Structure& m,
                               const std::vector<typename Env::Sentence>& theory) {
  for (const auto& s : theory) {
    if (!Env::satisfies(m, s)) return false;
  }
  return true;
}

template <LogicalEnvironment Env>
std::vector<typename Env::Sentence> environment_direct_image(
    const typename Env::LanguageMorphism& sigma, const std::vector<typename Env::Sentence>& theory) {
  std::vector<typename Env::Sentence> out;
  out.reserve(theory.size());
  for (const auto& s : theory) out.push_back(Env::translate(sigma, s));
  return out;
}

// ---------------------------------------------------------------------------
// Law checking.

template <LogicalEnvironment Env>
struct FlatCase {
  typename Env::LanguageMorphism sigma;
  typename Env::Structure source;
  typename Env::Structure target;
};

/// A finite sample over which the environment laws are checked exhaustively
/// (all sentences of each language involved).
template <LogicalEnvironment Env>
struct EnvironmentProbe {
  std::vector<typename Env::Structure> structures;
  std::vector<typename Env::StructureMorphism> morphisms;
  std::vector<std::pair<typename Env::LanguageMorphism, typename Env::LanguageMorphism>> composable;
  std::vector<FlatCase<Env>> flat;
};

struct LawResult {
  std::string law;
  bool passed = true;
  std::size_t checks = 0;
  std::optional<std::string> witness;
};

struct LawReport {
  std::vector<LawResult> laws;

  bool all_passed() const {
    for (const auto& l : laws) {
      if (!l.passed) return false;
    }
    return true;
  }
  const LawResult& operator[](const std::string& name) const {
    for (const auto& l : laws) {
      if (l.law == name) return l;
    }
    throw Error(ErrorKind::InvalidArgument, "no law named " + name);
  }
};

namespace detail {

inline void record(LawResult& r, bool ok, const std::string& witness) {
  ++r.checks;
  if (!ok && r.passed) {
    r.passed = false;
    r.witness = witness;
  }
}

}  // namespace detail

template <LogicalEnvironment Env>
LawReport check_environment_laws(const EnvironmentProbe<Env>& probe) {
  for (const auto& f : probe.morphisms) {
    const auto& sigma = Env::language_map(f);
    detail::require(Env::domain(sigma) == Env::language_of(Env::source(f)) &&
                        Env::codomain(sigma) == Env::language_of(Env::target(f)),
                    ErrorKind::InvalidArgument, "probe morphism is ill-typed");
  }
  for (const auto& [sigma, tau] : probe.composable) {
    detail::require(Env::codomain(sigma) == Env::domain(tau), ErrorKind::InvalidArgument,
                    "probe pair is not composable");
  }
  for (const auto& c : probe.flat) {
    detail::require(Env::domain(c.sigma) == Env::language_of(c.source) &&
                        Env::codomain(c.sigma) == Env::language_of(c.target),
                    ErrorKind::InvalidArgument, "probe flat case is ill-typed");
  }

  LawResult invariance{"satisfaction-invariance"};
  LawResult respects{"satisfaction-respects-morphisms"};
  LawResult identity{"identity-neutrality"};
  LawResult functorial{"composition-functoriality"};
  LawResult bimodular{"flat-bimodularity"};

  auto check_invariance = [&](const typename Env::LanguageMorphism& sigma,
                              const typename Env::Structure& m2) {
    const auto pulled = Env::reduct(sigma, m2);
    for (const auto& s : Env::sentences(Env::domain(sigma))) {
      const auto moved = Env::translate(sigma, s);
      detail::record(invariance, Env::satisfies(pulled, s) == Env::satisfies(m2, moved),
                     "reduct and translation disagree on '" + Env::describe(s) + "' (as '" +
                         Env::describe(moved) + "')");
    }
  };

  for (const auto& f : probe.morphisms) {
    const auto& sigma = Env::language_map(f);
    check_invariance(sigma, Env::target(f));
    if (!Env::is_valid(f)) continue;
    for (const auto& s : Env::sentences(Env::domain(sigma))) {
      const bool ok = !Env::satisfies(Env::source(f), s) ||
                      Env::satisfies(Env::target(f), Env::translate(sigma, s));
      detail::record(respects, ok, "validity of '" + Env::describe(s) + "' is not carried forward");
    }
  }

  for (const auto& m : probe.structures) {
    const auto id = Env::identity(Env::language_of(m));
    detail::record(identity, Env::reduct(id, m) == m, "identity reduct changes a structure");
    for (const auto& s : Env::sentences(Env::language_of(m))) {
      detail::record(identity, Env::translate(id, s) == s,
                     "identity translation changes '" + Env::describe(s) + "'");
    }
  }

  for (const auto& [sigma, tau] : probe.composable) {
    const auto both = Env::compose(sigma, tau);
    for (const auto& s : Env::sentences(Env::domain(sigma))) {
      detail::record(functorial,
                     Env::translate(tau, Env::translate(sigma, s)) == Env::translate(both, s),
                     "translation of '" + Env::describe(s) + "' is not functorial");
    }
    for (const auto& m : probe.structures) {
      if (!(Env::language_of(m) == Env::codomain(tau))) continue;
      detail::record(functorial,
                     Env::reduct(sigma, Env::reduct(tau, m)) == Env::reduct(both, m),
                     "reduct is not functorial");
      check_invariance(both, m);
    }
  }

  for (const auto& c : probe.flat) {
    const bool flat = Env::structure_leq(Env::reduct(c.sigma, c.target), c.source);
    bool preserves = true;
    std::string failing;
    for (const auto& s : Env::sentences(Env::domain(c.sigma))) {
      if (Env::satisfies(c.source, s) && !Env::satisfies(c.target, Env::translate(c.sigma, s))) {
        preserves = false;
        failing = Env::describe(s);
        break;
      }
    }
    detail::record(bimodular, flat == preserves,
                   flat ? "flat morphism drops constraint '" + failing + "'"
                        : "non-flat morphism preserves every constraint");
  }

  return LawReport{{invariance, respects, identity, functorial, bimodular}};
}

}  // namespace channelkit

#endif  // CHANNELKIT_ENVIRONMENT_HPP
