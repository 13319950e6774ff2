#ifndef CHANNELKIT_SEQUENT_HPP
#define CHANNELKIT_SEQUENT_HPP

// Type subsets as bitmasks, sequents, theories and state descriptions.

#include <bit>
#include <compare>
#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "channelkit/setcat.hpp"

namespace channelkit {

/// A subset of a language, one bit per type in insertion order.
using TypeSet = std::uint64_t;

inline constexpr std::size_t kMaxLanguageSize = 64;

inline void require_mask_language(const FinSet& language) {
  detail::require(language.size() <= kMaxLanguageSize, ErrorKind::InvalidArgument,
                  "languages are limited to 64 types, got " + std::to_string(language.size()));
}

inline TypeSet full_set(std::size_t n) {
  return n >= 64 ? ~TypeSet{0} : (TypeSet{1} << n) - 1;
}

inline bool contains_type(TypeSet s, std::size_t t) { return (s >> t) & 1U; }

inline TypeSet type_set(const FinSet& language, const std::vector<std::string>& names) {
  require_mask_language(language);
  TypeSet s = 0;
  for (const auto& n : names) s |= TypeSet{1} << language.at(n);
  return s;
}

inline std::vector<std::string> type_names(const FinSet& language, TypeSet s) {
  std::vector<std::string> out;
  for (std::size_t t = 0; t < language.size(); ++t) {
    if (contains_type(s, t)) out.push_back(language[t]);
  }
  return out;
}

/// Forward image of a subset along a language map.
inline TypeSet image(const SetFn& sigma, TypeSet s) {
  TypeSet out = 0;
  for (; s; s &= s - 1) out |= TypeSet{1} << sigma(static_cast<std::size_t>(std::countr_zero(s)));
  return out;
}

/// Inverse image of a subset along a language map.
inline TypeSet preimage(const SetFn& sigma, TypeSet s) {
  TypeSet out = 0;
  for (std::size_t t = 0; t < sigma.source().size(); ++t) {
    if (contains_type(s, sigma(t))) out |= TypeSet{1} << t;
  }
  return out;
}

/// A sentence Γ ⊢ Δ over a language.
class Sequent {
 public:
  Sequent() = default;

  Sequent(FinSet language, TypeSet gamma, TypeSet delta)
      : language_(std::move(language)), gamma_(gamma), delta_(delta) {
    require_mask_language(language_);
    const TypeSet all = full_set(language_.size());
    detail::require((gamma_ & ~all) == 0 && (delta_ & ~all) == 0, ErrorKind::InvalidArgument,
                    "sequent mentions types outside " + language_.to_string());
  }

  Sequent(const FinSet& language, const std::vector<std::string>& gamma,
          const std::vector<std::string>& delta)
      : Sequent(language, type_set(language, gamma), type_set(language, delta)) {}

  const FinSet& language() const noexcept { return language_; }
  TypeSet gamma() const noexcept { return gamma_; }
  TypeSet delta() const noexcept { return delta_; }

  /// "a b |- c"; either side may be empty.
  std::string to_string() const {
    auto side = [&](TypeSet s) {
      std::string out;
      for (const auto& n : type_names(language_, s)) {
        if (!out.empty()) out += ' ';
        out += n;
      }
      return out;
    };
    std::string lhs = side(gamma_);
    std::string rhs = side(delta_);
    return lhs + (lhs.empty() ? "|-" : " |-") + (rhs.empty() ? "" : " " + rhs);
  }

  /// Orders by (Γ, Δ) only; sequents in one container share a language.
  friend auto operator<=>(const Sequent& a, const Sequent& b) {
    return std::tie(a.gamma_, a.delta_) <=> std::tie(b.gamma_, b.delta_);
  }
  friend bool operator==(const Sequent& a, const Sequent& b) {
    return a.gamma_ == b.gamma_ && a.delta_ == b.delta_ && a.language_ == b.language_;
  }

 private:
  FinSet language_;
  TypeSet gamma_ = 0;
  TypeSet delta_ = 0;
};

/// Parses the command-line literal form "a b |- c d".
inline Sequent parse_sequent(const FinSet& language, const std::string& literal) {
  const auto sep = literal.find("|-");
  detail::require(sep != std::string::npos, ErrorKind::InvalidArgument,
                  "sequent literal '" + literal + "' lacks the '|-' separator");
  detail::require(literal.find("|-", sep + 2) == std::string::npos, ErrorKind::InvalidArgument,
                  "sequent literal '" + literal + "' has more than one '|-'");
  auto words = [](const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
  };
  return Sequent(language, words(literal.substr(0, sep)), words(literal.substr(sep + 2)));
}

/// A finite set of sequents over one language, kept as generators.
class Theory {
 public:
  Theory() = default;
  explicit Theory(FinSet language) : language_(std::move(language)) {
    require_mask_language(language_);
  }
  Theory(FinSet language, std::initializer_list<Sequent> sequents)
      : Theory(std::move(language)) {
    for (const auto& s : sequents) insert(s);
  }

  const FinSet& language() const noexcept { return language_; }
  const std::set<Sequent>& sequents() const noexcept { return sequents_; }
  std::size_t size() const noexcept { return sequents_.size(); }
  bool empty() const noexcept { return sequents_.empty(); }
  auto begin() const noexcept { return sequents_.begin(); }
  auto end() const noexcept { return sequents_.end(); }

  bool contains(const Sequent& s) const { return sequents_.count(s) > 0; }

  void insert(const Sequent& s) {
    detail::require(s.language() == language_, ErrorKind::LanguageMismatch,
                    "sequent '" + s.to_string() + "' is not over " + language_.to_string());
    sequents_.insert(s);
  }

  /// Generator-set equality; semantic equality is mutual theory_leq.
  friend bool operator==(const Theory& a, const Theory& b) {
    return a.language_ == b.language_ && a.sequents_ == b.sequents_;
  }

 private:
  FinSet language_;
  std::set<Sequent> sequents_;
};

/// One instance row: the set of types it is classified by.
struct StateDescription {
  FinSet language;
  TypeSet members = 0;

  std::string to_string() const {
    std::string out = "{";
    for (const auto& n : type_names(language, members)) {
      if (out.size() > 1) out += ", ";
      out += n;
    }
    return out + "}";
  }

  friend bool operator==(const StateDescription&, const StateDescription&) = default;
};

/// Γ ⊆ row implies row ∩ Δ ≠ ∅.
inline bool row_satisfies(TypeSet row, TypeSet gamma, TypeSet delta) {
  return (gamma & ~row) != 0 || (row & delta) != 0;
}

inline bool row_satisfies(const StateDescription& s, const Sequent& q) {
  detail::require(s.language == q.language(), ErrorKind::LanguageMismatch,
                  "state and sequent are over different languages");
  return row_satisfies(s.members, q.gamma(), q.delta());
}

inline bool row_satisfies_all(TypeSet row, const Theory& t) {
  for (const auto& q : t) {
    if (!row_satisfies(row, q.gamma(), q.delta())) return false;
  }
  return true;
}

/// Calls fn(gamma, delta) for all 4^n sequents over an n-type language, in
/// (gamma, delta) order.
template <class Fn>
void for_each_sequent_mask(std::size_t n, Fn&& fn) {
  const TypeSet limit = TypeSet{1} << n;
  for (TypeSet g = 0; g < limit; ++g) {
    for (TypeSet d = 0; d < limit; ++d) fn(g, d);
  }
}

}  // namespace channelkit

#endif  // CHANNELKIT_SEQUENT_HPP
