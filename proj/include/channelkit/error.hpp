#ifndef CHANNELKIT_ERROR_HPP
#define CHANNELKIT_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace channelkit {

/// Broad failure category; the CLI maps each one onto an exit status.
enum class ErrorKind {
  LanguageMismatch,
  MalformedDiagram,
  InvalidMorphism,
  CapExceeded,
  InvalidArgument,
  Parse,
  Schema,
  DanglingReference,
  Internal,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::LanguageMismatch: return "language_mismatch";
    case ErrorKind::MalformedDiagram: return "malformed_diagram";
    case ErrorKind::InvalidMorphism: return "invalid_morphism";
    case ErrorKind::CapExceeded: return "cap_exceeded";
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::Parse: return "parse_error";
    case ErrorKind::Schema: return "schema_error";
    case ErrorKind::DanglingReference: return "dangling_reference";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when a desk-scale bound would be exceeded. Carries the bound so
/// callers can suggest a larger setting.
class CapExceeded : public Error {
 public:
  CapExceeded(std::string cap_name, std::size_t limit, std::size_t requested)
      : Error(ErrorKind::CapExceeded,
              cap_name + " cap exceeded: requested " + std::to_string(requested) +
                  ", limit " + std::to_string(limit)),
        cap_name_(std::move(cap_name)),
        limit_(limit),
        requested_(requested) {}

  const std::string& cap_name() const noexcept { return cap_name_; }
  std::size_t limit() const noexcept { return limit_; }
  std::size_t requested() const noexcept { return requested_; }

 private:
  std::string cap_name_;
  std::size_t limit_;
  std::size_t requested_;
};

namespace detail {

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace detail

/// Desk-scale bounds. Every exponential enumeration checks one of these.
struct Caps {
  /// Largest language for state enumeration (2^n states).
  std::size_t max_types = 16;
  /// Largest language for materializing all 4^n sequents.
  std::size_t max_closure_types = 8;
  /// Largest instance set produced by a limit, including partial tuples.
  std::size_t max_product = 10000;
  /// Backtracking node budget for isomorphism search.
  std::size_t max_iso_nodes = 1000000;
};

inline void check_cap(const char* name, std::size_t limit, std::size_t requested) {
  if (requested > limit) throw CapExceeded(name, limit, requested);
}

}  // namespace channelkit

#endif  // CHANNELKIT_ERROR_HPP
