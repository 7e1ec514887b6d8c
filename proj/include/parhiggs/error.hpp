#pragma once

#include <stdexcept>
#include <string>

namespace parhiggs {

// Error kinds surface in the CLI as machine-readable "error_kind" strings.
enum class ErrorKind {
    malformed,    // unparseable input
    invalid,      // well-formed input violating a domain contract
    unsupported,  // outside the engine's envelope (e.g. r >= 3 exhaustive search)
    nonsplit,     // eigenvalue data not rational
    ambiguity,    // non-regular residue matrix, compatible flag not unique
    unstable,     // operation requires a stable (simple) underlying bundle
    internal      // broken internal invariant
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::malformed: return "malformed";
        case ErrorKind::invalid: return "invalid";
        case ErrorKind::unsupported: return "unsupported";
        case ErrorKind::nonsplit: return "nonsplit";
        case ErrorKind::ambiguity: return "ambiguity";
        case ErrorKind::unstable: return "unstable";
        case ErrorKind::internal: return "internal";
    }
    return "internal";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
    if (!cond) fail(kind, msg);
}

// Internal invariants; violations are bugs, not user errors.
inline void check(bool cond, const std::string& msg) {
    if (!cond) fail(ErrorKind::internal, msg);
}

}  // namespace parhiggs
