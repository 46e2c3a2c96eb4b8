#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bubblelab {

enum class ErrorKind {
    geometry,
    numeric,
    contrast,
    resonance,
    wrong_branch,
    config,
    singular_kernel,
    near_singular,
    placement,
    infeasible,
    solver,
    io,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::geometry: return "geometry";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::contrast: return "contrast";
    case ErrorKind::resonance: return "resonance";
    case ErrorKind::wrong_branch: return "wrong_branch";
    case ErrorKind::config: return "config";
    case ErrorKind::singular_kernel: return "singular_kernel";
    case ErrorKind::near_singular: return "near_singular";
    case ErrorKind::placement: return "placement";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::solver: return "solver";
    case ErrorKind::io: return "io";
    }
    return "unknown";
}

/// Single exception type for the library; the kind lets callers (the CLI in
/// particular) map failures onto exit codes without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    /// Config-type failures are the caller's fault; everything numerical is a solver failure.
    bool is_config() const noexcept {
        return kind_ == ErrorKind::config || kind_ == ErrorKind::contrast ||
               kind_ == ErrorKind::wrong_branch || kind_ == ErrorKind::infeasible ||
               kind_ == ErrorKind::io;
    }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
    if (!cond) fail(kind, what);
}

} // namespace bubblelab
