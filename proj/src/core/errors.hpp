#pragma once

#include <stdexcept>
#include <string>

namespace qstable {

// Error categories surfaced through the C API as status codes.
enum class errc {
    invalid_argument,
    parse_error,
    orthogonality_violation,
    degenerate_set,
    no_certificate,
    limit_exceeded,
    internal,
};

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

} // namespace qstable
