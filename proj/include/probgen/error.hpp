#pragma once

#include <stdexcept>
#include <string>

namespace probgen {

// Error taxonomy mirrored by the CLI exit codes: user errors (bad input,
// unknown names) exit 2, resource ceilings exit 3, internal verification
// failures exit 4.
enum class ErrorKind { User, Ceiling, Internal };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void user_error(const std::string& msg) {
    throw Error(ErrorKind::User, msg);
}

[[noreturn]] inline void ceiling_error(const std::string& msg) {
    throw Error(ErrorKind::Ceiling, msg);
}

// Internal checks that must hold if the implementation is correct. These are
// kept on in release builds: the cost is negligible next to the computations
// they guard, and a silent wrong answer is worse than an abort.
[[noreturn]] inline void internal_error(const std::string& msg) {
    throw Error(ErrorKind::Internal, msg);
}

inline void check_internal(bool ok, const std::string& msg) {
    if (!ok) internal_error(msg);
}

} // namespace probgen
