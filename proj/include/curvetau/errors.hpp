#ifndef CURVETAU_ERRORS_HPP
#define CURVETAU_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace curvetau {

// Exit-code classes for the CLI: parse = 2, validation = 3, precision = 4,
// oracle mismatch = 5. OracleMismatch is the one that always means a bug.

class ValidationError : public std::runtime_error {
public:
    enum class Kind { branch_not_on_curve, non_reduced, non_primitive, bad_parametrization };
    ValidationError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

class PrecisionExhausted : public std::runtime_error {
public:
    explicit PrecisionExhausted(const std::string& msg) : std::runtime_error(msg) {}
};

class ConductorNotStabilized : public std::runtime_error {
public:
    explicit ConductorNotStabilized(const std::string& msg) : std::runtime_error(msg) {}
};

class NonIsolated : public std::runtime_error {
public:
    explicit NonIsolated(const std::string& msg) : std::runtime_error(msg) {}
};

class OracleMismatch : public std::logic_error {
public:
    explicit OracleMismatch(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace curvetau

#endif
