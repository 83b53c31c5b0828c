#pragma once

#include <stdexcept>
#include <string>

namespace ddlevy {

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct NonConvergence : std::runtime_error {
    explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

struct SubdivisionLimit : std::runtime_error {
    explicit SubdivisionLimit(const std::string& what) : std::runtime_error(what) {}
};

struct BracketFailure : std::runtime_error {
    explicit BracketFailure(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidDrawdown : std::runtime_error {
    explicit InvalidDrawdown(const std::string& what) : std::runtime_error(what) {}
};

struct WellDefinednessViolated : std::runtime_error {
    explicit WellDefinednessViolated(const std::string& what) : std::runtime_error(what) {}
};

struct ImproperIntegral : std::runtime_error {
    explicit ImproperIntegral(const std::string& what) : std::runtime_error(what) {}
};

struct QMismatch : std::runtime_error {
    explicit QMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct MeanUndefined : std::runtime_error {
    explicit MeanUndefined(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ddlevy
