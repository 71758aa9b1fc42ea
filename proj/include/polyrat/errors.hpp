#pragma once

#include <stdexcept>
#include <string>

namespace polyrat {

struct DegeneratePoleError : std::runtime_error {
    explicit DegeneratePoleError(const std::string& what) : std::runtime_error(what) {}
};

struct GridTooSmallError : std::invalid_argument {
    explicit GridTooSmallError(const std::string& what) : std::invalid_argument(what) {}
};

struct BoxMismatchError : std::invalid_argument {
    explicit BoxMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

struct SupportMismatchError : std::invalid_argument {
    explicit SupportMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

struct ConvergenceFailureError : std::runtime_error {
    explicit ConvergenceFailureError(const std::string& what) : std::runtime_error(what) {}
};

struct RankDefectError : std::runtime_error {
    explicit RankDefectError(const std::string& what) : std::runtime_error(what) {}
};

struct U22NotZeroError : std::runtime_error {
    explicit U22NotZeroError(const std::string& what) : std::runtime_error(what) {}
};

struct DegreeBoundViolatedError : std::logic_error {
    explicit DegreeBoundViolatedError(const std::string& what) : std::logic_error(what) {}
};

struct SingularResolventError : std::runtime_error {
    explicit SingularResolventError(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : std::invalid_argument {
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace polyrat
