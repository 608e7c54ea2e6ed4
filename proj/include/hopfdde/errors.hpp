#pragma once

#include <stdexcept>
#include <string>

namespace hopfdde {

// Exit-code classes used by the CLI: usage = 1, domain = 2, numerical = 3.

class UsageError : public std::invalid_argument {
public:
    explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// The requested object does not exist for these parameters (no x2, no Hopf
/// point, case II, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hopfdde
