#pragma once

#include <stdexcept>
#include <string>

namespace tradeability {

/// Model or scenario violates an admissibility condition (e.g. a divergent
/// perpetuity or an option with potentially infinite value).
class AdmissibilityError : public std::domain_error {
public:
    explicit AdmissibilityError(const std::string& what) : std::domain_error(what) {}
};

/// A numerical routine failed to converge. The message carries diagnostics
/// (bracket searched, iteration count, residual).
class NumericsError : public std::runtime_error {
public:
    explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tradeability
