#pragma once

#include <stdexcept>
#include <string>

namespace evt {

// Matrix inversion hit a pivot too small to trust.
class SingularMatrixError : public std::runtime_error {
public:
    explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

// A combination denominator collapsed (e.g. an auxiliary Hill estimate of
// zero would put a related-variable weight at infinity).
class DegenerateDenominatorError : public std::runtime_error {
public:
    explicit DegenerateDenominatorError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace evt
