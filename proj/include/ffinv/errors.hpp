#ifndef FFINV_ERRORS_HPP
#define FFINV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ffinv {

/// Bad input: out-of-range parameters, malformed config, degenerate grids.
/// The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Numerical failure at runtime: step budget exhausted, missing event
/// crossing, NaN states, residuals above the configured ceiling.
/// The CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace ffinv

#endif
