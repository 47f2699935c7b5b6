#pragma once

#include <stdexcept>
#include <string>

namespace kgsolve {

/// Invalid or inconsistent run configuration (bad grid ratios, stability
/// violations, bank/config mismatches, unknown config keys).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or corrupted on-disk data (bank files, CSV).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure at runtime: NaN in an iteration, path blow-up.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace kgsolve
