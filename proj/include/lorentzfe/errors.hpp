#pragma once

#include <stdexcept>
#include <string>

namespace lorentzfe {

/// Malformed or inadmissible input (bad parameters, mismatched grids, ...).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a result (bracket failure,
/// undefined transform, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lorentzfe
