#pragma once

#include <stdexcept>
#include <string>

namespace nslab {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid argument or configuration value; the message names the offending field.
struct ParameterError : Error {
    using Error::Error;
};

/// Config file problems: syntax, unknown keys, missing sections.
struct ConfigError : Error {
    using Error::Error;
};

/// Hard numerical failure: NaN, lost pivot, dominance violation on solve input.
struct NumericalError : Error {
    using Error::Error;
};

/// Inconsistent measured data handed to an analysis routine (signals an upstream bug).
struct DataError : Error {
    using Error::Error;
};

/// API misuse, e.g. an accumulator updated out of order.
struct UsageError : Error {
    using Error::Error;
};

} // namespace nslab
