#pragma once

#include <stdexcept>
#include <string>

namespace duelbench {

// Base for everything this library throws on bad input or failed contracts.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Matrix validation.
struct ShapeError : Error { using Error::Error; };
struct RangeError : Error { using Error::Error; };
struct DiagonalError : Error { using Error::Error; };
struct AsymmetryError : Error { using Error::Error; };

// Indices and parameters.
struct IndexError : Error { using Error::Error; };
struct ParamError : Error { using Error::Error; };
struct DegenerateDistribution : Error { using Error::Error; };

// Environments and traces.
struct HorizonError : Error { using Error::Error; };
struct GapViolation : Error { using Error::Error; };
struct IncompleteTrace : Error { using Error::Error; };

// I/O and config.
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct IOError : Error { using Error::Error; };

// select_pair / observe called out of turn.
struct ProtocolError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace duelbench
