#pragma once

#include <stdexcept>
#include <string>

namespace fewnomial {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// algebra
struct PowOfNonpositive : Error {
  using Error::Error;
};
struct PrecisionExhausted : Error {
  using Error::Error;
};
struct NotSquarefree : Error {
  using Error::Error;
};

// bivar / reduce
struct UndecidedCoefficient : Error {
  using Error::Error;
};
struct AllSameSign : Error {
  using Error::Error;
};
struct DegenerateSupport : Error {
  using Error::Error;
};
struct NonInvertibleMap : Error {
  using Error::Error;
};
struct NonFiniteSolutionSet : Error {
  using Error::Error;
};
struct TooFewTerms : Error {
  using Error::Error;
};
struct LayerCountMismatch : Error {
  using Error::Error;
};
struct NondegeneracyViolated : Error {
  using Error::Error;
};

// rootcount / phimap
struct DegreeAmbiguous : Error {
  using Error::Error;
};
struct UndecidedSeparation : Error {
  using Error::Error;
};
struct UndecidedSign : Error {
  using Error::Error;
};

// fans
struct DegeneratePolygon : Error {
  using Error::Error;
};
struct NotHexagon : Error {
  using Error::Error;
};
struct ParallelRays : Error {
  using Error::Error;
};

// oracle
struct CommonComponent : Error {
  using Error::Error;
};
struct NonSimple : Error {
  using Error::Error;
};

// cli
struct SyntaxError : Error {
  size_t position;
  SyntaxError(const std::string& msg, size_t pos)
      : Error(msg + " at position " + std::to_string(pos)), position(pos) {}
};
struct GNotTrinomial : Error {
  using Error::Error;
};
struct NonIntegerExponent : Error {
  using Error::Error;
};

}  // namespace fewnomial
