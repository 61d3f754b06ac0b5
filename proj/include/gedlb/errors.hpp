#pragma once

#include <stdexcept>
#include <string>

namespace gedlb {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define GEDLB_DEFINE_ERROR(Name)            \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  };

GEDLB_DEFINE_ERROR(InconsistentEdit)
GEDLB_DEFINE_ERROR(InfeasibleMix)
GEDLB_DEFINE_ERROR(TooLarge)
GEDLB_DEFINE_ERROR(BadParams)
GEDLB_DEFINE_ERROR(ConstructionInvalid)
GEDLB_DEFINE_ERROR(NoConvergence)
GEDLB_DEFINE_ERROR(AmbiguousClustering)
GEDLB_DEFINE_ERROR(DimensionMismatch)
GEDLB_DEFINE_ERROR(SolverFailure)
GEDLB_DEFINE_ERROR(NumericalBreakdown)
GEDLB_DEFINE_ERROR(NotContracting)
GEDLB_DEFINE_ERROR(NotUniform)
GEDLB_DEFINE_ERROR(EmptyDataset)

#undef GEDLB_DEFINE_ERROR

// Parse failures carry the 1-based line number of the offending input line
// (0 when the failure is not tied to a line).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace gedlb
