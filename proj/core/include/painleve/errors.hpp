#pragma once

#include <stdexcept>
#include <string>

namespace painleve {

// Two families: DomainError means the inputs sit outside an operation's
// precondition, NumericalError means a computation failed on valid input.
// The CLI maps them to exit codes 1 and 3.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define PAINLEVE_ERROR(Name, Base)                    \
  class Name : public Base {                          \
   public:                                            \
    explicit Name(const std::string& what)            \
        : Base(std::string(#Name ": ") + what) {}     \
  }

PAINLEVE_ERROR(ParamOutOfRange, DomainError);
PAINLEVE_ERROR(SingularP, DomainError);
PAINLEVE_ERROR(BranchViolation, DomainError);
PAINLEVE_ERROR(OutOfDomain, DomainError);
PAINLEVE_ERROR(OutOfRange, DomainError);

PAINLEVE_ERROR(DegenerateSystem, NumericalError);
PAINLEVE_ERROR(NonConvergent, NumericalError);
PAINLEVE_ERROR(StepBudgetExceeded, NumericalError);
PAINLEVE_ERROR(StepUnderflow, NumericalError);
PAINLEVE_ERROR(NonFiniteDerivative, NumericalError);
PAINLEVE_ERROR(QuadratureFailure, NumericalError);
PAINLEVE_ERROR(RelaxationFailure, NumericalError);
PAINLEVE_ERROR(NoBracket, NumericalError);
PAINLEVE_ERROR(MonotonicityViolation, NumericalError);

#undef PAINLEVE_ERROR

}  // namespace painleve
