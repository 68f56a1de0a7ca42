#pragma once

#include <stdexcept>
#include <string>

namespace modbench {

/// Root of every error raised by the library. Callers that only care about
/// "something went wrong in modbench" catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MODBENCH_DEFINE_ERROR(Name)            \
  class Name : public Error {                  \
   public:                                     \
    using Error::Error;                        \
  }

// linalg
MODBENCH_DEFINE_ERROR(NotHermitian);
MODBENCH_DEFINE_ERROR(NoConvergence);
MODBENCH_DEFINE_ERROR(DomainError);
MODBENCH_DEFINE_ERROR(ShapeMismatch);

// space
MODBENCH_DEFINE_ERROR(NotPositive);
MODBENCH_DEFINE_ERROR(TraceError);

// modular
MODBENCH_DEFINE_ERROR(BoundaryCollision);
MODBENCH_DEFINE_ERROR(NotCentered);
MODBENCH_DEFINE_ERROR(WrongSupport);
MODBENCH_DEFINE_ERROR(SlowConvergence);
MODBENCH_DEFINE_ERROR(LambdaOnRay);

// approx
MODBENCH_DEFINE_ERROR(DegreeExhausted);
MODBENCH_DEFINE_ERROR(InvalidApproximation);

// axioms
MODBENCH_DEFINE_ERROR(UnknownTheory);
MODBENCH_DEFINE_ERROR(MissingInterpretation);
MODBENCH_DEFINE_ERROR(SignatureError);

// io
MODBENCH_DEFINE_ERROR(FormatError);

#undef MODBENCH_DEFINE_ERROR

}  // namespace modbench
