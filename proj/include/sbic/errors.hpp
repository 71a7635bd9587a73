#pragma once

#include <stdexcept>
#include <string>

namespace sbic {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SBIC_DEFINE_ERROR(Name)            \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  }

// Poset construction and lookup.
SBIC_DEFINE_ERROR(CycleError);
SBIC_DEFINE_ERROR(UnknownIdError);

// Learning-coefficient tables.
SBIC_DEFINE_ERROR(RankRangeError);
SBIC_DEFINE_ERROR(RangeError);

// Solver.
SBIC_DEFINE_ERROR(SampleSizeError);
SBIC_DEFINE_ERROR(ValidationError);
SBIC_DEFINE_ERROR(NonFiniteError);
SBIC_DEFINE_ERROR(NonConvergenceError);

// Model families.
SBIC_DEFINE_ERROR(DimensionError);
SBIC_DEFINE_ERROR(SingularDesignError);
SBIC_DEFINE_ERROR(DegenerateComponentError);
SBIC_DEFINE_ERROR(NotPositiveDefiniteError);
SBIC_DEFINE_ERROR(DegenerateError);

// Experiments and I/O.
SBIC_DEFINE_ERROR(EmptyError);
SBIC_DEFINE_ERROR(IoError);
SBIC_DEFINE_ERROR(SchemaError);

#undef SBIC_DEFINE_ERROR

}  // namespace sbic
