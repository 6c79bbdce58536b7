#pragma once

#include <stdexcept>
#include <string>

namespace helixlab {

/// Base class of every failure raised by the library. `kind()` is the stable
/// name recorded in reports when a check is captured as a failed record.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "GeometryError"; }
};

#define HELIXLAB_DECLARE_ERROR(Name)                           \
  class Name : public GeometryError {                          \
   public:                                                     \
    using GeometryError::GeometryError;                        \
    const char* kind() const noexcept override { return #Name; } \
  }

HELIXLAB_DECLARE_ERROR(DimensionError);
HELIXLAB_DECLARE_ERROR(NullIntermediate);
HELIXLAB_DECLARE_ERROR(RankDeficient);
HELIXLAB_DECLARE_ERROR(EvaluationDomain);
HELIXLAB_DECLARE_ERROR(ImmersionSingular);
HELIXLAB_DECLARE_ERROR(NullSegment);
HELIXLAB_DECLARE_ERROR(OrderAmbiguous);
HELIXLAB_DECLARE_ERROR(InconsistentOrder);
HELIXLAB_DECLARE_ERROR(NotNormal);
HELIXLAB_DECLARE_ERROR(LeftDomain);
HELIXLAB_DECLARE_ERROR(ContinuationStall);
HELIXLAB_DECLARE_ERROR(NullSection);
HELIXLAB_DECLARE_ERROR(NotGeodesicSection);
HELIXLAB_DECLARE_ERROR(ConfigError);

#undef HELIXLAB_DECLARE_ERROR

}  // namespace helixlab
