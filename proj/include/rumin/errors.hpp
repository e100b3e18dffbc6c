#pragma once

#include <stdexcept>
#include <string>

namespace rumin {

class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& detail)
      : std::runtime_error(kind + (detail.empty() ? "" : ": " + detail)), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define RUMIN_ERROR(Name)                                                   \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& detail = "") : Error(#Name, detail) {} \
  }

RUMIN_ERROR(InconsistentSystem);
RUMIN_ERROR(NonUniqueSolution);
RUMIN_ERROR(DegenerateGram);
RUMIN_ERROR(DimensionMismatch);
RUMIN_ERROR(IndexOutOfRange);
RUMIN_ERROR(LeviMismatch);
RUMIN_ERROR(JacobiFailure);
RUMIN_ERROR(ConnectionSolveFailure);
RUMIN_ERROR(SymmetryViolation);
RUMIN_ERROR(ModelFormatError);
RUMIN_ERROR(NotInvariantModel);
RUMIN_ERROR(NotStrictlyPseudoconvex);
RUMIN_ERROR(NotTorsionFree);
RUMIN_ERROR(NotTraceFree);
RUMIN_ERROR(BadBidegree);
RUMIN_ERROR(BidegreeMismatch);
RUMIN_ERROR(MiddleDegreeOnly);
RUMIN_ERROR(MembershipViolation);
RUMIN_ERROR(NotClosed);
RUMIN_ERROR(NotUnimodular);

#undef RUMIN_ERROR

}  // namespace rumin
