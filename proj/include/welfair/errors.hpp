#pragma once

#include <stdexcept>
#include <string>

namespace welfair {

// Broad failure category, used by the CLI to map exceptions onto exit codes.
enum class ErrorClass {
  input,     // malformed or inconsistent caller data
  solve,     // a solve that could not produce a usable result
  internal,  // everything else
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, std::string kind, const std::string& msg)
      : std::runtime_error(msg), cls_(cls), kind_(std::move(kind)) {}

  ErrorClass error_class() const noexcept { return cls_; }
  const std::string& kind() const noexcept { return kind_; }

 private:
  ErrorClass cls_;
  std::string kind_;
};

#define WELFAIR_DEFINE_ERROR(NAME, CLASS)                      \
  class NAME : public Error {                                  \
   public:                                                     \
    explicit NAME(const std::string& msg)                      \
        : Error(ErrorClass::CLASS, #NAME, msg) {}              \
  }

WELFAIR_DEFINE_ERROR(NonPositiveBenefit, input);
WELFAIR_DEFINE_ERROR(UnknownLabel, input);
WELFAIR_DEFINE_ERROR(EmptyProfile, input);
WELFAIR_DEFINE_ERROR(LengthMismatch, input);
WELFAIR_DEFINE_ERROR(EmptyGroup, input);
WELFAIR_DEFINE_ERROR(UndefinedRate, input);
WELFAIR_DEFINE_ERROR(DegenerateData, input);
WELFAIR_DEFINE_ERROR(UnsupportedAlpha, input);
WELFAIR_DEFINE_ERROR(MissingColumn, input);
WELFAIR_DEFINE_ERROR(MalformedNumber, input);
WELFAIR_DEFINE_ERROR(MissingValue, input);
WELFAIR_DEFINE_ERROR(TooFewRows, input);
WELFAIR_DEFINE_ERROR(InvalidArgument, input);
WELFAIR_DEFINE_ERROR(IoError, input);

WELFAIR_DEFINE_ERROR(NonConvergence, solve);
WELFAIR_DEFINE_ERROR(Infeasible, solve);
WELFAIR_DEFINE_ERROR(DomainCollapse, solve);
WELFAIR_DEFINE_ERROR(LambdaOverflow, solve);
WELFAIR_DEFINE_ERROR(AllInfeasible, solve);

#undef WELFAIR_DEFINE_ERROR

}  // namespace welfair
