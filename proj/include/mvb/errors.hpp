#pragma once

#include <stdexcept>
#include <string>

namespace mvb {

// Every failure mode raised by the library. Usage/validation kinds map to
// CLI exit code 2, runtime kinds to exit code 1.
enum class ErrorKind {
  kInvalidArgument,
  kNonSquare,
  kNegativeEntry,
  kRowSumOutOfTolerance,
  kGammaOutOfRange,
  kProportionSumInvalid,
  kMixedClassCounts,
  kEmptyPopulation,
  kClassOutOfRange,
  kNegativeArgument,
  kPreconditionViolated,
  kDominanceViolated,
  kDeltaNotPositive,
  kMissingTrueClass,
  kSizeMismatch,
  kNonPositiveConstant,
  kZeroVoters,
  kTargetOutOfRange,
  kTrialsInsufficient,
  // runtime failures
  kApportionmentImpossible,
  kStateSpaceTooLarge,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  bool is_runtime_failure() const {
    return kind_ == ErrorKind::kApportionmentImpossible ||
           kind_ == ErrorKind::kStateSpaceTooLarge;
  }

 private:
  ErrorKind kind_;
};

}  // namespace mvb
