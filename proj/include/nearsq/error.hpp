#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nearsq {

enum class Errc {
  kSizeBudgetExceeded,
  kNotADivisor,
  kOutOfRange,
  kEmptyParametrization,
  kKernelMismatch,
  kNoFeasibleDecomposition,
  kProductMismatch,
  kDegenerateIndex,
  kArityError,
  kMixedN,
  kDomainError,
  kCheckpointCorrupt,
  kInvalidArgument,
  kInternal,
};

std::string_view ErrcName(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(ErrcName(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace nearsq
