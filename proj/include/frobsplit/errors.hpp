#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"

namespace frobsplit {

/// A verification found data contradicting an expected identity.  The witness
/// holds everything needed to replay the failing computation.
class CounterexampleError : public std::runtime_error {
 public:
  CounterexampleError(const std::string& what, nlohmann::json witness)
      : std::runtime_error(what), witness_(std::move(witness)) {}
  const nlohmann::json& witness() const noexcept { return witness_; }

 private:
  nlohmann::json witness_;
};

}  // namespace frobsplit
