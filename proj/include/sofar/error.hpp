// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sofar {

enum class ErrorKind {
  InvalidProfile,
  Domain,
  NoAxis,
  NoPath,
  NoDuct,
  InvalidArgument,
  Infeasible,
  ModelAssumption,
  Parse,
  Validation,
};

std::string_view to_string(ErrorKind kind);

/// Every module reports failures through this type; `kind()` lets callers
/// (and the CLI exit-code mapping) branch without parsing messages.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidProfile: return "invalid profile";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::NoAxis: return "no channel axis";
    case ErrorKind::NoPath: return "no path";
    case ErrorKind::NoDuct: return "no duct";
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::ModelAssumption: return "model assumption violated";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Validation: return "validation error";
  }
  return "error";
}

}  // namespace sofar
