#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ocelforge {

enum class ErrorCode {
  // catalog / data
  MalformedMetadata,
  DanglingDomain,
  DuplicateColumn,
  MissingDataFile,
  RowArityMismatch,
  HeaderMismatch,
  UnknownColumn,
  IoFailure,
  // graph / classification
  UnknownMasterTable,
  UnknownTable,
  // plan validation
  FilterFieldNotKey,
  EmptyFilterValues,
  MissingSemanticRules,
  UncoveredTable,
  InvalidPlan,
  // ocel
  DanglingObjectRef,
  UnknownCaseType,
  MalformedOcel,
  // general
  InvalidArgument,
  MissingSnapshot,
};

std::string_view to_string(ErrorCode code) noexcept;

// Validation failures are caller mistakes (exit code 1, HTTP 422); everything
// else is a problem with the snapshot data itself (exit code 2).
bool is_validation_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace ocelforge
