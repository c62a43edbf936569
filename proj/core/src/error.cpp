#include "ocelforge/error.hpp"

namespace ocelforge {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedMetadata: return "MalformedMetadata";
    case ErrorCode::DanglingDomain: return "DanglingDomain";
    case ErrorCode::DuplicateColumn: return "DuplicateColumn";
    case ErrorCode::MissingDataFile: return "MissingDataFile";
    case ErrorCode::RowArityMismatch: return "RowArityMismatch";
    case ErrorCode::HeaderMismatch: return "HeaderMismatch";
    case ErrorCode::UnknownColumn: return "UnknownColumn";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::UnknownMasterTable: return "UnknownMasterTable";
    case ErrorCode::UnknownTable: return "UnknownTable";
    case ErrorCode::FilterFieldNotKey: return "FilterFieldNotKey";
    case ErrorCode::EmptyFilterValues: return "EmptyFilterValues";
    case ErrorCode::MissingSemanticRules: return "MissingSemanticRules";
    case ErrorCode::UncoveredTable: return "UncoveredTable";
    case ErrorCode::InvalidPlan: return "InvalidPlan";
    case ErrorCode::DanglingObjectRef: return "DanglingObjectRef";
    case ErrorCode::UnknownCaseType: return "UnknownCaseType";
    case ErrorCode::MalformedOcel: return "MalformedOcel";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MissingSnapshot: return "MissingSnapshot";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownMasterTable:
    case ErrorCode::UnknownTable:
    case ErrorCode::UnknownColumn:
    case ErrorCode::FilterFieldNotKey:
    case ErrorCode::EmptyFilterValues:
    case ErrorCode::MissingSemanticRules:
    case ErrorCode::UncoveredTable:
    case ErrorCode::InvalidPlan:
    case ErrorCode::UnknownCaseType:
    case ErrorCode::InvalidArgument:
    case ErrorCode::MissingSnapshot:
      return true;
    default:
      return false;
  }
}

}  // namespace ocelforge
