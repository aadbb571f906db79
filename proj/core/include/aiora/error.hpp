#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace aiora {

enum class ErrorCode {
  UnknownSegment,
  UnknownStakeholder,
  UnknownContinuum,
  UnknownApplication,
  UnknownComponent,
  UnknownReservation,
  UnknownEntity,
  UnknownZone,
  UnknownEES,
  UnknownAnalyzer,
  UnknownPolicy,
  UnknownLoop,
  UtilizationOutOfRange,
  DuplicateSegment,
  DuplicateId,
  SegmentBusy,
  InsufficientCapacity,
  AgreementExceeded,
  AlreadyReleased,
  Infeasible,
  UnauthorizedScenario,
  Unauthorized,
  IllegalTransition,
  PlanesIncomplete,
  ContinuumNotActive,
  CyclicNesting,
  ScopeViolation,
  MissingMetric,
  BadParams,
  NoLadderDeclared,
  OutOfOrderTelemetry,
  ParseError,
  ValidationError,
  MalformedTrace,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library. `details` carries the individual
// violations for multi-error reports (validation, infeasibility).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::vector<std::string> details = {});

  ErrorCode code() const noexcept { return code_; }
  const std::vector<std::string>& details() const noexcept { return details_; }

 private:
  ErrorCode code_;
  std::vector<std::string> details_;
};

}  // namespace aiora
