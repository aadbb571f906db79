#include "aiora/error.hpp"

namespace aiora {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownSegment: return "UnknownSegment";
    case ErrorCode::UnknownStakeholder: return "UnknownStakeholder";
    case ErrorCode::UnknownContinuum: return "UnknownContinuum";
    case ErrorCode::UnknownApplication: return "UnknownApplication";
    case ErrorCode::UnknownComponent: return "UnknownComponent";
    case ErrorCode::UnknownReservation: return "UnknownReservation";
    case ErrorCode::UnknownEntity: return "UnknownEntity";
    case ErrorCode::UnknownZone: return "UnknownZone";
    case ErrorCode::UnknownEES: return "UnknownEES";
    case ErrorCode::UnknownAnalyzer: return "UnknownAnalyzer";
    case ErrorCode::UnknownPolicy: return "UnknownPolicy";
    case ErrorCode::UnknownLoop: return "UnknownLoop";
    case ErrorCode::UtilizationOutOfRange: return "UtilizationOutOfRange";
    case ErrorCode::DuplicateSegment: return "DuplicateSegment";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::SegmentBusy: return "SegmentBusy";
    case ErrorCode::InsufficientCapacity: return "InsufficientCapacity";
    case ErrorCode::AgreementExceeded: return "AgreementExceeded";
    case ErrorCode::AlreadyReleased: return "AlreadyReleased";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::UnauthorizedScenario: return "UnauthorizedScenario";
    case ErrorCode::Unauthorized: return "Unauthorized";
    case ErrorCode::IllegalTransition: return "IllegalTransition";
    case ErrorCode::PlanesIncomplete: return "PlanesIncomplete";
    case ErrorCode::ContinuumNotActive: return "ContinuumNotActive";
    case ErrorCode::CyclicNesting: return "CyclicNesting";
    case ErrorCode::ScopeViolation: return "ScopeViolation";
    case ErrorCode::MissingMetric: return "MissingMetric";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::NoLadderDeclared: return "NoLadderDeclared";
    case ErrorCode::OutOfOrderTelemetry: return "OutOfOrderTelemetry";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::MalformedTrace: return "MalformedTrace";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message,
             std::vector<std::string> details)
    : std::runtime_error(message), code_(code), details_(std::move(details)) {}

}  // namespace aiora
