#include "mf2c/error.hpp"

namespace mf2c {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::MissingCloudAgent: return "MissingCloudAgent";
        case Errc::CycleDetected: return "CycleDetected";
        case Errc::MicroagentWithChildren: return "MicroagentWithChildren";
        case Errc::MicroagentInCluster: return "MicroagentInCluster";
        case Errc::InvalidCapacity: return "InvalidCapacity";
        case Errc::DuplicateNode: return "DuplicateNode";
        case Errc::EmptyCluster: return "EmptyCluster";
        case Errc::ParentIsMicroagent: return "ParentIsMicroagent";
        case Errc::UnknownParent: return "UnknownParent";
        case Errc::CannotRemoveRoot: return "CannotRemoveRoot";
        case Errc::UnknownNode: return "UnknownNode";
        case Errc::RejectedNoCapacity: return "RejectedNoCapacity";
        case Errc::UnknownTarget: return "UnknownTarget";
        case Errc::DoubleRelease: return "DoubleRelease";
        case Errc::InvalidRequest: return "InvalidRequest";
        case Errc::NoCandidates: return "NoCandidates";
        case Errc::NonMonotoneTime: return "NonMonotoneTime";
        case Errc::ScenarioOverflow: return "ScenarioOverflow";
        case Errc::InsufficientObservations: return "InsufficientObservations";
        case Errc::DegenerateGeometry: return "DegenerateGeometry";
        case Errc::NoObservations: return "NoObservations";
        case Errc::OutOfBounds: return "OutOfBounds";
        case Errc::InvalidParams: return "InvalidParams";
        case Errc::SweepMismatch: return "SweepMismatch";
        case Errc::IoError: return "IoError";
        case Errc::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace mf2c
