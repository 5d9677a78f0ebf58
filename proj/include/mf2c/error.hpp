#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mf2c {

enum class Errc {
    // topology
    MissingCloudAgent,
    CycleDetected,
    MicroagentWithChildren,
    MicroagentInCluster,
    InvalidCapacity,
    DuplicateNode,
    EmptyCluster,
    ParentIsMicroagent,
    UnknownParent,
    CannotRemoveRoot,
    UnknownNode,
    // placement
    RejectedNoCapacity,
    UnknownTarget,
    DoubleRelease,
    InvalidRequest,
    // qos
    NoCandidates,
    NonMonotoneTime,
    // simnet
    ScenarioOverflow,
    // positioning
    InsufficientObservations,
    DegenerateGeometry,
    NoObservations,
    // analytics
    OutOfBounds,
    // workload / harness
    InvalidParams,
    SweepMismatch,
    IoError,
    InvalidConfig,
};

std::string_view to_string(Errc code) noexcept;

/// Every recoverable failure in the library is reported as an Error carrying
/// one of the codes above; the message adds context for humans.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& detail);

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace mf2c
