#pragma once

#include "mocp/event.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace mocp {

/// Run a forward action. `order` expands into an `order` event followed by
/// interleaved payment and courier-booking attempts.
struct DoStep {
    std::string action;
    PayloadMap args;
};

struct InjectFault {
    enum class Kind { PaymentFail, CourierAFail, CourierBFail };

    Kind kind = Kind::PaymentFail;
    /// Number of payment attempts that will fail; unused for courier faults.
    std::int64_t count = 1;
};

struct UserCancel {
    std::string user;
    std::string txn;
};

struct ClassifyHint {
    enum class Kind { FraudFlag, TrustedFlag };

    Kind kind = Kind::FraudFlag;
    std::string user;
};

/// Raw event without any world change.
struct EmitStep {
    std::string name;
    SubjectMap subject;
    PayloadMap payload;
};

using ScenarioStep = std::variant<DoStep, InjectFault, UserCancel, ClassifyHint, EmitStep>;

struct ScenarioScript {
    std::string name;
    std::vector<ScenarioStep> steps;
    std::int64_t seed = 0;
};

}  // namespace mocp
