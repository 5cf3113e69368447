#pragma once

// JSON helpers shared by the artifact writer and the HTTP service.

#include "bcpred/metrics.hpp"
#include "json.hpp"

namespace bcpred {

nlohmann::json report_to_json(const EvaluationReport& report);

}  // namespace bcpred
