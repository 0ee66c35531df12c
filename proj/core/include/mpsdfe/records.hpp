#pragma once

#include <string>
#include <string_view>

#include "mpsdfe/estimation.hpp"

namespace mpsdfe {

/// Settings file: a JSON Lines document whose first line describes the plan
/// ({"type":"plan",...}) followed by one {"type":"setting",...} line per
/// sampled setting.
std::string plan_to_jsonl(const Plan& plan);
Plan plan_from_jsonl(std::string_view text);

enum class RecordStyle {
  /// {"settingIndex","setting","shots","signs":["+-+",...]}, one string per shot.
  Signs,
  /// {"settingIndex","setting","shots","counts":{"+-+":12,...}}.
  Counts,
};

/// Measurement records, one JSON line per setting.
std::string records_to_jsonl(const Plan& plan, const MeasurementData& data, RecordStyle style = RecordStyle::Signs);

/// Parses records in either style and checks them against the plan.
MeasurementData records_from_jsonl(std::string_view text, const Plan& plan);

/// Deterministic report document. Wall-clock data, lambda and the data
/// source are left out so a replay from records reproduces it exactly.
std::string report_to_json(const EstimationReport& report);

/// Wall-clock timings, kept apart from the report so the report stays
/// reproducible bit-for-bit.
std::string timings_to_json(const PhaseTimings& timings);

}  // namespace mpsdfe
