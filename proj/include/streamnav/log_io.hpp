#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "streamnav/safety_analysis.hpp"
#include "streamnav/scenario_log.hpp"

namespace streamnav {

inline constexpr const char* kStepLogSchema = "streamnav.step/1";

/// One JSON object per line, one line per step, in step order. Each record
/// carries the schema tag, the obstacles active during the step, and every
/// agent's commanded/actual state at full double precision. Wall-clock timing
/// is not part of this stream, so identical runs produce identical bytes.
void write_step_log(std::ostream& out, const ScenarioLog& log);

/// Serializes a single step record (no trailing newline).
std::string step_record_json(const StepRecord& rec, const FlowField& field);

/// Reads a stream written by write_step_log. Throws ConfigParseError on a
/// schema mismatch or malformed line. runtime_ns is left empty.
ScenarioLog read_step_log(std::istream& in);

/// CSV with header
///   step,time,cem_active,d_min_cmd,d_min_actual,clearance_cmd,clearance_actual,delta_phi,v_max,runtime_ns
/// Undefined quantities are written as empty cells.
void write_summary_csv(std::ostream& out, const ScenarioLog& log,
                       std::span<const SeparationSample> separations);

}  // namespace streamnav
