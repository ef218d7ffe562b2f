#ifndef RTRLOG_SCENARIO_IO_HPP
#define RTRLOG_SCENARIO_IO_HPP

#include "rtrlog/analyzer.hpp"
#include "rtrlog/harness.hpp"

#include <string>
#include <utility>
#include <vector>

namespace rtrlog {

/// Parses a scenario document (JSON). Throws ParseError naming the offending
/// field on malformed or missing content.
ScenarioConfig parse_scenario(const std::string& text);

/// Snapshot files: {"taken_at", "drop_count", "queues": [{"id", "entries":
/// [{"seq","kind","ts","size","task"?,"pp"?,"job"?}]}]}.
LogSnapshot parse_snapshot(const std::string& text);
std::string snapshot_to_json(const LogSnapshot& snap);

/// Task metadata for the analyzer: {"cf_queue", "tasks": [{"task_id",
/// "program_points": [{"checkpoint_bytes"}]}]}.
std::pair<std::vector<TaskMeta>, QueueId> parse_task_metas(const std::string& text);

/// Metrics report with keys scheduler, tasks, drop_count, max_steps,
/// utilization. With `stamp`, adds a generated_at wall-clock field.
std::string metrics_to_json(const MetricsReport& report, bool stamp = false);

std::string compare_to_json(const CompareReport& report, bool stamp = false);

/// Flat text table, one row per scheduler x task.
std::string compare_table_text(const CompareReport& report);

std::string availability_to_json(const AvailabilityReport& report, Tick taken_at);

/// Human-readable availability listing, one task per paragraph.
std::string availability_text(const AvailabilityReport& report, Tick taken_at);

} // namespace rtrlog

#endif // RTRLOG_SCENARIO_IO_HPP
