#ifndef RTRLOG_HARNESS_HPP
#define RTRLOG_HARNESS_HPP

#include "rtrlog/analyzer.hpp"
#include "rtrlog/scheduler.hpp"
#include "rtrlog/trace.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace rtrlog {

enum class SchedulerKind : std::uint8_t { Ecetes, Gfifo, Lfifo };

std::string_view to_string(SchedulerKind k);
std::optional<SchedulerKind> scheduler_kind_from(std::string_view name);

enum class LfifoPolicy : std::uint8_t { EqualSplit, ProportionalToTraffic, ExplicitCaps };

struct LfifoSpec {
    LfifoPolicy policy = LfifoPolicy::EqualSplit;
    std::vector<std::uint32_t> caps; // ExplicitCaps only
};

/// One experiment: a task set, a pool, a scheduler selection and the crash
/// sampling parameters.
struct ScenarioConfig {
    std::uint64_t seed = 0;
    Tick duration = 1;
    std::uint32_t crash_samples = 1;
    PoolConfig pool;
    std::vector<TaskSpec> tasks;
    SchedulerKind scheduler = SchedulerKind::Ecetes;
    std::optional<std::vector<QueueConfig>> ecetes_queues; // absent: recommend_config
    LfifoSpec lfifo;

    void validate() const; // SpecError on bad values
};

std::vector<TaskMeta> task_metas(std::span<const TaskSpec> tasks);

/// Queue layout shared by every scheduler in a scenario: the recommended
/// role assignment (queue 0 control flow, then one queue per starting point),
/// with explicitly supplied ECETES queue parameters taking precedence over
/// the recommended ones.
RecommendedConfig scenario_layout(const ScenarioConfig& scenario);

/// LFIFO capacities under the scenario's dimensioning policy. Equal split
/// spreads pool_records evenly; proportional-to-traffic weighs queues by the
/// records the trace sends them (every queue keeps at least one record).
std::vector<std::uint32_t> lfifo_capacities(const ScenarioConfig& scenario,
                                            std::span<const TraceEvent> trace,
                                            const RoutingMap& routing);

std::unique_ptr<Scheduler> build_scheduler(SchedulerKind kind, const ScenarioConfig& scenario,
                                           std::span<const TraceEvent> trace,
                                           const RoutingMap& routing);

struct RunLog {
    std::vector<InsertOutcome> outcomes; // parallel to the driven trace
};

/// Feeds events to the scheduler in trace order, timestamping each insert
/// with the event time. Throws RoutingError on an unmapped event.
RunLog drive(std::span<const TraceEvent> trace, Scheduler& scheduler, const RoutingMap& routing);

/// crash_samples instants evenly spaced in (warmup, duration], with
/// warmup = duration / 4 rounded down. The last instant is `duration`.
std::vector<Tick> crash_instants(Tick duration, std::uint32_t samples);

struct TaskMetrics {
    TaskId task_id = 0;
    double availability_rate = 0.0;  // fraction of instants with a usable starting point
    double mean_replay_window = 0.0; // over instants where a window exists
    std::uint64_t usable_instances = 0;
};

struct MetricsReport {
    std::string scheduler;
    std::vector<TaskMetrics> tasks;
    std::uint64_t drop_count = 0;
    std::uint64_t max_steps = 0;
    double utilization = 0.0; // pool records occupied at the final instant
};

struct ScenarioRun {
    MetricsReport report;
    std::vector<std::uint64_t> task_drops; // rejected inserts per task, full run
};

/// Replays the trace prefix at each crash instant into a fresh scheduler,
/// analyzes the snapshot and accumulates availability metrics.
ScenarioRun run_scenario(std::span<const TraceEvent> trace, const ScenarioConfig& scenario,
                         SchedulerKind kind);

MetricsReport sample_crash_metrics(std::span<const TraceEvent> trace,
                                   const ScenarioConfig& scenario, SchedulerKind kind);

struct CompareRow {
    std::string scheduler;
    TaskId task_id = 0;
    double availability = 0.0;
    double window = 0.0;
    std::uint64_t drops = 0;
};

struct CompareReport {
    std::vector<MetricsReport> reports; // ecetes, gfifo, lfifo
    std::vector<CompareRow> table;      // one row per scheduler x task
};

/// Runs all three schedulers over the identical trace.
CompareReport run_comparison(const ScenarioConfig& scenario);

} // namespace rtrlog

#endif // RTRLOG_HARNESS_HPP
