#ifndef RTRLOG_ANALYZER_HPP
#define RTRLOG_ANALYZER_HPP

#include "rtrlog/types.hpp"

#include <map>
#include <span>
#include <utility>
#include <vector>

namespace rtrlog {

/// Replay-relevant description of one task: its starting points in the order
/// they are visited within a job, with the checkpoint size at each.
struct TaskMeta {
    TaskId task_id = 0;
    std::vector<std::uint32_t> checkpoint_bytes; // index = program point

    std::uint32_t program_points() const
    {
        return static_cast<std::uint32_t>(checkpoint_bytes.size());
    }
};

/// One (task, program point, job) occurrence found in a snapshot.
struct StartingPointInstance {
    TaskId task_id = 0;
    std::uint32_t program_point = 0;
    std::uint32_t job_index = 0;
    Seq checkpoint_seq = 0;
    Tick checkpoint_ts = 0;
    bool usable = false;

    bool operator==(const StartingPointInstance&) const = default;
};

struct TaskAvailability {
    TaskId task_id = 0;
    std::vector<StartingPointInstance> instances; // sorted by (job, program point)
    std::optional<Tick> guaranteed_start_ts;
    std::optional<Tick> replay_window; // taken_at - guaranteed_start_ts

    bool operator==(const TaskAvailability&) const = default;
};

struct AvailabilityReport {
    std::vector<TaskAvailability> tasks; // in the order the metas were given

    bool operator==(const AvailabilityReport&) const = default;
};

/// Timestamp of the oldest entry in the designated control-flow queue: the
/// earliest instant from which control flow is contiguously known. Absent
/// when the queue is empty. Throws UnknownQueueError when no queue in the
/// snapshot has that id.
std::optional<Tick> control_flow_horizon(const LogSnapshot& snap, QueueId cf_queue);

/// Decides which starting points are usable. An instance (task, k, job) is
/// usable iff its checkpoint survives in the snapshot, its timestamp is not
/// older than the control-flow horizon, and (for k > 0) the previous program
/// point of the same job is usable. Throws MissingControlFlowQueueError when
/// the control-flow queue is absent from the snapshot.
AvailabilityReport usable_starting_points(const LogSnapshot& snap,
                                          const std::vector<TaskMeta>& tasks, QueueId cf_queue);

/// Maps monitored events onto queues. Built by recommend_config; inputs of a
/// task share its first program point's queue.
struct RoutingMap {
    QueueId control_flow_queue = 0;
    std::map<std::pair<TaskId, std::uint32_t>, QueueId> checkpoint_queue;
    std::map<TaskId, QueueId> input_queue;

    /// Queue for an event of `kind` with the given identity; throws
    /// RoutingError when no mapping exists.
    QueueId route(EntryKind kind, std::optional<TaskId> task_id,
                  std::optional<std::uint32_t> program_point) const;
};

struct RecommendedConfig {
    std::vector<QueueConfig> queues;
    RoutingMap routing;
};

inline constexpr std::int32_t kControlFlowQp = 1000;
inline constexpr std::int32_t kDataFlowQp = 500;

/// Recommended layout: queue 0 collects all control flow, then one data-flow
/// queue per (task, program point) in task order. Each data-flow queue's msl
/// holds one complete checkpoint; the control-flow queue gets the highest
/// priority. Throws ConfigError when pool.queue_count does not equal
/// 1 + total program points, or when L_max cannot fit the largest checkpoint.
RecommendedConfig recommend_config(const std::vector<TaskMeta>& tasks, const PoolConfig& pool);

struct RecordSizeChoice {
    std::uint32_t best = 0;
    std::vector<std::pair<std::uint32_t, std::uint64_t>> waste; // (candidate, wasted bytes)
};

/// Evaluates waste(r) = sum freq * (ceil(size/r)*r - size) for each candidate
/// record size and returns the one wasting least, ties to the smaller size.
/// Throws EmptyInputError on an empty histogram or candidate list.
RecordSizeChoice suggest_record_size(
    std::span<const std::pair<std::uint32_t, std::uint64_t>> entry_size_histogram,
    std::span<const std::uint32_t> candidates);

} // namespace rtrlog

#endif // RTRLOG_ANALYZER_HPP
