#include "rtrlog/analyzer.hpp"

#include <algorithm>
#include <string>

namespace rtrlog {

namespace {

const QueueSnapshot* find_queue(const LogSnapshot& snap, QueueId id)
{
    for (const QueueSnapshot& q : snap.queues)
        if (q.id == id)
            return &q;
    return nullptr;
}

} // namespace

std::optional<Tick> control_flow_horizon(const LogSnapshot& snap, QueueId cf_queue)
{
    const QueueSnapshot* q = find_queue(snap, cf_queue);
    if (q == nullptr)
        throw UnknownQueueError("no queue " + std::to_string(cf_queue) + " in snapshot");
    if (q->entries.empty())
        return std::nullopt;
    return q->entries.front().timestamp;
}

AvailabilityReport usable_starting_points(const LogSnapshot& snap,
                                          const std::vector<TaskMeta>& tasks, QueueId cf_queue)
{
    if (find_queue(snap, cf_queue) == nullptr)
        throw MissingControlFlowQueueError("control-flow queue " + std::to_string(cf_queue)
                                           + " not present in snapshot");
    const std::optional<Tick> horizon = control_flow_horizon(snap, cf_queue);

    // Youngest surviving checkpoint per (task, program point, job), anywhere
    // in the snapshot. Entries lacking full identity cannot anchor a replay.
    struct Found {
        Seq seq;
        Tick ts;
    };
    std::map<std::tuple<TaskId, std::uint32_t, std::uint32_t>, Found> found;
    for (const QueueSnapshot& q : snap.queues) {
        for (const EntrySummary& e : q.entries) {
            if (e.kind != EntryKind::Checkpoint)
                continue;
            if (!e.task_id || !e.program_point || !e.job_index)
                continue;
            const auto key = std::make_tuple(*e.task_id, *e.program_point, *e.job_index);
            auto [it, inserted] = found.try_emplace(key, Found{e.seq, e.timestamp});
            if (!inserted && e.timestamp >= it->second.ts)
                it->second = Found{e.seq, e.timestamp};
        }
    }

    AvailabilityReport report;
    report.tasks.reserve(tasks.size());
    for (const TaskMeta& meta : tasks) {
        TaskAvailability ta;
        ta.task_id = meta.task_id;

        // Jobs with at least one surviving checkpoint for this task.
        std::vector<std::uint32_t> jobs;
        for (const auto& [key, f] : found) {
            if (std::get<0>(key) != meta.task_id)
                continue;
            if (std::get<1>(key) >= meta.program_points())
                continue; // not a declared starting point
            jobs.push_back(std::get<2>(key));
        }
        std::sort(jobs.begin(), jobs.end());
        jobs.erase(std::unique(jobs.begin(), jobs.end()), jobs.end());

        for (std::uint32_t job : jobs) {
            bool chain_ok = true; // all earlier program points of this job usable
            for (std::uint32_t k = 0; k < meta.program_points(); ++k) {
                const auto it = found.find(std::make_tuple(meta.task_id, k, job));
                if (it == found.end()) {
                    chain_ok = false;
                    continue;
                }
                StartingPointInstance inst;
                inst.task_id = meta.task_id;
                inst.program_point = k;
                inst.job_index = job;
                inst.checkpoint_seq = it->second.seq;
                inst.checkpoint_ts = it->second.ts;
                const bool covered = horizon.has_value() && it->second.ts >= *horizon;
                inst.usable = covered && chain_ok;
                chain_ok = inst.usable;
                ta.instances.push_back(inst);
            }
        }

        for (const StartingPointInstance& inst : ta.instances) {
            if (!inst.usable)
                continue;
            if (!ta.guaranteed_start_ts || inst.checkpoint_ts < *ta.guaranteed_start_ts)
                ta.guaranteed_start_ts = inst.checkpoint_ts;
        }
        if (ta.guaranteed_start_ts)
            ta.replay_window = snap.taken_at - *ta.guaranteed_start_ts;

        report.tasks.push_back(std::move(ta));
    }
    return report;
}

QueueId RoutingMap::route(EntryKind kind, std::optional<TaskId> task_id,
                          std::optional<std::uint32_t> program_point) const
{
    if (is_control_flow(kind))
        return control_flow_queue;
    if (!task_id)
        throw RoutingError("data-flow event without a task id");
    if (kind == EntryKind::Checkpoint) {
        if (!program_point)
            throw RoutingError("checkpoint without a program point");
        const auto it = checkpoint_queue.find({*task_id, *program_point});
        if (it == checkpoint_queue.end())
            throw RoutingError("no queue for task " + std::to_string(*task_id)
                               + " program point " + std::to_string(*program_point));
        return it->second;
    }
    const auto it = input_queue.find(*task_id);
    if (it == input_queue.end())
        throw RoutingError("no input queue for task " + std::to_string(*task_id));
    return it->second;
}

RecommendedConfig recommend_config(const std::vector<TaskMeta>& tasks, const PoolConfig& pool)
{
    pool.validate();
    std::uint64_t total_points = 0;
    for (const TaskMeta& t : tasks) {
        if (t.program_points() == 0)
            throw ConfigError("task " + std::to_string(t.task_id) + " declares no program points");
        for (std::uint32_t bytes : t.checkpoint_bytes)
            if (bytes == 0)
                throw ConfigError("checkpoint_bytes must be > 0");
        total_points += t.program_points();
    }
    const std::uint64_t want = 1 + total_points;
    if (pool.queue_count != want)
        throw ConfigError("queue_count must be 1 + total program points = " + std::to_string(want)
                          + ", got " + std::to_string(pool.queue_count));

    RecommendedConfig rc;
    rc.routing.control_flow_queue = 0;
    rc.queues.push_back(QueueConfig{0, 0, 0, kControlFlowQp});

    QueueId next = 1;
    for (const TaskMeta& t : tasks) {
        for (std::uint32_t k = 0; k < t.program_points(); ++k) {
            const std::uint32_t msl = records_for(t.checkpoint_bytes[k], pool.record_payload_bytes);
            if (msl > pool.max_records_per_entry)
                throw ConfigError("checkpoint of task " + std::to_string(t.task_id)
                                  + " program point " + std::to_string(k) + " needs "
                                  + std::to_string(msl) + " records > max_records_per_entry");
            rc.queues.push_back(QueueConfig{next, 0, msl, kDataFlowQp});
            rc.routing.checkpoint_queue[{t.task_id, k}] = next;
            if (k == 0)
                rc.routing.input_queue[t.task_id] = next;
            ++next;
        }
    }
    return rc;
}

RecordSizeChoice suggest_record_size(
    std::span<const std::pair<std::uint32_t, std::uint64_t>> entry_size_histogram,
    std::span<const std::uint32_t> candidates)
{
    if (entry_size_histogram.empty())
        throw EmptyInputError("entry size histogram is empty");
    if (candidates.empty())
        throw EmptyInputError("candidate list is empty");

    RecordSizeChoice choice;
    choice.waste.reserve(candidates.size());
    for (std::uint32_t r : candidates) {
        if (r == 0)
            throw EmptyInputError("candidate record size must be > 0");
        std::uint64_t waste = 0;
        for (const auto& [size, freq] : entry_size_histogram) {
            const std::uint64_t per_entry =
                (size == 0) ? 0 : (std::uint64_t{(size + r - 1) / r} * r - size);
            waste += freq * per_entry;
        }
        choice.waste.emplace_back(r, waste);
    }

    const auto best = std::min_element(choice.waste.begin(), choice.waste.end(),
                                       [](const auto& a, const auto& b) {
                                           if (a.second != b.second)
                                               return a.second < b.second;
                                           return a.first < b.first;
                                       });
    choice.best = best->first;
    return choice;
}

} // namespace rtrlog
