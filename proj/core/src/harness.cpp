#include "rtrlog/harness.hpp"

#include "rtrlog/baselines.hpp"
#include "rtrlog/ecetes.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace rtrlog {

std::string_view to_string(SchedulerKind k)
{
    switch (k) {
    case SchedulerKind::Ecetes: return "ecetes";
    case SchedulerKind::Gfifo: return "gfifo";
    case SchedulerKind::Lfifo: return "lfifo";
    }
    return "?";
}

std::optional<SchedulerKind> scheduler_kind_from(std::string_view name)
{
    if (name == "ecetes") return SchedulerKind::Ecetes;
    if (name == "gfifo") return SchedulerKind::Gfifo;
    if (name == "lfifo") return SchedulerKind::Lfifo;
    return std::nullopt;
}

void ScenarioConfig::validate() const
{
    if (duration < 1)
        throw SpecError("duration: must be >= 1");
    if (crash_samples < 1)
        throw SpecError("crash_samples: must be >= 1");
    if (tasks.empty())
        throw SpecError("tasks: must not be empty");
    validate_tasks(tasks);
    pool.validate();
}

std::vector<TaskMeta> task_metas(std::span<const TaskSpec> tasks)
{
    std::vector<TaskMeta> metas;
    metas.reserve(tasks.size());
    for (const TaskSpec& t : tasks) {
        TaskMeta m;
        m.task_id = t.task_id;
        for (const ProgramPointSpec& pp : t.program_points)
            m.checkpoint_bytes.push_back(pp.checkpoint_bytes);
        metas.push_back(std::move(m));
    }
    return metas;
}

RecommendedConfig scenario_layout(const ScenarioConfig& scenario)
{
    RecommendedConfig rc = recommend_config(task_metas(scenario.tasks), scenario.pool);
    if (scenario.ecetes_queues) {
        if (scenario.ecetes_queues->size() != rc.queues.size())
            throw ConfigError("ecetes_queues must list " + std::to_string(rc.queues.size())
                              + " queues");
        rc.queues = *scenario.ecetes_queues;
    }
    return rc;
}

std::vector<std::uint32_t> lfifo_capacities(const ScenarioConfig& scenario,
                                            std::span<const TraceEvent> trace,
                                            const RoutingMap& routing)
{
    const std::uint32_t pool = scenario.pool.pool_records;
    const std::uint32_t q_count = scenario.pool.queue_count;

    if (scenario.lfifo.policy == LfifoPolicy::ExplicitCaps)
        return scenario.lfifo.caps;

    if (pool < q_count)
        throw ConfigError("pool_records < queue_count: cannot dimension LFIFO queues");

    std::vector<std::uint32_t> caps(q_count, 0);
    if (scenario.lfifo.policy == LfifoPolicy::ProportionalToTraffic) {
        std::vector<std::uint64_t> traffic(q_count, 0);
        std::uint64_t total = 0;
        for (const TraceEvent& e : trace) {
            const QueueId q = routing.route(e.kind, e.task_id, e.program_point);
            const std::uint32_t l =
                records_for(e.payload_bytes, scenario.pool.record_payload_bytes);
            traffic[q] += l;
            total += l;
        }
        if (total > 0) {
            // One record is reserved per queue; the rest is split by largest
            // remainder so the capacities always sum to pool_records.
            const std::uint64_t rest = pool - q_count;
            std::vector<std::uint64_t> remainder(q_count, 0);
            std::uint64_t assigned = 0;
            for (std::uint32_t q = 0; q < q_count; ++q) {
                const std::uint64_t exact = rest * traffic[q];
                caps[q] = 1 + static_cast<std::uint32_t>(exact / total);
                remainder[q] = exact % total;
                assigned += exact / total;
            }
            std::vector<std::uint32_t> order(q_count);
            std::iota(order.begin(), order.end(), 0u);
            std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
                return remainder[a] > remainder[b];
            });
            const std::uint64_t leftover = rest - assigned; // < q_count
            for (std::uint64_t i = 0; i < leftover; ++i)
                ++caps[order[i]];
            return caps;
        }
    }

    // Equal split (also the fallback for a traffic-free trace).
    const std::uint32_t base = pool / q_count;
    const std::uint32_t rem = pool % q_count;
    for (std::uint32_t q = 0; q < q_count; ++q)
        caps[q] = base + (q < rem ? 1 : 0);
    return caps;
}

RunLog drive(std::span<const TraceEvent> trace, Scheduler& scheduler, const RoutingMap& routing)
{
    RunLog log;
    log.outcomes.reserve(trace.size());
    for (const TraceEvent& e : trace) {
        EntryDescriptor d;
        d.target_queue = routing.route(e.kind, e.task_id, e.program_point);
        d.kind = e.kind;
        d.timestamp = e.at;
        d.payload_bytes = e.payload_bytes;
        d.task_id = e.task_id;
        d.program_point = e.program_point;
        d.job_index = e.job_index;
        log.outcomes.push_back(scheduler.insert(d));
    }
    return log;
}

std::unique_ptr<Scheduler> build_scheduler(SchedulerKind kind, const ScenarioConfig& scenario,
                                           std::span<const TraceEvent> trace,
                                           const RoutingMap& routing)
{
    switch (kind) {
    case SchedulerKind::Ecetes: {
        RecommendedConfig rc = scenario_layout(scenario);
        return create_scheduler(scenario.pool, std::move(rc.queues));
    }
    case SchedulerKind::Gfifo:
        return create_gfifo(scenario.pool);
    case SchedulerKind::Lfifo:
        return create_lfifo(scenario.pool, lfifo_capacities(scenario, trace, routing));
    }
    throw ConfigError("unknown scheduler kind");
}

std::vector<Tick> crash_instants(Tick duration, std::uint32_t samples)
{
    const Tick warmup = duration / 4;
    const Tick span = duration - warmup;
    std::vector<Tick> out;
    out.reserve(samples);
    for (std::uint32_t i = 1; i <= samples; ++i) {
        const Tick offset = (static_cast<Tick>(i) * span + samples - 1) / samples; // ceil
        out.push_back(warmup + offset);
    }
    return out;
}

ScenarioRun run_scenario(std::span<const TraceEvent> trace, const ScenarioConfig& scenario,
                         SchedulerKind kind)
{
    scenario.validate();
    const RecommendedConfig layout = scenario_layout(scenario);
    const std::vector<TaskMeta> metas = task_metas(scenario.tasks);
    const std::vector<Tick> instants = crash_instants(scenario.duration, scenario.crash_samples);

    ScenarioRun run;
    run.report.scheduler = std::string(to_string(kind));
    run.task_drops.assign(scenario.tasks.size(), 0);

    struct Accum {
        std::uint64_t available_instants = 0;
        std::uint64_t usable_instances = 0;
        std::uint64_t window_sum = 0;
        std::uint64_t window_count = 0;
    };
    std::vector<Accum> acc(scenario.tasks.size());

    for (std::size_t s = 0; s < instants.size(); ++s) {
        const Tick instant = instants[s];
        const auto cut = std::upper_bound(trace.begin(), trace.end(), instant,
                                          [](Tick t, const TraceEvent& e) { return t < e.at; });
        const std::span<const TraceEvent> prefix(trace.begin(), cut);

        const std::unique_ptr<Scheduler> sched =
            build_scheduler(kind, scenario, trace, layout.routing);
        const RunLog log = drive(prefix, *sched, layout.routing);
        const LogSnapshot snap = sched->snapshot(instant);
        const AvailabilityReport avail =
            usable_starting_points(snap, metas, layout.routing.control_flow_queue);

        for (std::size_t t = 0; t < metas.size(); ++t) {
            const TaskAvailability& ta = avail.tasks[t];
            std::uint64_t usable = 0;
            for (const StartingPointInstance& inst : ta.instances)
                usable += inst.usable ? 1 : 0;
            acc[t].usable_instances += usable;
            if (usable > 0)
                ++acc[t].available_instants;
            if (ta.replay_window) {
                acc[t].window_sum += *ta.replay_window;
                ++acc[t].window_count;
            }
        }

        // The last instant is `duration`, so its prefix is the full trace;
        // global metrics come from that run.
        if (s + 1 == instants.size()) {
            run.report.drop_count = sched->drop_count();
            run.report.utilization = static_cast<double>(sched->used_records())
                / static_cast<double>(scenario.pool.pool_records);
            for (std::size_t i = 0; i < prefix.size(); ++i) {
                const InsertOutcome& o = log.outcomes[i];
                run.report.max_steps = std::max(run.report.max_steps, o.steps);
                if (o.status != InsertStatus::Accepted) {
                    for (std::size_t t = 0; t < scenario.tasks.size(); ++t) {
                        if (scenario.tasks[t].task_id == prefix[i].task_id) {
                            ++run.task_drops[t];
                            break;
                        }
                    }
                }
            }
        }
    }

    run.report.tasks.reserve(metas.size());
    const double samples = static_cast<double>(instants.size());
    for (std::size_t t = 0; t < metas.size(); ++t) {
        TaskMetrics tm;
        tm.task_id = metas[t].task_id;
        tm.availability_rate = static_cast<double>(acc[t].available_instants) / samples;
        tm.mean_replay_window = acc[t].window_count == 0
            ? 0.0
            : static_cast<double>(acc[t].window_sum) / static_cast<double>(acc[t].window_count);
        tm.usable_instances = acc[t].usable_instances;
        run.report.tasks.push_back(tm);
    }
    return run;
}

MetricsReport sample_crash_metrics(std::span<const TraceEvent> trace,
                                   const ScenarioConfig& scenario, SchedulerKind kind)
{
    return run_scenario(trace, scenario, kind).report;
}

CompareReport run_comparison(const ScenarioConfig& scenario)
{
    scenario.validate();
    const std::vector<TraceEvent> trace =
        generate_trace(scenario.tasks, scenario.duration, scenario.seed);

    CompareReport out;
    for (const SchedulerKind kind :
         {SchedulerKind::Ecetes, SchedulerKind::Gfifo, SchedulerKind::Lfifo}) {
        ScenarioRun run = run_scenario(trace, scenario, kind);
        for (std::size_t t = 0; t < run.report.tasks.size(); ++t) {
            const TaskMetrics& tm = run.report.tasks[t];
            out.table.push_back(CompareRow{run.report.scheduler, tm.task_id,
                                           tm.availability_rate, tm.mean_replay_window,
                                           run.task_drops[t]});
        }
        out.reports.push_back(std::move(run.report));
    }
    return out;
}

} // namespace rtrlog
