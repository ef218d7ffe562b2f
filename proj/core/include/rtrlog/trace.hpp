#ifndef RTRLOG_TRACE_HPP
#define RTRLOG_TRACE_HPP

#include "rtrlog/types.hpp"

#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

namespace rtrlog {

/// splitmix64; the fixed generator behind sporadic arrivals so traces are
/// bit-identical across platforms for a given seed.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

struct PeriodicActivation {
    Tick period = 1;
    Tick offset = 0;
};

struct SporadicActivation {
    Tick min_interarrival = 1;
    std::uint32_t arrival_prob_permille = 0; // 0..1000
};

using Activation = std::variant<PeriodicActivation, SporadicActivation>;

struct ProgramPointSpec {
    Tick offset = 0; // ticks after job start
    std::uint32_t checkpoint_bytes = 1;
};

struct InputSpec {
    Tick offset = 0;
    std::uint32_t payload_bytes = 0;
};

struct TaskSpec {
    TaskId task_id = 0;
    Activation activation;
    std::vector<ProgramPointSpec> program_points; // offsets strictly increasing
    std::vector<InputSpec> inputs_per_job;
};

/// Throws SpecError on an invalid task set (zero period or interarrival,
/// probability > 1000, non-increasing program-point offsets, duplicate ids).
void validate_tasks(std::span<const TaskSpec> tasks);

struct TraceEvent {
    Tick at = 0;
    EntryKind kind = EntryKind::ContextSwitch;
    TaskId task_id = 0;
    std::uint32_t job_index = 0;
    std::optional<std::uint32_t> program_point; // checkpoints only
    std::uint32_t payload_bytes = 0;

    bool operator==(const TraceEvent&) const = default;
};

/// Strict weak order used for the global trace: (at, task_id, kind rank).
bool trace_order_less(const TraceEvent& a, const TraceEvent& b);

/// Deterministic monitored-event trace for the task set over [0, duration).
///
/// Periodic tasks release jobs at offset + k*period. A sporadic task becomes
/// eligible min_interarrival ticks after its previous release (immediately at
/// tick 0 for its first); each eligible tick consumes one splitmix64 draw and
/// releases iff draw % 1000 < arrival_prob_permille. Draws are consumed in
/// task order, tick order, from a single generator seeded with `seed`.
///
/// Each job emits a context switch at release, its checkpoints and inputs at
/// their offsets, and a closing context switch one tick after the last
/// offset. Events at or beyond `duration` are dropped. The result is sorted
/// by trace_order_less (stable with respect to construction order).
std::vector<TraceEvent> generate_trace(const std::vector<TaskSpec>& tasks, Tick duration,
                                       std::uint64_t seed);

/// Line format, one event per line, fields in fixed order:
///   t=<ticks> kind=<cs|exc|irq|ckpt|input> task=<id> job=<n> [pp=<k>] size=<bytes>
void write_trace(std::ostream& os, std::span<const TraceEvent> trace);
std::vector<TraceEvent> read_trace(std::istream& is); // ParseError names line/field

} // namespace rtrlog

#endif // RTRLOG_TRACE_HPP
