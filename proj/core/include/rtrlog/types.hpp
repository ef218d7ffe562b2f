#ifndef RTRLOG_TYPES_HPP
#define RTRLOG_TYPES_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rtrlog {

using Tick = std::uint64_t;   // abstract monotone time, supplied by the caller
using Seq = std::uint64_t;    // globally unique entry insertion number
using QueueId = std::uint32_t;
using TaskId = std::uint32_t;

// --- errors ---------------------------------------------------------------

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownQueueError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RoutingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptyInputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MissingControlFlowQueueError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed file content. `field()` names the offending field or line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field))
    {
    }

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

// --- configuration ---------------------------------------------------------

/// Shared record pool dimensions. One record is the atomic unit of storage
/// and eviction; an entry occupies up to max_records_per_entry records.
struct PoolConfig {
    std::uint32_t pool_records = 0;
    std::uint32_t record_payload_bytes = 0;
    std::uint32_t max_records_per_entry = 0;
    std::uint32_t queue_count = 0;

    /// Throws ConfigError unless pool_records >= 1, record_payload_bytes >= 1,
    /// queue_count >= 1, and 1 <= max_records_per_entry <= pool_records.
    void validate() const;
};

/// Per-queue eviction constraints.
///   mtl: minimum age (ticks) a record must reach before it may be evicted
///   msl: minimum number of records any eviction must leave in the queue
///   qp:  queue priority; smaller means less important, victimized first
struct QueueConfig {
    QueueId queue_id = 0;
    Tick mtl = 0;
    std::uint32_t msl = 0;
    std::int32_t qp = 0;
};

// --- entries ----------------------------------------------------------------

enum class EntryKind : std::uint8_t {
    ContextSwitch,
    Exception,
    Interrupt,
    Checkpoint,
    Input,
};

enum class FlowClass : std::uint8_t { Control, Data };

constexpr FlowClass flow_of(EntryKind k)
{
    switch (k) {
    case EntryKind::ContextSwitch:
    case EntryKind::Exception:
    case EntryKind::Interrupt:
        return FlowClass::Control;
    case EntryKind::Checkpoint:
    case EntryKind::Input:
        return FlowClass::Data;
    }
    return FlowClass::Data; // unreachable
}

constexpr bool is_control_flow(EntryKind k) { return flow_of(k) == FlowClass::Control; }

/// Total order over kinds used for trace sorting and serialization.
constexpr int kind_rank(EntryKind k) { return static_cast<int>(k); }

/// Short token used in trace files and snapshots: cs|exc|irq|ckpt|input.
std::string_view kind_token(EntryKind k);
std::optional<EntryKind> kind_from_token(std::string_view token);

/// One monitored event as handed to a scheduler. The scheduler assigns the
/// sequence number on acceptance; task/program-point/job identity is payload
/// metadata carried through to snapshots.
struct EntryDescriptor {
    QueueId target_queue = 0;
    EntryKind kind = EntryKind::ContextSwitch;
    Tick timestamp = 0;
    std::uint32_t payload_bytes = 0;
    std::optional<TaskId> task_id;
    std::optional<std::uint32_t> program_point; // checkpoints only
    std::optional<std::uint32_t> job_index;
};

/// Records needed to hold a payload: max(1, ceil(payload/record)). A
/// zero-byte payload still occupies one record for its metadata.
constexpr std::uint32_t records_for(std::uint32_t payload_bytes, std::uint32_t record_payload_bytes)
{
    if (payload_bytes == 0)
        return 1;
    return (payload_bytes + record_payload_bytes - 1) / record_payload_bytes;
}

// --- operation outcomes ------------------------------------------------------

enum class InsertStatus : std::uint8_t {
    Accepted,
    RejectedTooLarge,
    RejectedNoEligibleVictim,
};

std::string_view to_string(InsertStatus s);

struct Eviction {
    QueueId queue = 0;
    Seq seq = 0;

    bool operator==(const Eviction&) const = default;
};

/// Result of one insert call. `steps` is the abstract cost measure; for a
/// given scheduler configuration it is identical for every call, which is
/// the constant-execution-time contract in testable form.
struct InsertOutcome {
    InsertStatus status = InsertStatus::Accepted;
    std::vector<Eviction> evicted; // oldest first; empty unless Accepted
    std::uint64_t steps = 0;
};

// --- snapshots ----------------------------------------------------------------

struct EntrySummary {
    Seq seq = 0;
    EntryKind kind = EntryKind::ContextSwitch;
    Tick timestamp = 0;
    std::uint32_t payload_bytes = 0;
    std::optional<TaskId> task_id;
    std::optional<std::uint32_t> program_point;
    std::optional<std::uint32_t> job_index;

    bool operator==(const EntrySummary&) const = default;
};

struct QueueSnapshot {
    QueueId id = 0;
    std::vector<EntrySummary> entries; // old to young

    bool operator==(const QueueSnapshot&) const = default;
};

/// Frozen per-queue entry sequences, the post-mortem view of the log.
struct LogSnapshot {
    Tick taken_at = 0;
    std::vector<QueueSnapshot> queues;
    std::uint64_t drop_count = 0; // entries dropped because no victim was eligible

    bool operator==(const LogSnapshot&) const = default;
};

struct QueueStats {
    std::uint32_t records = 0;
    std::uint32_t entries = 0;
    std::optional<Tick> oldest_ts;
    std::optional<Tick> youngest_ts;

    bool operator==(const QueueStats&) const = default;
};

} // namespace rtrlog

#endif // RTRLOG_TYPES_HPP
