#ifndef RTRLOG_SCHEDULER_HPP
#define RTRLOG_SCHEDULER_HPP

#include "rtrlog/types.hpp"

#include <memory>
#include <string_view>

namespace rtrlog {

/// Common surface of the ECETES, GFIFO and LFIFO eviction schedulers.
///
/// Instances are externally serialized: callers must not issue concurrent
/// operations on one instance. Timestamps passed to insert() must be
/// non-decreasing across calls.
class Scheduler {
public:
    virtual ~Scheduler() = default;

    virtual InsertOutcome insert(const EntryDescriptor& e) = 0;

    /// Per-queue entry sequences in old-to-young order. Does not modify state.
    virtual LogSnapshot snapshot(Tick now) const = 0;

    virtual QueueStats queue_stats(QueueId q) const = 0;

    virtual const PoolConfig& pool() const = 0;

    virtual std::uint32_t free_records() const = 0;

    std::uint32_t used_records() const { return pool().pool_records - free_records(); }

    virtual std::uint64_t drop_count() const = 0;

    /// "ecetes" | "gfifo" | "lfifo"
    virtual std::string_view name() const = 0;

    /// Walks internal structures and throws std::logic_error on any broken
    /// invariant (slot partition, entry contiguity, counter drift). Test aid.
    virtual void check_consistency() const = 0;
};

class EcetesScheduler;
class GfifoScheduler;
class LfifoScheduler;

/// ECETES over a shared pool. Throws ConfigError on invalid configuration
/// (arity mismatch, duplicate queue ids, msl > pool_records, ...).
std::unique_ptr<EcetesScheduler> create_scheduler(const PoolConfig& pool,
                                                  std::vector<QueueConfig> queues);

/// Single global FIFO; target_queue is kept as metadata only.
std::unique_ptr<GfifoScheduler> create_gfifo(const PoolConfig& pool);

/// One statically dimensioned FIFO per queue; capacities are records.
std::unique_ptr<LfifoScheduler> create_lfifo(const PoolConfig& pool,
                                             std::vector<std::uint32_t> capacities);

} // namespace rtrlog

#endif // RTRLOG_SCHEDULER_HPP
