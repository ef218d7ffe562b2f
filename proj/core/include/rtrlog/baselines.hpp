#ifndef RTRLOG_BASELINES_HPP
#define RTRLOG_BASELINES_HPP

#include "rtrlog/scheduler.hpp"

#include <memory>

namespace rtrlog {

namespace detail {
class SlotPool;
}

/// Global FIFO baseline: one store for all entries, globally oldest evicted
/// first. target_queue is recorded as metadata so snapshots stay analyzable
/// per source; it never influences eviction.
class GfifoScheduler final : public Scheduler {
public:
    explicit GfifoScheduler(const PoolConfig& pool);
    ~GfifoScheduler() override;

    GfifoScheduler(const GfifoScheduler&) = delete;
    GfifoScheduler& operator=(const GfifoScheduler&) = delete;

    InsertOutcome insert(const EntryDescriptor& e) override;
    LogSnapshot snapshot(Tick now) const override;
    QueueStats queue_stats(QueueId q) const override;
    const PoolConfig& pool() const override { return pool_; }
    std::uint32_t free_records() const override;
    std::uint64_t drop_count() const override { return 0; }
    std::string_view name() const override { return "gfifo"; }
    void check_consistency() const override;

private:
    PoolConfig pool_;
    std::unique_ptr<detail::SlotPool> store_; // single list
    Seq next_seq_ = 0;
    Tick last_ts_ = 0;
};

/// Local FIFO baseline: every queue owns a private region of `capacity`
/// records, dimensioned before the run. Insertions to one queue never touch
/// another; an entry larger than its queue's capacity is rejected.
class LfifoScheduler final : public Scheduler {
public:
    LfifoScheduler(const PoolConfig& pool, std::vector<std::uint32_t> capacities);
    ~LfifoScheduler() override;

    LfifoScheduler(const LfifoScheduler&) = delete;
    LfifoScheduler& operator=(const LfifoScheduler&) = delete;

    InsertOutcome insert(const EntryDescriptor& e) override;
    LogSnapshot snapshot(Tick now) const override;
    QueueStats queue_stats(QueueId q) const override;
    const PoolConfig& pool() const override { return pool_; }
    std::uint32_t free_records() const override;
    std::uint64_t drop_count() const override { return 0; }
    std::string_view name() const override { return "lfifo"; }
    void check_consistency() const override;

    std::uint32_t capacity(QueueId q) const;

private:
    PoolConfig pool_;
    std::vector<std::uint32_t> caps_;
    std::unique_ptr<detail::SlotPool> store_; // one list per queue
    Seq next_seq_ = 0;
    Tick last_ts_ = 0;
};

} // namespace rtrlog

#endif // RTRLOG_BASELINES_HPP
