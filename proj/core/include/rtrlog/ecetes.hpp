#ifndef RTRLOG_ECETES_HPP
#define RTRLOG_ECETES_HPP

#include "rtrlog/scheduler.hpp"

#include <memory>
#include <optional>

namespace rtrlog {

namespace detail {
class SlotPool;
}

/// Multi-queue eviction scheduler over a shared record pool.
///
/// Every insert runs the same fixed sequence of bounded phases — admission,
/// a victim scan touching a 2*L_max slot window per queue, an eviction pass
/// and a link pass — so the reported step count depends only on the pool
/// configuration, never on pool size or insertion history.
///
/// Victim choice: for each queue, the minimal old-end run of whole entries
/// covering the shortfall is determined. A queue is eligible when the run
/// exists, eviction leaves at least msl records, and the youngest evicted
/// entry is at least mtl ticks old. Among eligible queues the winner
/// minimizes (qp ascending, survivor-boundary age descending, queue_id
/// ascending); a queue that would be emptied counts as having an infinitely
/// old survivor boundary.
class EcetesScheduler final : public Scheduler {
public:
    EcetesScheduler(const PoolConfig& pool, std::vector<QueueConfig> queues);
    ~EcetesScheduler() override;

    EcetesScheduler(const EcetesScheduler&) = delete;
    EcetesScheduler& operator=(const EcetesScheduler&) = delete;

    InsertOutcome insert(const EntryDescriptor& e) override;
    LogSnapshot snapshot(Tick now) const override;
    QueueStats queue_stats(QueueId q) const override;
    const PoolConfig& pool() const override { return pool_; }
    std::uint32_t free_records() const override;
    std::uint64_t drop_count() const override { return drops_; }
    std::string_view name() const override { return "ecetes"; }
    void check_consistency() const override;

    /// The queue that suffers least from losing `needed_records`, or nothing
    /// when every queue is blocked. Requires 1 <= needed_records <= L_max.
    std::optional<QueueId> select_victim_queue(std::uint32_t needed_records, Tick now) const;

    const QueueConfig& queue_config(QueueId q) const;

private:
    struct Candidate {
        bool run_found = false;     // an old-end run covering the shortfall exists
        bool eligible = false;      // run exists and MSL/MTL permit it
        std::uint32_t freed_records = 0;
        bool survivor_exists = false;
        Tick survivor_ts = 0;       // valid when survivor_exists
    };

    Candidate inspect_queue(QueueId q, std::uint32_t needed, Tick now,
                            std::uint64_t& steps) const;
    bool candidate_preferred(QueueId a, const Candidate& ca, QueueId b, const Candidate& cb,
                             Tick now) const;

    PoolConfig pool_;
    std::vector<QueueConfig> queues_; // indexed by queue_id
    std::unique_ptr<detail::SlotPool> store_;
    Seq next_seq_ = 0;
    std::uint64_t drops_ = 0;
    Tick last_ts_ = 0;
};

} // namespace rtrlog

#endif // RTRLOG_ECETES_HPP
