#include "rtrlog/ecetes.hpp"

#include "slot_pool.hpp"

#include <cassert>
#include <string>

namespace rtrlog {

void PoolConfig::validate() const
{
    if (pool_records < 1)
        throw ConfigError("pool_records must be >= 1");
    if (record_payload_bytes < 1)
        throw ConfigError("record_payload_bytes must be >= 1");
    if (queue_count < 1)
        throw ConfigError("queue_count must be >= 1");
    if (max_records_per_entry < 1 || max_records_per_entry > pool_records)
        throw ConfigError("max_records_per_entry must be in [1, pool_records]");
}

std::string_view kind_token(EntryKind k)
{
    switch (k) {
    case EntryKind::ContextSwitch: return "cs";
    case EntryKind::Exception: return "exc";
    case EntryKind::Interrupt: return "irq";
    case EntryKind::Checkpoint: return "ckpt";
    case EntryKind::Input: return "input";
    }
    return "?";
}

std::optional<EntryKind> kind_from_token(std::string_view token)
{
    if (token == "cs") return EntryKind::ContextSwitch;
    if (token == "exc") return EntryKind::Exception;
    if (token == "irq") return EntryKind::Interrupt;
    if (token == "ckpt") return EntryKind::Checkpoint;
    if (token == "input") return EntryKind::Input;
    return std::nullopt;
}

std::string_view to_string(InsertStatus s)
{
    switch (s) {
    case InsertStatus::Accepted: return "accepted";
    case InsertStatus::RejectedTooLarge: return "rejected_too_large";
    case InsertStatus::RejectedNoEligibleVictim: return "rejected_no_eligible_victim";
    }
    return "?";
}

EcetesScheduler::EcetesScheduler(const PoolConfig& pool, std::vector<QueueConfig> queues)
    : pool_(pool)
{
    pool_.validate();
    if (queues.size() != pool_.queue_count)
        throw ConfigError("expected " + std::to_string(pool_.queue_count) + " queue configs, got "
                          + std::to_string(queues.size()));

    queues_.resize(pool_.queue_count);
    std::vector<bool> present(pool_.queue_count, false);
    for (const QueueConfig& qc : queues) {
        if (qc.queue_id >= pool_.queue_count)
            throw ConfigError("queue_id " + std::to_string(qc.queue_id) + " out of range");
        if (present[qc.queue_id])
            throw ConfigError("duplicate queue_id " + std::to_string(qc.queue_id));
        if (qc.msl > pool_.pool_records)
            throw ConfigError("msl exceeds pool_records on queue " + std::to_string(qc.queue_id));
        present[qc.queue_id] = true;
        queues_[qc.queue_id] = qc;
    }

    store_ = std::make_unique<detail::SlotPool>(pool_.pool_records, pool_.queue_count);
}

EcetesScheduler::~EcetesScheduler() = default;

EcetesScheduler::Candidate EcetesScheduler::inspect_queue(QueueId q, std::uint32_t needed,
                                                          Tick now, std::uint64_t& steps) const
{
    // One fixed inspection window per queue. An active walk consumes the
    // old-end run slot by slot, then reads the survivor boundary; remaining
    // iterations are idle so that the step count never depends on history.
    const std::uint32_t window = 2 * pool_.max_records_per_entry;

    Candidate c;
    enum class Phase { Run, Survivor, Done };
    Phase phase = needed > 0 ? Phase::Run : Phase::Done;
    std::uint32_t cursor = needed > 0 ? store_->head(q) : detail::kNpos;
    std::uint32_t consumed = 0;
    Tick run_youngest_ts = 0;

    for (std::uint32_t i = 0; i < window; ++i) {
        ++steps; // slot inspected (or idle padding)
        if (phase == Phase::Done)
            continue;
        if (cursor == detail::kNpos) {
            phase = Phase::Done; // queue exhausted; survivor stays absent
            continue;
        }
        const detail::Slot& s = store_->at(cursor);
        if (phase == Phase::Run) {
            ++consumed;
            const bool entry_end = s.segment + 1 == s.header.record_count;
            if (entry_end && consumed >= needed) {
                c.run_found = true;
                c.freed_records = consumed;
                run_youngest_ts = s.header.timestamp;
                phase = Phase::Survivor;
            }
            cursor = s.next;
        } else {
            c.survivor_exists = true;
            c.survivor_ts = s.header.timestamp;
            phase = Phase::Done;
        }
    }

    if (c.run_found) {
        const QueueConfig& qc = queues_[q];
        const std::uint32_t remaining = store_->records(q) - c.freed_records;
        c.eligible = remaining >= qc.msl && now - run_youngest_ts >= qc.mtl;
    }
    return c;
}

bool EcetesScheduler::candidate_preferred(QueueId a, const Candidate& ca, QueueId b,
                                          const Candidate& cb, Tick /*now*/) const
{
    if (queues_[a].qp != queues_[b].qp)
        return queues_[a].qp < queues_[b].qp; // less important queues suffer first
    if (ca.survivor_exists != cb.survivor_exists)
        return !ca.survivor_exists; // an emptied queue keeps nothing younger to lose
    if (ca.survivor_exists && ca.survivor_ts != cb.survivor_ts)
        return ca.survivor_ts < cb.survivor_ts; // older survivor boundary = larger age
    return a < b;
}

InsertOutcome EcetesScheduler::insert(const EntryDescriptor& e)
{
    if (e.target_queue >= pool_.queue_count)
        throw UnknownQueueError("unknown target queue " + std::to_string(e.target_queue));
    assert(e.timestamp >= last_ts_ && "insert timestamps must be non-decreasing");
    last_ts_ = e.timestamp;

    const std::uint32_t lmax = pool_.max_records_per_entry;
    InsertOutcome out;
    std::uint64_t steps = 1; // admission: size the entry

    const std::uint32_t l = records_for(e.payload_bytes, pool_.record_payload_bytes);
    const bool too_large = l > lmax;
    const std::uint32_t free0 = store_->free_count();
    const std::uint32_t shortfall = (!too_large && free0 < l) ? l - free0 : 0;

    std::optional<QueueId> victim;
    Candidate best;
    for (QueueId q = 0; q < pool_.queue_count; ++q) {
        ++steps; // queue examined
        const Candidate c = inspect_queue(q, shortfall, e.timestamp, steps);
        if (c.eligible && (!victim || candidate_preferred(q, c, *victim, best, e.timestamp))) {
            victim = q;
            best = c;
        }
    }

    // Eviction pass: release the victim run one record at a time inside a
    // fixed window (a run never exceeds shortfall + L_max - 1 records).
    std::uint32_t pending = victim ? best.freed_records : 0;
    assert(pending <= 2 * lmax);
    for (std::uint32_t i = 0; i < 2 * lmax; ++i) {
        ++steps;
        if (pending == 0)
            continue;
        const detail::Slot& head = store_->at(store_->head(*victim));
        if (head.segment == 0)
            out.evicted.push_back(Eviction{*victim, head.header.seq});
        store_->free_head_record(*victim);
        --pending;
    }

    const bool accept = !too_large && (free0 >= l || victim.has_value());

    detail::EntryHeader h;
    if (accept) {
        h.seq = next_seq_++;
        h.kind = e.kind;
        h.timestamp = e.timestamp;
        h.payload_bytes = e.payload_bytes;
        h.record_count = l;
        h.origin = e.target_queue;
        h.task_id = e.task_id;
        h.program_point = e.program_point;
        h.job_index = e.job_index;
    }
    for (std::uint32_t i = 0; i < lmax; ++i) {
        ++steps; // link pass
        if (accept && i < l)
            store_->append_record(e.target_queue, h, i);
    }

    ++steps; // outcome bookkeeping
    if (too_large) {
        out.status = InsertStatus::RejectedTooLarge;
    } else if (!accept) {
        out.status = InsertStatus::RejectedNoEligibleVictim;
        ++drops_;
    } else {
        out.status = InsertStatus::Accepted;
    }
    out.steps = steps;
    return out;
}

std::optional<QueueId> EcetesScheduler::select_victim_queue(std::uint32_t needed_records,
                                                            Tick now) const
{
    assert(needed_records >= 1 && needed_records <= pool_.max_records_per_entry);
    std::uint64_t steps = 0;
    std::optional<QueueId> victim;
    Candidate best;
    for (QueueId q = 0; q < pool_.queue_count; ++q) {
        const Candidate c = inspect_queue(q, needed_records, now, steps);
        if (c.eligible && (!victim || candidate_preferred(q, c, *victim, best, now))) {
            victim = q;
            best = c;
        }
    }
    return victim;
}

LogSnapshot EcetesScheduler::snapshot(Tick now) const
{
    LogSnapshot snap;
    snap.taken_at = now;
    snap.drop_count = drops_;
    snap.queues.reserve(pool_.queue_count);
    for (QueueId q = 0; q < pool_.queue_count; ++q)
        snap.queues.push_back(QueueSnapshot{q, store_->list_summaries(q)});
    return snap;
}

QueueStats EcetesScheduler::queue_stats(QueueId q) const
{
    if (q >= pool_.queue_count)
        throw UnknownQueueError("unknown queue " + std::to_string(q));
    return QueueStats{store_->records(q), store_->entries(q), store_->oldest_ts(q),
                      store_->youngest_ts(q)};
}

std::uint32_t EcetesScheduler::free_records() const { return store_->free_count(); }

void EcetesScheduler::check_consistency() const { store_->check_consistency(); }

const QueueConfig& EcetesScheduler::queue_config(QueueId q) const
{
    if (q >= pool_.queue_count)
        throw UnknownQueueError("unknown queue " + std::to_string(q));
    return queues_[q];
}

std::unique_ptr<EcetesScheduler> create_scheduler(const PoolConfig& pool,
                                                  std::vector<QueueConfig> queues)
{
    return std::make_unique<EcetesScheduler>(pool, std::move(queues));
}

} // namespace rtrlog
