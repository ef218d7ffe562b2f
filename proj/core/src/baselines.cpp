#include "rtrlog/baselines.hpp"

#include "slot_pool.hpp"

#include <cassert>
#include <numeric>
#include <string>

namespace rtrlog {

namespace {

detail::EntryHeader make_header(const EntryDescriptor& e, Seq seq, std::uint32_t record_count)
{
    detail::EntryHeader h;
    h.seq = seq;
    h.kind = e.kind;
    h.timestamp = e.timestamp;
    h.payload_bytes = e.payload_bytes;
    h.record_count = record_count;
    h.origin = e.target_queue;
    h.task_id = e.task_id;
    h.program_point = e.program_point;
    h.job_index = e.job_index;
    return h;
}

} // namespace

// --- GFIFO -------------------------------------------------------------------

GfifoScheduler::GfifoScheduler(const PoolConfig& pool) : pool_(pool)
{
    pool_.validate();
    store_ = std::make_unique<detail::SlotPool>(pool_.pool_records, 1);
}

GfifoScheduler::~GfifoScheduler() = default;

InsertOutcome GfifoScheduler::insert(const EntryDescriptor& e)
{
    if (e.target_queue >= pool_.queue_count)
        throw UnknownQueueError("unknown target queue " + std::to_string(e.target_queue));
    assert(e.timestamp >= last_ts_ && "insert timestamps must be non-decreasing");
    last_ts_ = e.timestamp;

    const std::uint32_t lmax = pool_.max_records_per_entry;
    InsertOutcome out;
    std::uint64_t steps = 1; // admission

    const std::uint32_t l = records_for(e.payload_bytes, pool_.record_payload_bytes);
    const bool too_large = l > lmax;
    const std::uint32_t free0 = store_->free_count();

    // Eviction pass: release whole entries from the global old end until the
    // shortfall is covered, inside a fixed window. l <= L_max <= pool_records
    // guarantees a fit, so GFIFO never drops.
    std::uint32_t still_needed = (!too_large && free0 < l) ? l - free0 : 0;
    std::uint32_t entry_remaining = 0;
    for (std::uint32_t i = 0; i < 2 * lmax; ++i) {
        ++steps;
        if (still_needed == 0 && entry_remaining == 0)
            continue;
        const detail::Slot& head = store_->at(store_->head(0));
        if (head.segment == 0) {
            out.evicted.push_back(Eviction{head.header.origin, head.header.seq});
            entry_remaining = head.header.record_count;
        }
        store_->free_head_record(0);
        --entry_remaining;
        if (still_needed > 0)
            --still_needed;
    }

    const bool accept = !too_large;
    detail::EntryHeader h;
    if (accept)
        h = make_header(e, next_seq_++, l);
    for (std::uint32_t i = 0; i < lmax; ++i) {
        ++steps; // link pass
        if (accept && i < l)
            store_->append_record(0, h, i);
    }

    ++steps;
    out.status = too_large ? InsertStatus::RejectedTooLarge : InsertStatus::Accepted;
    out.steps = steps;
    return out;
}

LogSnapshot GfifoScheduler::snapshot(Tick now) const
{
    LogSnapshot snap;
    snap.taken_at = now;
    snap.drop_count = 0;
    snap.queues.resize(pool_.queue_count);
    for (QueueId q = 0; q < pool_.queue_count; ++q)
        snap.queues[q].id = q;
    // Bucket the single store by recorded origin, preserving global order.
    for (std::uint32_t cur = store_->head(0); cur != detail::kNpos; cur = store_->at(cur).next) {
        const detail::Slot& s = store_->at(cur);
        if (s.segment != 0)
            continue;
        snap.queues[s.header.origin].entries.push_back(EntrySummary{
            s.header.seq, s.header.kind, s.header.timestamp, s.header.payload_bytes,
            s.header.task_id, s.header.program_point, s.header.job_index});
    }
    return snap;
}

QueueStats GfifoScheduler::queue_stats(QueueId q) const
{
    if (q >= pool_.queue_count)
        throw UnknownQueueError("unknown queue " + std::to_string(q));
    QueueStats st;
    for (std::uint32_t cur = store_->head(0); cur != detail::kNpos; cur = store_->at(cur).next) {
        const detail::Slot& s = store_->at(cur);
        if (s.header.origin != q)
            continue;
        ++st.records;
        if (s.segment != 0)
            continue;
        ++st.entries;
        if (!st.oldest_ts)
            st.oldest_ts = s.header.timestamp;
        st.youngest_ts = s.header.timestamp;
    }
    return st;
}

std::uint32_t GfifoScheduler::free_records() const { return store_->free_count(); }

void GfifoScheduler::check_consistency() const { store_->check_consistency(); }

std::unique_ptr<GfifoScheduler> create_gfifo(const PoolConfig& pool)
{
    return std::make_unique<GfifoScheduler>(pool);
}

// --- LFIFO -------------------------------------------------------------------

LfifoScheduler::LfifoScheduler(const PoolConfig& pool, std::vector<std::uint32_t> capacities)
    : pool_(pool), caps_(std::move(capacities))
{
    pool_.validate();
    if (caps_.size() != pool_.queue_count)
        throw ConfigError("expected " + std::to_string(pool_.queue_count) + " capacities, got "
                          + std::to_string(caps_.size()));
    std::uint64_t total = 0;
    for (std::uint32_t c : caps_) {
        if (c < 1)
            throw ConfigError("queue capacity must be >= 1");
        total += c;
    }
    if (total > pool_.pool_records)
        throw ConfigError("capacities sum to " + std::to_string(total) + " > pool_records "
                          + std::to_string(pool_.pool_records));
    store_ = std::make_unique<detail::SlotPool>(pool_.pool_records, pool_.queue_count);
}

LfifoScheduler::~LfifoScheduler() = default;

InsertOutcome LfifoScheduler::insert(const EntryDescriptor& e)
{
    if (e.target_queue >= pool_.queue_count)
        throw UnknownQueueError("unknown target queue " + std::to_string(e.target_queue));
    assert(e.timestamp >= last_ts_ && "insert timestamps must be non-decreasing");
    last_ts_ = e.timestamp;

    const QueueId q = e.target_queue;
    const std::uint32_t lmax = pool_.max_records_per_entry;
    InsertOutcome out;
    std::uint64_t steps = 1; // admission

    const std::uint32_t l = records_for(e.payload_bytes, pool_.record_payload_bytes);
    const bool too_large = l > lmax || l > caps_[q];
    const std::uint32_t local_free = caps_[q] - store_->records(q);

    // Eviction pass confined to the target queue's own region.
    std::uint32_t still_needed = (!too_large && local_free < l) ? l - local_free : 0;
    std::uint32_t entry_remaining = 0;
    for (std::uint32_t i = 0; i < 2 * lmax; ++i) {
        ++steps;
        if (still_needed == 0 && entry_remaining == 0)
            continue;
        const detail::Slot& head = store_->at(store_->head(q));
        if (head.segment == 0) {
            out.evicted.push_back(Eviction{q, head.header.seq});
            entry_remaining = head.header.record_count;
        }
        store_->free_head_record(q);
        --entry_remaining;
        if (still_needed > 0)
            --still_needed;
    }

    const bool accept = !too_large;
    detail::EntryHeader h;
    if (accept)
        h = make_header(e, next_seq_++, l);
    for (std::uint32_t i = 0; i < lmax; ++i) {
        ++steps; // link pass
        if (accept && i < l)
            store_->append_record(q, h, i);
    }

    ++steps;
    out.status = too_large ? InsertStatus::RejectedTooLarge : InsertStatus::Accepted;
    out.steps = steps;
    return out;
}

LogSnapshot LfifoScheduler::snapshot(Tick now) const
{
    LogSnapshot snap;
    snap.taken_at = now;
    snap.drop_count = 0;
    snap.queues.reserve(pool_.queue_count);
    for (QueueId q = 0; q < pool_.queue_count; ++q)
        snap.queues.push_back(QueueSnapshot{q, store_->list_summaries(q)});
    return snap;
}

QueueStats LfifoScheduler::queue_stats(QueueId q) const
{
    if (q >= pool_.queue_count)
        throw UnknownQueueError("unknown queue " + std::to_string(q));
    return QueueStats{store_->records(q), store_->entries(q), store_->oldest_ts(q),
                      store_->youngest_ts(q)};
}

std::uint32_t LfifoScheduler::free_records() const { return store_->free_count(); }

void LfifoScheduler::check_consistency() const
{
    store_->check_consistency();
    for (QueueId q = 0; q < pool_.queue_count; ++q)
        if (store_->records(q) > caps_[q])
            throw std::logic_error("lfifo queue exceeds its capacity");
}

std::uint32_t LfifoScheduler::capacity(QueueId q) const
{
    if (q >= pool_.queue_count)
        throw UnknownQueueError("unknown queue " + std::to_string(q));
    return caps_[q];
}

std::unique_ptr<LfifoScheduler> create_lfifo(const PoolConfig& pool,
                                             std::vector<std::uint32_t> capacities)
{
    return std::make_unique<LfifoScheduler>(pool, std::move(capacities));
}

} // namespace rtrlog
