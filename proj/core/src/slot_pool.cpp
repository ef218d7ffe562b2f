#include "slot_pool.hpp"

#include <cassert>
#include <stdexcept>

namespace rtrlog::detail {

SlotPool::SlotPool(std::uint32_t pool_records, std::uint32_t list_count)
    : slots_(pool_records), lists_(list_count)
{
    // Thread every slot onto the free list, ascending index.
    for (std::uint32_t i = 0; i < pool_records; ++i)
        slots_[i].next = (i + 1 < pool_records) ? i + 1 : kNpos;
    free_head_ = pool_records > 0 ? 0 : kNpos;
    free_count_ = pool_records;
}

void SlotPool::append_record(std::uint32_t list, const EntryHeader& header, std::uint32_t segment)
{
    assert(free_count_ > 0);
    const std::uint32_t idx = free_head_;
    Slot& s = slots_[idx];
    free_head_ = s.next;
    --free_count_;

    s.vacant = false;
    s.header = header;
    s.segment = segment;
    s.prev = kNpos;
    s.next = kNpos;

    ListState& ls = lists_[list];
    if (ls.tail == kNpos) {
        ls.head = ls.tail = idx;
    } else {
        slots_[ls.tail].next = idx;
        s.prev = ls.tail;
        ls.tail = idx;
    }
    ++ls.records;
    if (segment == 0)
        ++ls.entries;
}

EntryHeader SlotPool::free_head_record(std::uint32_t list)
{
    ListState& ls = lists_[list];
    assert(ls.head != kNpos);
    const std::uint32_t idx = ls.head;
    Slot& s = slots_[idx];
    const EntryHeader header = s.header;

    ls.head = s.next;
    if (ls.head == kNpos)
        ls.tail = kNpos;
    else
        slots_[ls.head].prev = kNpos;
    --ls.records;
    if (s.segment == 0)
        --ls.entries;

    s.vacant = true;
    s.prev = kNpos;
    s.next = free_head_;
    free_head_ = idx;
    ++free_count_;
    return header;
}

std::vector<EntrySummary> SlotPool::list_summaries(std::uint32_t list) const
{
    std::vector<EntrySummary> out;
    out.reserve(lists_[list].entries);
    for (std::uint32_t cur = lists_[list].head; cur != kNpos; cur = slots_[cur].next) {
        const Slot& s = slots_[cur];
        if (s.segment != 0)
            continue;
        out.push_back(EntrySummary{
            s.header.seq,
            s.header.kind,
            s.header.timestamp,
            s.header.payload_bytes,
            s.header.task_id,
            s.header.program_point,
            s.header.job_index,
        });
    }
    return out;
}

std::optional<Tick> SlotPool::oldest_ts(std::uint32_t list) const
{
    const std::uint32_t h = lists_[list].head;
    if (h == kNpos)
        return std::nullopt;
    return slots_[h].header.timestamp;
}

std::optional<Tick> SlotPool::youngest_ts(std::uint32_t list) const
{
    const std::uint32_t t = lists_[list].tail;
    if (t == kNpos)
        return std::nullopt;
    return slots_[t].header.timestamp;
}

void SlotPool::check_consistency() const
{
    const auto fail = [](const char* what) { throw std::logic_error(what); };

    std::vector<std::uint8_t> seen(slots_.size(), 0);

    std::uint32_t free_seen = 0;
    for (std::uint32_t cur = free_head_; cur != kNpos; cur = slots_[cur].next) {
        if (cur >= slots_.size() || seen[cur])
            fail("free list corrupt");
        seen[cur] = 1;
        if (!slots_[cur].vacant)
            fail("occupied slot on free list");
        ++free_seen;
        if (free_seen > slots_.size())
            fail("free list cycle");
    }
    if (free_seen != free_count_)
        fail("free count drift");

    std::uint32_t total_records = 0;
    for (std::uint32_t li = 0; li < lists_.size(); ++li) {
        const ListState& ls = lists_[li];
        std::uint32_t records = 0;
        std::uint32_t entries = 0;
        std::uint32_t expect_segment = 0;
        Seq entry_seq = 0;
        std::uint32_t entry_len = 0;
        Tick prev_ts = 0;
        std::uint32_t prev = kNpos;
        for (std::uint32_t cur = ls.head; cur != kNpos; cur = slots_[cur].next) {
            if (cur >= slots_.size() || seen[cur])
                fail("slot in two lists");
            seen[cur] = 1;
            const Slot& s = slots_[cur];
            if (s.vacant)
                fail("vacant slot on a queue");
            if (s.prev != prev)
                fail("broken back link");
            if (expect_segment == 0) {
                if (s.segment != 0)
                    fail("entry does not start at segment 0");
                entry_seq = s.header.seq;
                entry_len = s.header.record_count;
                if (entry_len == 0)
                    fail("zero-length entry");
                if (s.header.timestamp < prev_ts)
                    fail("timestamps decrease along queue");
                prev_ts = s.header.timestamp;
                ++entries;
            } else {
                if (s.segment != expect_segment || s.header.seq != entry_seq)
                    fail("entry not contiguous");
            }
            expect_segment = (s.segment + 1 == entry_len) ? 0 : expect_segment + 1;
            ++records;
            prev = cur;
            if (records > slots_.size())
                fail("queue cycle");
        }
        if (expect_segment != 0)
            fail("partial entry at young end");
        if (prev != ls.tail)
            fail("tail pointer drift");
        if (records != ls.records || entries != ls.entries)
            fail("list counter drift");
        total_records += records;
    }

    if (free_seen + total_records != slots_.size())
        fail("conservation violated");
    for (std::uint8_t v : seen)
        if (!v)
            fail("orphan slot");
}

} // namespace rtrlog::detail
