#ifndef RTRLOG_SLOT_POOL_HPP
#define RTRLOG_SLOT_POOL_HPP

#include "rtrlog/types.hpp"

#include <cstdint>
#include <vector>

namespace rtrlog::detail {

inline constexpr std::uint32_t kNpos = 0xFFFFFFFFu;

/// Entry metadata replicated into every slot the entry occupies.
struct EntryHeader {
    Seq seq = 0;
    EntryKind kind = EntryKind::ContextSwitch;
    Tick timestamp = 0;
    std::uint32_t payload_bytes = 0;
    std::uint32_t record_count = 0;
    QueueId origin = 0; // target queue named at insert time
    std::optional<TaskId> task_id;
    std::optional<std::uint32_t> program_point;
    std::optional<std::uint32_t> job_index;
};

struct Slot {
    std::uint32_t prev = kNpos;
    std::uint32_t next = kNpos;
    std::uint32_t segment = 0; // position within the entry, [0, record_count)
    bool vacant = true;
    EntryHeader header;
};

/// Fixed array of record slots threaded into one free list plus a number of
/// doubly linked FIFO lists (old end = head, young end = tail). All list
/// surgery is O(1) per slot.
class SlotPool {
public:
    SlotPool(std::uint32_t pool_records, std::uint32_t list_count);

    std::uint32_t pool_records() const { return static_cast<std::uint32_t>(slots_.size()); }
    std::uint32_t list_count() const { return static_cast<std::uint32_t>(lists_.size()); }
    std::uint32_t free_count() const { return free_count_; }

    std::uint32_t records(std::uint32_t list) const { return lists_[list].records; }
    std::uint32_t entries(std::uint32_t list) const { return lists_[list].entries; }
    std::uint32_t head(std::uint32_t list) const { return lists_[list].head; }
    std::uint32_t tail(std::uint32_t list) const { return lists_[list].tail; }

    const Slot& at(std::uint32_t index) const { return slots_[index]; }

    /// Pops one free slot, stamps it with `header`/`segment` and links it at
    /// the young end of `list`. Requires free_count() >= 1.
    void append_record(std::uint32_t list, const EntryHeader& header, std::uint32_t segment);

    /// Unlinks the slot at the old end of `list` and returns a copy of its
    /// header. The slot joins the free list.
    EntryHeader free_head_record(std::uint32_t list);

    /// Entry summaries of `list` in old-to-young order.
    std::vector<EntrySummary> list_summaries(std::uint32_t list) const;

    std::optional<Tick> oldest_ts(std::uint32_t list) const;
    std::optional<Tick> youngest_ts(std::uint32_t list) const;

    /// Throws std::logic_error if any structural invariant is broken: slot
    /// partition, entry contiguity and segment numbering, counter agreement,
    /// non-decreasing timestamps along each list.
    void check_consistency() const;

private:
    struct ListState {
        std::uint32_t head = kNpos;
        std::uint32_t tail = kNpos;
        std::uint32_t records = 0;
        std::uint32_t entries = 0;
    };

    std::vector<Slot> slots_;
    std::vector<ListState> lists_;
    std::uint32_t free_head_ = kNpos;
    std::uint32_t free_count_ = 0;
};

} // namespace rtrlog::detail

#endif // RTRLOG_SLOT_POOL_HPP
