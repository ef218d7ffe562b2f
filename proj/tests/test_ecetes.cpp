#include "rtrlog/ecetes.hpp"

#include "fuzz_util.hpp"
#include "reference_schedulers.hpp"

#include <doctest.h>

#include <map>
#include <set>

using namespace rtrlog;
using rtrlog::testing::pick;

namespace {

EntryDescriptor entry(QueueId q, Tick ts, std::uint32_t payload = 1,
                      EntryKind kind = EntryKind::Input)
{
    EntryDescriptor e;
    e.target_queue = q;
    e.kind = kind;
    e.timestamp = ts;
    e.payload_bytes = payload;
    return e;
}

PoolConfig pool4()
{
    return PoolConfig{4, 16, 2, 2};
}

std::vector<QueueConfig> queues2()
{
    return {QueueConfig{0, 0, 0, 0}, QueueConfig{1, 0, 1, 5}};
}

} // namespace

TEST_CASE("create_scheduler: empty initial state")
{
    const auto s = create_scheduler(pool4(), queues2());
    CHECK(s->free_records() == 4);
    const LogSnapshot snap = s->snapshot(0);
    REQUIRE(snap.queues.size() == 2);
    CHECK(snap.queues[0].entries.empty());
    CHECK(snap.queues[1].entries.empty());
    CHECK(snap.drop_count == 0);
}

TEST_CASE("create_scheduler: config rejection")
{
    SUBCASE("queue arity mismatch")
    {
        auto queues = queues2();
        queues.push_back(QueueConfig{2, 0, 0, 0});
        CHECK_THROWS_AS(create_scheduler(pool4(), queues), ConfigError);
    }
    SUBCASE("L_max exceeds pool")
    {
        CHECK_THROWS_AS(create_scheduler(PoolConfig{2, 16, 3, 1}, {QueueConfig{0, 0, 0, 0}}),
                        ConfigError);
    }
    SUBCASE("duplicate queue id")
    {
        CHECK_THROWS_AS(
            create_scheduler(pool4(), {QueueConfig{0, 0, 0, 0}, QueueConfig{0, 0, 0, 0}}),
            ConfigError);
    }
    SUBCASE("msl beyond pool")
    {
        CHECK_THROWS_AS(
            create_scheduler(pool4(), {QueueConfig{0, 0, 5, 0}, QueueConfig{1, 0, 0, 0}}),
            ConfigError);
    }
    SUBCASE("zero-size pool")
    {
        CHECK_THROWS_AS(create_scheduler(PoolConfig{0, 16, 1, 1}, {QueueConfig{0, 0, 0, 0}}),
                        ConfigError);
    }
}

TEST_CASE("insert: free capacity, no eviction")
{
    const auto s = create_scheduler(pool4(), queues2());
    const InsertOutcome out = s->insert(entry(0, 0, 16));
    CHECK(out.status == InsertStatus::Accepted);
    CHECK(out.evicted.empty());
    CHECK(s->queue_stats(0).records == 1);
    CHECK(s->free_records() == 3);
}

TEST_CASE("insert: payload over L_max is rejected without state change")
{
    const auto s = create_scheduler(pool4(), queues2());
    const InsertOutcome out = s->insert(entry(0, 0, 40)); // ceil(40/16) = 3 > 2
    CHECK(out.status == InsertStatus::RejectedTooLarge);
    CHECK(out.evicted.empty());
    CHECK(s->free_records() == 4);
    CHECK(s->snapshot(1).drop_count == 0);
}

TEST_CASE("insert: the only possible victim is chosen")
{
    // Pool of 2 slots, both held by queue 0; queue 1 empty, msl 0 everywhere.
    const PoolConfig pool{2, 16, 1, 2};
    const auto s =
        create_scheduler(pool, {QueueConfig{0, 0, 0, 0}, QueueConfig{1, 0, 0, 0}});
    CHECK(s->insert(entry(0, 0)).status == InsertStatus::Accepted);
    CHECK(s->insert(entry(0, 1)).status == InsertStatus::Accepted);

    const InsertOutcome out = s->insert(entry(1, 100));
    CHECK(out.status == InsertStatus::Accepted);
    REQUIRE(out.evicted.size() == 1);
    CHECK(out.evicted[0] == Eviction{0, 0}); // oldest seq in queue 0
    CHECK(s->queue_stats(0).records == 1);
    CHECK(s->queue_stats(1).records == 1);
}

TEST_CASE("insert: unknown target queue")
{
    const auto s = create_scheduler(pool4(), queues2());
    CHECK_THROWS_AS(s->insert(entry(7, 0)), UnknownQueueError);
}

TEST_CASE("insert: zero-byte payload still occupies one record")
{
    const auto s = create_scheduler(pool4(), queues2());
    CHECK(s->insert(entry(0, 0, 0)).status == InsertStatus::Accepted);
    CHECK(s->queue_stats(0).records == 1);
}

TEST_CASE("insert: no eligible victim drops the new entry and keeps old data")
{
    // Single queue whose msl pins every record: nothing may ever be evicted.
    const PoolConfig pool{2, 16, 1, 1};
    const auto s = create_scheduler(pool, {QueueConfig{0, 0, 2, 0}});
    CHECK(s->insert(entry(0, 0)).status == InsertStatus::Accepted);
    CHECK(s->insert(entry(0, 1)).status == InsertStatus::Accepted);

    const InsertOutcome out = s->insert(entry(0, 50));
    CHECK(out.status == InsertStatus::RejectedNoEligibleVictim);
    CHECK(out.evicted.empty());
    CHECK(s->free_records() == 0);
    const LogSnapshot snap = s->snapshot(50);
    CHECK(snap.drop_count == 1);
    REQUIRE(snap.queues[0].entries.size() == 2);
    CHECK(snap.queues[0].entries[0].seq == 0); // old data retained
}

TEST_CASE("select_victim_queue: lower priority suffers first")
{
    const PoolConfig pool{4, 16, 1, 2};
    const auto s =
        create_scheduler(pool, {QueueConfig{0, 0, 0, 1}, QueueConfig{1, 0, 0, 7}});
    for (Tick t = 0; t < 2; ++t) {
        s->insert(entry(0, t));
        s->insert(entry(1, t));
    }
    CHECK(s->free_records() == 0);
    CHECK(s->select_victim_queue(1, 100) == QueueId{0});
}

TEST_CASE("select_victim_queue: msl blocks a queue")
{
    const PoolConfig pool{4, 16, 1, 2};
    const auto s =
        create_scheduler(pool, {QueueConfig{0, 0, 2, 0}, QueueConfig{1, 0, 0, 0}});
    for (Tick t = 0; t < 2; ++t) {
        s->insert(entry(0, t));
        s->insert(entry(1, t));
    }
    // Queue 0 holds 2 records but evicting one would leave 1 < msl 2.
    CHECK(s->select_victim_queue(1, 100) == QueueId{1});
}

TEST_CASE("select_victim_queue: equal priority, older survivor boundary wins")
{
    const PoolConfig pool{4, 16, 1, 2};
    const auto s =
        create_scheduler(pool, {QueueConfig{0, 0, 0, 3}, QueueConfig{1, 0, 0, 3}});
    // Queue 0: entries at t=10 and t=60 -> survivor boundary age 110-60 = 50.
    // Queue 1: entries at t=5 and t=20 -> survivor boundary age 110-20 = 90.
    s->insert(entry(1, 5));
    s->insert(entry(0, 10));
    s->insert(entry(1, 20));
    s->insert(entry(0, 60));
    CHECK(s->select_victim_queue(1, 110) == QueueId{1});
}

TEST_CASE("select_victim_queue: emptying a queue counts as the oldest boundary")
{
    const PoolConfig pool{4, 16, 2, 2};
    const auto s =
        create_scheduler(pool, {QueueConfig{0, 0, 0, 0}, QueueConfig{1, 0, 0, 0}});
    s->insert(entry(0, 0));            // queue 0: one record, would be emptied
    s->insert(entry(1, 0));
    s->insert(entry(1, 1));
    CHECK(s->select_victim_queue(1, 100) == QueueId{0});
}

TEST_CASE("select_victim_queue: mtl blocks every queue")
{
    const PoolConfig pool{4, 16, 1, 2};
    const auto s =
        create_scheduler(pool, {QueueConfig{0, 1000, 0, 0}, QueueConfig{1, 1000, 0, 0}});
    for (Tick t = 0; t < 2; ++t) {
        s->insert(entry(0, 100 + t));
        s->insert(entry(1, 100 + t));
    }
    CHECK_FALSE(s->select_victim_queue(1, 500).has_value()); // all younger than 1000 ticks
}

TEST_CASE("snapshot: FIFO order and drop counting")
{
    const auto s = create_scheduler(pool4(), queues2());
    SUBCASE("fresh scheduler")
    {
        const LogSnapshot snap = s->snapshot(0);
        CHECK(snap.queues[0].entries.empty());
        CHECK(snap.queues[1].entries.empty());
        CHECK(snap.drop_count == 0);
    }
    SUBCASE("three accepted inserts keep insertion order")
    {
        s->insert(entry(0, 1));
        s->insert(entry(0, 2));
        s->insert(entry(0, 3));
        const LogSnapshot snap = s->snapshot(3);
        REQUIRE(snap.queues[0].entries.size() == 3);
        CHECK(snap.queues[0].entries[0].seq == 0);
        CHECK(snap.queues[0].entries[1].seq == 1);
        CHECK(snap.queues[0].entries[2].seq == 2);
        CHECK(snap.queues[0].entries[0].timestamp == 1);
        CHECK(snap.queues[0].entries[2].timestamp == 3);
    }
}

TEST_CASE("queue_stats")
{
    const PoolConfig pool{8, 16, 2, 1};
    const auto s = create_scheduler(pool, {QueueConfig{0, 0, 0, 0}});
    SUBCASE("empty queue")
    {
        const QueueStats st = s->queue_stats(0);
        CHECK(st.records == 0);
        CHECK(st.entries == 0);
        CHECK_FALSE(st.oldest_ts.has_value());
        CHECK_FALSE(st.youngest_ts.has_value());
    }
    SUBCASE("one two-record entry")
    {
        s->insert(entry(0, 10, 32)); // ceil(32/16) = 2 records
        const QueueStats st = s->queue_stats(0);
        CHECK(st.records == 2);
        CHECK(st.entries == 1);
        CHECK(st.oldest_ts == Tick{10});
        CHECK(st.youngest_ts == Tick{10});
    }
    SUBCASE("two entries")
    {
        s->insert(entry(0, 10));
        s->insert(entry(0, 20));
        const QueueStats st = s->queue_stats(0);
        CHECK(st.oldest_ts == Tick{10});
        CHECK(st.youngest_ts == Tick{20});
    }
    SUBCASE("unknown queue") { CHECK_THROWS_AS(s->queue_stats(3), UnknownQueueError); }
}

TEST_CASE("whole entries are evicted; surplus slots return to the free list")
{
    // 2-record entries in the victim; needing 1 record evicts a whole entry.
    const PoolConfig pool{4, 16, 2, 2};
    const auto s =
        create_scheduler(pool, {QueueConfig{0, 0, 0, 0}, QueueConfig{1, 0, 0, 0}});
    s->insert(entry(0, 0, 32));
    s->insert(entry(0, 1, 32));
    const InsertOutcome out = s->insert(entry(1, 10, 16)); // needs 1
    CHECK(out.status == InsertStatus::Accepted);
    REQUIRE(out.evicted.size() == 1);
    CHECK(out.evicted[0].queue == 0);
    CHECK(s->queue_stats(0).records == 2);
    CHECK(s->queue_stats(1).records == 1);
    CHECK(s->free_records() == 1); // surplus record freed
    s->check_consistency();
}

TEST_CASE("steps are identical for every insert under one configuration")
{
    testing::SplitMix64 rng(99);
    const auto sc = testing::random_scheduler_scenario(rng, 2000);
    const auto s = create_scheduler(sc.pool, sc.queues);
    std::optional<std::uint64_t> steps;
    for (const EntryDescriptor& e : sc.inserts) {
        const InsertOutcome out = s->insert(e);
        if (!steps)
            steps = out.steps;
        CHECK(out.steps == *steps);
    }
    // The padded phases are visible in the total: admission + outcome, one
    // examination per queue plus a 2*L_max window each, a 2*L_max eviction
    // window and an L_max link window.
    const std::uint64_t q = sc.pool.queue_count;
    const std::uint64_t lmax = sc.pool.max_records_per_entry;
    CHECK(*steps == 2 + q * (1 + 2 * lmax) + 3 * lmax);
}

TEST_CASE("determinism: identical call sequences, identical outcome streams")
{
    testing::SplitMix64 rng(7);
    const auto sc = testing::random_scheduler_scenario(rng, 3000);
    const auto a = create_scheduler(sc.pool, sc.queues);
    const auto b = create_scheduler(sc.pool, sc.queues);
    for (const EntryDescriptor& e : sc.inserts) {
        const InsertOutcome oa = a->insert(e);
        const InsertOutcome ob = b->insert(e);
        CHECK(oa.status == ob.status);
        CHECK(oa.evicted == ob.evicted);
        CHECK(oa.steps == ob.steps);
    }
    CHECK(a->snapshot(1 << 20) == b->snapshot(1 << 20));
}

TEST_CASE("randomized: ECETES matches the list-of-lists oracle")
{
    testing::SplitMix64 rng(2024);
    for (int round = 0; round < 20; ++round) {
        const auto sc = testing::random_scheduler_scenario(rng, 500);
        const auto impl = create_scheduler(sc.pool, sc.queues);
        testing::RefEcetes oracle(sc.pool, sc.queues);
        Tick last_ts = 0;
        for (const EntryDescriptor& e : sc.inserts) {
            const InsertOutcome got = impl->insert(e);
            const testing::RefOutcome want = oracle.insert(e);
            REQUIRE(got.status == want.status);
            REQUIRE(got.evicted == want.evicted);
            last_ts = e.timestamp;
        }
        REQUIRE(impl->snapshot(last_ts) == oracle.snapshot(last_ts));
        impl->check_consistency();
    }
}

TEST_CASE("invariants under random load: conservation, suffix, msl, mtl")
{
    testing::SplitMix64 rng(31337);
    const auto sc = testing::random_scheduler_scenario(rng, 4000);
    const auto s = create_scheduler(sc.pool, sc.queues);

    std::vector<std::vector<Seq>> accepted(sc.pool.queue_count);
    std::map<Seq, Tick> seq_ts;
    Seq next_seq = 0;

    for (const EntryDescriptor& e : sc.inserts) {
        const InsertOutcome out = s->insert(e);

        // MTL: every evicted entry was old enough at eviction time.
        for (const Eviction& ev : out.evicted) {
            const QueueConfig& qc = s->queue_config(ev.queue);
            CHECK(e.timestamp - seq_ts.at(ev.seq) >= qc.mtl);
        }
        // MSL: a queue that lost records still holds its floor.
        std::set<QueueId> hit;
        for (const Eviction& ev : out.evicted)
            hit.insert(ev.queue);
        for (QueueId q : hit)
            CHECK(s->queue_stats(q).records >= s->queue_config(q).msl);

        if (out.status == InsertStatus::Accepted) {
            accepted[e.target_queue].push_back(next_seq);
            seq_ts[next_seq] = e.timestamp;
            ++next_seq;
        }

        // Conservation.
        std::uint32_t held = 0;
        for (QueueId q = 0; q < sc.pool.queue_count; ++q)
            held += s->queue_stats(q).records;
        CHECK(held + s->free_records() == sc.pool.pool_records);
    }

    // FIFO-suffix: queue contents are a suffix of everything accepted into it.
    const LogSnapshot snap = s->snapshot(1 << 20);
    for (QueueId q = 0; q < sc.pool.queue_count; ++q) {
        const auto& live = snap.queues[q].entries;
        const auto& all = accepted[q];
        REQUIRE(live.size() <= all.size());
        const std::size_t offset = all.size() - live.size();
        for (std::size_t i = 0; i < live.size(); ++i)
            CHECK(live[i].seq == all[offset + i]);
    }
    s->check_consistency();
}
