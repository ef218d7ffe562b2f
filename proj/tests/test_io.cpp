#include "rtrlog/scenario_io.hpp"

#include "rtrlog/ecetes.hpp"

#include <doctest.h>

using namespace rtrlog;

namespace {

const char* kScenario = R"({
  "seed": 42,
  "duration": 400,
  "crash_samples": 4,
  "pool": {"pool_records": 64, "record_payload_bytes": 16, "max_records_per_entry": 2},
  "tasks": [
    {
      "task_id": 0,
      "activation": {"type": "periodic", "period": 20, "offset": 0},
      "program_points": [{"offset": 1, "checkpoint_bytes": 16}],
      "inputs_per_job": [{"offset": 2, "payload_bytes": 8}]
    },
    {
      "task_id": 1,
      "activation": {"type": "sporadic", "min_interarrival": 7, "arrival_prob_permille": 300},
      "program_points": [{"offset": 0, "checkpoint_bytes": 24}]
    }
  ]
})";

} // namespace

TEST_CASE("parse_scenario: happy path with defaults")
{
    const ScenarioConfig sc = parse_scenario(kScenario);
    CHECK(sc.seed == 42);
    CHECK(sc.duration == 400);
    CHECK(sc.crash_samples == 4);
    CHECK(sc.pool.pool_records == 64);
    CHECK(sc.pool.queue_count == 3); // defaulted to 1 + total program points
    REQUIRE(sc.tasks.size() == 2);
    CHECK(std::holds_alternative<PeriodicActivation>(sc.tasks[0].activation));
    CHECK(std::holds_alternative<SporadicActivation>(sc.tasks[1].activation));
    CHECK(sc.scheduler == SchedulerKind::Ecetes);
    CHECK_FALSE(sc.ecetes_queues.has_value());
    CHECK(sc.lfifo.policy == LfifoPolicy::EqualSplit);
    CHECK_NOTHROW(sc.validate());
}

TEST_CASE("parse_scenario: missing duration names the field")
{
    std::string text = kScenario;
    const auto pos = text.find("\"duration\": 400,");
    text.erase(pos, std::string("\"duration\": 400,").size());
    try {
        parse_scenario(text);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.field() == "duration");
    }
}

TEST_CASE("parse_scenario: malformed JSON and bad fields")
{
    CHECK_THROWS_AS(parse_scenario("{"), ParseError);
    CHECK_THROWS_AS(parse_scenario(R"({"seed": -1})"), ParseError);

    std::string text = kScenario;
    text.replace(text.find("\"periodic\""), 10, "\"aperiodic\"");
    try {
        parse_scenario(text);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.field() == "tasks[0].activation.type");
    }
}

TEST_CASE("parse_scenario: scheduler selection and lfifo policies")
{
    std::string text = kScenario;
    text.insert(1, "\"scheduler\": \"gfifo\", \"lfifo\": {\"policy\": \"proportional\"},");
    const ScenarioConfig sc = parse_scenario(text);
    CHECK(sc.scheduler == SchedulerKind::Gfifo);
    CHECK(sc.lfifo.policy == LfifoPolicy::ProportionalToTraffic);

    std::string caps = kScenario;
    caps.insert(1, "\"lfifo\": {\"caps\": [8, 4, 4]},");
    const ScenarioConfig sc2 = parse_scenario(caps);
    CHECK(sc2.lfifo.policy == LfifoPolicy::ExplicitCaps);
    CHECK(sc2.lfifo.caps == std::vector<std::uint32_t>{8, 4, 4});

    std::string bad = kScenario;
    bad.insert(1, "\"scheduler\": \"foo\",");
    CHECK_THROWS_AS(parse_scenario(bad), ParseError);
}

TEST_CASE("parse_scenario: explicit ecetes queues")
{
    std::string text = kScenario;
    text.insert(1, R"("ecetes_queues": [
      {"queue_id": 0, "qp": 1000},
      {"queue_id": 1, "msl": 1, "qp": 500},
      {"queue_id": 2, "msl": 2, "mtl": 5, "qp": 500}
    ],)");
    const ScenarioConfig sc = parse_scenario(text);
    REQUIRE(sc.ecetes_queues.has_value());
    REQUIRE(sc.ecetes_queues->size() == 3);
    CHECK((*sc.ecetes_queues)[2].mtl == 5);
    CHECK((*sc.ecetes_queues)[2].msl == 2);
    CHECK((*sc.ecetes_queues)[0].qp == 1000);
}

TEST_CASE("snapshot JSON: scheduler output round-trips")
{
    const PoolConfig pool{8, 16, 2, 2};
    const auto s =
        create_scheduler(pool, {QueueConfig{0, 0, 0, 1000}, QueueConfig{1, 0, 1, 500}});
    EntryDescriptor e;
    e.target_queue = 0;
    e.kind = EntryKind::ContextSwitch;
    e.timestamp = 3;
    s->insert(e);
    e.target_queue = 1;
    e.kind = EntryKind::Checkpoint;
    e.timestamp = 5;
    e.payload_bytes = 20;
    e.task_id = 7;
    e.program_point = 1;
    e.job_index = 2;
    s->insert(e);

    const LogSnapshot snap = s->snapshot(9);
    const std::string text = snapshot_to_json(snap);
    const LogSnapshot back = parse_snapshot(text);
    CHECK(back == snap);
}

TEST_CASE("parse_snapshot: diagnostics carry the path")
{
    CHECK_THROWS_AS(parse_snapshot("nonsense"), ParseError);
    try {
        parse_snapshot(R"({"taken_at": 5, "queues": [{"id": 0, "entries":
            [{"seq": 1, "kind": "zzz", "ts": 2, "size": 0}]}]})");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.field() == "queues[0].entries[0].kind");
    }
    try {
        parse_snapshot(R"({"taken_at": 5, "queues": [{"id": 0, "entries":
            [{"seq": 1, "kind": "cs", "ts": 9, "size": 0},
             {"seq": 2, "kind": "cs", "ts": 2, "size": 0}]}]})");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.field() == "queues[0].entries[1].ts");
    }
}

TEST_CASE("parse_task_metas")
{
    const auto [metas, cf] = parse_task_metas(R"({
      "cf_queue": 0,
      "tasks": [{"task_id": 3, "program_points": [{"checkpoint_bytes": 16},
                                                  {"checkpoint_bytes": 40}]}]
    })");
    CHECK(cf == 0);
    REQUIRE(metas.size() == 1);
    CHECK(metas[0].task_id == 3);
    CHECK(metas[0].checkpoint_bytes == std::vector<std::uint32_t>{16, 40});

    CHECK_THROWS_AS(parse_task_metas(R"({"cf_queue": 0, "tasks": [{"task_id": 1,
        "program_points": []}]})"),
                    ParseError);
}

TEST_CASE("metrics JSON: exact top-level keys")
{
    MetricsReport report;
    report.scheduler = "ecetes";
    report.tasks.push_back(TaskMetrics{0, 1.0, 12.5, 9});
    report.drop_count = 3;
    report.max_steps = 50;
    report.utilization = 0.75;

    const std::string text = metrics_to_json(report);
    CHECK(text.find("\"scheduler\"") != std::string::npos);
    CHECK(text.find("\"tasks\"") != std::string::npos);
    CHECK(text.find("\"drop_count\"") != std::string::npos);
    CHECK(text.find("\"max_steps\"") != std::string::npos);
    CHECK(text.find("\"utilization\"") != std::string::npos);
    CHECK(text.find("generated_at") == std::string::npos);
    CHECK(metrics_to_json(report, true).find("generated_at") != std::string::npos);

    // Identical input, identical bytes.
    CHECK(metrics_to_json(report) == metrics_to_json(report));
}
