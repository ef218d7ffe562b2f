// rtrlog: generate task-set traces, run them through the eviction
// schedulers, compare schedulers side by side, and analyze snapshots for
// replay starting-point availability.
//
// Exit codes: 0 ok, 2 malformed input, 3 I/O failure, 4 unknown scheduler,
// 5 configuration rejected by the scheduler.

#include "rtrlog/baselines.hpp"
#include "rtrlog/ecetes.hpp"
#include "rtrlog/harness.hpp"
#include "rtrlog/scenario_io.hpp"
#include "rtrlog/trace.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitIo = 3;
constexpr int kExitUnknownScheduler = 4;
constexpr int kExitConfigRejected = 5;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    if (in.bad())
        throw IoError("read failure on '" + path + "'");
    return os.str();
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write '" + path + "'");
    out << content;
    out.flush();
    if (!out)
        throw IoError("write failure on '" + path + "'");
}

template <typename F> int guarded(F&& body)
{
    try {
        return body();
    } catch (const rtrlog::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const rtrlog::SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const rtrlog::RoutingError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const rtrlog::ConfigError& e) {
        std::cerr << "error: configuration rejected: " << e.what() << "\n";
        return kExitConfigRejected;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_gen_trace(const std::string& scenario_path, const std::string& out_path)
{
    return guarded([&] {
        const rtrlog::ScenarioConfig scenario = rtrlog::parse_scenario(read_file(scenario_path));
        scenario.validate();
        const std::vector<rtrlog::TraceEvent> trace =
            rtrlog::generate_trace(scenario.tasks, scenario.duration, scenario.seed);
        std::ostringstream os;
        rtrlog::write_trace(os, trace);
        write_file(out_path, os.str());
        return kExitOk;
    });
}

int cmd_run(const std::string& scenario_path, const std::string& out_path,
            const std::string& scheduler_name, const std::string& snapshot_out, bool stamp)
{
    return guarded([&] {
        const rtrlog::ScenarioConfig scenario = rtrlog::parse_scenario(read_file(scenario_path));
        scenario.validate();

        rtrlog::SchedulerKind kind = scenario.scheduler;
        if (!scheduler_name.empty()) {
            const auto parsed = rtrlog::scheduler_kind_from(scheduler_name);
            if (!parsed) {
                std::cerr << "error: unknown scheduler '" << scheduler_name << "'\n";
                return kExitUnknownScheduler;
            }
            kind = *parsed;
        }

        const std::vector<rtrlog::TraceEvent> trace =
            rtrlog::generate_trace(scenario.tasks, scenario.duration, scenario.seed);
        const rtrlog::MetricsReport report =
            rtrlog::sample_crash_metrics(trace, scenario, kind);
        write_file(out_path, rtrlog::metrics_to_json(report, stamp));

        if (!snapshot_out.empty()) {
            const rtrlog::RecommendedConfig layout = rtrlog::scenario_layout(scenario);
            const auto sched = rtrlog::build_scheduler(kind, scenario, trace, layout.routing);
            rtrlog::drive(trace, *sched, layout.routing);
            write_file(snapshot_out,
                       rtrlog::snapshot_to_json(sched->snapshot(scenario.duration)));
        }
        return kExitOk;
    });
}

int cmd_compare(const std::string& scenario_path, const std::string& out_path, bool stamp)
{
    return guarded([&] {
        const rtrlog::ScenarioConfig scenario = rtrlog::parse_scenario(read_file(scenario_path));
        scenario.validate();
        const rtrlog::CompareReport report = rtrlog::run_comparison(scenario);
        write_file(out_path, rtrlog::compare_to_json(report, stamp));
        std::cout << rtrlog::compare_table_text(report);
        return kExitOk;
    });
}

int cmd_analyze(const std::string& snapshot_path, const std::string& tasks_path,
                const std::string& out_path)
{
    return guarded([&] {
        const rtrlog::LogSnapshot snap = rtrlog::parse_snapshot(read_file(snapshot_path));
        const auto [metas, cf_queue] = rtrlog::parse_task_metas(read_file(tasks_path));
        rtrlog::AvailabilityReport report;
        try {
            report = rtrlog::usable_starting_points(snap, metas, cf_queue);
        } catch (const rtrlog::MissingControlFlowQueueError& e) {
            throw rtrlog::ParseError("cf_queue", e.what());
        }
        std::cout << rtrlog::availability_text(report, snap.taken_at);
        if (!out_path.empty())
            write_file(out_path, rtrlog::availability_to_json(report, snap.taken_at));
        return kExitOk;
    });
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"bounded-memory replay-log scheduler harness"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_path;
    std::string scheduler_name;
    std::string snapshot_path;
    std::string tasks_path;
    std::string snapshot_out;
    bool stamp = false;

    CLI::App* gen = app.add_subcommand("gen-trace", "write the scenario's event trace");
    gen->add_option("--scenario", scenario_path, "scenario file")->required();
    gen->add_option("--out", out_path, "trace output path")->required();

    CLI::App* run = app.add_subcommand("run", "run one scheduler and write its metrics report");
    run->add_option("--scenario", scenario_path, "scenario file")->required();
    run->add_option("--out", out_path, "report output path")->required();
    run->add_option("--scheduler", scheduler_name, "ecetes|gfifo|lfifo");
    run->add_option("--snapshot-out", snapshot_out, "also write the end-of-run snapshot");
    run->add_flag("--stamp", stamp, "add a wall-clock timestamp to the report");

    CLI::App* cmp = app.add_subcommand("compare", "run ecetes, gfifo and lfifo on one trace");
    cmp->add_option("--scenario", scenario_path, "scenario file")->required();
    cmp->add_option("--out", out_path, "combined report output path")->required();
    cmp->add_flag("--stamp", stamp, "add a wall-clock timestamp to the report");

    CLI::App* ana = app.add_subcommand("analyze", "report usable replay starting points");
    ana->add_option("--snapshot", snapshot_path, "snapshot file")->required();
    ana->add_option("--tasks", tasks_path, "task metadata file")->required();
    ana->add_option("--out", out_path, "also write the report as JSON");

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed())
        return cmd_gen_trace(scenario_path, out_path);
    if (run->parsed())
        return cmd_run(scenario_path, out_path, scheduler_name, snapshot_out, stamp);
    if (cmp->parsed())
        return cmd_compare(scenario_path, out_path, stamp);
    if (ana->parsed())
        return cmd_analyze(snapshot_path, tasks_path, out_path);
    return 1;
}
