#include "rtrlog/scenario_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <ctime>
#include <sstream>

namespace rtrlog {

namespace {

using nlohmann::json;

// Field access with path-carrying diagnostics.

std::string join(const std::string& path, const std::string& key)
{
    return path.empty() ? key : path + "." + key;
}

const json& require(const json& obj, const std::string& path, const std::string& key)
{
    if (!obj.is_object())
        throw ParseError(path.empty() ? "document" : path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end())
        throw ParseError(join(path, key), "missing required field");
    return *it;
}

std::uint64_t get_u64(const json& obj, const std::string& path, const std::string& key)
{
    const json& v = require(obj, path, key);
    if (!v.is_number_unsigned())
        throw ParseError(join(path, key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

std::uint64_t get_u64_or(const json& obj, const std::string& path, const std::string& key,
                         std::uint64_t fallback)
{
    if (!obj.is_object() || obj.find(key) == obj.end())
        return fallback;
    return get_u64(obj, path, key);
}

std::int64_t get_i64(const json& obj, const std::string& path, const std::string& key)
{
    const json& v = require(obj, path, key);
    if (!v.is_number_integer())
        throw ParseError(join(path, key), "expected an integer");
    return v.get<std::int64_t>();
}

std::string get_string(const json& obj, const std::string& path, const std::string& key)
{
    const json& v = require(obj, path, key);
    if (!v.is_string())
        throw ParseError(join(path, key), "expected a string");
    return v.get<std::string>();
}

const json& get_array(const json& obj, const std::string& path, const std::string& key)
{
    const json& v = require(obj, path, key);
    if (!v.is_array())
        throw ParseError(join(path, key), "expected an array");
    return v;
}

json parse_document(const std::string& text)
{
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw ParseError("document", "not valid JSON");
    return doc;
}

PoolConfig parse_pool(const json& j, const std::string& path)
{
    PoolConfig pool;
    pool.pool_records = static_cast<std::uint32_t>(get_u64(j, path, "pool_records"));
    pool.record_payload_bytes =
        static_cast<std::uint32_t>(get_u64(j, path, "record_payload_bytes"));
    pool.max_records_per_entry =
        static_cast<std::uint32_t>(get_u64(j, path, "max_records_per_entry"));
    pool.queue_count = static_cast<std::uint32_t>(get_u64_or(j, path, "queue_count", 0));
    return pool;
}

TaskSpec parse_task(const json& j, const std::string& path)
{
    TaskSpec t;
    t.task_id = static_cast<TaskId>(get_u64(j, path, "task_id"));

    const json& act = require(j, path, "activation");
    const std::string act_path = join(path, "activation");
    const std::string type = get_string(act, act_path, "type");
    if (type == "periodic") {
        PeriodicActivation p;
        p.period = get_u64(act, act_path, "period");
        p.offset = get_u64_or(act, act_path, "offset", 0);
        t.activation = p;
    } else if (type == "sporadic") {
        SporadicActivation s;
        s.min_interarrival = get_u64(act, act_path, "min_interarrival");
        s.arrival_prob_permille =
            static_cast<std::uint32_t>(get_u64(act, act_path, "arrival_prob_permille"));
        t.activation = s;
    } else {
        throw ParseError(join(act_path, "type"), "must be 'periodic' or 'sporadic'");
    }

    if (j.contains("program_points")) {
        const json& pps = get_array(j, path, "program_points");
        for (std::size_t i = 0; i < pps.size(); ++i) {
            const std::string pp_path = join(path, "program_points[" + std::to_string(i) + "]");
            ProgramPointSpec pp;
            pp.offset = get_u64(pps[i], pp_path, "offset");
            pp.checkpoint_bytes =
                static_cast<std::uint32_t>(get_u64(pps[i], pp_path, "checkpoint_bytes"));
            t.program_points.push_back(pp);
        }
    }
    if (j.contains("inputs_per_job")) {
        const json& ins = get_array(j, path, "inputs_per_job");
        for (std::size_t i = 0; i < ins.size(); ++i) {
            const std::string in_path = join(path, "inputs_per_job[" + std::to_string(i) + "]");
            InputSpec in;
            in.offset = get_u64(ins[i], in_path, "offset");
            in.payload_bytes =
                static_cast<std::uint32_t>(get_u64(ins[i], in_path, "payload_bytes"));
            // Shorthand for bursts: repeat the input `repeat` times, `stride`
            // ticks apart.
            const std::uint64_t repeat = get_u64_or(ins[i], in_path, "repeat", 1);
            const std::uint64_t stride = get_u64_or(ins[i], in_path, "stride", 1);
            if (repeat < 1)
                throw ParseError(join(in_path, "repeat"), "must be >= 1");
            for (std::uint64_t r = 0; r < repeat; ++r)
                t.inputs_per_job.push_back(InputSpec{in.offset + r * stride, in.payload_bytes});
        }
    }
    return t;
}

QueueConfig parse_queue_config(const json& j, const std::string& path)
{
    QueueConfig qc;
    qc.queue_id = static_cast<QueueId>(get_u64(j, path, "queue_id"));
    qc.mtl = get_u64_or(j, path, "mtl", 0);
    qc.msl = static_cast<std::uint32_t>(get_u64_or(j, path, "msl", 0));
    if (j.contains("qp"))
        qc.qp = static_cast<std::int32_t>(get_i64(j, path, "qp"));
    return qc;
}

std::string rfc3339_now()
{
    char buf[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json task_metrics_json(const TaskMetrics& tm)
{
    return json{{"task_id", tm.task_id},
                {"availability_rate", tm.availability_rate},
                {"mean_replay_window", tm.mean_replay_window},
                {"usable_instances", tm.usable_instances}};
}

json metrics_json(const MetricsReport& report)
{
    json tasks = json::array();
    for (const TaskMetrics& tm : report.tasks)
        tasks.push_back(task_metrics_json(tm));
    return json{{"scheduler", report.scheduler},
                {"tasks", std::move(tasks)},
                {"drop_count", report.drop_count},
                {"max_steps", report.max_steps},
                {"utilization", report.utilization}};
}

json summary_json(const EntrySummary& e)
{
    json out{{"seq", e.seq},
             {"kind", std::string(kind_token(e.kind))},
             {"ts", e.timestamp},
             {"size", e.payload_bytes}};
    if (e.task_id)
        out["task"] = *e.task_id;
    if (e.program_point)
        out["pp"] = *e.program_point;
    if (e.job_index)
        out["job"] = *e.job_index;
    return out;
}

} // namespace

ScenarioConfig parse_scenario(const std::string& text)
{
    const json doc = parse_document(text);
    ScenarioConfig sc;
    sc.seed = get_u64(doc, "", "seed");
    sc.duration = get_u64(doc, "", "duration");
    sc.crash_samples = static_cast<std::uint32_t>(get_u64(doc, "", "crash_samples"));
    sc.pool = parse_pool(require(doc, "", "pool"), "pool");

    const json& tasks = get_array(doc, "", "tasks");
    if (tasks.empty())
        throw ParseError("tasks", "must not be empty");
    std::uint64_t total_points = 0;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        sc.tasks.push_back(parse_task(tasks[i], "tasks[" + std::to_string(i) + "]"));
        total_points += sc.tasks.back().program_points.size();
    }
    if (sc.pool.queue_count == 0)
        sc.pool.queue_count = static_cast<std::uint32_t>(1 + total_points);

    if (doc.contains("scheduler")) {
        const std::string name = doc["scheduler"].is_string()
            ? doc["scheduler"].get<std::string>()
            : throw ParseError("scheduler", "expected a string");
        const auto kind = scheduler_kind_from(name);
        if (!kind)
            throw ParseError("scheduler", "unknown scheduler '" + name + "'");
        sc.scheduler = *kind;
    }

    if (doc.contains("ecetes_queues")) {
        const json& queues = get_array(doc, "", "ecetes_queues");
        std::vector<QueueConfig> qcs;
        for (std::size_t i = 0; i < queues.size(); ++i)
            qcs.push_back(
                parse_queue_config(queues[i], "ecetes_queues[" + std::to_string(i) + "]"));
        sc.ecetes_queues = std::move(qcs);
    }

    if (doc.contains("lfifo")) {
        const json& lf = doc["lfifo"];
        if (!lf.is_object())
            throw ParseError("lfifo", "expected an object");
        if (lf.contains("caps")) {
            const json& caps = get_array(lf, "lfifo", "caps");
            sc.lfifo.policy = LfifoPolicy::ExplicitCaps;
            for (std::size_t i = 0; i < caps.size(); ++i) {
                if (!caps[i].is_number_unsigned())
                    throw ParseError("lfifo.caps[" + std::to_string(i) + "]",
                                     "expected a non-negative integer");
                sc.lfifo.caps.push_back(caps[i].get<std::uint32_t>());
            }
        } else {
            const std::string policy = get_string(lf, "lfifo", "policy");
            if (policy == "equal")
                sc.lfifo.policy = LfifoPolicy::EqualSplit;
            else if (policy == "proportional")
                sc.lfifo.policy = LfifoPolicy::ProportionalToTraffic;
            else
                throw ParseError("lfifo.policy", "must be 'equal' or 'proportional'");
        }
    }

    return sc;
}

LogSnapshot parse_snapshot(const std::string& text)
{
    const json doc = parse_document(text);
    LogSnapshot snap;
    snap.taken_at = get_u64(doc, "", "taken_at");
    snap.drop_count = get_u64_or(doc, "", "drop_count", 0);
    const json& queues = get_array(doc, "", "queues");
    for (std::size_t qi = 0; qi < queues.size(); ++qi) {
        const std::string q_path = "queues[" + std::to_string(qi) + "]";
        QueueSnapshot qs;
        qs.id = static_cast<QueueId>(get_u64(queues[qi], q_path, "id"));
        const json& entries = get_array(queues[qi], q_path, "entries");
        for (std::size_t ei = 0; ei < entries.size(); ++ei) {
            const std::string e_path = q_path + ".entries[" + std::to_string(ei) + "]";
            const json& je = entries[ei];
            EntrySummary e;
            e.seq = get_u64(je, e_path, "seq");
            const std::string kind = get_string(je, e_path, "kind");
            const auto k = kind_from_token(kind);
            if (!k)
                throw ParseError(join(e_path, "kind"), "unknown kind '" + kind + "'");
            e.kind = *k;
            e.timestamp = get_u64(je, e_path, "ts");
            e.payload_bytes = static_cast<std::uint32_t>(get_u64(je, e_path, "size"));
            if (je.contains("task"))
                e.task_id = static_cast<TaskId>(get_u64(je, e_path, "task"));
            if (je.contains("pp"))
                e.program_point = static_cast<std::uint32_t>(get_u64(je, e_path, "pp"));
            if (je.contains("job"))
                e.job_index = static_cast<std::uint32_t>(get_u64(je, e_path, "job"));
            if (!qs.entries.empty() && e.timestamp < qs.entries.back().timestamp)
                throw ParseError(join(e_path, "ts"), "timestamps must be non-decreasing");
            qs.entries.push_back(e);
        }
        snap.queues.push_back(std::move(qs));
    }
    return snap;
}

std::string snapshot_to_json(const LogSnapshot& snap)
{
    json queues = json::array();
    for (const QueueSnapshot& q : snap.queues) {
        json entries = json::array();
        for (const EntrySummary& e : q.entries)
            entries.push_back(summary_json(e));
        queues.push_back(json{{"id", q.id}, {"entries", std::move(entries)}});
    }
    const json doc{{"taken_at", snap.taken_at},
                   {"drop_count", snap.drop_count},
                   {"queues", std::move(queues)}};
    return doc.dump(2) + "\n";
}

std::pair<std::vector<TaskMeta>, QueueId> parse_task_metas(const std::string& text)
{
    const json doc = parse_document(text);
    const QueueId cf = static_cast<QueueId>(get_u64(doc, "", "cf_queue"));
    std::vector<TaskMeta> metas;
    const json& tasks = get_array(doc, "", "tasks");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const std::string path = "tasks[" + std::to_string(i) + "]";
        TaskMeta m;
        m.task_id = static_cast<TaskId>(get_u64(tasks[i], path, "task_id"));
        const json& pps = get_array(tasks[i], path, "program_points");
        if (pps.empty())
            throw ParseError(join(path, "program_points"), "must not be empty");
        for (std::size_t k = 0; k < pps.size(); ++k) {
            const std::string pp_path = join(path, "program_points[" + std::to_string(k) + "]");
            m.checkpoint_bytes.push_back(
                static_cast<std::uint32_t>(get_u64(pps[k], pp_path, "checkpoint_bytes")));
        }
        metas.push_back(std::move(m));
    }
    return {std::move(metas), cf};
}

std::string metrics_to_json(const MetricsReport& report, bool stamp)
{
    json doc = metrics_json(report);
    if (stamp)
        doc["generated_at"] = rfc3339_now();
    return doc.dump(2) + "\n";
}

std::string compare_to_json(const CompareReport& report, bool stamp)
{
    json reports = json::array();
    for (const MetricsReport& r : report.reports)
        reports.push_back(metrics_json(r));
    json table = json::array();
    for (const CompareRow& row : report.table)
        table.push_back(json{{"scheduler", row.scheduler},
                             {"task_id", row.task_id},
                             {"availability", row.availability},
                             {"window", row.window},
                             {"drops", row.drops}});
    json doc{{"reports", std::move(reports)}, {"table", std::move(table)}};
    if (stamp)
        doc["generated_at"] = rfc3339_now();
    return doc.dump(2) + "\n";
}

std::string compare_table_text(const CompareReport& report)
{
    std::ostringstream os;
    char line[160];
    std::snprintf(line, sizeof line, "%-8s %-8s %14s %14s %10s\n", "sched", "task",
                  "availability", "window", "drops");
    os << line;
    for (const CompareRow& row : report.table) {
        std::snprintf(line, sizeof line, "%-8s %-8u %14.4f %14.2f %10llu\n",
                      row.scheduler.c_str(), row.task_id, row.availability, row.window,
                      static_cast<unsigned long long>(row.drops));
        os << line;
    }
    return os.str();
}

std::string availability_to_json(const AvailabilityReport& report, Tick taken_at)
{
    json tasks = json::array();
    for (const TaskAvailability& ta : report.tasks) {
        json instances = json::array();
        for (const StartingPointInstance& inst : ta.instances)
            instances.push_back(json{{"pp", inst.program_point},
                                     {"job", inst.job_index},
                                     {"seq", inst.checkpoint_seq},
                                     {"ts", inst.checkpoint_ts},
                                     {"usable", inst.usable}});
        json t{{"task_id", ta.task_id}, {"instances", std::move(instances)}};
        if (ta.guaranteed_start_ts)
            t["guaranteed_start_ts"] = *ta.guaranteed_start_ts;
        if (ta.replay_window)
            t["replay_window"] = *ta.replay_window;
        tasks.push_back(std::move(t));
    }
    const json doc{{"taken_at", taken_at}, {"tasks", std::move(tasks)}};
    return doc.dump(2) + "\n";
}

std::string availability_text(const AvailabilityReport& report, Tick taken_at)
{
    std::ostringstream os;
    os << "snapshot taken_at=" << taken_at << "\n";
    for (const TaskAvailability& ta : report.tasks) {
        std::uint64_t usable = 0;
        for (const StartingPointInstance& inst : ta.instances)
            usable += inst.usable ? 1 : 0;
        os << "task " << ta.task_id << ": " << usable << "/" << ta.instances.size()
           << " usable starting points";
        if (ta.guaranteed_start_ts)
            os << ", guaranteed from t=" << *ta.guaranteed_start_ts << " (window "
               << *ta.replay_window << ")";
        else
            os << ", no guaranteed starting point";
        os << "\n";
        for (const StartingPointInstance& inst : ta.instances)
            os << "  pp=" << inst.program_point << " job=" << inst.job_index
               << " seq=" << inst.checkpoint_seq << " ts=" << inst.checkpoint_ts << " "
               << (inst.usable ? "usable" : "unusable") << "\n";
    }
    return os.str();
}

} // namespace rtrlog
