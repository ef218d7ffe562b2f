#include "rtrlog/trace.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <string>

namespace rtrlog {

void validate_tasks(std::span<const TaskSpec> tasks)
{
    std::set<TaskId> ids;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const TaskSpec& t = tasks[i];
        const std::string where = "tasks[" + std::to_string(i) + "]";
        if (!ids.insert(t.task_id).second)
            throw SpecError(where + ": duplicate task_id " + std::to_string(t.task_id));
        if (const auto* p = std::get_if<PeriodicActivation>(&t.activation)) {
            if (p->period < 1)
                throw SpecError(where + ".activation.period: must be >= 1");
        } else {
            const auto& s = std::get<SporadicActivation>(t.activation);
            if (s.min_interarrival < 1)
                throw SpecError(where + ".activation.min_interarrival: must be >= 1");
            if (s.arrival_prob_permille > 1000)
                throw SpecError(where + ".activation.arrival_prob_permille: must be <= 1000");
        }
        for (std::size_t k = 0; k + 1 < t.program_points.size(); ++k)
            if (t.program_points[k + 1].offset <= t.program_points[k].offset)
                throw SpecError(where + ".program_points: offsets must be strictly increasing");
        for (const ProgramPointSpec& pp : t.program_points)
            if (pp.checkpoint_bytes == 0)
                throw SpecError(where + ".program_points: checkpoint_bytes must be > 0");
    }
}

bool trace_order_less(const TraceEvent& a, const TraceEvent& b)
{
    if (a.at != b.at)
        return a.at < b.at;
    if (a.task_id != b.task_id)
        return a.task_id < b.task_id;
    return kind_rank(a.kind) < kind_rank(b.kind);
}

namespace {

std::vector<Tick> release_times(const TaskSpec& task, Tick duration, SplitMix64& rng)
{
    std::vector<Tick> out;
    if (const auto* p = std::get_if<PeriodicActivation>(&task.activation)) {
        for (Tick r = p->offset; r < duration; r += p->period)
            out.push_back(r);
        return out;
    }
    const auto& s = std::get<SporadicActivation>(task.activation);
    bool released_before = false;
    Tick last = 0;
    for (Tick t = 0; t < duration; ++t) {
        if (released_before && t - last < s.min_interarrival)
            continue;
        const std::uint64_t draw = rng.next(); // one draw per eligible tick
        if (draw % 1000 < s.arrival_prob_permille) {
            out.push_back(t);
            released_before = true;
            last = t;
        }
    }
    return out;
}

} // namespace

std::vector<TraceEvent> generate_trace(const std::vector<TaskSpec>& tasks, Tick duration,
                                       std::uint64_t seed)
{
    if (duration < 1)
        throw SpecError("duration: must be >= 1");
    validate_tasks(tasks);

    SplitMix64 rng(seed);
    std::vector<TraceEvent> events;
    for (const TaskSpec& task : tasks) {
        const std::vector<Tick> releases = release_times(task, duration, rng);
        for (std::uint32_t job = 0; job < releases.size(); ++job) {
            const Tick release = releases[job];
            const auto emit = [&](Tick at, EntryKind kind, std::optional<std::uint32_t> pp,
                                  std::uint32_t bytes) {
                if (at < duration)
                    events.push_back(TraceEvent{at, kind, task.task_id, job, pp, bytes});
            };

            emit(release, EntryKind::ContextSwitch, std::nullopt, 0);
            Tick last_offset = 0;
            for (std::uint32_t k = 0; k < task.program_points.size(); ++k) {
                const ProgramPointSpec& pp = task.program_points[k];
                emit(release + pp.offset, EntryKind::Checkpoint, k, pp.checkpoint_bytes);
                last_offset = std::max(last_offset, pp.offset);
            }
            for (const InputSpec& in : task.inputs_per_job) {
                emit(release + in.offset, EntryKind::Input, std::nullopt, in.payload_bytes);
                last_offset = std::max(last_offset, in.offset);
            }
            emit(release + last_offset + 1, EntryKind::ContextSwitch, std::nullopt, 0);
        }
    }

    std::stable_sort(events.begin(), events.end(), trace_order_less);
    return events;
}

void write_trace(std::ostream& os, std::span<const TraceEvent> trace)
{
    for (const TraceEvent& e : trace) {
        os << "t=" << e.at << " kind=" << kind_token(e.kind) << " task=" << e.task_id
           << " job=" << e.job_index;
        if (e.program_point)
            os << " pp=" << *e.program_point;
        os << " size=" << e.payload_bytes << '\n';
    }
}

namespace {

// "key=value" -> value, insisting on the exact key.
std::string_view take_field(std::string_view& rest, std::string_view key, std::size_t line_no)
{
    while (!rest.empty() && rest.front() == ' ')
        rest.remove_prefix(1);
    const std::size_t eq = rest.find('=');
    const std::string where = "line " + std::to_string(line_no);
    if (eq == std::string_view::npos || rest.substr(0, eq) != key)
        throw ParseError(where, "expected field '" + std::string(key) + "'");
    rest.remove_prefix(eq + 1);
    const std::size_t end = rest.find(' ');
    std::string_view value = rest.substr(0, end);
    rest.remove_prefix(end == std::string_view::npos ? rest.size() : end);
    if (value.empty())
        throw ParseError(where, "empty value for '" + std::string(key) + "'");
    return value;
}

std::uint64_t parse_u64(std::string_view text, std::string_view key, std::size_t line_no)
{
    std::uint64_t value = 0;
    for (char c : text) {
        if (c < '0' || c > '9')
            throw ParseError("line " + std::to_string(line_no),
                             "field '" + std::string(key) + "' is not a decimal integer");
        value = value * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return value;
}

} // namespace

std::vector<TraceEvent> read_trace(std::istream& is)
{
    std::vector<TraceEvent> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::string_view rest = line;
        TraceEvent e;
        e.at = parse_u64(take_field(rest, "t", line_no), "t", line_no);
        const std::string_view kind = take_field(rest, "kind", line_no);
        const auto k = kind_from_token(kind);
        if (!k)
            throw ParseError("line " + std::to_string(line_no),
                             "unknown kind '" + std::string(kind) + "'");
        e.kind = *k;
        e.task_id =
            static_cast<TaskId>(parse_u64(take_field(rest, "task", line_no), "task", line_no));
        e.job_index = static_cast<std::uint32_t>(
            parse_u64(take_field(rest, "job", line_no), "job", line_no));
        if (e.kind == EntryKind::Checkpoint)
            e.program_point = static_cast<std::uint32_t>(
                parse_u64(take_field(rest, "pp", line_no), "pp", line_no));
        e.payload_bytes = static_cast<std::uint32_t>(
            parse_u64(take_field(rest, "size", line_no), "size", line_no));
        while (!rest.empty() && rest.front() == ' ')
            rest.remove_prefix(1);
        if (!rest.empty())
            throw ParseError("line " + std::to_string(line_no), "trailing content");
        out.push_back(e);
    }
    return out;
}

} // namespace rtrlog
