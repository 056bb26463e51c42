#include <hetlb/scenario_io.hpp>

#include <hetlb/rng.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace hetlb {

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
            ++i;
        if (i > start)
            tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

std::optional<std::int64_t> to_int(std::string_view text) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        return std::nullopt;
    return value;
}

enum class Section { None, Config, Clusters, Servers, Jobs, Events, Generate };

std::optional<Section> section_named(std::string_view name) {
    static const std::map<std::string_view, Section> sections{
        {"config", Section::Config}, {"clusters", Section::Clusters}, {"servers", Section::Servers},
        {"jobs", Section::Jobs},     {"events", Section::Events},     {"generate", Section::Generate},
    };
    auto it = sections.find(name);
    if (it == sections.end())
        return std::nullopt;
    return it->second;
}

struct Generator {
    int line = 0;
    std::int64_t jobs = 0;
    std::int64_t memory_lo = 1, memory_hi = 1;
    std::int64_t speed_lo = 1, speed_hi = 1;
    std::int64_t tick_first = 0, tick_last = 0;
    std::string prefix = "G";
};

class Parser {
public:
    Scenario parse(std::string_view text) {
        int number = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            auto end = text.find('\n', pos);
            if (end == std::string_view::npos)
                end = text.size();
            ++number;
            auto line = text.substr(pos, end - pos);
            if (auto hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            handle(number, tokenize(line));
            pos = end + 1;
        }
        return finish();
    }

private:
    void error(int line, ErrorCode code, std::string message) {
        diagnostics_.push_back({line, code, std::move(message)});
    }

    std::optional<std::int64_t> integer(int line, std::string_view token, std::string_view what) {
        auto value = to_int(token);
        if (!value)
            error(line, ErrorCode::Syntax, "expected integer " + std::string(what) + ", got '" + std::string(token) + "'");
        return value;
    }

    bool expect_fields(int line, const std::vector<std::string_view>& tokens, std::size_t count,
                       std::string_view shape) {
        if (tokens.size() == count)
            return true;
        error(line, ErrorCode::Syntax, "expected '" + std::string(shape) + "'");
        return false;
    }

    bool identifier(int line, std::string_view token) {
        if (is_valid_identifier(token))
            return true;
        error(line, ErrorCode::Syntax, "invalid identifier '" + std::string(token) + "'");
        return false;
    }

    void handle(int line, const std::vector<std::string_view>& tokens) {
        if (tokens.empty())
            return;
        if (tokens.front().starts_with('[')) {
            auto head = tokens.front();
            auto name = tokens.size() == 1 && head.ends_with(']') ? head.substr(1, head.size() - 2)
                                                                   : std::string_view{};
            auto section = section_named(name);
            if (!section)
                error(line, ErrorCode::Syntax, "unknown section header '" + std::string(head) + "'");
            section_ = section.value_or(Section::None);
            if (section_ == Section::Generate) {
                generator_ = Generator{};
                generator_->line = line;
            }
            return;
        }
        switch (section_) {
        case Section::None:
            error(line, ErrorCode::Syntax, "content before any section header");
            break;
        case Section::Config:
            config_line(line, tokens);
            break;
        case Section::Clusters:
            cluster_line(line, tokens);
            break;
        case Section::Servers:
            server_line(line, tokens);
            break;
        case Section::Jobs:
            job_line(line, tokens);
            break;
        case Section::Events:
            event_line(line, tokens);
            break;
        case Section::Generate:
            generate_line(line, tokens);
            break;
        }
    }

    void config_line(int line, const std::vector<std::string_view>& t) {
        if (!expect_fields(line, t, 2, "<key> <integer>"))
            return;
        auto value = integer(line, t[1], t[0]);
        if (!value)
            return;
        if (t[0] == "heartbeat_period") {
            scenario_.config.heartbeat_period = *value;
            lines_.config = line;
        } else if (t[0] == "horizon") {
            scenario_.horizon = *value;
        } else if (t[0] == "seed") {
            if (*value < 0)
                error(line, ErrorCode::InvalidValue, "seed must be non-negative");
            scenario_.seed = static_cast<std::uint64_t>(*value);
        } else {
            error(line, ErrorCode::Syntax, "unknown config key '" + std::string(t[0]) + "'");
        }
    }

    void cluster_line(int line, const std::vector<std::string_view>& t) {
        if (!expect_fields(line, t, 3, "<cluster_id> <memory_low> <memory_high>") || !identifier(line, t[0]))
            return;
        auto low = integer(line, t[1], "memory_low");
        auto high = integer(line, t[2], "memory_high");
        if (!low || !high)
            return;
        std::string id(t[0]);
        if (lines_.clusters.contains(id)) {
            error(line, ErrorCode::DuplicateId, "duplicate cluster id " + id);
            return;
        }
        lines_.clusters[id] = line;
        scenario_.config.clusters.push_back(ClusterSpec{ClusterId(id), *low, *high, {}});
    }

    void server_line(int line, const std::vector<std::string_view>& t) {
        if (!expect_fields(line, t, 4, "<server_id> <cluster_id> <memory> <speed>") || !identifier(line, t[0]) ||
            !identifier(line, t[1]))
            return;
        auto memory = integer(line, t[2], "memory");
        auto speed = integer(line, t[3], "speed");
        if (!memory || !speed)
            return;
        std::string id(t[0]);
        if (lines_.servers.contains(id)) {
            error(line, ErrorCode::DuplicateId, "duplicate server id " + id);
            return;
        }
        lines_.servers[id] = line;
        servers_.push_back({line, ServerSpec{ServerId(id), ClusterId(t[1]), *memory, *speed}});
    }

    void job_line(int line, const std::vector<std::string_view>& t) {
        if (!expect_fields(line, t, 3, "<job_id> <memory> <speed>") || !identifier(line, t[0]))
            return;
        auto memory = integer(line, t[1], "memory");
        auto speed = integer(line, t[2], "speed");
        if (!memory || !speed)
            return;
        std::string id(t[0]);
        if (jobs_.contains(id)) {
            error(line, ErrorCode::DuplicateId, "duplicate job id " + id);
            return;
        }
        jobs_.emplace(id, JobDecl{line, JobSpec{JobId(id), *memory, *speed}, false});
        job_order_.push_back(id);
    }

    void event_line(int line, const std::vector<std::string_view>& t) {
        if (!expect_fields(line, t, 3, "<tick> <arrive|fail|recover|complete> <id>") || !identifier(line, t[2]))
            return;
        auto tick = integer(line, t[0], "tick");
        if (!tick)
            return;
        static const std::unordered_set<std::string_view> verbs{"arrive", "fail", "recover", "complete"};
        if (!verbs.contains(t[1])) {
            error(line, ErrorCode::Syntax, "unknown event '" + std::string(t[1]) + "'");
            return;
        }
        raw_events_.push_back({line, *tick, std::string(t[1]), std::string(t[2])});
    }

    void generate_line(int line, const std::vector<std::string_view>& t) {
        auto& g = *generator_;
        if (t.size() == 2 && t[0] == "prefix") {
            if (identifier(line, t[1]))
                g.prefix = std::string(t[1]);
            return;
        }
        if (t.size() == 2 && t[0] == "jobs") {
            if (auto v = integer(line, t[1], "jobs"))
                g.jobs = *v;
            if (g.jobs < 0)
                error(line, ErrorCode::InvalidValue, "generated job count must be non-negative");
            return;
        }
        if (t.size() == 3 && (t[0] == "memory" || t[0] == "speed" || t[0] == "ticks")) {
            auto lo = integer(line, t[1], "lower bound");
            auto hi = integer(line, t[2], "upper bound");
            if (!lo || !hi)
                return;
            if (*lo > *hi || *lo < (t[0] == "ticks" ? 0 : 1)) {
                error(line, ErrorCode::InvalidValue, "bad " + std::string(t[0]) + " range");
                return;
            }
            auto [a, b] = t[0] == "memory" ? std::tie(g.memory_lo, g.memory_hi)
                           : t[0] == "speed" ? std::tie(g.speed_lo, g.speed_hi)
                                             : std::tie(g.tick_first, g.tick_last);
            a = *lo;
            b = *hi;
            return;
        }
        error(line, ErrorCode::Syntax, "expected 'jobs N', 'memory LO HI', 'speed LO HI', 'ticks FIRST LAST' or 'prefix P'");
    }

    Scenario finish() {
        for (const auto& [line, server] : servers_) {
            auto it = std::find_if(scenario_.config.clusters.begin(), scenario_.config.clusters.end(),
                                   [&](const ClusterSpec& c) { return c.id == server.cluster; });
            if (it == scenario_.config.clusters.end()) {
                error(line, ErrorCode::UnknownReference,
                      "server " + server.id.str() + " names unknown cluster " + server.cluster.str());
                continue;
            }
            it->servers.push_back(server);
        }

        std::vector<int> event_lines;
        Tick last = 0;
        bool sorted = true;
        for (const auto& raw : raw_events_) {
            if (raw.tick < last) {
                error(raw.line, ErrorCode::UnsortedEvents,
                      "event at tick " + std::to_string(raw.tick) + " follows tick " + std::to_string(last));
                sorted = false;
            }
            last = std::max(last, raw.tick);
            auto action = resolve(raw);
            if (!action)
                continue;
            scenario_.events.push_back({raw.tick, std::move(*action)});
            event_lines.push_back(raw.line);
        }
        for (const auto& id : job_order_) {
            const auto& decl = jobs_.at(id);
            if (!decl.arrives)
                error(decl.line, ErrorCode::NoArrival, "job " + id + " has no arrive event");
        }

        if (generator_)
            generate(event_lines);
        if (sorted && generator_) {
            std::vector<std::size_t> order(scenario_.events.size());
            for (std::size_t i = 0; i < order.size(); ++i)
                order[i] = i;
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return scenario_.events[a].tick < scenario_.events[b].tick;
            });
            std::vector<SimEvent> events;
            std::vector<int> lines;
            for (auto i : order) {
                events.push_back(scenario_.events[i]);
                lines.push_back(event_lines[i]);
            }
            scenario_.events = std::move(events);
            event_lines = std::move(lines);
        }
        lines_.events = std::move(event_lines);

        for (auto& d : validate_scenario(scenario_, &lines_)) {
            if (std::find(diagnostics_.begin(), diagnostics_.end(), d) == diagnostics_.end())
                diagnostics_.push_back(std::move(d));
        }
        if (!diagnostics_.empty()) {
            std::stable_sort(diagnostics_.begin(), diagnostics_.end(),
                             [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
            throw ScenarioError(std::move(diagnostics_));
        }
        return std::move(scenario_);
    }

    struct RawEvent {
        int line;
        Tick tick;
        std::string verb;
        std::string id;
    };

    std::optional<SimAction> resolve(const RawEvent& raw) {
        if (raw.verb == "arrive" || raw.verb == "complete") {
            auto it = jobs_.find(raw.id);
            if (it == jobs_.end()) {
                error(raw.line, ErrorCode::UnknownReference, "unknown job " + raw.id);
                return std::nullopt;
            }
            if (raw.verb == "complete")
                return JobComplete{JobId(raw.id)};
            it->second.arrives = true;
            return JobArrival{it->second.job};
        }
        if (!lines_.servers.contains(raw.id)) {
            error(raw.line, ErrorCode::UnknownReference, "unknown server " + raw.id);
            return std::nullopt;
        }
        if (raw.verb == "fail")
            return ServerFail{ServerId(raw.id)};
        return ServerRecover{ServerId(raw.id)};
    }

    void generate(std::vector<int>& event_lines) {
        const auto& g = *generator_;
        std::mt19937_64 rng(scenario_.seed);
        for (std::int64_t i = 1; i <= g.jobs; ++i) {
            std::string id = g.prefix + std::to_string(i);
            if (jobs_.contains(id)) {
                error(g.line, ErrorCode::DuplicateId, "generated job id " + id + " collides with a declared job");
                return;
            }
            JobSpec job{JobId(id), draw_between(rng, g.memory_lo, g.memory_hi),
                        draw_between(rng, g.speed_lo, g.speed_hi)};
            Tick tick = draw_between(rng, g.tick_first, g.tick_last);
            scenario_.events.push_back({tick, JobArrival{job}});
            event_lines.push_back(g.line);
        }
    }

    struct JobDecl {
        int line;
        JobSpec job;
        bool arrives;
    };

    Scenario scenario_;
    SourceLines lines_;
    Section section_ = Section::None;
    std::vector<std::pair<int, ServerSpec>> servers_;
    std::unordered_map<std::string, JobDecl> jobs_;
    std::vector<std::string> job_order_;
    std::vector<RawEvent> raw_events_;
    std::optional<Generator> generator_;
    std::vector<Diagnostic> diagnostics_;
};

} // namespace

Scenario parse_scenario(std::string_view text) {
    return Parser{}.parse(text);
}

std::string render_scenario(const Scenario& scenario) {
    std::ostringstream out;
    out << "[config]\n";
    out << "heartbeat_period " << scenario.config.heartbeat_period << '\n';
    if (scenario.horizon)
        out << "horizon " << *scenario.horizon << '\n';
    out << "seed " << scenario.seed << '\n';

    out << "\n[clusters]\n";
    for (const auto& c : scenario.config.clusters)
        out << c.id << ' ' << c.memory_low << ' ' << c.memory_high << '\n';

    out << "\n[servers]\n";
    for (const auto& c : scenario.config.clusters)
        for (const auto& s : c.servers)
            out << s.id << ' ' << s.cluster << ' ' << s.memory_capacity << ' ' << s.speed << '\n';

    out << "\n[jobs]\n";
    for (const auto& e : scenario.events)
        if (const auto* a = std::get_if<JobArrival>(&e.action))
            out << a->job.id << ' ' << a->job.memory_req << ' ' << a->job.speed_req << '\n';

    out << "\n[events]\n";
    for (const auto& e : scenario.events) {
        out << e.tick << ' ';
        std::visit(
            [&](const auto& action) {
                using T = std::decay_t<decltype(action)>;
                if constexpr (std::is_same_v<T, JobArrival>)
                    out << "arrive " << action.job.id;
                else if constexpr (std::is_same_v<T, ServerFail>)
                    out << "fail " << action.server;
                else if constexpr (std::is_same_v<T, ServerRecover>)
                    out << "recover " << action.server;
                else
                    out << "complete " << action.job;
            },
            e.action);
        out << '\n';
    }
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace hetlb
