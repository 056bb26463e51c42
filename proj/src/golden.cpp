#include <hetlb/golden.hpp>

#include <hetlb/scenario_io.hpp>
#include <hetlb/simulator.hpp>

namespace hetlb::detail {
extern const std::string_view example_scenario_source;
}

namespace hetlb::golden {

std::string_view scenario_text() {
    return detail::example_scenario_source;
}

Scenario scenario() {
    return parse_scenario(scenario_text());
}

namespace {

ReviewRow row(const char* server, Memory memory, Speed speed, Memory left, const char* jobs, const char* status) {
    return ReviewRow{server, memory, speed, left, jobs, status};
}

} // namespace

Table before_assignment() {
    return {"before assignment",
            {{row("WS1.1", 500, 60, 500, "", "EVEN"), row("WS1.2", 700, 70, 700, "", "EVEN"),
              row("WS1.3", 1000, 100, 1000, "", "EVEN")},
             {row("WS2.1", 1200, 50, 1200, "", "EVEN"), row("WS2.2", 1500, 70, 1500, "", "EVEN"),
              row("WS2.3", 1800, 80, 1800, "", "EVEN")}}};
}

Table after_assignment() {
    return {"after assignment",
            {{row("WS1.1", 500, 60, -500, "J2+J7", "UNEVEN"), row("WS1.2", 700, 70, -600, "J5+J6", "UNEVEN"),
              row("WS1.3", 1000, 100, 0, "J3", "EVEN")},
             {row("WS2.1", 1200, 50, 0, "J4", "EVEN"), row("WS2.2", 1500, 70, 1500, "", "EVEN"),
              row("WS2.3", 1800, 80, 300, "J1", "EVEN")}}};
}

Table after_rebalance() {
    return {"after rebalance",
            {{row("WS1.1", 500, 60, 0, "J2", "EVEN"), row("WS1.2", 700, 70, 100, "J5", "EVEN"),
              row("WS1.3", 1000, 100, 0, "J3", "EVEN")},
             {row("WS2.1", 1200, 50, 0, "J4", "EVEN"), row("WS2.2", 1500, 70, 300, "J6+J7", "EVEN"),
              row("WS2.3", 1800, 80, 300, "J1", "EVEN")}}};
}

std::vector<std::string> compare(const Table& expected, const SystemState& state) {
    std::vector<std::string> out;
    if (expected.clusters.size() != state.cluster_count()) {
        out.push_back("expected " + std::to_string(expected.clusters.size()) + " clusters, found " +
                      std::to_string(state.cluster_count()));
        return out;
    }
    for (std::size_t c = 0; c < expected.clusters.size(); ++c) {
        auto actual = review_rows(state, c);
        const auto& want = expected.clusters[c];
        if (actual.size() != want.size()) {
            out.push_back("cluster " + std::to_string(c + 1) + ": expected " + std::to_string(want.size()) +
                          " rows, found " + std::to_string(actual.size()));
            continue;
        }
        for (std::size_t r = 0; r < want.size(); ++r) {
            const auto& a = actual[r];
            const auto& w = want[r];
            auto cell = [&](const char* column, const std::string& got, const std::string& exp) {
                if (got != exp)
                    out.push_back(w.server + " " + column + ": expected '" + exp + "', got '" + got + "'");
            };
            cell("WS_ID", a.server, w.server);
            cell("MEMORY", std::to_string(a.memory), std::to_string(w.memory));
            cell("PROCESSING_SPEED", std::to_string(a.speed), std::to_string(w.speed));
            cell("MEMORY_LEFT", std::to_string(a.memory_left), std::to_string(w.memory_left));
            cell("JOBS_ASSIGNED", a.jobs, w.jobs);
            cell("STATUS", a.status, w.status);
        }
    }
    return out;
}

std::vector<Check> run_all() {
    auto base = scenario();
    std::vector<Check> checks;

    checks.push_back({before_assignment().name, compare(before_assignment(), initial_state(base))});

    auto assigned = base;
    assigned.horizon = 0;
    RunOptions options;
    options.audit = true;
    auto first = run(assigned, options);
    auto mismatches = compare(after_assignment(), first.state);
    for (const auto& v : first.metrics.audit_violations)
        mismatches.push_back("audit: " + v);
    checks.push_back({after_assignment().name, std::move(mismatches)});

    auto balanced = base;
    balanced.horizon = base.config.heartbeat_period;
    auto second = run(balanced, options);
    mismatches = compare(after_rebalance(), second.state);
    for (const auto& v : second.metrics.audit_violations)
        mismatches.push_back("audit: " + v);
    checks.push_back({after_rebalance().name, std::move(mismatches)});
    return checks;
}

} // namespace hetlb::golden
