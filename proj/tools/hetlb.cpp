// hetlb: run, validate and golden-check load-balancing scenarios.
//
// Exit codes: 0 success, 1 run failure (audit violation, golden mismatch,
// runtime error), 2 usage or scenario validation error.

#include <hetlb/golden.hpp>
#include <hetlb/report.hpp>
#include <hetlb/scenario_io.hpp>
#include <hetlb/simulator.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;

hetlb::TableStyle table_style_from_env() {
    hetlb::TableStyle style;
    if (const char* width = std::getenv("HETLB_TABLE_WIDTH")) {
        try {
            style.min_column_width = static_cast<std::size_t>(std::stoul(width));
        } catch (const std::exception&) {
            // cosmetic setting; ignore garbage
        }
    }
    return style;
}

std::optional<hetlb::Scenario> load(const std::string& path) {
    std::string text;
    try {
        text = hetlb::read_file(path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return std::nullopt;
    }
    try {
        return hetlb::parse_scenario(text);
    } catch (const hetlb::ScenarioError& e) {
        for (const auto& d : e.diagnostics()) {
            std::cerr << path << ':';
            if (d.line > 0)
                std::cerr << d.line << ':';
            std::cerr << ' ' << hetlb::to_string(d.code) << ": " << d.message << '\n';
        }
        return std::nullopt;
    }
}

int cmd_run(const std::string& path, const std::string& strategy_name, std::optional<std::uint64_t> seed,
            std::size_t offset, const std::string& emit, bool audit) {
    auto scenario = load(path);
    if (!scenario)
        return kExitInvalid;

    hetlb::RunOptions options;
    options.strategy = *hetlb::parse_strategy(strategy_name);
    options.seed = seed;
    options.rotation_offset = offset;
    options.audit = audit;

    auto result = hetlb::run(*scenario, options);

    const bool all = emit == "all";
    if (emit == "tables" || all) {
        if (all)
            std::cout << "== tables ==\n";
        std::cout << hetlb::render_review_matrix(result.state, table_style_from_env());
    }
    if (emit == "trace" || all) {
        if (all)
            std::cout << "== trace ==\n";
        std::cout << result.trace.serialize();
    }
    if (emit == "metrics" || all) {
        if (all)
            std::cout << "== metrics ==\n";
        std::cout << hetlb::render_metrics(result.metrics);
    }

    if (!result.metrics.audit_violations.empty()) {
        for (const auto& v : result.metrics.audit_violations)
            std::cerr << "audit: " << v << '\n';
        return kExitFailure;
    }
    return 0;
}

int cmd_validate(const std::string& path) {
    auto scenario = load(path);
    if (!scenario)
        return kExitInvalid;
    std::cout << path << ": ok (" << scenario->config.clusters.size() << " clusters, " << scenario->events.size()
              << " events)\n";
    return 0;
}

int cmd_golden() {
    bool ok = true;
    for (const auto& check : hetlb::golden::run_all()) {
        std::cout << (check.mismatches.empty() ? "match    " : "MISMATCH ") << check.table << '\n';
        for (const auto& m : check.mismatches)
            std::cout << "  " << m << '\n';
        ok = ok && check.mismatches.empty();
    }
    return ok ? 0 : kExitFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-tier heterogeneous web-server load-balancing simulator"};
    app.require_subcommand(1);

    std::string path;
    std::string strategy = "paper";
    std::optional<std::uint64_t> seed;
    std::size_t offset = 0;
    std::string emit = "all";
    bool audit = false;

    auto* run = app.add_subcommand("run", "Run a scenario");
    run->add_option("scenario", path, "Scenario file (.scn)")->required();
    run->add_option("--strategy", strategy, "Placement strategy")
        ->check(CLI::IsMember({"paper", "rr", "random"}));
    run->add_option("--seed", seed, "Seed for the random baseline (overrides the scenario seed)");
    run->add_option("--offset", offset, "Round-robin starting server index");
    run->add_option("--emit", emit, "Output to print")->check(CLI::IsMember({"tables", "trace", "metrics", "all"}));
    run->add_flag("--audit", audit, "Check model invariants after every event");

    auto* validate = app.add_subcommand("validate", "Parse and validate a scenario");
    validate->add_option("scenario", path, "Scenario file (.scn)")->required();

    auto* golden = app.add_subcommand("golden", "Check the worked example against its expected review matrices");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (*run)
            return cmd_run(path, strategy, seed, offset, emit, audit);
        if (*validate)
            return cmd_validate(path);
        if (*golden)
            return cmd_golden();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitInvalid;
}
