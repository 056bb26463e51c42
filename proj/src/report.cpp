#include <hetlb/report.hpp>

#include <algorithm>
#include <array>
#include <sstream>

namespace hetlb {

std::vector<ReviewRow> review_rows(const SystemState& state, std::size_t cluster) {
    std::vector<ReviewRow> rows;
    auto review = state.review(cluster);
    for (std::size_t i = 0; i < review.size(); ++i) {
        const auto& entry = review[i];
        ReviewRow row{entry.server.str(), entry.memory_capacity, entry.speed, entry.memory_left, {}, {}};
        for (std::size_t j = 0; j < entry.jobs.size(); ++j) {
            if (j > 0)
                row.jobs += '+';
            row.jobs += entry.jobs[j].id.str();
        }
        row.status = state.is_dead({cluster, i}) ? "DEAD" : std::string(to_string(entry.status));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string render_cluster_table(const std::string& title, const std::vector<ReviewRow>& rows,
                                 const TableStyle& style) {
    using Line = std::array<std::string, 6>;
    std::vector<Line> lines;
    lines.push_back({"WS_ID", "MEMORY", "PROCESSING_SPEED", "MEMORY_LEFT", "JOBS_ASSIGNED", "STATUS"});
    for (const auto& r : rows)
        lines.push_back({r.server, std::to_string(r.memory), std::to_string(r.speed), std::to_string(r.memory_left),
                         r.jobs, r.status});

    std::array<std::size_t, 6> width{};
    for (const auto& line : lines)
        for (std::size_t c = 0; c < line.size(); ++c)
            width[c] = std::max({width[c], line[c].size(), style.min_column_width});

    std::string out = title + '\n';
    for (const auto& line : lines) {
        std::string text;
        for (std::size_t c = 0; c < line.size(); ++c) {
            text += line[c];
            if (c + 1 < line.size())
                text += std::string(width[c] - line[c].size() + 2, ' ');
        }
        while (!text.empty() && text.back() == ' ')
            text.pop_back();
        out += text + '\n';
    }
    return out;
}

std::string render_review_matrix(const SystemState& state, const TableStyle& style) {
    std::string out;
    for (std::size_t c = 0; c < state.cluster_count(); ++c) {
        const auto& spec = state.cluster_spec(c);
        if (c > 0)
            out += '\n';
        out += render_cluster_table("Cluster " + spec.id.str() + " (range " + std::to_string(spec.memory_low) + ".." +
                                        std::to_string(spec.memory_high) + ")",
                                    review_rows(state, c), style);
    }
    return out;
}

std::string render_metrics(const MetricsReport& m) {
    std::ostringstream out;
    out << "strategy " << to_string(m.strategy) << '\n';
    out << "seed " << m.seed << '\n';
    out << "horizon " << m.horizon << '\n';
    out << "comparisons.sorting " << m.comparisons.sorting << '\n';
    out << "comparisons.routing " << m.comparisons.routing << '\n';
    out << "comparisons.assignment " << m.comparisons.assignment << '\n';
    out << "comparisons.status " << m.comparisons.status << '\n';
    out << "comparisons.within " << m.comparisons.within << '\n';
    out << "comparisons.cross " << m.comparisons.cross << '\n';
    out << "comparisons.retry " << m.comparisons.retry << '\n';
    out << "comparisons.total " << m.comparisons.total() << '\n';
    out << "sort.invocations " << m.sort_invocations << '\n';
    out << "sort.expected " << m.sort_expected << '\n';
    out << "arrivals " << m.arrivals << '\n';
    out << "completions " << m.completions << '\n';
    out << "over_commits " << m.over_commits << '\n';
    out << "rebalance_cycles " << m.rebalance_cycles << '\n';
    out << "moves " << m.moves << '\n';
    out << "unresolved " << m.unresolved << '\n';
    out << "dead_detected " << m.dead_detected << '\n';
    out << "migrations " << m.migrations << '\n';
    out << "orphaned " << m.orphaned << '\n';
    out << "final.pending " << m.final_pending << '\n';
    out << "final.uneven " << m.final_uneven << '\n';
    out << "final.dead " << m.final_dead << '\n';
    out << "audit.violations " << m.audit_violations.size() << '\n';
    for (const auto& s : m.histogram)
        out << "status " << s.tick << " even=" << s.even << " uneven=" << s.uneven << " dead=" << s.dead
            << " pending=" << s.pending << '\n';
    return out.str();
}

} // namespace hetlb
