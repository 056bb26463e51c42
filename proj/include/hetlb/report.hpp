#pragma once

// Text renderings: review-matrix tables and the metrics report. Both are
// pure functions of their input.

#include <hetlb/model.hpp>
#include <hetlb/simulator.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace hetlb {

struct TableStyle {
    std::size_t min_column_width = 0;
};

/// Cells of one review-matrix row, in column order.
struct ReviewRow {
    std::string server;
    Memory memory = 0;
    Speed speed = 0;
    Memory memory_left = 0;
    std::string jobs; // "J2+J7"
    std::string status;

    friend bool operator==(const ReviewRow&, const ReviewRow&) = default;
};

/// Rows of one cluster, in ability-matrix order. STATUS reads DEAD for a
/// server marked dead.
std::vector<ReviewRow> review_rows(const SystemState& state, std::size_t cluster);

std::string render_cluster_table(const std::string& title, const std::vector<ReviewRow>& rows,
                                 const TableStyle& style = {});

/// One table per cluster, columns WS_ID MEMORY PROCESSING_SPEED MEMORY_LEFT
/// JOBS_ASSIGNED STATUS, separated by blank lines.
std::string render_review_matrix(const SystemState& state, const TableStyle& style = {});

/// `key value` lines in fixed order, then one `status` line per tick.
std::string render_metrics(const MetricsReport& metrics);

} // namespace hetlb
