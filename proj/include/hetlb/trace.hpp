#pragma once

#include <hetlb/model.hpp>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hetlb {

enum class TraceKind {
    JobRouted,
    ServerSelected,
    OverCommit,
    ClientHandoff,
    JobPending,
    BalanceReject,
    JobMoved,
    JobUnresolved,
    RebalanceDone,
    ServerFailed,
    ServerRecovered,
    ServerDead,
    JobMigrated,
    JobOrphanedPending,
    ServerRevived,
    JobCompleted,
};

std::string_view to_string(TraceKind kind) noexcept;

struct TraceEvent {
    Tick tick = 0;
    TraceKind kind = TraceKind::JobRouted;
    std::vector<std::pair<std::string, std::string>> fields; // sorted by key

    /// Value of a field, or empty if absent.
    std::string_view field(std::string_view key) const noexcept;

    friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

/// One line, no trailing newline: `<tick> <kind> key=value ...`, keys in
/// lexical order.
std::string format_event(const TraceEvent& event);

class Trace {
public:
    using Field = std::pair<std::string_view, std::string>;

    void emit(Tick tick, TraceKind kind, std::initializer_list<Field> fields);

    const std::vector<TraceEvent>& events() const noexcept { return events_; }
    std::size_t count(TraceKind kind) const noexcept;
    std::string serialize() const;

private:
    std::vector<TraceEvent> events_;
};

} // namespace hetlb
