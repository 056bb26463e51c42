#pragma once

// Comparison counters for the complexity bounds of sorting, assignment and
// balancing, plus an optional observer that sees every individual tally.

#include <hetlb/ids.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>

namespace hetlb {

struct ComparisonCounters {
    std::uint64_t sorting = 0;    // sort_servers + sort_by_load
    std::uint64_t routing = 0;    // cluster-range checks during assignment
    std::uint64_t assignment = 0; // server capability checks during assignment
    std::uint64_t status = 0;     // EVEN/UNEVEN checks during a rebalance cycle
    std::uint64_t within = 0;     // balance scan inside the origin cluster
    std::uint64_t cross = 0;      // balance scan in subsequent clusters
    std::uint64_t retry = 0;      // pending retries and settle sweeps

    std::uint64_t total() const noexcept {
        return sorting + routing + assignment + status + within + cross + retry;
    }

    friend bool operator==(const ComparisonCounters&, const ComparisonCounters&) = default;
};

enum class SortKind { Capability, Load };

struct SortProbe {
    SortKind kind = SortKind::Capability;
    std::size_t cluster = 0;
    std::size_t size = 0;
    std::uint64_t comparisons = 0;
};

struct AssignProbe {
    JobId job;
    std::optional<std::size_t> cluster; // matched cluster, if any
    std::size_t cluster_size = 0;
    bool placed = false;
    std::uint64_t cluster_comparisons = 0;
    std::uint64_t server_comparisons = 0;
};

enum class BalancePath { Eviction, Migration, Retry };

struct BalanceProbe {
    JobId job;
    BalancePath path = BalancePath::Eviction;
    std::size_t origin_cluster = 0;
    std::size_t origin_position = 0;
    bool placed = false;
    std::uint64_t within = 0;
    std::uint64_t cross = 0;
    std::uint64_t retry = 0;
};

struct CycleProbe {
    std::size_t uneven_entries = 0;
    std::size_t evicted_jobs = 0;
    std::uint64_t status = 0;
    std::uint64_t within = 0;
    std::uint64_t cross = 0;
};

/// Observer hooks; every default is a no-op.
class Probe {
public:
    virtual ~Probe() = default;
    virtual void on_sort(const SortProbe&) {}
    virtual void on_assign(const AssignProbe&) {}
    virtual void on_balance(const BalanceProbe&) {}
    virtual void on_cycle(const CycleProbe&) {}
};

/// Aggregates counters and forwards each tally to an optional probe.
class Meter {
public:
    explicit Meter(Probe* probe = nullptr) : probe_(probe) {}

    ComparisonCounters& counters() noexcept { return counters_; }
    const ComparisonCounters& counters() const noexcept { return counters_; }
    std::uint64_t sort_invocations() const noexcept { return sort_invocations_; }
    /// Sum of m(m-1)/2 over every sort invocation, from sizes alone.
    std::uint64_t sort_expected() const noexcept { return sort_expected_; }

    void sorted(const SortProbe& p);
    void assigned(const AssignProbe& p);
    void balanced(const BalanceProbe& p);
    void cycled(const CycleProbe& p);

private:
    Probe* probe_;
    ComparisonCounters counters_;
    std::uint64_t sort_invocations_ = 0;
    std::uint64_t sort_expected_ = 0;
};

} // namespace hetlb
