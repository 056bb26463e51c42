#include <hetlb/instrumentation.hpp>

namespace hetlb {

void Meter::sorted(const SortProbe& p) {
    counters_.sorting += p.comparisons;
    ++sort_invocations_;
    sort_expected_ += static_cast<std::uint64_t>(p.size) * (p.size == 0 ? 0 : p.size - 1) / 2;
    if (probe_)
        probe_->on_sort(p);
}

void Meter::assigned(const AssignProbe& p) {
    counters_.routing += p.cluster_comparisons;
    counters_.assignment += p.server_comparisons;
    if (probe_)
        probe_->on_assign(p);
}

void Meter::balanced(const BalanceProbe& p) {
    counters_.within += p.within;
    counters_.cross += p.cross;
    counters_.retry += p.retry;
    if (probe_)
        probe_->on_balance(p);
}

void Meter::cycled(const CycleProbe& p) {
    counters_.status += p.status;
    if (probe_)
        probe_->on_cycle(p);
}

} // namespace hetlb
