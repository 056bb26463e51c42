#include <hetlb/simulator.hpp>

#include <hetlb/assignment.hpp>
#include <hetlb/balancer.hpp>
#include <hetlb/liveness.hpp>
#include <hetlb/rng.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <unordered_set>

namespace hetlb {

std::string_view to_string(Strategy strategy) noexcept {
    switch (strategy) {
    case Strategy::TwoTier:
        return "paper";
    case Strategy::RoundRobin:
        return "rr";
    case Strategy::Random:
        return "random";
    }
    return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view text) noexcept {
    if (text == "paper")
        return Strategy::TwoTier;
    if (text == "rr")
        return Strategy::RoundRobin;
    if (text == "random")
        return Strategy::Random;
    return std::nullopt;
}

SystemState initial_state(const Scenario& scenario) {
    return SystemState(scenario.config);
}

namespace {

class Engine {
public:
    Engine(const Scenario& scenario, const RunOptions& options)
        : scenario_(scenario),
          options_(options),
          state_(scenario.config),
          meter_(options.probe),
          rng_(options.seed.value_or(scenario.seed)),
          flat_(state_.all_servers()),
          cursor_(flat_.empty() ? 0 : options.rotation_offset % flat_.size()) {
        metrics_.strategy = options.strategy;
        metrics_.seed = options.seed.value_or(scenario.seed);
        metrics_.horizon = scenario.effective_horizon();
    }

    RunResult execute() {
        const Tick period = scenario_.config.heartbeat_period;
        std::size_t next = 0;
        const auto& events = scenario_.events;

        for (Tick tick = 0; tick <= metrics_.horizon; ++tick) {
            std::size_t first = next;
            while (next < events.size() && events[next].tick == tick)
                ++next;

            for (std::size_t i = first; i < next; ++i)
                apply_power_event(events[i], tick);

            if (tick % period == 0)
                send_heartbeats(tick);

            handle_dead(tick);

            bool any_arrival = std::any_of(events.begin() + static_cast<std::ptrdiff_t>(first),
                                           events.begin() + static_cast<std::ptrdiff_t>(next),
                                           [](const SimEvent& e) { return std::holds_alternative<JobArrival>(e.action); });
            std::optional<AssignmentOrder> order;
            if (any_arrival && options_.strategy == Strategy::TwoTier)
                order = sort_all_servers(state_, meter_);
            for (std::size_t i = first; i < next; ++i)
                apply_job_event(events[i], tick, order);

            if (tick > 0 && tick % period == 0)
                periodic(tick);

            record_histogram(tick);
        }

        metrics_.comparisons = meter_.counters();
        metrics_.sort_invocations = meter_.sort_invocations();
        metrics_.sort_expected = meter_.sort_expected();
        metrics_.final_pending = state_.pending().size();
        if (!metrics_.histogram.empty()) {
            metrics_.final_uneven = metrics_.histogram.back().uneven;
            metrics_.final_dead = metrics_.histogram.back().dead;
        }
        return RunResult{std::move(state_), std::move(metrics_), std::move(trace_)};
    }

private:
    void apply_power_event(const SimEvent& event, Tick tick) {
        if (const auto* fail = std::get_if<ServerFail>(&event.action)) {
            halted_.insert(fail->server);
            trace_.emit(tick, TraceKind::ServerFailed, {{"server", fail->server.str()}});
            audit(tick, "fail " + fail->server.str());
        } else if (const auto* recover = std::get_if<ServerRecover>(&event.action)) {
            halted_.erase(recover->server);
            trace_.emit(tick, TraceKind::ServerRecovered, {{"server", recover->server.str()}});
            record_heartbeat(state_, recover->server, tick, trace_);
            audit(tick, "recover " + recover->server.str());
        }
    }

    void send_heartbeats(Tick tick) {
        for (auto ref : flat_) {
            const auto& id = state_.entry(ref).server;
            if (!halted_.contains(id))
                record_heartbeat(state_, id, tick, trace_);
        }
    }

    void handle_dead(Tick tick) {
        auto dead = detect_dead(state_, tick, trace_);
        metrics_.dead_detected += dead.size();
        for (const auto& id : dead) {
            if (options_.strategy == Strategy::TwoTier) {
                auto report = migrate_dead_jobs(state_, id, tick, trace_, meter_);
                metrics_.migrations += report.moves.size();
                metrics_.orphaned += report.unresolved.size();
            } else {
                migrate_baseline(id, tick);
            }
        }
        // audited once the whole batch is off; servers that died together
        // still hold their jobs until their own migration runs
        if (!dead.empty())
            audit(tick, "dead-server migration");
    }

    void apply_job_event(const SimEvent& event, Tick tick, const std::optional<AssignmentOrder>& order) {
        if (const auto* arrival = std::get_if<JobArrival>(&event.action)) {
            ++metrics_.arrivals;
            live_jobs_.insert(arrival->job.id);
            if (options_.strategy == Strategy::TwoTier) {
                auto result = assign_job(state_, *order, arrival->job, tick, trace_, meter_);
                if (const auto* placed = std::get_if<AssignmentOutcome>(&result)) {
                    auto ref = state_.find_server(placed->server);
                    if (state_.entry(*ref).status == LoadStatus::Uneven)
                        ++metrics_.over_commits;
                }
            } else {
                place_baseline(arrival->job, tick);
            }
            audit(tick, "arrive " + arrival->job.id.str());
        } else if (const auto* done = std::get_if<JobComplete>(&event.action)) {
            if (state_.forget(done->job)) {
                ++metrics_.completions;
                trace_.emit(tick, TraceKind::JobCompleted, {{"job", done->job.str()}});
                state_.refresh_load(tick);
            }
            live_jobs_.erase(done->job);
            audit(tick, "complete " + done->job.str());
        }
    }

    void periodic(Tick tick) {
        ++metrics_.rebalance_cycles;
        if (options_.strategy == Strategy::TwoTier) {
            auto report = rebalance_cycle(state_, tick, trace_, meter_);
            metrics_.moves += report.moves.size();
            metrics_.unresolved += report.unresolved.size();
        } else {
            for (auto& pending : state_.take_pending()) {
                if (!place_baseline(pending.job, tick))
                    ++metrics_.unresolved;
            }
            state_.refresh_load(tick);
        }
        audit(tick, "rebalance");
    }

    std::optional<ServerRef> baseline_target() {
        std::vector<ServerRef> alive;
        for (auto ref : flat_)
            if (!state_.is_dead(ref))
                alive.push_back(ref);
        if (alive.empty())
            return std::nullopt;
        if (options_.strategy == Strategy::Random)
            return alive[draw_below(rng_, alive.size())];
        for (std::size_t step = 0; step < flat_.size(); ++step) {
            auto ref = flat_[(cursor_ + step) % flat_.size()];
            if (!state_.is_dead(ref)) {
                cursor_ = (cursor_ + step + 1) % flat_.size();
                return ref;
            }
        }
        return std::nullopt;
    }

    /// Returns false if the job had to be parked as pending.
    bool place_baseline(const JobSpec& job, Tick tick) {
        auto target = baseline_target();
        if (!target) {
            trace_.emit(tick, TraceKind::JobPending, {{"job", job.id.str()}, {"reason", "no_server"}});
            state_.push_pending({job, PendingReason::NoServer, tick});
            state_.refresh_load(tick);
            return false;
        }
        state_.place(*target, job);
        state_.refresh_load(tick);
        const auto& entry = state_.entry(*target);
        trace_.emit(tick, TraceKind::ServerSelected,
                    {{"cluster", state_.cluster_spec(target->cluster).id.str()},
                     {"job", job.id.str()},
                     {"left", std::to_string(entry.memory_left)},
                     {"server", entry.server.str()}});
        if (entry.status == LoadStatus::Uneven) {
            ++metrics_.over_commits;
            trace_.emit(tick, TraceKind::OverCommit,
                        {{"job", job.id.str()}, {"left", std::to_string(entry.memory_left)}, {"server", entry.server.str()}});
        }
        trace_.emit(tick, TraceKind::ClientHandoff, {{"job", job.id.str()}, {"server", entry.server.str()}});
        return true;
    }

    void migrate_baseline(const ServerId& id, Tick tick) {
        auto ref = *state_.find_server(id);
        auto orphans = state_.entry(ref).jobs;
        for (const auto& job : orphans)
            state_.unplace(ref, job.id);
        for (const auto& job : orphans) {
            auto target = baseline_target();
            if (!target) {
                trace_.emit(tick, TraceKind::JobOrphanedPending, {{"from", id.str()}, {"job", job.id.str()}});
                state_.push_pending({job, PendingReason::Orphaned, tick});
                ++metrics_.orphaned;
                continue;
            }
            state_.place(*target, job);
            ++metrics_.migrations;
            trace_.emit(tick, TraceKind::JobMigrated,
                        {{"from", id.str()}, {"job", job.id.str()}, {"to", state_.entry(*target).server.str()}});
        }
        state_.refresh_load(tick);
    }

    void record_histogram(Tick tick) {
        StatusCounts counts{tick, 0, 0, 0, state_.pending().size()};
        for (auto ref : flat_) {
            if (state_.is_dead(ref))
                ++counts.dead;
            else if (state_.entry(ref).status == LoadStatus::Uneven)
                ++counts.uneven;
            else
                ++counts.even;
        }
        metrics_.histogram.push_back(counts);
    }

    void audit(Tick tick, const std::string& context) {
        if (!options_.audit)
            return;
        auto prefix = "tick " + std::to_string(tick) + " after " + context + ": ";
        for (auto& v : state_.audit())
            metrics_.audit_violations.push_back(prefix + v);
        if (state_.job_count() != live_jobs_.size())
            metrics_.audit_violations.push_back(prefix + std::to_string(live_jobs_.size()) + " live jobs but " +
                                                std::to_string(state_.job_count()) + " tracked");
        for (const auto& id : live_jobs_)
            if (!state_.locate(id))
                metrics_.audit_violations.push_back(prefix + "job " + id.str() + " vanished");
    }

    const Scenario& scenario_;
    RunOptions options_;
    SystemState state_;
    Meter meter_;
    Trace trace_;
    MetricsReport metrics_;
    std::mt19937_64 rng_;
    std::vector<ServerRef> flat_;
    std::size_t cursor_;
    std::set<ServerId> halted_;
    std::unordered_set<JobId> live_jobs_;
};

} // namespace

RunResult run(const Scenario& scenario, const RunOptions& options) {
    auto diagnostics = validate_scenario(scenario);
    if (!diagnostics.empty())
        throw ScenarioError(std::move(diagnostics));
    return Engine(scenario, options).execute();
}

RunResult run_baseline(const Scenario& scenario, Strategy strategy, RunOptions options) {
    options.strategy = strategy;
    return run(scenario, options);
}

} // namespace hetlb
