#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "matchkit/measure.hpp"
#include "matchkit/policy.hpp"
#include "matchkit/structure.hpp"

namespace matchkit {

struct SimConfig {
    long long steps = 1'000'000;
    int trajectories = 200;
    std::uint64_t seed = 0;
    long long burn_in = 0;
    long long state_cap = 100'000; // abort threshold for runaway queues; 0 = off
    int record_empirical_up_to = 0; // word-length / total-count cap; 0 = off
    int threads = 0;                // 0 = hardware parallelism
    long long eb_check_step = 0;    // step of the empty-buffer snapshot; 0 = last
};

struct TrajectoryStats {
    double construction_point_fraction = 0; // steps with X_n = 0, n counted from 1
    double cp_fraction_mod3 = 0;            // restricted to times divisible by 3
    double mean_total_queue = 0;
    double drift_slope = 0;                 // least-squares slope of |X_n| vs n
    int zero_coords_at_end = 0;
    bool empty_at_end = false;
    bool diverged = false;
    long long steps_run = 0;
    std::map<std::string, double> empirical; // state key -> fraction of time
};

struct RunResult {
    std::vector<TrajectoryStats> per_trajectory;
    // aggregates: plain means over trajectories
    double construction_point_fraction = 0;
    double cp_fraction_mod3 = 0;
    double mean_total_queue = 0;
    double mean_drift_slope = 0;
    double empty_at_end_fraction = 0;
    double mean_zero_coords_at_end = 0;
    int diverged_count = 0;
    std::map<std::string, double> empirical;
};

// Monte-Carlo run of the discrete-time chain.  Intensity measures are
// embedded first.  Deterministic for a fixed seed, independent of the
// thread count (trajectory t draws from stream hash(seed, t)).
RunResult run(const MatchingStructure& s, const PolicySpec& policy,
              const Measure& m, const SimConfig& cfg);

struct KidneyRow {
    std::vector<double> mu;
    double trajectorial_average = 0; // construction points over all steps
    double av_eb = 0;                // fraction of trajectories empty at the snapshot
    double cp_fraction_mod3 = 0;
    long long eb_step = 0;
    double pi0_two_by_two = 0;       // closed form of the pairwise model
    bool two_by_two_stable = false;
    bool three_by_three_stable = false;
    int diverged_count = 0;
    std::string note;
};

// The organ-exchange comparison: simulates the three-by-three model
// (complete 3-uniform of order 4) and pairs it with the closed-form empty
// probability of the two-by-two graph.  The three-by-three chain is
// 3-periodic, so the snapshot lands on the largest multiple of 3 <= steps.
KidneyRow kidney_compare(const Measure& m, const SimConfig& cfg);

struct ReturnTimeStats {
    double mean_return_time = 0;
    long long returns = 0;
    bool diverged = false;
};

// Empirical positive-recurrence probe: inter-visit times of the zero state.
ReturnTimeStats estimate_return_time(const MatchingStructure& s,
                                     const PolicySpec& policy, const Measure& m,
                                     const SimConfig& cfg);

// One continuous-time path: Poisson arrivals with the given intensities,
// matched by the policy.  The callback sees (time, counts) after every
// event; simulation stops at t_end.
void simulate_ctmc_path(const MatchingStructure& s, const PolicySpec& policy,
                        const Measure& lam, std::vector<int> x0, double t_end,
                        CounterRng& rng,
                        const std::function<void(double, const std::vector<int>&)>& on_event);

} // namespace matchkit
