#include "matchkit/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <unordered_map>

#include "matchkit/product_form.hpp"

namespace matchkit {

namespace {

// waiting items removed by a match: the whole edge minus the arrival, and
// one item for a self-loop
long long removed_items(const MatchingStructure& s, int e) {
    int sz = s.edge(e).size();
    return sz == 1 ? 1 : sz - 1;
}

int sample_class(const std::vector<double>& cum, CounterRng& rng) {
    double u = rng.next_double();
    int lo = 0;
    while (u >= cum[lo]) ++lo;
    return lo;
}

// packs a short state into a hashable word: 4 bits per coordinate/letter
std::uint64_t pack_counts(const std::vector<int>& x) {
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        key |= static_cast<std::uint64_t>(x[i] & 0xF) << (4 * i);
    return key;
}

std::uint64_t pack_word(const std::vector<std::uint8_t>& letters) {
    std::uint64_t key = 1; // leading sentinel keeps lengths distinct
    for (auto l : letters) key = (key << 4) | (l & 0xF);
    return key;
}

TrajectoryStats run_one(const MatchingStructure& s, const PolicyEngine& engine,
                        const Measure& mu, const SimConfig& cfg, int index,
                        bool word_state) {
    TrajectoryStats st;
    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(index));

    std::vector<double> cum(mu.dim());
    double acc = 0;
    for (int i = 0; i < mu.dim(); ++i) {
        acc += mu(i);
        cum[i] = acc;
    }
    cum.back() = 1.0 + 1e-9;

    std::vector<int> x(s.order(), 0);
    QueueDetail w;
    long long total = 0;
    long long cp = 0, cp3 = 0, mod3_count = 0;
    double queue_sum = 0;
    // streaming least squares of |X_n| against n
    double sn = 0, mean_t = 0, mean_y = 0, c_tt = 0, c_ty = 0;

    long long eb_step = cfg.eb_check_step > 0 ? std::min(cfg.eb_check_step, cfg.steps)
                                              : cfg.steps;
    std::unordered_map<std::uint64_t, long long> emp;
    long long emp_total = 0;

    long long n = 0;
    for (n = 1; n <= cfg.steps; ++n) {
        int v = sample_class(cum, rng);
        std::optional<int> match;
        if (word_state)
            match = engine.step_word(w, v, rng, &x);
        else
            match = engine.step_class(x, v, rng);
        if (match) {
            total -= removed_items(s, *match);
        } else {
            total += 1;
        }

        if (n > cfg.burn_in) {
            if (total == 0) {
                ++cp;
                if (n % 3 == 0) ++cp3;
            }
            if (n % 3 == 0) ++mod3_count;
            queue_sum += static_cast<double>(total);
            if (cfg.record_empirical_up_to > 0) {
                ++emp_total;
                if (word_state) {
                    if (w.length() <= cfg.record_empirical_up_to)
                        ++emp[pack_word(w.letters)];
                } else if (total <= cfg.record_empirical_up_to) {
                    ++emp[pack_counts(x)];
                }
            }
        }
        // slope over the whole trajectory (Welford-style covariance)
        sn += 1;
        double dt = static_cast<double>(n) - mean_t;
        mean_t += dt / sn;
        c_tt += dt * (static_cast<double>(n) - mean_t);
        double y = static_cast<double>(total);
        double dy = y - mean_y;
        mean_y += dy / sn;
        c_ty += dt * (y - mean_y);

        if (n == eb_step) {
            st.empty_at_end = (total == 0);
            st.zero_coords_at_end = 0;
            for (int c : x)
                if (c == 0) ++st.zero_coords_at_end;
        }
        if (cfg.state_cap > 0 && total > cfg.state_cap) {
            st.diverged = true;
            break;
        }
    }
    st.steps_run = std::min(n, cfg.steps);
    long long window = std::max<long long>(1, st.steps_run - cfg.burn_in);
    st.construction_point_fraction = static_cast<double>(cp) / static_cast<double>(window);
    st.cp_fraction_mod3 =
        mod3_count > 0 ? static_cast<double>(cp3) / static_cast<double>(mod3_count) : 0.0;
    st.mean_total_queue = queue_sum / static_cast<double>(window);
    st.drift_slope = (c_tt > 0) ? c_ty / c_tt : 0.0;
    if (st.diverged && st.steps_run < eb_step) {
        st.empty_at_end = false;
        st.zero_coords_at_end = 0;
        for (int c : x)
            if (c == 0) ++st.zero_coords_at_end;
    }

    if (cfg.record_empirical_up_to > 0 && emp_total > 0) {
        for (const auto& [key, count] : emp) {
            std::string label;
            if (word_state) {
                std::vector<std::uint8_t> letters;
                std::uint64_t k = key;
                while (k != 1) {
                    letters.push_back(static_cast<std::uint8_t>(k & 0xF));
                    k >>= 4;
                }
                std::reverse(letters.begin(), letters.end());
                QueueDetail qd;
                qd.letters = letters;
                label = letters.empty() ? "-" : qd.to_string(s);
            } else {
                std::vector<int> counts(s.order());
                for (int i = 0; i < s.order(); ++i)
                    counts[i] = static_cast<int>((key >> (4 * i)) & 0xF);
                std::string c;
                for (int i = 0; i < s.order(); ++i) {
                    if (i) c += ',';
                    c += std::to_string(counts[i]);
                }
                label = c;
            }
            st.empirical[label] = static_cast<double>(count) / static_cast<double>(emp_total);
        }
    }
    return st;
}

} // namespace

RunResult run(const MatchingStructure& s, const PolicySpec& policy,
              const Measure& m, const SimConfig& cfg) {
    if (cfg.steps <= 0 || cfg.trajectories <= 0)
        throw input_error("steps and trajectories must be positive");
    if (cfg.burn_in >= cfg.steps)
        throw input_error("burn_in must be smaller than steps");
    Measure mu = (m.mode() == MeasureMode::probability) ? m : m.normalized();
    if (mu.dim() != s.order())
        throw input_error("measure dimension does not match structure order");
    if (s.order() > 16 || (cfg.record_empirical_up_to > 0 && cfg.record_empirical_up_to > 15))
        throw input_error("empirical recording supports up to 16 classes / length 15");

    PolicyEngine engine(s, policy);
    bool word_state = engine.word_only_selection();

    RunResult out;
    out.per_trajectory.resize(cfg.trajectories);

    int threads = cfg.threads > 0
                      ? cfg.threads
                      : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, cfg.trajectories));

    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            int t = next.fetch_add(1);
            if (t >= cfg.trajectories) return;
            out.per_trajectory[t] = run_one(s, engine, mu, cfg, t, word_state);
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    double n = cfg.trajectories;
    for (const auto& t : out.per_trajectory) {
        out.construction_point_fraction += t.construction_point_fraction / n;
        out.cp_fraction_mod3 += t.cp_fraction_mod3 / n;
        out.mean_total_queue += t.mean_total_queue / n;
        out.mean_drift_slope += t.drift_slope / n;
        out.empty_at_end_fraction += (t.empty_at_end ? 1.0 : 0.0) / n;
        out.mean_zero_coords_at_end += t.zero_coords_at_end / n;
        if (t.diverged) ++out.diverged_count;
        for (const auto& [k, v] : t.empirical) out.empirical[k] += v / n;
    }
    return out;
}

KidneyRow kidney_compare(const Measure& m, const SimConfig& cfg) {
    Measure mu = (m.mode() == MeasureMode::probability) ? m : m.normalized();
    if (mu.dim() != 4) throw input_error("the comparison runs on 4 classes");

    MatchingStructure h({"1", "2", "3", "4"},
                        {{"1", "2", "3"}, {"1", "2", "4"}, {"1", "3", "4"},
                         {"2", "3", "4"}});
    SimConfig c = cfg;
    c.eb_check_step = (cfg.steps / 3) * 3; // the chain is empty only at multiples of 3
    auto res = run(h, PolicySpec::match_longest(), mu, c);

    KidneyRow row;
    row.mu = mu.weights();
    row.trajectorial_average = res.construction_point_fraction;
    row.av_eb = res.empty_at_end_fraction;
    row.cp_fraction_mod3 = res.cp_fraction_mod3;
    row.eb_step = c.eb_check_step;
    row.diverged_count = res.diverged_count;
    row.three_by_three_stable = true;
    for (int i = 0; i < 4; ++i)
        if (mu(i) >= 1.0 / 3) row.three_by_three_stable = false;
    row.two_by_two_stable = three_partite_in_ncond(mu);
    double alpha = three_partite_alpha(mu);
    row.pi0_two_by_two = row.two_by_two_stable ? alpha : std::max(0.0, alpha);
    row.note = row.two_by_two_stable
                   ? "three-by-three chain is 3-periodic: the empty-buffer "
                     "snapshot sits on a multiple of 3"
                   : "pairwise model outside its stability region; closed form "
                     "clamped at 0";
    return row;
}

ReturnTimeStats estimate_return_time(const MatchingStructure& s,
                                     const PolicySpec& policy, const Measure& m,
                                     const SimConfig& cfg) {
    Measure mu = (m.mode() == MeasureMode::probability) ? m : m.normalized();
    if (mu.dim() != s.order())
        throw input_error("measure dimension does not match structure order");

    PolicyEngine engine(s, policy);
    bool word_state = engine.word_only_selection();
    CounterRng rng(cfg.seed, 0x52455455524eull); // dedicated stream

    std::vector<double> cum(mu.dim());
    double acc = 0;
    for (int i = 0; i < mu.dim(); ++i) {
        acc += mu(i);
        cum[i] = acc;
    }
    cum.back() = 1.0 + 1e-9;

    std::vector<int> x(s.order(), 0);
    QueueDetail w;
    long long total = 0;
    long long last_zero = 0;
    ReturnTimeStats st;
    double gap_sum = 0;
    for (long long n = 1; n <= cfg.steps; ++n) {
        int v = sample_class(cum, rng);
        std::optional<int> match;
        if (word_state)
            match = engine.step_word(w, v, rng, &x);
        else
            match = engine.step_class(x, v, rng);
        total += match ? -removed_items(s, *match) : 1;
        if (total == 0) {
            gap_sum += static_cast<double>(n - last_zero);
            last_zero = n;
            ++st.returns;
        }
        if (cfg.state_cap > 0 && total > cfg.state_cap) {
            st.diverged = true;
            break;
        }
    }
    if (st.returns == 0)
        st.diverged = true;
    else
        st.mean_return_time = gap_sum / static_cast<double>(st.returns);
    return st;
}

void simulate_ctmc_path(const MatchingStructure& s, const PolicySpec& policy,
                        const Measure& lam, std::vector<int> x0, double t_end,
                        CounterRng& rng,
                        const std::function<void(double, const std::vector<int>&)>& on_event) {
    if (lam.mode() != MeasureMode::intensity)
        throw input_error("continuous-time paths take intensity vectors");
    if (lam.dim() != s.order() || static_cast<int>(x0.size()) != s.order())
        throw input_error("dimension mismatch");
    PolicyEngine engine(s, policy);
    if (engine.word_only_selection())
        throw input_error("continuous-time paths need a class-admissible policy");

    double total_rate = lam.total();
    Measure mu = lam.normalized();
    std::vector<double> cum(mu.dim());
    double acc = 0;
    for (int i = 0; i < mu.dim(); ++i) {
        acc += mu(i);
        cum[i] = acc;
    }
    cum.back() = 1.0 + 1e-9;

    std::vector<int> x = std::move(x0);
    double t = 0;
    on_event(0.0, x);
    for (;;) {
        t += -std::log1p(-rng.next_double()) / total_rate;
        if (t > t_end) return;
        int v = sample_class(cum, rng);
        engine.step_class(x, v, rng);
        on_event(t, x);
    }
}

} // namespace matchkit
