// matchkit command line: analyze / simulate / stationary / fluid / kidney /
// oracle.  JSON in, JSON + CSV out; every run carries a manifest with input
// digests so regression outputs are diffable.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "matchkit/json_io.hpp"

using namespace matchkit;

namespace {

constexpr const char* kVersion = "matchkit 1.0.0";

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::string tok;
    std::stringstream ss(csv);
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::string tok;
    std::stringstream ss(csv);
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    return out;
}

std::uint64_t seed_or_env(std::optional<std::uint64_t> seed) {
    if (seed) return *seed;
    if (const char* env = std::getenv("MATCHKIT_SEED"))
        return std::strtoull(env, nullptr, 10);
    return 0;
}

struct Emitter {
    std::string command;
    std::vector<std::string> inputs;
    std::uint64_t seed = 0;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void write(const json& result, const std::string& out_path) const {
        double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        json manifest;
        manifest["command"] = command;
        manifest["inputs"] = inputs;
        manifest["seed"] = seed;
        manifest["version"] = kVersion;
        manifest["wall_clock_s"] = wall;
        manifest["output_digest"] = digest_hex(result.dump());
        json envelope;
        envelope["manifest"] = manifest;
        envelope["result"] = result;
        if (out_path.empty() || out_path == "-") {
            std::cout << envelope.dump(2) << std::endl;
        } else {
            std::ofstream out(out_path);
            if (!out) throw input_error("cannot write " + out_path);
            out << envelope.dump(2) << std::endl;
        }
    }
};

void write_csv(const std::string& path, const std::string& text) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw input_error("cannot write " + path);
    out << text;
}

std::string simulation_csv(const RunResult& res) {
    std::ostringstream csv;
    csv << "trajectory,steps_run,cp_fraction,cp_fraction_mod3,mean_queue,"
           "drift_slope,empty_at_end,zero_coords_at_end,diverged\n";
    csv.precision(10);
    for (std::size_t t = 0; t < res.per_trajectory.size(); ++t) {
        const auto& s = res.per_trajectory[t];
        csv << t << ',' << s.steps_run << ',' << s.construction_point_fraction << ','
            << s.cp_fraction_mod3 << ',' << s.mean_total_queue << ',' << s.drift_slope
            << ',' << (s.empty_at_end ? 1 : 0) << ',' << s.zero_coords_at_end << ','
            << (s.diverged ? 1 : 0) << '\n';
    }
    csv << "aggregate,," << res.construction_point_fraction << ','
        << res.cp_fraction_mod3 << ',' << res.mean_total_queue << ','
        << res.mean_drift_slope << ',' << res.empty_at_end_fraction << ','
        << res.mean_zero_coords_at_end << ',' << res.diverged_count << '\n';
    return csv.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic matching models on graphs, multigraphs and "
                 "hypergraphs"};
    app.require_subcommand(1);

    std::string structure_path, measure_path, policy_path, out_path, csv_path;
    std::string case_name, lambda_csv, mu_csv, check_paths;
    std::optional<std::uint64_t> seed_opt;
    long long steps = 1'000'000;
    int trajectories = 200;
    long long burn_in = 0;
    long long state_cap = 100'000;
    int cap = 10;
    int threads = 0;
    int record_up_to = 0;

    auto add_common = [&](CLI::App* cmd, bool needs_measure) {
        cmd->add_option("--structure", structure_path, "structure json file")
            ->required(false);
        if (needs_measure) cmd->add_option("--measure", measure_path, "measure json file");
        cmd->add_option("--out", out_path, "output json path ('-' = stdout)");
        cmd->add_option("--threads", threads, "worker threads (0 = machine)");
        cmd->add_option("--seed", seed_opt, "64-bit seed (MATCHKIT_SEED as fallback)");
    };

    auto* analyze = app.add_subcommand("analyze", "evaluate stability conditions");
    add_common(analyze, true);

    auto* simulate_cmd = app.add_subcommand("simulate", "Monte-Carlo trajectories");
    add_common(simulate_cmd, true);
    simulate_cmd->add_option("--policy", policy_path, "policy json file");
    simulate_cmd->add_option("--steps", steps, "arrivals per trajectory");
    simulate_cmd->add_option("--trajectories", trajectories, "trajectory count");
    simulate_cmd->add_option("--burn-in", burn_in, "steps discarded from statistics");
    simulate_cmd->add_option("--state-cap", state_cap, "divergence threshold (0 = off)");
    simulate_cmd->add_option("--record-up-to", record_up_to,
                             "empirical distribution cap (0 = off)");
    simulate_cmd->add_option("--csv", csv_path, "per-trajectory csv path");

    auto* stationary = app.add_subcommand("stationary",
                                          "fcfm product-form stationary table");
    add_common(stationary, true);
    stationary->add_option("--cap", cap, "word-length cap");
    stationary->add_option("--csv", csv_path, "table csv path");

    auto* fluid_cmd = app.add_subcommand("fluid", "fluid verdict for a case study");
    fluid_cmd->add_option("--case", case_name, "case name")->required();
    fluid_cmd->add_option("--lambda", lambda_csv, "intensities, comma separated")
        ->required();
    fluid_cmd->add_option("--check-paths", check_paths,
                          "scaling levels for the deviation report");
    fluid_cmd->add_option("--out", out_path, "output json path");
    fluid_cmd->add_option("--csv", csv_path, "deviation csv path");
    fluid_cmd->add_option("--seed", seed_opt, "seed for the path check");

    auto* kidney = app.add_subcommand("kidney", "pairwise vs triplet comparison row");
    kidney->add_option("--mu", mu_csv, "four class probabilities")->required();
    kidney->add_option("--steps", steps, "arrivals per trajectory");
    kidney->add_option("--trajectories", trajectories, "trajectory count");
    kidney->add_option("--threads", threads, "worker threads");
    kidney->add_option("--seed", seed_opt, "seed");
    kidney->add_option("--out", out_path, "output json path");
    kidney->add_option("--csv", csv_path, "per-trajectory csv path");

    auto* oracle_cmd = app.add_subcommand("oracle", "truncated stationary solve");
    add_common(oracle_cmd, true);
    oracle_cmd->add_option("--policy", policy_path, "policy json file");
    oracle_cmd->add_option("--cap", cap, "truncation cap");
    oracle_cmd->add_option("--csv", csv_path, "table csv path");

    auto* lyap = app.add_subcommand("lyapunov", "drift coefficients for incomplete "
                                                "3-uniform structures");
    add_common(lyap, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1; // usage error
    }

    Emitter emit;
    emit.seed = seed_or_env(seed_opt);

    try {
        if (*analyze || *simulate_cmd || *stationary || *oracle_cmd || *lyap) {
            if (structure_path.empty())
                throw input_error("--structure is required");
            if (measure_path.empty())
                throw input_error("--measure is required");
        }

        if (*analyze) {
            emit.command = "analyze";
            emit.inputs = {structure_path, measure_path};
            auto s = structure_from_json(load_json(structure_path));
            auto m = measure_from_json(load_json(measure_path), s);
            Measure mu = m.mode() == MeasureMode::probability ? m : m.normalized();

            json reports = json::array();
            if (!s.is_hypergraph()) {
                if (m.mode() == MeasureMode::intensity)
                    reports.push_back(condition_report_to_json(in_ncond_c(s, m), s));
                reports.push_back(condition_report_to_json(in_ncond(s, mu), s));
            }
            reports.push_back(
                condition_report_to_json(in_n1_family(s, mu, N1Variant::n1), s));
            reports.push_back(
                condition_report_to_json(in_n1_family(s, mu, N1Variant::n1_plus), s));
            reports.push_back(condition_report_to_json(
                in_n1_family(s, mu, N1Variant::n1_plus_plus), s));
            reports.push_back(condition_report_to_json(in_n2(s, mu), s));
            bool uniform_rank = rank_antirank(s).uniform;
            reports.push_back(
                condition_report_to_json(in_n3(s, mu, uniform_rank), s));
            reports.push_back(condition_report_to_json(hall_instability(s, mu), s));

            json result;
            result["reports"] = reports;
            result["findings"] = findings_to_json(classify_nonstabilizable(s), s);
            emit.write(result, out_path);
        } else if (*simulate_cmd) {
            emit.command = "simulate";
            emit.inputs = {structure_path, measure_path};
            auto s = structure_from_json(load_json(structure_path));
            auto m = measure_from_json(load_json(measure_path), s);
            PolicySpec pol = PolicySpec::match_longest();
            if (!policy_path.empty()) {
                pol = policy_from_json(load_json(policy_path), s);
                emit.inputs.push_back(policy_path);
            }
            SimConfig cfg;
            cfg.steps = steps;
            cfg.trajectories = trajectories;
            cfg.seed = emit.seed;
            cfg.burn_in = burn_in;
            cfg.state_cap = state_cap;
            cfg.record_empirical_up_to = record_up_to;
            cfg.threads = threads;
            auto res = run(s, pol, m, cfg);
            write_csv(csv_path, simulation_csv(res));
            emit.write(run_result_to_json(res), out_path);
        } else if (*stationary) {
            emit.command = "stationary";
            emit.inputs = {structure_path, measure_path};
            auto s = structure_from_json(load_json(structure_path));
            auto m = measure_from_json(load_json(measure_path), s);
            Measure mu = m.mode() == MeasureMode::probability ? m : m.normalized();
            auto table = fcfm_stationary_table(s, mu, cap);
            std::ostringstream csv;
            csv.precision(12);
            csv << "state,probability\n";
            for (const auto& [k, v] : table.entries) csv << '"' << k << "\"," << v << '\n';
            write_csv(csv_path, csv.str());
            emit.write(stationary_table_to_json(table), out_path);
        } else if (*fluid_cmd) {
            emit.command = "fluid";
            emit.inputs = {case_name, lambda_csv};
            auto lam = Measure::intensity(parse_list(lambda_csv));
            auto which = fluid_case_from_name(case_name);
            auto verdict = fluid_verdict(which, lam);
            json result = fluid_verdict_to_json(verdict);
            if (!check_paths.empty()) {
                auto devs = scaled_path_check(which, lam, parse_int_list(check_paths),
                                              emit.seed);
                json jd = json::array();
                std::ostringstream csv;
                csv << "n,sup_deviation,rho,horizon\n";
                csv.precision(10);
                for (const auto& d : devs) {
                    jd.push_back({{"n", d.n},
                                  {"sup_deviation", d.sup_deviation},
                                  {"rho", d.rho},
                                  {"horizon", d.horizon}});
                    csv << d.n << ',' << d.sup_deviation << ',' << d.rho << ','
                        << d.horizon << '\n';
                }
                result["path_deviations"] = jd;
                write_csv(csv_path, csv.str());
            }
            emit.write(result, out_path);
        } else if (*kidney) {
            emit.command = "kidney";
            emit.inputs = {mu_csv};
            auto mu = Measure::probability(parse_list(mu_csv));
            SimConfig cfg;
            cfg.steps = steps;
            cfg.trajectories = trajectories;
            cfg.seed = emit.seed;
            cfg.threads = threads;
            auto row = kidney_compare(mu, cfg);
            if (!csv_path.empty()) {
                // re-run shape: per-trajectory rows come from the same engine
                MatchingStructure h({"1", "2", "3", "4"},
                                    {{"1", "2", "3"}, {"1", "2", "4"},
                                     {"1", "3", "4"}, {"2", "3", "4"}});
                SimConfig c2 = cfg;
                c2.eb_check_step = row.eb_step;
                auto res = run(h, PolicySpec::match_longest(), mu, c2);
                write_csv(csv_path, simulation_csv(res));
            }
            emit.write(kidney_row_to_json(row), out_path);
        } else if (*oracle_cmd) {
            emit.command = "oracle";
            emit.inputs = {structure_path, measure_path};
            auto s = structure_from_json(load_json(structure_path));
            auto m = measure_from_json(load_json(measure_path), s);
            Measure mu = m.mode() == MeasureMode::probability ? m : m.normalized();
            PolicySpec pol = PolicySpec::fcfm();
            if (!policy_path.empty()) {
                pol = policy_from_json(load_json(policy_path), s);
                emit.inputs.push_back(policy_path);
            }
            OracleResult res = pol.word_only()
                                   ? truncated_stationary_word(s, pol, mu, cap)
                                   : truncated_stationary_class(s, pol, mu, cap);
            std::ostringstream csv;
            csv.precision(12);
            csv << "state,probability\n";
            for (std::size_t i = 0; i < res.states.size(); ++i)
                csv << '"' << res.states[i] << "\"," << res.pi[i] << '\n';
            write_csv(csv_path, csv.str());
            emit.write(oracle_result_to_json(res), out_path);
        } else if (*lyap) {
            emit.command = "lyapunov";
            emit.inputs = {structure_path, measure_path};
            auto s = structure_from_json(load_json(structure_path));
            auto m = measure_from_json(load_json(measure_path), s);
            Measure mu = m.mode() == MeasureMode::probability ? m : m.normalized();
            emit.write(lyapunov_table_to_json(lyapunov_coefficients(s, mu)), out_path);
        }
    } catch (const numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << std::endl;
        return 3;
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << std::endl;
        return 2;
    } catch (const unsupported_kind_error& e) {
        std::cerr << "unsupported structure kind: " << e.what() << std::endl;
        return 2;
    } catch (const model_error& e) {
        std::cerr << "model error: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
