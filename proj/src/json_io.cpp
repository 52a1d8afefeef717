#include "matchkit/json_io.hpp"

#include <cmath>

namespace matchkit {

MatchingStructure structure_from_json(const json& j) {
    if (!j.is_object() || !j.contains("nodes") || !j.contains("edges"))
        throw input_error("structure json needs 'nodes' and 'edges'");
    std::vector<std::string> nodes;
    for (const auto& n : j.at("nodes")) {
        if (n.is_string())
            nodes.push_back(n.get<std::string>());
        else
            nodes.push_back(n.dump());
    }
    std::vector<std::vector<std::string>> edges;
    for (const auto& e : j.at("edges")) {
        std::vector<std::string> edge;
        for (const auto& n : e) {
            if (n.is_string())
                edge.push_back(n.get<std::string>());
            else
                edge.push_back(n.dump());
        }
        edges.push_back(edge);
    }
    return MatchingStructure(std::move(nodes), std::move(edges));
}

json structure_to_json(const MatchingStructure& s) {
    json j;
    j["nodes"] = s.node_names();
    json edges = json::array();
    for (int e = 0; e < s.edge_count(); ++e) edges.push_back(s.set_names(s.edge(e)));
    j["edges"] = edges;
    j["kind"] = s.is_graph() ? "graph" : (s.is_hypergraph() ? "hypergraph" : "multigraph");
    return j;
}

Measure measure_from_json(const json& j, const MatchingStructure& s) {
    if (!j.is_object()) throw input_error("measure json must be an object");
    MeasureMode mode = MeasureMode::probability;
    if (j.contains("mode")) {
        std::string m = j.at("mode").get<std::string>();
        if (m == "probability")
            mode = MeasureMode::probability;
        else if (m == "intensity")
            mode = MeasureMode::intensity;
        else
            throw input_error("measure mode must be 'probability' or 'intensity'");
    }
    const json& weights = j.contains("weights") ? j.at("weights") : j;
    std::vector<double> w(s.order(), -1.0);
    for (const auto& [key, val] : weights.items()) {
        if (key == "mode" || key == "weights") continue;
        w[s.index_of(key)] = val.get<double>();
    }
    for (int i = 0; i < s.order(); ++i)
        if (w[i] < 0)
            throw input_error("measure misses node " + s.name_of(i));
    return Measure(std::move(w), mode);
}

json measure_to_json(const Measure& m, const MatchingStructure& s) {
    json weights;
    for (int i = 0; i < s.order(); ++i) weights[s.name_of(i)] = m(i);
    json j;
    j["mode"] = m.mode() == MeasureMode::probability ? "probability" : "intensity";
    j["weights"] = weights;
    return j;
}

PolicySpec policy_from_json(const json& j, const MatchingStructure& s) {
    if (!j.is_object() || !j.contains("type"))
        throw input_error("policy json needs a 'type'");
    std::string type = j.at("type").get<std::string>();
    if (type == "fcfm") return PolicySpec::fcfm();
    if (type == "lcfm") return PolicySpec::lcfm();
    if (type == "random") return PolicySpec::random();
    if (type == "match_longest" || type == "ml") return PolicySpec::match_longest();
    if (type == "match_shortest" || type == "ms") return PolicySpec::match_shortest();
    if (type == "priority") {
        std::map<std::string, std::vector<int>> orders;
        if (j.contains("orders"))
            for (const auto& [node, order] : j.at("orders").items())
                orders[node] = order.get<std::vector<int>>();
        return PolicySpec::priority(std::move(orders));
    }
    if (type == "max_weight") {
        double beta = j.value("beta", 0.0);
        std::vector<double> rewards(s.edge_count(), 0.0);
        if (j.contains("rewards")) {
            for (const auto& [key, val] : j.at("rewards").items()) {
                // edge key: comma-joined node names
                std::vector<std::string> names;
                std::string tok;
                for (char c : key + ",") {
                    if (c == ',') {
                        names.push_back(tok);
                        tok.clear();
                    } else {
                        tok += c;
                    }
                }
                NodeSet want = s.set_from_names(names);
                bool found = false;
                for (int e = 0; e < s.edge_count(); ++e)
                    if (s.edge(e) == want) {
                        rewards[e] = val.get<double>();
                        found = true;
                    }
                if (!found) throw input_error("reward names unknown edge: " + key);
            }
        }
        return PolicySpec::max_weight(beta, std::move(rewards));
    }
    if (type == "v2_favorable") {
        if (!j.contains("inner"))
            throw input_error("v2_favorable needs an 'inner' policy");
        return PolicySpec::v2_favorable(policy_from_json(j.at("inner"), s));
    }
    throw input_error("unknown policy type: " + type);
}

json policy_to_json(const PolicySpec& p, const MatchingStructure& s) {
    json j;
    switch (p.variant) {
    case PolicyVariant::fcfm: j["type"] = "fcfm"; break;
    case PolicyVariant::lcfm: j["type"] = "lcfm"; break;
    case PolicyVariant::random_policy: j["type"] = "random"; break;
    case PolicyVariant::match_longest: j["type"] = "match_longest"; break;
    case PolicyVariant::match_shortest: j["type"] = "match_shortest"; break;
    case PolicyVariant::priority:
        j["type"] = "priority";
        for (const auto& [node, order] : p.priority_orders) j["orders"][node] = order;
        break;
    case PolicyVariant::max_weight: {
        j["type"] = "max_weight";
        j["beta"] = p.beta;
        json rewards;
        for (int e = 0; e < s.edge_count(); ++e) {
            std::string key;
            for (const auto& n : s.set_names(s.edge(e))) {
                if (!key.empty()) key += ",";
                key += n;
            }
            rewards[key] = p.rewards.empty() ? 0.0 : p.rewards[e];
        }
        j["rewards"] = rewards;
        break;
    }
    case PolicyVariant::v2_favorable:
        j["type"] = "v2_favorable";
        if (p.inner) j["inner"] = policy_to_json(*p.inner, s);
        break;
    }
    return j;
}

json condition_report_to_json(const ConditionReport& r, const MatchingStructure& s) {
    json j;
    j["condition"] = r.condition;
    j["holds"] = r.holds;
    j["boundary"] = r.boundary;
    j["margin"] = r.margin;
    if (!r.witness.empty()) {
        json w = json::array();
        for (NodeSet set : r.witness) w.push_back(s.set_names(set));
        j["witness"] = w;
    }
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

json findings_to_json(const std::vector<NonStabFinding>& f, const MatchingStructure& s) {
    json out = json::array();
    for (const auto& finding : f) {
        json j;
        switch (finding.kind) {
        case NonStabKind::isolated_pair_in_edge: j["kind"] = "isolated_pair_in_edge"; break;
        case NonStabKind::uniform_star: j["kind"] = "uniform_star"; break;
        case NonStabKind::degree_one_cover: j["kind"] = "degree_one_cover"; break;
        case NonStabKind::uniform_bipartite: j["kind"] = "uniform_bipartite"; break;
        case NonStabKind::r_partite: j["kind"] = "r_partite"; break;
        case NonStabKind::uniform_cycle: j["kind"] = "uniform_cycle"; break;
        case NonStabKind::fano_conjecture: j["kind"] = "fano_conjecture"; break;
        }
        j["description"] = finding.description;
        json ws = json::array();
        for (NodeSet set : finding.witness_sets) ws.push_back(s.set_names(set));
        j["witness_sets"] = ws;
        if (!finding.witness_edges.empty()) {
            json we = json::array();
            for (int e : finding.witness_edges) we.push_back(s.set_names(s.edge(e)));
            j["witness_edges"] = we;
        }
        out.push_back(j);
    }
    return out;
}

json stationary_table_to_json(const StationaryTable& t) {
    json entries;
    for (const auto& [k, v] : t.entries) entries[k] = v;
    json j;
    j["entries"] = entries;
    j["alpha"] = t.normalizer;
    j["truncated_mass"] = t.truncated_mass;
    j["note"] = t.note;
    return j;
}

json oracle_result_to_json(const OracleResult& r) {
    json entries;
    for (std::size_t i = 0; i < r.states.size(); ++i) entries[r.states[i]] = r.pi[i];
    json j;
    j["entries"] = entries;
    j["sink_mass"] = r.sink_mass;
    j["state_count"] = r.state_count;
    j["note"] = r.truncation_note;
    return j;
}

json trajectory_to_json(const TrajectoryStats& t) {
    json j;
    j["construction_point_fraction"] = t.construction_point_fraction;
    j["cp_fraction_mod3"] = t.cp_fraction_mod3;
    j["mean_total_queue"] = t.mean_total_queue;
    j["drift_slope"] = t.drift_slope;
    j["zero_coords_at_end"] = t.zero_coords_at_end;
    j["empty_at_end"] = t.empty_at_end;
    j["diverged"] = t.diverged;
    j["steps_run"] = t.steps_run;
    if (!t.empirical.empty()) j["empirical"] = t.empirical;
    return j;
}

json run_result_to_json(const RunResult& r) {
    json j;
    j["construction_point_fraction"] = r.construction_point_fraction;
    j["cp_fraction_mod3"] = r.cp_fraction_mod3;
    j["mean_total_queue"] = r.mean_total_queue;
    j["mean_drift_slope"] = r.mean_drift_slope;
    j["empty_at_end_fraction"] = r.empty_at_end_fraction;
    j["mean_zero_coords_at_end"] = r.mean_zero_coords_at_end;
    j["diverged_count"] = r.diverged_count;
    j["trajectories"] = r.per_trajectory.size();
    if (!r.empirical.empty()) j["empirical"] = r.empirical;
    return j;
}

json kidney_row_to_json(const KidneyRow& row) {
    json j;
    j["mu"] = row.mu;
    j["trajectorial_average"] = row.trajectorial_average;
    j["av_eb"] = row.av_eb;
    j["cp_fraction_mod3"] = row.cp_fraction_mod3;
    j["eb_step"] = row.eb_step;
    j["pi0_two_by_two"] = row.pi0_two_by_two;
    j["two_by_two_stable"] = row.two_by_two_stable;
    j["three_by_three_stable"] = row.three_by_three_stable;
    j["diverged_count"] = row.diverged_count;
    j["note"] = row.note;
    return j;
}

json fluid_verdict_to_json(const FluidVerdict& v) {
    json j;
    j["case"] = fluid_case_name(v.which);
    j["i0"] = v.i0;
    j["drift"] = v.drift;
    j["rho"] = std::isfinite(v.rho) ? json(v.rho) : json("inf");
    switch (v.stable) {
    case FluidStability::stable: j["stable"] = "stable"; break;
    case FluidStability::unstable: j["stable"] = "unstable"; break;
    case FluidStability::boundary: j["stable"] = "boundary"; break;
    }
    j["ncond_c_holds"] = v.ncond_c.holds;
    j["ncond_c_margin"] = v.ncond_c.margin;
    j["extra_margin"] = v.extra_margin;
    j["alpha_constants"] = v.alpha_constants;
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

json lyapunov_table_to_json(const LyapunovTable& t) {
    json j;
    j["q"] = t.q;
    json lam, nu;
    for (const auto& [k, v] : t.lambda_i)
        lam[k] = {{"slope", v.first}, {"intercept", v.second}};
    for (const auto& [k, v] : t.nu_i)
        nu[k] = {{"slope", v.first}, {"intercept", v.second}};
    j["lambda_i"] = lam;
    j["nu_i"] = nu;
    j["lambda_ij"] = t.lambda_ij;
    j["nu_ij"] = t.nu_ij;
    j["alpha_major"] = t.alpha_major;
    j["alpha_minor"] = t.alpha_minor;
    j["ratio"] = t.ratio;
    j["ratio_bound"] = t.ratio_bound;
    j["n2"] = t.n2;
    j["n3_strict"] = t.n3_strict;
    j["in_s"] = t.in_s;
    j["in_s1"] = t.in_s1;
    j["note"] = t.note;
    return j;
}

std::string digest_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

} // namespace matchkit
