#include "matchkit/fluid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "matchkit/simulate.hpp"

namespace matchkit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

StationaryTable marginal_stationary(const MarginalChain& mc) {
    double inv = 1.0;
    for (const auto& b : mc.branches) {
        if (!(b.birth > 0) || !(b.death > 0))
            throw input_error("branch rates must be positive");
        double r = b.birth / b.death;
        if (b.max_length < 0) {
            if (r >= 1.0)
                throw model_error("branch '" + b.label +
                                  "' is supercritical: no stationary law");
            inv += r / (1 - r);
        } else {
            double rp = r;
            for (int i = 1; i <= b.max_length; ++i) {
                inv += rp;
                rp *= r;
            }
        }
    }
    double origin = 1.0 / inv;

    StationaryTable t;
    t.normalizer = origin;
    t.entries.emplace_back("origin", origin);
    double total = origin;
    for (const auto& b : mc.branches) {
        double r = b.birth / b.death;
        int limit = b.max_length >= 0 ? b.max_length : 400;
        double p = origin;
        for (int i = 1; i <= limit; ++i) {
            p *= r;
            if (p < 1e-16 && b.max_length < 0) break;
            t.entries.emplace_back(b.label + ":" + std::to_string(i), p);
            total += p;
        }
    }
    t.truncated_mass = std::max(0.0, 1 - total);
    t.note = "star of half-lines; geometric branches";
    return t;
}

double marginal_origin_probability(const MarginalChain& mc) {
    return marginal_stationary(mc).normalizer;
}

FluidCase fluid_case_from_name(const std::string& name) {
    if (name == "pendant_loop2") return FluidCase::pendant_loop2;
    if (name == "pendant_loop3") return FluidCase::pendant_loop3;
    if (name == "bip3_loop2") return FluidCase::bip3_loop2;
    if (name == "bip4_loop1") return FluidCase::bip4_loop1;
    if (name == "bip4_loop1_v2fav") return FluidCase::bip4_loop1_v2fav;
    if (name == "complete_3uniform_4") return FluidCase::complete_3uniform_4;
    throw input_error("unknown fluid case: " + name);
}

std::string fluid_case_name(FluidCase c) {
    switch (c) {
    case FluidCase::pendant_loop2: return "pendant_loop2";
    case FluidCase::pendant_loop3: return "pendant_loop3";
    case FluidCase::bip3_loop2: return "bip3_loop2";
    case FluidCase::bip4_loop1: return "bip4_loop1";
    case FluidCase::bip4_loop1_v2fav: return "bip4_loop1_v2fav";
    case FluidCase::complete_3uniform_4: return "complete_3uniform_4";
    }
    return "?";
}

FluidCaseModel fluid_case_model(FluidCase c) {
    switch (c) {
    case FluidCase::pendant_loop2: {
        MatchingStructure g({"1", "2", "3", "4"},
                            {{"1", "2"}, {"2"}, {"2", "3"}, {"2", "4"}, {"3", "4"}});
        // node 2 serves its self-loop, then 3, then 4, and 1 last
        std::map<std::string, std::vector<int>> orders;
        orders["2"] = {1, 2, 3, 0};
        return {std::move(g), PolicySpec::priority(orders), 0};
    }
    case FluidCase::pendant_loop3: {
        MatchingStructure g({"1", "2", "3", "4"},
                            {{"1", "2"}, {"2", "3"}, {"2", "4"}, {"3"}, {"3", "4"}});
        std::map<std::string, std::vector<int>> orders;
        orders["2"] = {1, 2, 0}; // 3, then 4, then 1
        orders["3"] = {1, 0, 2}; // self-loop first
        return {std::move(g), PolicySpec::priority(orders), 0};
    }
    case FluidCase::bip3_loop2: {
        MatchingStructure g({"1", "2", "3"}, {{"1", "2"}, {"2"}, {"2", "3"}});
        std::map<std::string, std::vector<int>> orders;
        orders["2"] = {1, 2, 0}; // self-loop, then 3, then 1
        return {std::move(g), PolicySpec::priority(orders), 0};
    }
    case FluidCase::bip4_loop1: {
        MatchingStructure g({"1", "2", "3", "4"},
                            {{"1"}, {"1", "2"}, {"1", "4"}, {"2", "3"}, {"3", "4"}});
        std::map<std::string, std::vector<int>> orders;
        orders["1"] = {0, 1, 2}; // self-loop first
        orders["2"] = {0, 1};    // 1 over 3
        orders["4"] = {0, 1};    // 1 over 3
        orders["3"] = {0, 1};    // 2 over 4
        return {std::move(g), PolicySpec::priority(orders), 2};
    }
    case FluidCase::bip4_loop1_v2fav: {
        MatchingStructure g({"1", "2", "3", "4"},
                            {{"1"}, {"1", "2"}, {"1", "4"}, {"2", "3"}, {"3", "4"}});
        std::map<std::string, std::vector<int>> orders;
        orders["1"] = {1, 2, 0}; // partners in V2 before the self-loop
        orders["2"] = {1, 0};    // 3 over 1
        orders["4"] = {1, 0};    // 3 over 1
        orders["3"] = {0, 1};
        return {std::move(g), PolicySpec::priority(orders), 2};
    }
    case FluidCase::complete_3uniform_4: {
        MatchingStructure h({"1", "2", "3", "4"},
                            {{"1", "2", "3"}, {"1", "2", "4"}, {"1", "3", "4"},
                             {"2", "3", "4"}});
        return {std::move(h), PolicySpec::match_longest(), 0};
    }
    }
    throw input_error("unknown fluid case");
}

namespace {

void check_dim(FluidCase c, const Measure& lam) {
    int want = (c == FluidCase::bip3_loop2) ? 3 : 4;
    if (lam.dim() != want)
        throw input_error(fluid_case_name(c) + " takes " + std::to_string(want) +
                          " intensities");
    if (lam.mode() != MeasureMode::intensity)
        throw input_error("fluid analysis takes intensity vectors");
}

MarginalChain case_marginal(FluidCase c, const Measure& lam) {
    MarginalChain mc;
    switch (c) {
    case FluidCase::pendant_loop2:
        mc.branches = {{"3", lam(2), lam(1) + lam(3), -1},
                       {"4", lam(3), lam(1) + lam(2), -1}};
        break;
    case FluidCase::pendant_loop3:
        mc.branches = {{"3", lam(2), lam(1) + lam(2) + lam(3), 1},
                       {"4", lam(3), lam(1) + lam(2), -1}};
        break;
    case FluidCase::bip3_loop2:
        mc.branches = {{"3", lam(2), lam(1), -1}};
        break;
    case FluidCase::bip4_loop1:
        mc.branches = {{"1", lam(0), lam(0) + lam(1) + lam(3), 1}};
        break;
    case FluidCase::bip4_loop1_v2fav:
        mc.branches = {{"1", lam(0), lam(0), 1}};
        break;
    case FluidCase::complete_3uniform_4:
        mc.branches = {{"2", lam(1), lam(2) + lam(3), -1},
                       {"3", lam(2), lam(1) + lam(3), -1},
                       {"4", lam(3), lam(1) + lam(2), -1}};
        break;
    }
    return mc;
}

ConditionReport case_ncond_c(FluidCase c, const Measure& lam) {
    if (c == FluidCase::complete_3uniform_4) {
        // hypergraph case: the anti-rank condition lambda_i < (1/2) sum_{j != i}
        ConditionReport r;
        r.condition = "n3-_c";
        double margin = std::numeric_limits<double>::max();
        int worst = 0;
        for (int i = 0; i < 4; ++i) {
            double rest = lam.total() - lam(i);
            double slack = 0.5 * rest - lam(i);
            if (slack < margin) {
                margin = slack;
                worst = i;
            }
        }
        r.margin = margin;
        if (margin > kConditionTol) {
            r.holds = true;
        } else {
            r.holds = false;
            r.boundary = margin >= -kConditionTol;
            NodeSet w;
            w.add(worst);
            r.witness = {w};
        }
        return r;
    }
    auto model = fluid_case_model(c);
    return in_ncond_c(model.structure, lam);
}

} // namespace

CaseAlpha case_alpha(FluidCase c, const Measure& lam) {
    check_dim(c, lam);
    CaseAlpha out;
    double l1 = lam(0), l2 = lam(1), l3 = lam.dim() > 2 ? lam(2) : 0,
           l4 = lam.dim() > 3 ? lam(3) : 0;
    switch (c) {
    case FluidCase::pendant_loop2:
        out.closed_form = (l2 * l2 - (l3 - l4) * (l3 - l4)) / (l2 * (l2 + l3 + l4));
        break;
    case FluidCase::pendant_loop3:
        out.closed_form = ((l2 + l3) * (l2 + l3) - l4 * l4) /
                          (l2 * l2 + 2 * l3 * l3 + 3 * l2 * l3 + l2 * l4);
        break;
    case FluidCase::bip3_loop2:
        out.closed_form = (l2 - l3) / l2;
        break;
    case FluidCase::bip4_loop1:
        out.closed_form = (l1 + l2 + l4) / (2 * l1 + l2 + l4);
        break;
    case FluidCase::bip4_loop1_v2fav:
        out.closed_form = 1.0; // both partners always serve the designated queue
        break;
    case FluidCase::complete_3uniform_4:
        out.closed_form = 0.5; // effective service multiplier of the pair rates
        break;
    }
    out.in_ncond_c = case_ncond_c(c, lam).holds;
    if (!out.in_ncond_c)
        out.warning = "intensities outside Ncond_C; constant computed anyway";
    try {
        if (c == FluidCase::complete_3uniform_4) {
            // series route: branch occupancies against the closed multiplier
            auto mc = case_marginal(c, lam);
            double pi0 = marginal_origin_probability(mc);
            double served = 0;
            double rates[3][2] = {{lam(2) + lam(3), lam(1) / (lam(2) + lam(3))},
                                  {lam(1) + lam(3), lam(2) / (lam(1) + lam(3))},
                                  {lam(1) + lam(2), lam(3) / (lam(1) + lam(2))}};
            for (auto& br : rates)
                served += br[0] * pi0 * br[1] / (1 - br[1]);
            out.series_form = served / (lam(1) + lam(2) + lam(3));
        } else {
            out.series_form = marginal_origin_probability(case_marginal(c, lam));
        }
    } catch (const model_error&) {
        // supercritical branch outside Ncond_C: series undefined
    }
    return out;
}

FluidVerdict fluid_verdict(FluidCase c, const Measure& lam) {
    check_dim(c, lam);
    auto model = fluid_case_model(c);
    FluidVerdict v;
    v.which = c;
    v.i0 = model.structure.name_of(model.i0);
    v.ncond_c = case_ncond_c(c, lam);

    auto alpha = case_alpha(c, lam);
    v.alpha_constants["alpha"] = alpha.closed_form;
    if (alpha.series_form) v.alpha_constants["alpha_series"] = *alpha.series_form;

    switch (c) {
    case FluidCase::pendant_loop2:
    case FluidCase::pendant_loop3:
    case FluidCase::bip3_loop2:
        v.drift = lam(0) - alpha.closed_form * lam(1);
        v.extra_margin = alpha.closed_form * lam(1) - lam(0);
        break;
    case FluidCase::bip4_loop1:
    case FluidCase::bip4_loop1_v2fav:
        v.drift = lam(2) - alpha.closed_form * (lam(1) + lam(3));
        v.extra_margin = alpha.closed_form * (lam(1) + lam(3)) - lam(2);
        break;
    case FluidCase::complete_3uniform_4:
        v.drift = lam(0) - 0.5 * (lam(1) + lam(2) + lam(3));
        v.extra_margin = -v.drift;
        break;
    }
    v.rho = (v.drift < -kConditionTol) ? 1.0 / (-v.drift) : kInf;

    double tol = kConditionTol * std::max(1.0, lam.total());
    if (!v.ncond_c.holds) {
        v.stable = FluidStability::unstable;
        v.note = v.ncond_c.boundary ? "Ncond_C boundary" : "outside Ncond_C";
    } else if (v.extra_margin > tol) {
        v.stable = FluidStability::stable;
    } else if (v.extra_margin >= -tol) {
        v.stable = FluidStability::boundary;
        v.note = "zero fluid drift: boundary (not positive recurrent)";
    } else {
        v.stable = FluidStability::unstable;
        v.note = "inside Ncond_C but the designated queue has nonnegative drift";
    }
    return v;
}

std::vector<PathDeviation> scaled_path_check(FluidCase c, const Measure& lam,
                                             const std::vector<int>& n_list,
                                             std::uint64_t seed) {
    check_dim(c, lam);
    auto model = fluid_case_model(c);
    auto verdict = fluid_verdict(c, lam);
    double horizon = std::isfinite(verdict.rho) ? 0.9 * verdict.rho : 1.0;

    std::vector<PathDeviation> out;
    for (int n : n_list) {
        if (n <= 0) throw input_error("scaling levels must be positive");
        std::vector<int> x0(model.structure.order(), 0);
        x0[model.i0] = n;

        CounterRng rng(seed, 0xF1u ^ static_cast<std::uint64_t>(n));
        double dev = 0;
        auto fluid_at = [&](double t) { return std::max(0.0, 1.0 + verdict.drift * t); };
        simulate_ctmc_path(
            model.structure, model.policy, lam, x0, horizon * n, rng,
            [&](double t, const std::vector<int>& x) {
                double ft = t / n;
                for (int i = 0; i < model.structure.order(); ++i) {
                    double want = (i == model.i0) ? fluid_at(ft) : 0.0;
                    dev = std::max(dev, std::fabs(x[i] / static_cast<double>(n) - want));
                }
            });
        out.push_back({n, dev, verdict.rho, horizon});
    }
    return out;
}

} // namespace matchkit
