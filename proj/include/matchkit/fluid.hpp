#pragma once

#include <optional>
#include <string>
#include <vector>

#include "matchkit/conditions.hpp"
#include "matchkit/measure.hpp"
#include "matchkit/policy.hpp"
#include "matchkit/product_form.hpp"
#include "matchkit/structure.hpp"

namespace matchkit {

// Reflecting random walk on a star of half-lines glued at the origin: the
// marginal process of the non-neighbour queues while a designated queue
// stays busy.  A branch may be capped (a self-looped class holds at most
// one item).
struct MarginalBranch {
    std::string label;
    double birth = 0;
    double death = 0;
    int max_length = -1; // -1: unbounded
};

struct MarginalChain {
    std::vector<MarginalBranch> branches;
};

// pi(origin) = [1 + sum_b sum_i r_b^i]^-1 with r_b = birth/death, the sums
// geometric (finite when capped).  Throws when an unbounded branch is
// supercritical.
StationaryTable marginal_stationary(const MarginalChain& mc);
double marginal_origin_probability(const MarginalChain& mc);

enum class FluidCase {
    pendant_loop2,
    pendant_loop3,
    bip3_loop2,
    bip4_loop1,
    bip4_loop1_v2fav,
    complete_3uniform_4,
};

FluidCase fluid_case_from_name(const std::string& name);
std::string fluid_case_name(FluidCase c);

// The case's structure, priority policy and designated node.
struct FluidCaseModel {
    MatchingStructure structure;
    PolicySpec policy;
    int i0 = 0;
};
FluidCaseModel fluid_case_model(FluidCase c);

struct CaseAlpha {
    double closed_form = 0;
    std::optional<double> series_form; // from the marginal chain, when defined
    bool in_ncond_c = false;
    std::string warning;
};

// The drift constant of the designated queue, in closed form and through
// the marginal stationary law.  The two routes must agree inside Ncond_C.
CaseAlpha case_alpha(FluidCase c, const Measure& lam);

enum class FluidStability { stable, unstable, boundary };

struct FluidVerdict {
    FluidCase which;
    std::string i0;
    double drift = 0;           // slope of the designated fluid queue
    double rho = 0;             // hitting time from unit initial mass; inf if none
    FluidStability stable = FluidStability::unstable;
    ConditionReport ncond_c;
    double extra_margin = 0;    // slack of the case's extra inequality
    std::map<std::string, double> alpha_constants;
    std::string note;
};

FluidVerdict fluid_verdict(FluidCase c, const Measure& lam);

struct PathDeviation {
    int n = 0;
    double sup_deviation = 0; // against the piecewise-linear fluid path
    double rho = 0;
    double horizon = 0;       // 0.9 rho
};

// Simulates the continuous-time chain from n units of class i0, rescales
// by n, and reports the sup-norm gap to the fluid path on [0, 0.9 rho].
std::vector<PathDeviation> scaled_path_check(FluidCase c, const Measure& lam,
                                             const std::vector<int>& n_list,
                                             std::uint64_t seed);

} // namespace matchkit
