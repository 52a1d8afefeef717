#pragma once

#include <map>
#include <string>
#include <vector>

#include "matchkit/measure.hpp"
#include "matchkit/structure.hpp"

namespace matchkit {

// Drift table for the match-the-longest chain on a complete 3-uniform
// structure of order q >= 5 minus a family of disjoint hyperedges.
//
// Single-class coefficients are the slopes of the exact four-step embedded
// drift E[Q(X_{4(n+1)}) - Q(X_{4n}) | X_{4n} = x e_i] = slope * x + intercept,
// computed by enumerating the four-arrival transitions exactly; per-term
// closed-form expansions of these drifts are easy to mistranscribe, so the
// transition enumeration is the authority.  Pairwise and triple
// coefficients come from the one-step chain in closed form.
struct LyapunovTable {
    int q = 0;
    std::vector<NodeSet> removed;
    NodeSet removed_union;

    // node name -> (slope, intercept); lambda for nodes outside the removed
    // family, nu for nodes inside it
    std::map<std::string, std::pair<double, double>> lambda_i;
    std::map<std::string, std::pair<double, double>> nu_i;

    std::map<std::string, double> lambda_ij; // "i,j" -> 2(mu(i) - mu(rest))
    std::map<std::string, double> nu_ij;     // pairs inside a removed edge
    // per removed edge H and member m: the large-count coefficient
    // 2(mu(m) - mu(complement of H)); the smallest coordinate of a fully
    // occupied removed edge instead carries 2 mu(m)
    std::map<std::string, double> alpha_major;
    std::map<std::string, double> alpha_minor;

    double ratio = 0;       // mu_max / mu_min
    double ratio_bound = 0; // ((2q^4-9q^3+12q^2-13q+12)/(6q^2+10q+24))^(1/4)
    bool n2 = false;
    bool n3_strict = false;
    bool in_s = false;  // all drift slopes negative, plus n2 and n3
    bool in_s1 = false; // ratio bound, plus n2 and n3
    std::string note;   // both regions are sufficient only
};

LyapunovTable lyapunov_coefficients(const MatchingStructure& h, const Measure& m);

double lyapunov_ratio_bound(int q);

// Exact four-step embedded drift from x e_i as (slope, intercept).
std::pair<double, double> embedded_drift_affine(const MatchingStructure& h,
                                                const Measure& m, int node);

// Monte-Carlo estimate of the same drift at a fixed level x.
double embedded_drift_mc(const MatchingStructure& h, const Measure& m, int node,
                         int x, int blocks, std::uint64_t seed);

} // namespace matchkit
