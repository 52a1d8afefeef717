#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "matchkit/measure.hpp"
#include "matchkit/structure.hpp"

namespace matchkit {

// Inequalities are evaluated with a margin; anything inside the band around
// zero is a boundary case and reported as not holding (boundary states are
// at best null recurrent).
inline constexpr double kConditionTol = 1e-12;

struct ConditionReport {
    std::string condition;
    bool holds = false;
    bool boundary = false;
    double margin = 0.0; // smallest slack; sign matches the verdict
    std::vector<NodeSet> witness; // violating set(s) when the condition fails
    std::string note;
};

// Ncond(G): mu(I) < mu(E(I)) over every independent set (graphs/multigraphs).
ConditionReport in_ncond(const MatchingStructure& g, const Measure& m);

// Continuous-time version on intensities: lambda(I) < lambda(E(I)).
ConditionReport in_ncond_c(const MatchingStructure& g, const Measure& lam);

enum class N1Variant { n1, n1_plus, n1_plus_plus };

// The N1 condition family: n1 quantifies over the non-mu-minimal
// independent sets with the minimum taken over each hyperedge, n1_plus
// over all independent sets with the minimum over H \ I, n1_plus_plus over
// all subsets with a weak inequality.
ConditionReport in_n1_family(const MatchingStructure& h, const Measure& m,
                             N1Variant variant);

// mu-minimal independent sets (every meeting hyperedge intersects I in a
// single degree-1 node that is the unique argmin of mu on that hyperedge).
bool is_mu_minimal(const MatchingStructure& h, const Measure& m, NodeSet I);

// N2: mu(T) > 1/rank for every transversal.
ConditionReport in_n2(const MatchingStructure& h, const Measure& m);

// N3: mu(i) <= 1/antirank, strict when requested (uniform structures).
ConditionReport in_n3(const MatchingStructure& h, const Measure& m, bool strict);

struct HallViolation {
    NodeSet v1;
    NodeSet v2;
};

// Disjoint (V1, V2) with |H & V2| >= |H & V1| for every edge and |V2| < |V1|.
std::optional<HallViolation> find_hall_violation(const MatchingStructure& h);

// (floor((q+1)/2) - 1) / floor((q+1)/2)
double hall_ratio_threshold(int q);

// Instability report for a measure: triggers when Hall's condition is
// violated and mu_min/mu_max clears the ratio bound.
ConditionReport hall_instability(const MatchingStructure& h, const Measure& m);

// mu_hat on the blow-up: splits mu(i) between i and its copy per `split`
// (fraction kept by the original); V2 weights carried over.
Measure extend_measure(const MatchingStructure& g, const Measure& m,
                       const std::map<std::string, double>& split);
Measure extend_measure_half(const MatchingStructure& g, const Measure& m);
Measure reduce_measure(const MatchingStructure& g, const Measure& extended);

// Subgradient search for a full-support measure inside Ncond(G); nullopt
// when none is found (the region is empty for bipartite graphs).
std::optional<Measure> find_ncond_measure(const MatchingStructure& g);

// All strictly positive probability vectors on a step grid (step = 1/den).
std::vector<Measure> grid_measures(int n, int den);

} // namespace matchkit
