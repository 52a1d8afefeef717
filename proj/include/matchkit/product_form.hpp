#pragma once

#include <map>
#include <string>
#include <vector>

#include "matchkit/measure.hpp"
#include "matchkit/policy.hpp"
#include "matchkit/structure.hpp"

namespace matchkit {

// Map from states (words or count vectors) to probabilities, with the
// normalizing constant and a note on what was enumerated.
struct StationaryTable {
    std::vector<std::pair<std::string, double>> entries;
    double normalizer = 0.0;  // alpha
    double truncated_mass = 0.0; // probability mass beyond the enumeration
    std::string note;

    std::map<std::string, double> as_map() const;
    double probability_of(const std::string& key) const;
};

// alpha of the fcfm product form: sum over independent sets of the maximal
// subgraph and their orderings of per-prefix ratios.  Throws model_error
// when the measure is outside Ncond (detected directly or via a
// nonpositive prefix denominator).
double fcfm_normalizer(const MatchingStructure& g, const Measure& m);

// Pi_W(w) = alpha * prod_l mu(w_l) / mu(E({w_1..w_l})).
double fcfm_word_probability(const MatchingStructure& g, const Measure& m,
                             const QueueDetail& w);
double fcfm_word_probability(const MatchingStructure& g, const Measure& m,
                             const std::vector<std::string>& letters);

// All admissible words of length <= cap.
std::vector<QueueDetail> admissible_words(const MatchingStructure& s, int cap);

// Whole product-form table for words up to length cap; truncated mass is
// 1 - (enumerated total).
StationaryTable fcfm_stationary_table(const MatchingStructure& g, const Measure& m,
                                      int cap);

// Closed form for the complete 3-partite order-4 comparison graph: the
// stationary law of the class-detail chain (any admissible policy).
double three_partite_stationary(const Measure& m, const std::vector<int>& x);
double three_partite_alpha(const Measure& m);
bool three_partite_in_ncond(const Measure& m);

// Hard-coded worked-example tables used as regression references for the
// generic product form.  Names: "square_loops", "string_loop3",
// "three_partite_fcfm".
StationaryTable fcfm_graph_example_table(const std::string& name, const Measure& m,
                                         int cap);

} // namespace matchkit
