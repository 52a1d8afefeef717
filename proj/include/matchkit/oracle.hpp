#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "matchkit/measure.hpp"
#include "matchkit/policy.hpp"
#include "matchkit/structure.hpp"

namespace matchkit {

// Brute-force stationary solve on a truncated state space.  Transitions
// that would leave the truncation are reflected (the state keeps the mass)
// and their stationary flow is booked against a flagged sink; the sink mass
// quantifies the truncation error.
struct OracleResult {
    std::vector<std::string> states;       // state keys, empty state first
    std::vector<double> pi;                // renormalized over retained states
    double sink_mass = 0.0;
    int state_count = 0;
    std::string truncation_note;

    std::map<std::string, double> as_map() const;
    double probability_of(const std::string& key) const;
};

std::string class_state_key(const MatchingStructure& s, const std::vector<int>& x);
std::string word_state_key(const MatchingStructure& s, const QueueDetail& w);

// Class-detail chain for class-admissible policies; states with total count
// <= cap are retained.
OracleResult truncated_stationary_class(const MatchingStructure& s,
                                        const PolicySpec& policy, const Measure& m,
                                        int cap);

// Word chain under fcfm/lcfm; words of length <= cap are retained.
OracleResult truncated_stationary_word(const MatchingStructure& s,
                                       const PolicySpec& policy, const Measure& m,
                                       int cap);

struct CheckOutcome {
    bool passed = true;
    int instances = 0;
    std::string counterexample; // human-readable, empty when passed
};

// Runs a predicate over a family of structures; stops at the first failure.
CheckOutcome exhaustive_condition_check(
    const std::vector<MatchingStructure>& family,
    const std::function<std::optional<std::string>(const MatchingStructure&)>& property);

} // namespace matchkit
