#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "matchkit/measure.hpp"
#include "matchkit/rng.hpp"
#include "matchkit/structure.hpp"

namespace matchkit {

// Ordered word of unmatched item classes, oldest first.
struct QueueDetail {
    std::vector<std::uint8_t> letters;

    int length() const { return static_cast<int>(letters.size()); }
    std::vector<int> counts(int q) const;
    std::string to_string(const MatchingStructure& s) const;
};

// Per-class counts (the commutative image of a queue detail).
struct ClassDetail {
    std::vector<int> counts;

    explicit ClassDetail(int q = 0) : counts(q, 0) {}
    int total() const;
    bool is_zero() const { return total() == 0; }
    bool operator==(const ClassDetail&) const = default;
};

bool is_admissible_word(const MatchingStructure& s, const QueueDetail& w);
bool is_admissible_counts(const MatchingStructure& s, const std::vector<int>& x);

enum class PolicyVariant {
    fcfm,
    lcfm,
    priority,
    random_policy,
    match_longest,
    match_shortest,
    max_weight,
    v2_favorable,
};

// Declarative description of a matching policy.
struct PolicySpec {
    PolicyVariant variant = PolicyVariant::fcfm;
    // priority: per node, a permutation of that node's edge list (positions
    // into structure.edges_of(node))
    std::map<std::string, std::vector<int>> priority_orders;
    // max_weight: score = beta * x(S) + reward(S), edge keyed by index
    double beta = 0.0;
    std::vector<double> rewards;
    std::shared_ptr<PolicySpec> inner; // v2_favorable wraps another policy

    static PolicySpec fcfm() { return {PolicyVariant::fcfm, {}, 0, {}, nullptr}; }
    static PolicySpec lcfm() { return {PolicyVariant::lcfm, {}, 0, {}, nullptr}; }
    static PolicySpec random() { return {PolicyVariant::random_policy, {}, 0, {}, nullptr}; }
    static PolicySpec match_longest() { return {PolicyVariant::match_longest, {}, 1.0, {}, nullptr}; }
    static PolicySpec match_shortest() { return {PolicyVariant::match_shortest, {}, -1.0, {}, nullptr}; }
    static PolicySpec priority(std::map<std::string, std::vector<int>> orders) {
        return {PolicyVariant::priority, std::move(orders), 0, {}, nullptr};
    }
    static PolicySpec max_weight(double beta, std::vector<double> rewards) {
        return {PolicyVariant::max_weight, {}, beta, std::move(rewards), nullptr};
    }
    static PolicySpec v2_favorable(PolicySpec in) {
        PolicySpec p;
        p.variant = PolicyVariant::v2_favorable;
        p.inner = std::make_shared<PolicySpec>(std::move(in));
        return p;
    }

    bool word_only() const {
        return variant == PolicyVariant::fcfm || variant == PolicyVariant::lcfm;
    }
};

std::string policy_name(const PolicySpec& p);

// P(x, v): edges of S(v) fully backed by the waiting counts; a self-loop
// {v} is feasible iff a v-item waits.
std::vector<int> feasible_matches(const MatchingStructure& s,
                                  const std::vector<int>& x, int v);

// A matching policy bound to one structure.  Steps are pure given
// (state, arrival, rng); a random decision consumes exactly one draw and a
// forced decision consumes none.
class PolicyEngine {
public:
    PolicyEngine(const MatchingStructure& s, PolicySpec spec);
    ~PolicyEngine();

    const MatchingStructure& structure() const { return s_; }
    const PolicySpec& spec() const { return spec_; }

    // Class-detail action; x is updated in place.  Returns the matched edge.
    std::optional<int> step_class(std::vector<int>& x, int v, CounterRng& rng) const;

    // Word action; also maintains a caller-held counts vector when given.
    std::optional<int> step_word(QueueDetail& w, int v, CounterRng& rng,
                                 std::vector<int>* counts = nullptr) const;

    // Transition split with explicit probabilities (for the oracle);
    // class-admissible policies only.
    std::vector<std::pair<int, double>> match_distribution(const std::vector<int>& x,
                                                           int v) const;

    // Chooses among feasible edges per the policy; nullopt when none.
    std::optional<int> choose(const std::vector<int>& x, int v, CounterRng& rng) const;

    // True when any selection layer needs arrival order (fcfm/lcfm).
    bool word_only_selection() const;

private:
    std::optional<int> choose_from(const std::vector<int>& feas,
                                   const std::vector<int>& x, int v,
                                   CounterRng& rng) const;
    std::optional<int> select_word(const QueueDetail& w, const std::vector<int>& feas,
                                   const std::vector<int>& x, int v,
                                   CounterRng& rng) const;
    std::vector<std::pair<int, double>> dist_from(const std::vector<int>& feas,
                                                  const std::vector<int>& x,
                                                  int v) const;
    std::vector<int> narrow_v2(const std::vector<int>& feas, int v) const;
    double score(const std::vector<int>& x, int e) const;

    const MatchingStructure& s_;
    PolicySpec spec_;
    std::vector<std::vector<int>> priority_by_node_; // edge indices in priority order
    std::unique_ptr<PolicyEngine> inner_;            // v2_favorable delegate
};

// mu_lambda(i) = lambda_i / lambda_bar: law of the embedded discrete chain.
Measure embed_intensity(const Measure& lam);

} // namespace matchkit
