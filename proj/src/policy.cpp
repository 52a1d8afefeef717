#include "matchkit/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace matchkit {

std::vector<int> QueueDetail::counts(int q) const {
    std::vector<int> c(q, 0);
    for (auto l : letters) ++c[l];
    return c;
}

std::string QueueDetail::to_string(const MatchingStructure& s) const {
    std::string out;
    for (std::size_t i = 0; i < letters.size(); ++i) {
        if (i) out += ' ';
        out += s.name_of(letters[i]);
    }
    return out;
}

int ClassDetail::total() const {
    int t = 0;
    for (int c : counts) t += c;
    return t;
}

bool is_admissible_counts(const MatchingStructure& s, const std::vector<int>& x) {
    if (static_cast<int>(x.size()) != s.order()) return false;
    for (int v : x)
        if (v < 0) return false;
    for (int i : s.v1().members())
        if (x[i] > 1) return false;
    for (int e = 0; e < s.edge_count(); ++e) {
        NodeSet ed = s.edge(e);
        if (ed.size() < 2) continue;
        bool all = true;
        for (int i : ed.members())
            if (x[i] == 0) { all = false; break; }
        if (all) return false;
    }
    return true;
}

bool is_admissible_word(const MatchingStructure& s, const QueueDetail& w) {
    return is_admissible_counts(s, w.counts(s.order()));
}

std::vector<int> feasible_matches(const MatchingStructure& s,
                                  const std::vector<int>& x, int v) {
    if (v < 0 || v >= s.order()) throw input_error("unknown node index");
    std::vector<int> out;
    for (int e : s.edges_of(v)) {
        NodeSet ed = s.edge(e);
        if (ed.size() == 1) {
            if (x[v] >= 1) out.push_back(e);
            continue;
        }
        bool ok = true;
        for (int i : ed.members())
            if (i != v && x[i] == 0) { ok = false; break; }
        if (ok) out.push_back(e);
    }
    return out;
}

std::string policy_name(const PolicySpec& p) {
    switch (p.variant) {
    case PolicyVariant::fcfm: return "fcfm";
    case PolicyVariant::lcfm: return "lcfm";
    case PolicyVariant::priority: return "priority";
    case PolicyVariant::random_policy: return "random";
    case PolicyVariant::match_longest: return "match_longest";
    case PolicyVariant::match_shortest: return "match_shortest";
    case PolicyVariant::max_weight: return "max_weight";
    case PolicyVariant::v2_favorable:
        return "v2_favorable(" + (p.inner ? policy_name(*p.inner) : std::string("?")) + ")";
    }
    return "?";
}

namespace {

NodeSet matched_classes(const MatchingStructure& s, int e, int v) {
    NodeSet ed = s.edge(e);
    if (ed.size() == 1) return ed; // self-loop: the waiting v-item
    return ed.minus(NodeSet(1u << v));
}

// Oldest occurrence position per matched class, ascending.
std::vector<int> oldest_positions(const QueueDetail& w, NodeSet classes) {
    std::vector<int> pos;
    for (int c : classes.members())
        for (int i = 0; i < w.length(); ++i)
            if (w.letters[i] == c) {
                pos.push_back(i);
                break;
            }
    std::sort(pos.begin(), pos.end());
    return pos;
}

std::vector<int> newest_positions(const QueueDetail& w, NodeSet classes) {
    std::vector<int> pos;
    for (int c : classes.members())
        for (int i = w.length() - 1; i >= 0; --i)
            if (w.letters[i] == c) {
                pos.push_back(i);
                break;
            }
    std::sort(pos.begin(), pos.end(), std::greater<>());
    return pos;
}

// FCFM: the match holding the overall oldest compatible item; among edges
// sharing it, completion is lexicographic on the remaining oldest
// positions.  LCFM mirrors this on newest positions.
int select_fcfm(const MatchingStructure& s, const QueueDetail& w, int v,
                const std::vector<int>& feas) {
    int best = feas[0];
    std::vector<int> bestpos = oldest_positions(w, matched_classes(s, best, v));
    for (std::size_t k = 1; k < feas.size(); ++k) {
        auto pos = oldest_positions(w, matched_classes(s, feas[k], v));
        if (pos < bestpos) {
            best = feas[k];
            bestpos = std::move(pos);
        }
    }
    return best;
}

int select_lcfm(const MatchingStructure& s, const QueueDetail& w, int v,
                const std::vector<int>& feas) {
    int best = feas[0];
    std::vector<int> bestpos = newest_positions(w, matched_classes(s, best, v));
    for (std::size_t k = 1; k < feas.size(); ++k) {
        auto pos = newest_positions(w, matched_classes(s, feas[k], v));
        if (pos > bestpos) {
            best = feas[k];
            bestpos = std::move(pos);
        }
    }
    return best;
}

} // namespace

PolicyEngine::PolicyEngine(const MatchingStructure& s, PolicySpec spec)
    : s_(s), spec_(std::move(spec)) {
    if (spec_.variant == PolicyVariant::priority) {
        priority_by_node_.assign(s_.order(), {});
        for (int i = 0; i < s_.order(); ++i) {
            const auto& incident = s_.edges_of(i);
            auto it = spec_.priority_orders.find(s_.name_of(i));
            if (it == spec_.priority_orders.end()) {
                priority_by_node_[i] = incident; // default: edge input order
                continue;
            }
            const auto& order = it->second;
            if (order.size() != incident.size())
                throw input_error("priority order of node " + s_.name_of(i) +
                                  " must cover exactly its edges");
            std::vector<char> used(incident.size(), 0);
            for (int pos : order) {
                if (pos < 0 || pos >= static_cast<int>(incident.size()) || used[pos])
                    throw input_error("priority order of node " + s_.name_of(i) +
                                      " is not a permutation");
                used[pos] = 1;
                priority_by_node_[i].push_back(incident[pos]);
            }
        }
    }
    if (spec_.variant == PolicyVariant::max_weight &&
        static_cast<int>(spec_.rewards.size()) != s_.edge_count())
        throw input_error("max_weight needs one reward per edge");
    if (spec_.variant == PolicyVariant::v2_favorable) {
        if (!spec_.inner)
            throw input_error("v2_favorable needs an inner policy");
        inner_ = std::make_unique<PolicyEngine>(s_, *spec_.inner);
    }
}

PolicyEngine::~PolicyEngine() = default;

std::vector<int> PolicyEngine::narrow_v2(const std::vector<int>& feas, int v) const {
    std::vector<int> narrowed;
    for (int e : feas) {
        NodeSet partners = matched_classes(s_, e, v);
        if (!partners.intersects(s_.v1())) narrowed.push_back(e);
    }
    return narrowed.empty() ? feas : narrowed;
}

double PolicyEngine::score(const std::vector<int>& x, int e) const {
    double xs = 0;
    for (int i : s_.edge(e).members()) xs += x[i];
    double reward = spec_.rewards.empty() ? 0.0 : spec_.rewards[e];
    return spec_.beta * xs + reward;
}

std::optional<int> PolicyEngine::choose_from(const std::vector<int>& feas,
                                             const std::vector<int>& x, int v,
                                             CounterRng& rng) const {
    if (feas.empty()) return std::nullopt;
    if (feas.size() == 1) return feas[0];
    switch (spec_.variant) {
    case PolicyVariant::fcfm:
    case PolicyVariant::lcfm:
        throw input_error("fcfm/lcfm need the word state");
    case PolicyVariant::priority:
        for (int e : priority_by_node_[v])
            if (std::find(feas.begin(), feas.end(), e) != feas.end()) return e;
        return feas[0];
    case PolicyVariant::random_policy:
        return feas[rng.next_below(static_cast<std::uint32_t>(feas.size()))];
    case PolicyVariant::match_longest:
    case PolicyVariant::match_shortest:
    case PolicyVariant::max_weight: {
        double best = -std::numeric_limits<double>::infinity();
        std::vector<int> ties;
        for (int e : feas) {
            double sc = score(x, e);
            if (sc > best + 1e-12) {
                best = sc;
                ties.assign(1, e);
            } else if (sc >= best - 1e-12) {
                ties.push_back(e);
            }
        }
        if (ties.size() == 1) return ties[0];
        return ties[rng.next_below(static_cast<std::uint32_t>(ties.size()))];
    }
    case PolicyVariant::v2_favorable:
        return inner_->choose_from(narrow_v2(feas, v), x, v, rng);
    }
    return feas[0];
}

std::optional<int> PolicyEngine::choose(const std::vector<int>& x, int v,
                                        CounterRng& rng) const {
    return choose_from(feasible_matches(s_, x, v), x, v, rng);
}

std::optional<int> PolicyEngine::step_class(std::vector<int>& x, int v,
                                            CounterRng& rng) const {
    if (word_only_selection())
        throw input_error("fcfm/lcfm need the word state");
    auto e = choose(x, v, rng);
    if (!e) {
        ++x[v];
        return std::nullopt;
    }
    NodeSet ed = s_.edge(*e);
    if (ed.size() == 1) {
        --x[v];
    } else {
        for (int i : ed.members())
            if (i != v) --x[i];
    }
    return e;
}

bool PolicyEngine::word_only_selection() const {
    if (spec_.word_only()) return true;
    if (spec_.variant == PolicyVariant::v2_favorable)
        return inner_->word_only_selection();
    return false;
}

std::vector<std::pair<int, double>> PolicyEngine::dist_from(
    const std::vector<int>& feas, const std::vector<int>& x, int v) const {
    if (feas.empty()) return {};
    if (feas.size() == 1) return {{feas[0], 1.0}};
    switch (spec_.variant) {
    case PolicyVariant::fcfm:
    case PolicyVariant::lcfm:
        throw input_error("fcfm/lcfm have no class-level distribution");
    case PolicyVariant::priority:
        for (int e : priority_by_node_[v])
            if (std::find(feas.begin(), feas.end(), e) != feas.end())
                return {{e, 1.0}};
        return {{feas[0], 1.0}};
    case PolicyVariant::random_policy: {
        std::vector<std::pair<int, double>> out;
        for (int e : feas) out.emplace_back(e, 1.0 / feas.size());
        return out;
    }
    case PolicyVariant::match_longest:
    case PolicyVariant::match_shortest:
    case PolicyVariant::max_weight: {
        double best = -std::numeric_limits<double>::infinity();
        std::vector<int> ties;
        for (int e : feas) {
            double sc = score(x, e);
            if (sc > best + 1e-12) {
                best = sc;
                ties.assign(1, e);
            } else if (sc >= best - 1e-12) {
                ties.push_back(e);
            }
        }
        std::vector<std::pair<int, double>> out;
        for (int e : ties) out.emplace_back(e, 1.0 / ties.size());
        return out;
    }
    case PolicyVariant::v2_favorable:
        return inner_->dist_from(narrow_v2(feas, v), x, v);
    }
    return {{feas[0], 1.0}};
}

std::vector<std::pair<int, double>> PolicyEngine::match_distribution(
    const std::vector<int>& x, int v) const {
    return dist_from(feasible_matches(s_, x, v), x, v);
}

std::optional<int> PolicyEngine::select_word(const QueueDetail& w,
                                             const std::vector<int>& feas,
                                             const std::vector<int>& x, int v,
                                             CounterRng& rng) const {
    if (feas.empty()) return std::nullopt;
    switch (spec_.variant) {
    case PolicyVariant::fcfm:
        return select_fcfm(s_, w, v, feas);
    case PolicyVariant::lcfm:
        return select_lcfm(s_, w, v, feas);
    case PolicyVariant::v2_favorable:
        return inner_->select_word(w, narrow_v2(feas, v), x, v, rng);
    default:
        return choose_from(feas, x, v, rng);
    }
}

std::optional<int> PolicyEngine::step_word(QueueDetail& w, int v, CounterRng& rng,
                                           std::vector<int>* counts) const {
    std::vector<int> local;
    std::vector<int>* x = counts;
    if (!x) {
        local = w.counts(s_.order());
        x = &local;
    }
    auto feas = feasible_matches(s_, *x, v);
    auto chosen = select_word(w, feas, *x, v, rng);

    if (!chosen) {
        w.letters.push_back(static_cast<std::uint8_t>(v));
        ++(*x)[v];
        return std::nullopt;
    }
    // non-idling: delete the oldest occurrence of every matched class
    for (int c : matched_classes(s_, *chosen, v).members()) {
        for (std::size_t i = 0; i < w.letters.size(); ++i)
            if (w.letters[i] == c) {
                w.letters.erase(w.letters.begin() + static_cast<long>(i));
                break;
            }
        --(*x)[c];
    }
    return chosen;
}

Measure embed_intensity(const Measure& lam) {
    if (lam.mode() != MeasureMode::intensity)
        throw input_error("embed_intensity takes an intensity vector");
    return lam.normalized();
}

} // namespace matchkit
