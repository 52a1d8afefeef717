#include "matchkit/product_form.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "matchkit/conditions.hpp"

namespace matchkit {

namespace {

std::string key_of(const MatchingStructure& s, const QueueDetail& w) {
    if (w.letters.empty()) return "-";
    return w.to_string(s);
}

std::string key_of(const MatchingStructure& s, const std::vector<std::string>& letters) {
    QueueDetail w;
    for (const auto& l : letters)
        w.letters.push_back(static_cast<std::uint8_t>(s.index_of(l)));
    return key_of(s, w);
}

void require_ncond(const MatchingStructure& g, const Measure& m) {
    auto r = in_ncond(g, m);
    if (!r.holds)
        throw model_error("measure is not in Ncond: the fcfm chain has no "
                          "stationary law (margin " + std::to_string(r.margin) + ")");
}

} // namespace

std::map<std::string, double> StationaryTable::as_map() const {
    std::map<std::string, double> m;
    for (const auto& [k, v] : entries) m[k] = v;
    return m;
}

double StationaryTable::probability_of(const std::string& key) const {
    for (const auto& [k, v] : entries)
        if (k == key) return v;
    return 0.0;
}

double fcfm_normalizer(const MatchingStructure& g, const Measure& m) {
    if (g.is_hypergraph())
        throw unsupported_kind_error("the fcfm product form covers multigraphs");
    require_ncond(g, m);

    MatchingStructure check = g.is_graph() ? g : maximal_subgraph(g);
    NodeSet v2 = g.v2();

    double inv = 1.0;
    for (NodeSet I : independent_sets(check)) {
        auto members = I.members();
        std::sort(members.begin(), members.end());
        if (static_cast<int>(members.size()) > 12)
            throw numeric_error("independent set of size > 12: permutation sum "
                                "is impractical");
        if (static_cast<int>(members.size()) > 9)
            std::cerr << "matchkit: summing " << members.size()
                      << "! orderings of an independent set; expect a slow "
                         "normalizer\n";
        do {
            double term = 1.0;
            NodeSet prefix;
            for (int e : members) {
                prefix.add(e);
                double denom = m(neighborhood(g, prefix)) - m(prefix & v2);
                if (denom <= 0.0)
                    throw model_error("nonpositive prefix denominator: measure "
                                      "is outside Ncond");
                term *= m(e) / denom;
            }
            inv += term;
        } while (std::next_permutation(members.begin(), members.end()));
    }
    return 1.0 / inv;
}

double fcfm_word_probability(const MatchingStructure& g, const Measure& m,
                             const QueueDetail& w) {
    if (g.is_hypergraph())
        throw unsupported_kind_error("the fcfm product form covers multigraphs");
    if (!is_admissible_word(g, w))
        throw input_error("inadmissible queue detail");
    double alpha = fcfm_normalizer(g, m);
    double p = alpha;
    NodeSet prefix;
    for (auto l : w.letters) {
        prefix.add(l);
        p *= m(l) / m(neighborhood(g, prefix));
    }
    return p;
}

double fcfm_word_probability(const MatchingStructure& g, const Measure& m,
                             const std::vector<std::string>& letters) {
    QueueDetail w;
    for (const auto& l : letters)
        w.letters.push_back(static_cast<std::uint8_t>(g.index_of(l)));
    return fcfm_word_probability(g, m, w);
}

std::vector<QueueDetail> admissible_words(const MatchingStructure& s, int cap) {
    std::vector<QueueDetail> out;
    QueueDetail w;
    std::vector<int> counts(s.order(), 0);
    auto rec = [&](auto&& self) -> void {
        out.push_back(w);
        if (out.size() > 5'000'000)
            throw numeric_error("admissible word enumeration exceeds 5e6 states");
        if (w.length() == cap) return;
        for (int v = 0; v < s.order(); ++v) {
            ++counts[v];
            bool ok = !(s.has_loop(v) && counts[v] > 1);
            if (ok) {
                for (int e : s.edges_of(v)) {
                    NodeSet ed = s.edge(e);
                    if (ed.size() < 2) continue;
                    bool full = true;
                    for (int i : ed.members())
                        if (counts[i] == 0) { full = false; break; }
                    if (full) { ok = false; break; }
                }
            }
            if (ok) {
                w.letters.push_back(static_cast<std::uint8_t>(v));
                self(self);
                w.letters.pop_back();
            }
            --counts[v];
        }
    };
    rec(rec);
    return out;
}

StationaryTable fcfm_stationary_table(const MatchingStructure& g, const Measure& m,
                                      int cap) {
    StationaryTable t;
    t.normalizer = fcfm_normalizer(g, m);
    double total = 0;
    for (const auto& w : admissible_words(g, cap)) {
        double p = t.normalizer;
        NodeSet prefix;
        for (auto l : w.letters) {
            prefix.add(l);
            p *= m(l) / m(neighborhood(g, prefix));
        }
        t.entries.emplace_back(key_of(g, w), p);
        total += p;
    }
    t.truncated_mass = std::max(0.0, 1.0 - total);
    t.note = "words of length <= " + std::to_string(cap);
    return t;
}

bool three_partite_in_ncond(const Measure& m) {
    if (m.dim() != 4) throw input_error("the comparison graph has 4 classes");
    return m(1) < 0.5 - kConditionTol && m(2) < 0.5 - kConditionTol &&
           m(0) + m(3) < 0.5 - kConditionTol;
}

double three_partite_alpha(const Measure& m) {
    if (m.dim() != 4) throw input_error("the comparison graph has 4 classes");
    double s14 = m(0) + m(3);
    return (1 - 2 * m(1)) * (1 - 2 * m(2)) * (1 - 2 * s14) /
           (4 * m(1) * m(2) * s14);
}

double three_partite_stationary(const Measure& m, const std::vector<int>& x) {
    if (m.dim() != 4) throw input_error("the comparison graph has 4 classes");
    if (x.size() != 4) throw input_error("state must have 4 coordinates");
    if (!three_partite_in_ncond(m))
        throw model_error("measure is outside the stability region of the "
                          "comparison graph");
    double alpha = three_partite_alpha(m);
    int k = x[0], i = x[1], j = x[2], l = x[3];
    if (i < 0 || j < 0 || k < 0 || l < 0) throw input_error("negative count");
    if (i == 0 && j == 0 && k == 0 && l == 0) return alpha;
    if (i > 0 && j == 0 && k == 0 && l == 0)
        return alpha * std::pow(m(1) / (1 - m(1)), i);
    if (j > 0 && i == 0 && k == 0 && l == 0)
        return alpha * std::pow(m(2) / (1 - m(2)), j);
    if (i == 0 && j == 0 && (k > 0 || l > 0)) {
        double r = (m(0) + m(3)) / (1 - m(0) - m(3));
        return alpha * std::pow(r, k + l);
    }
    return 0.0; // outside the chain's support
}

namespace {

StationaryTable square_loops_table(const MatchingStructure& g, const Measure& m) {
    auto mu = [&](const std::string& n) { return m(g.index_of(n)); };
    double alpha = 1.0 / (1 + mu("1") * (1 + mu("3")) / (1 - mu("3")) +
                          mu("2") * (1 + mu("4")) / (1 - mu("4")) +
                          mu("3") * (1 + mu("1")) / (1 - mu("1")) +
                          mu("4") * (1 + mu("2")) / (1 - mu("2")));
    StationaryTable t;
    t.normalizer = alpha;
    t.entries = {
        {"-", alpha},
        {key_of(g, {"1"}), alpha * mu("1") / (1 - mu("3"))},
        {key_of(g, {"2"}), alpha * mu("2") / (1 - mu("4"))},
        {key_of(g, {"3"}), alpha * mu("3") / (1 - mu("1"))},
        {key_of(g, {"4"}), alpha * mu("4") / (1 - mu("2"))},
        {key_of(g, {"1", "3"}), alpha * mu("1") / (1 - mu("3")) * mu("3")},
        {key_of(g, {"2", "4"}), alpha * mu("2") / (1 - mu("4")) * mu("4")},
        {key_of(g, {"3", "1"}), alpha * mu("3") / (1 - mu("1")) * mu("1")},
        {key_of(g, {"4", "2"}), alpha * mu("4") / (1 - mu("2")) * mu("2")},
    };
    t.note = "finite model: the full state space";
    return t;
}

StationaryTable string_loop3_table(const MatchingStructure& g, const Measure& m,
                                   int cap) {
    auto mu = [&](const std::string& n) { return m(g.index_of(n)); };
    double m1 = mu("1"), m2 = mu("2"), m3 = mu("3");
    double alpha = 1.0 / (1 + m1 / (m2 - m1) + m2 / (1 - 2 * m2) + m3 / (1 - m1) +
                          m1 / (m2 - m1) * m3 / (1 - 2 * m1) +
                          m3 / (1 - m1) * m1 / (1 - 2 * m1));
    StationaryTable t;
    t.normalizer = alpha;
    double total = 0;
    auto push = [&](const std::vector<std::string>& letters, double p) {
        t.entries.emplace_back(key_of(g, letters), p);
        total += p;
    };
    push({}, alpha);
    for (int k = 1; k <= cap; ++k) {
        push(std::vector<std::string>(k, "1"), alpha * std::pow(m1 / m2, k));
        push(std::vector<std::string>(k, "2"), alpha * std::pow(m2 / (1 - m2), k));
    }
    // words 1^r 3 1^(k-r)
    for (int k = 0; k + 1 <= cap; ++k)
        for (int r = 0; r <= k; ++r) {
            std::vector<std::string> w;
            for (int i = 0; i < r; ++i) w.push_back("1");
            w.push_back("3");
            for (int i = 0; i < k - r; ++i) w.push_back("1");
            double p = alpha * std::pow(m1 / m2, r) * (m3 / (1 - m1)) *
                       std::pow(m1 / (1 - m1), k - r);
            push(w, p);
        }
    t.truncated_mass = std::max(0.0, 1 - total);
    t.note = "words of length <= " + std::to_string(cap);
    return t;
}

StationaryTable three_partite_fcfm_table(const MatchingStructure& g, const Measure& m,
                                         int cap) {
    auto mu = [&](const std::string& n) { return m(g.index_of(n)); };
    double m1 = mu("1"), m2 = mu("2"), m3 = mu("3"), m4 = mu("4");
    double alpha =
        1.0 / (1 + m1 / (m2 + m3 - m1) + m2 / (1 - 2 * m2) + m3 / (1 - 2 * m3) +
               m4 / (m2 + m3 - m4) +
               (m1 / (m2 + m3 - m1)) * (m4 / (m2 + m3 - m1 - m4)) +
               (m4 / (m2 + m3 - m4)) * (m1 / (m2 + m3 - m1 - m4)));
    StationaryTable t;
    t.normalizer = alpha;
    double total = 0;
    auto push = [&](const std::vector<std::string>& letters, double p) {
        t.entries.emplace_back(key_of(g, letters), p);
        total += p;
    };
    push({}, alpha);
    for (int k = 1; k <= cap; ++k) {
        push(std::vector<std::string>(k, "2"), alpha * std::pow(m2 / (1 - m2), k));
        push(std::vector<std::string>(k, "3"), alpha * std::pow(m3 / (1 - m3), k));
    }
    // every interleaving of 1s and 4s; the weight depends on the counts only
    for (int len = 1; len <= cap; ++len) {
        for (std::uint32_t mask = 0; mask < (1u << len); ++mask) {
            std::vector<std::string> w;
            int ones = 0;
            for (int p = 0; p < len; ++p) {
                bool is4 = (mask >> p) & 1;
                w.push_back(is4 ? "4" : "1");
                if (!is4) ++ones;
            }
            double pr = alpha * std::pow(m1 / (m2 + m3), ones) *
                        std::pow(m4 / (m2 + m3), len - ones);
            push(w, pr);
        }
    }
    t.truncated_mass = std::max(0.0, 1 - total);
    t.note = "words of length <= " + std::to_string(cap);
    return t;
}

} // namespace

StationaryTable fcfm_graph_example_table(const std::string& name, const Measure& m,
                                         int cap) {
    if (name == "square_loops") {
        MatchingStructure g({"1", "2", "3", "4"},
                            {{"1"}, {"2"}, {"3"}, {"4"},
                             {"1", "2"}, {"2", "3"}, {"3", "4"}, {"1", "4"}});
        if (m.dim() != 4) throw input_error("square_loops has 4 classes");
        return square_loops_table(g, m);
    }
    if (name == "string_loop3") {
        MatchingStructure g({"1", "2", "3"}, {{"1", "2"}, {"2", "3"}, {"3"}});
        if (m.dim() != 3) throw input_error("string_loop3 has 3 classes");
        return string_loop3_table(g, m, cap);
    }
    if (name == "three_partite_fcfm") {
        MatchingStructure g({"1", "2", "3", "4"},
                            {{"1", "2"}, {"1", "3"}, {"2", "3"}, {"2", "4"}, {"3", "4"}});
        if (m.dim() != 4) throw input_error("three_partite_fcfm has 4 classes");
        return three_partite_fcfm_table(g, m, cap);
    }
    throw input_error("unknown example table: " + name);
}

} // namespace matchkit
