#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace fixtures {

using matchkit::CounterRng;
using matchkit::NodeSet;

MatchingStructure complete_3uniform(int q,
                                    const std::vector<std::vector<std::string>>& minus) {
    std::vector<std::string> nodes;
    for (int i = 1; i <= q; ++i) nodes.push_back(std::to_string(i));
    std::set<std::set<std::string>> removed;
    for (const auto& t : minus) removed.insert(std::set<std::string>(t.begin(), t.end()));
    std::vector<std::vector<std::string>> edges;
    for (int a = 0; a < q; ++a)
        for (int b = a + 1; b < q; ++b)
            for (int c = b + 1; c < q; ++c) {
                std::vector<std::string> e{nodes[a], nodes[b], nodes[c]};
                if (!removed.count(std::set<std::string>(e.begin(), e.end())))
                    edges.push_back(e);
            }
    return MatchingStructure(nodes, edges);
}

MatchingStructure square_with_loops() {
    return MatchingStructure({"1", "2", "3", "4"},
                             {{"1"}, {"2"}, {"3"}, {"4"},
                              {"1", "2"}, {"2", "3"}, {"3", "4"}, {"1", "4"}});
}

MatchingStructure pendant_graph() {
    return MatchingStructure({"1", "2", "3", "4"},
                             {{"1", "2"}, {"2", "3"}, {"2", "4"}, {"3", "4"}});
}

MatchingStructure pendant_with_loop(const std::string& node) {
    return MatchingStructure({"1", "2", "3", "4"},
                             {{"1", "2"}, {"2", "3"}, {"2", "4"}, {"3", "4"}, {node}});
}

MatchingStructure string_with_loop3() {
    return MatchingStructure({"1", "2", "3"}, {{"1", "2"}, {"2", "3"}, {"3"}});
}

MatchingStructure three_partite_graph() {
    return MatchingStructure({"1", "2", "3", "4"},
                             {{"1", "2"}, {"1", "3"}, {"2", "3"}, {"2", "4"}, {"3", "4"}});
}

MatchingStructure fano_plane() {
    return MatchingStructure({"1", "2", "3", "4", "5", "6", "7"},
                             {{"1", "2", "4"}, {"1", "5", "6"}, {"1", "3", "7"},
                              {"2", "3", "5"}, {"4", "5", "7"}, {"4", "3", "6"},
                              {"6", "2", "7"}});
}

MatchingStructure fano_minus_457() {
    return MatchingStructure({"1", "2", "3", "4", "5", "6", "7"},
                             {{"1", "2", "4"}, {"1", "5", "6"}, {"1", "3", "7"},
                              {"2", "3", "5"}, {"4", "3", "6"}, {"6", "2", "7"}});
}

MatchingStructure cycle_graph(int n) {
    std::vector<std::string> nodes;
    for (int i = 1; i <= n; ++i) nodes.push_back(std::to_string(i));
    std::vector<std::vector<std::string>> edges;
    for (int i = 0; i < n; ++i) edges.push_back({nodes[i], nodes[(i + 1) % n]});
    return MatchingStructure(nodes, edges);
}

MatchingStructure complete_bipartite(int a, int b) {
    std::vector<std::string> nodes;
    for (int i = 1; i <= a + b; ++i) nodes.push_back(std::to_string(i));
    std::vector<std::vector<std::string>> edges;
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) edges.push_back({nodes[i], nodes[a + j]});
    return MatchingStructure(nodes, edges);
}

MatchingStructure random_multigraph(CounterRng& rng, int max_nodes) {
    for (;;) {
        int n = 2 + static_cast<int>(rng.next_below(static_cast<std::uint32_t>(max_nodes - 1)));
        std::vector<std::string> nodes;
        for (int i = 1; i <= n; ++i) nodes.push_back(std::to_string(i));
        std::vector<std::vector<std::string>> edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.next_double() < 0.55) edges.push_back({nodes[i], nodes[j]});
        for (int i = 0; i < n; ++i)
            if (rng.next_double() < 0.3) edges.push_back({nodes[i]});
        try {
            MatchingStructure s(nodes, edges);
            if (matchkit::is_connected(s)) return s;
        } catch (const matchkit::input_error&) {
        }
    }
}

MatchingStructure random_hypergraph(CounterRng& rng, int q) {
    for (;;) {
        std::vector<std::string> nodes;
        for (int i = 1; i <= q; ++i) nodes.push_back(std::to_string(i));
        int m = 2 + static_cast<int>(rng.next_below(5));
        std::set<std::set<int>> chosen;
        for (int e = 0; e < m; ++e) {
            int sz = 2 + static_cast<int>(rng.next_below(3));
            std::set<int> s;
            while (static_cast<int>(s.size()) < sz)
                s.insert(static_cast<int>(rng.next_below(static_cast<std::uint32_t>(q))));
            chosen.insert(s);
        }
        // drop dominated edges so the family is Sperner
        std::vector<std::set<int>> keep;
        for (const auto& s : chosen) {
            bool dominated = false;
            for (const auto& t : chosen)
                if (s != t && std::includes(t.begin(), t.end(), s.begin(), s.end()))
                    dominated = true;
            if (!dominated) keep.push_back(s);
        }
        std::vector<std::vector<std::string>> edges;
        for (const auto& s : keep) {
            std::vector<std::string> e;
            for (int i : s) e.push_back(nodes[i]);
            edges.push_back(e);
        }
        try {
            MatchingStructure h(nodes, edges);
            if (matchkit::is_connected(h)) return h;
        } catch (const matchkit::input_error&) {
        }
    }
}

std::vector<MatchingStructure> all_connected_multigraphs(int n) {
    std::vector<std::string> nodes;
    for (int i = 1; i <= n; ++i) nodes.push_back(std::to_string(i));
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

    std::vector<MatchingStructure> out;
    for (std::uint32_t em = 0; em < (1u << pairs.size()); ++em) {
        for (std::uint32_t lm = 0; lm < (1u << n); ++lm) {
            std::vector<std::vector<std::string>> edges;
            for (std::size_t p = 0; p < pairs.size(); ++p)
                if ((em >> p) & 1)
                    edges.push_back({nodes[pairs[p].first], nodes[pairs[p].second]});
            for (int i = 0; i < n; ++i)
                if ((lm >> i) & 1) edges.push_back({nodes[i]});
            if (edges.empty()) continue;
            try {
                MatchingStructure s(nodes, edges);
                if (matchkit::is_connected(s)) out.push_back(std::move(s));
            } catch (const matchkit::input_error&) {
            }
        }
    }
    return out;
}

std::vector<MatchingStructure> all_connected_3uniform(int n) {
    std::vector<std::string> nodes;
    for (int i = 1; i <= n; ++i) nodes.push_back(std::to_string(i));
    std::vector<std::vector<std::string>> triples;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c)
                triples.push_back({nodes[a], nodes[b], nodes[c]});

    std::vector<MatchingStructure> out;
    for (std::uint32_t m = 1; m < (1u << triples.size()); ++m) {
        std::vector<std::vector<std::string>> edges;
        for (std::size_t t = 0; t < triples.size(); ++t)
            if ((m >> t) & 1) edges.push_back(triples[t]);
        try {
            MatchingStructure h(nodes, edges);
            if (matchkit::is_connected(h)) out.push_back(std::move(h));
        } catch (const matchkit::input_error&) {
        }
    }
    return out;
}

double total_variation(const std::map<std::string, double>& a,
                       const std::map<std::string, double>& b) {
    double tv = 0;
    std::set<std::string> keys;
    for (const auto& [k, v] : a) keys.insert(k);
    for (const auto& [k, v] : b) keys.insert(k);
    for (const auto& k : keys) {
        double pa = a.count(k) ? a.at(k) : 0.0;
        double pb = b.count(k) ? b.at(k) : 0.0;
        tv += std::fabs(pa - pb);
    }
    return tv / 2;
}

} // namespace fixtures
