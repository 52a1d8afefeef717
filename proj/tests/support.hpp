#pragma once

// Fixture structures shared across the test suites: the worked examples of
// the library's domain plus small random generators.

#include <map>
#include <string>
#include <vector>

#include "matchkit/conditions.hpp"
#include "matchkit/measure.hpp"
#include "matchkit/policy.hpp"
#include "matchkit/rng.hpp"
#include "matchkit/structure.hpp"

namespace fixtures {

using matchkit::MatchingStructure;

// q nodes "1".."q", every 3-subset a hyperedge, minus the given triples.
MatchingStructure complete_3uniform(int q,
                                    const std::vector<std::vector<std::string>>& minus = {});

// 4-cycle 1-2-3-4 with a self-loop at every node (Example of the square).
MatchingStructure square_with_loops();

// Pendant graph 1-2, 2-3, 2-4, 3-4.
MatchingStructure pendant_graph();

// Pendant graph plus a self-loop at the given node ("2" or "3").
MatchingStructure pendant_with_loop(const std::string& node);

// String 1-2-3 with a self-loop at 3.
MatchingStructure string_with_loop3();

// Complete 3-partite graph of order 4 (parts {2}, {3}, {1,4}).
MatchingStructure three_partite_graph();

// Fano plane and the plane minus one hyperedge.
MatchingStructure fano_plane();
MatchingStructure fano_minus_457();

// Cycle graph on n nodes.
MatchingStructure cycle_graph(int n);

// Complete bipartite graph K_{a,b}; nodes "1".."a+b", first part first.
MatchingStructure complete_bipartite(int a, int b);

// Connected multigraph sampled from a seeded rng (2..max_nodes nodes).
MatchingStructure random_multigraph(matchkit::CounterRng& rng, int max_nodes);

// Connected r-uniform-ish hypergraph (edges of size 2..4) on q nodes.
MatchingStructure random_hypergraph(matchkit::CounterRng& rng, int q);

// Every connected multigraph on exactly n nodes (n <= 4 is practical).
std::vector<MatchingStructure> all_connected_multigraphs(int n);

// Every connected 3-uniform hypergraph on exactly n nodes.
std::vector<MatchingStructure> all_connected_3uniform(int n);

double total_variation(const std::map<std::string, double>& a,
                       const std::map<std::string, double>& b);

} // namespace fixtures
