#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace matchkit {

// All enumerations are exponential in the node count; structures are capped
// so that a subset fits in a machine word.
inline constexpr int kMaxNodes = 16;

struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct unsupported_kind_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct model_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Subset of the nodes of one structure, as a bitmask over node indices.
struct NodeSet {
    std::uint32_t bits = 0;

    NodeSet() = default;
    explicit NodeSet(std::uint32_t b) : bits(b) {}

    bool contains(int i) const { return (bits >> i) & 1u; }
    void add(int i) { bits |= (1u << i); }
    void remove(int i) { bits &= ~(1u << i); }
    bool empty() const { return bits == 0; }
    int size() const { return __builtin_popcount(bits); }
    bool subset_of(NodeSet o) const { return (bits & ~o.bits) == 0; }
    NodeSet operator|(NodeSet o) const { return NodeSet(bits | o.bits); }
    NodeSet operator&(NodeSet o) const { return NodeSet(bits & o.bits); }
    NodeSet minus(NodeSet o) const { return NodeSet(bits & ~o.bits); }
    bool operator==(const NodeSet&) const = default;
    bool intersects(NodeSet o) const { return (bits & o.bits) != 0; }

    std::vector<int> members() const {
        std::vector<int> out;
        for (std::uint32_t b = bits; b; b &= b - 1)
            out.push_back(__builtin_ctz(b));
        return out;
    }
};

enum class StructureKind { graph, multigraph, hypergraph };

// A matching structure (V, S): node set plus a family of edges, each a set
// of nodes.  A singleton edge {i} encodes a self-loop at i.  Graphs,
// multigraphs and hypergraphs share this one representation.
class MatchingStructure {
public:
    MatchingStructure(std::vector<std::string> nodes,
                      std::vector<std::vector<std::string>> edges);

    int order() const { return static_cast<int>(names_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<std::string>& node_names() const { return names_; }
    const std::string& name_of(int i) const { return names_[i]; }
    int index_of(const std::string& name) const;

    const std::vector<NodeSet>& edges() const { return edges_; }
    NodeSet edge(int e) const { return edges_[e]; }
    NodeSet all_nodes() const { return NodeSet((order() == 32) ? ~0u : ((1u << order()) - 1)); }

    StructureKind kind() const { return kind_; }
    bool is_graph() const { return kind_ == StructureKind::graph; }
    bool is_hypergraph() const { return kind_ == StructureKind::hypergraph; }

    // V1 = nodes carrying a self-loop, V2 = the rest.
    NodeSet v1() const { return v1_; }
    NodeSet v2() const { return all_nodes().minus(v1_); }
    bool has_loop(int i) const { return v1_.contains(i); }

    const std::vector<int>& edges_of(int node) const { return edges_of_[node]; }
    int degree(int node) const { return static_cast<int>(edges_of_[node].size()); }

    std::vector<std::string> set_names(NodeSet s) const;
    NodeSet set_from_names(const std::vector<std::string>& names) const;

private:
    std::vector<std::string> names_;
    std::vector<NodeSet> edges_;
    std::vector<std::vector<int>> edges_of_;
    NodeSet v1_;
    StructureKind kind_ = StructureKind::graph;
};

// ---- operations on structures ------------------------------------------

// S(A): edges intersecting a, in edge-index order.
std::vector<int> edges_meeting(const MatchingStructure& s, NodeSet a);

// E(U) for graphs/multigraphs: all neighbours of u, node u itself included
// exactly when it has a self-loop.
NodeSet neighborhood(const MatchingStructure& s, NodeSet u);

// All nonempty independent sets, ordered by size then lexicographically
// (by lowest-index members).
std::vector<NodeSet> independent_sets(const MatchingStructure& s);

struct TransversalInfo {
    int tau = 0;
    std::vector<NodeSet> witnesses; // all transversals of size tau
};
TransversalInfo transversal_number(const MatchingStructure& s);

// Minimum-weight transversal among all transversals (arbitrary weights).
std::pair<double, NodeSet> min_weight_transversal(const MatchingStructure& s,
                                                  const std::vector<double>& w);

struct RankInfo {
    int rank = 0;
    int antirank = 0;
    bool uniform = false;
};
RankInfo rank_antirank(const MatchingStructure& s);

// Connectivity of the representative graph on edges (edges adjacent iff
// they intersect); a node in no edge makes the structure disconnected.
bool is_connected(const MatchingStructure& s);

// Multigraph with the self-loops deleted.
MatchingStructure maximal_subgraph(const MatchingStructure& g);

// Blow-up: every self-looped node i gets a copy "i_u" adjacent to all of
// i's neighbours and to i itself; self-loops disappear.
MatchingStructure minimal_blowup(const MatchingStructure& g);
inline std::string blowup_copy_name(const std::string& base) { return base + "_u"; }

// Partition of V into maximal independent sets with every cross edge
// present (test applied to the maximal subgraph); parts ordered by size
// then lexicographically.
std::optional<std::vector<NodeSet>> complete_partite_partition(const MatchingStructure& g);

// ---- non-stabilizability classifiers ------------------------------------

enum class NonStabKind {
    isolated_pair_in_edge,   // some edge holds two degree-1 nodes
    uniform_star,            // r-uniform with transversal number 1
    degree_one_cover,        // subset B: every edge of S(B) has a degree-1 node,
                             // one of them outside B
    uniform_bipartite,       // r-uniform bipartite split (V1, V2)
    r_partite,               // r-partite partition
    uniform_cycle,           // r-uniform l-cycle with r | q
    fano_conjecture,         // Fano plane: stabilizability open, reported as unknown
};

struct NonStabFinding {
    NonStabKind kind;
    std::string description;
    std::vector<NodeSet> witness_sets;
    std::vector<int> witness_edges;
};

// Runs the hypergraph non-stabilizability criteria and returns every one
// that triggers.  An empty list is *not* a stability proof.
std::vector<NonStabFinding> classify_nonstabilizable(const MatchingStructure& h);

bool is_fano_plane(const MatchingStructure& h);

// True when the structure is a plain graph (no self-loops) that admits a
// proper 2-coloring.
bool is_bipartite_graph(const MatchingStructure& s);

} // namespace matchkit
