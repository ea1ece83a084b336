#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "merw/linalg.hpp"

namespace merw {

enum class GraphKind { Simple, MultiEdge, Weighted };

std::string to_string(GraphKind kind);
GraphKind graph_kind_from_string(const std::string& s);

// Immutable weighted directed graph identified with its nonnegative weight
// matrix M. Entries are kept in sparse form for mat-vec work; a dense mirror
// is materialized up to kDenseLimit vertices.
class WeightedGraph {
public:
    static constexpr std::size_t kDenseLimit = 4096;

    WeightedGraph() = default;
    WeightedGraph(std::size_t n, std::vector<Triplet> entries, GraphKind kind);

    static WeightedGraph from_rows(const std::vector<Vec>& rows, GraphKind kind);

    std::size_t size() const { return csr_.size(); }
    GraphKind kind() const { return kind_; }
    bool has_dense() const { return !dense_.empty(); }
    const Vec& dense() const { return dense_; }
    const Csr& matrix() const { return csr_; }

    double weight(std::size_t i, std::size_t j) const {
        if (!dense_.empty()) return dense_[i * size() + j];
        return csr_.at(i, j);
    }

    std::size_t edge_count() const { return csr_.nonzeros(); }
    bool is_symmetric() const { return csr_.is_symmetric(); }

    Vec apply_right(const Vec& x) const { return csr_.apply_right(x); }
    Vec apply_left(const Vec& x) const { return csr_.apply_left(x); }

    WeightedGraph transpose() const;

    template <class F>
    void for_each_edge(F&& f) const { csr_.for_each(std::forward<F>(f)); }

private:
    Csr csr_;
    Vec dense_;
    GraphKind kind_ = GraphKind::Weighted;
};

// Builder used by generators that accumulate edges before freezing the graph.
class GraphBuilder {
public:
    GraphBuilder(std::size_t n, GraphKind kind) : n_(n), kind_(kind) {}

    void add(std::size_t i, std::size_t j, double w) { entries_.push_back({i, j, w}); }

    WeightedGraph build() { return WeightedGraph(n_, std::move(entries_), kind_); }

private:
    std::size_t n_;
    GraphKind kind_;
    std::vector<Triplet> entries_;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct ValidationIssue {
    enum class Code { NegativeWeight, NonFiniteWeight, KindViolation, IsolatedVertex };
    Code code;
    std::size_t row;
    std::size_t col;  // == row for vertex-level issues
    std::string detail;
};

struct ValidationReport {
    bool ok = true;
    std::vector<ValidationIssue> issues;

    bool has(ValidationIssue::Code code) const;
};

// Validates a raw matrix against a kind without mutating anything.
// Throws NotSquare for ragged input and InvalidWeight for NaN entries.
ValidationReport validate(const std::vector<Vec>& rows, GraphKind kind);
ValidationReport validate(const WeightedGraph& graph);

// ---------------------------------------------------------------------------
// Degrees and connectivity
// ---------------------------------------------------------------------------

struct Degrees {
    Vec out;
    Vec in;
};

Degrees degrees(const WeightedGraph& graph);

struct SccResult {
    bool strongly_connected;
    std::vector<std::size_t> component_of;     // vertex -> component id
    std::size_t component_count;
    std::vector<std::size_t> largest_component;  // vertices, ascending
};

SccResult strongly_connected(const WeightedGraph& graph);

// Induced subgraph on the largest strongly connected component, plus the map
// from new vertex ids back to the original ones.
std::pair<WeightedGraph, std::vector<std::size_t>> largest_scc_subgraph(const WeightedGraph& graph);

// ---------------------------------------------------------------------------
// Period
// ---------------------------------------------------------------------------

struct PeriodDecomposition {
    std::size_t period = 1;
    std::vector<std::size_t> component_of;  // vertex -> residue class in [0, period)
    std::size_t reference_vertex = 0;
};

// BFS layering from the reference vertex plus gcd of edge discrepancies.
// Throws NotStronglyConnected.
PeriodDecomposition period(const WeightedGraph& graph);

// ---------------------------------------------------------------------------
// Matrix powers and transition-time expansion
// ---------------------------------------------------------------------------

// Entrywise exact power by repeated multiplication (binary exponentiation).
// Throws Overflow once any entry saturates the double range.
WeightedGraph matrix_power(const WeightedGraph& graph, std::size_t l);

struct ExpandedGraph {
    WeightedGraph graph;
    // original vertex -> vertex id in the expanded graph (prefix identity)
    std::vector<std::size_t> main_vertex;
    // expanded vertex -> the original vertex whose outgoing transition it
    // belongs to (main vertices map to themselves)
    std::vector<std::size_t> source_of;
};

// Replaces every edge of transition time tau >= 2 by a one-directional chain
// of tau-1 auxiliary vertices. The full edge weight sits on the first chain
// edge; the rest carry weight 1.
ExpandedGraph expand_transition_times(const WeightedGraph& graph,
                                      const std::map<std::pair<std::size_t, std::size_t>, std::size_t>& times);

// ---------------------------------------------------------------------------
// Paths
// ---------------------------------------------------------------------------

struct Path {
    std::vector<std::size_t> vertices;
    double weight_product = 1.0;
};

// Validates consecutive edges and accumulates the weight product.
// Throws InvalidPath.
Path make_path(const WeightedGraph& graph, std::vector<std::size_t> vertices);

// ---------------------------------------------------------------------------
// Graph file format:  "merw-graph v1 n=<N> kind=<...>" header + "i j w" lines.
// ---------------------------------------------------------------------------

void save_graph(std::ostream& out, const WeightedGraph& graph);
WeightedGraph load_graph(std::istream& in);
void save_graph_file(const std::string& path, const WeightedGraph& graph);
WeightedGraph load_graph_file(const std::string& path);

}  // namespace merw
