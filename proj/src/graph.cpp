#include "merw/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "merw/io.hpp"

namespace merw {

std::string to_string(GraphKind kind) {
    switch (kind) {
        case GraphKind::Simple: return "simple";
        case GraphKind::MultiEdge: return "multi";
        case GraphKind::Weighted: return "weighted";
    }
    return "weighted";
}

GraphKind graph_kind_from_string(const std::string& s) {
    if (s == "simple") return GraphKind::Simple;
    if (s == "multi") return GraphKind::MultiEdge;
    if (s == "weighted") return GraphKind::Weighted;
    throw InvalidArgument("unknown graph kind: " + s);
}

namespace {

void check_entry(std::size_t i, std::size_t j, double w, GraphKind kind) {
    if (!std::isfinite(w)) throw InvalidWeight("non-finite weight at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    if (w < 0.0) throw NegativeWeight("negative weight at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    if (kind == GraphKind::Simple && w != 0.0 && w != 1.0)
        throw InvalidWeight("simple graph weight not in {0,1}");
    if (kind == GraphKind::MultiEdge && w != std::floor(w))
        throw InvalidWeight("multi-edge graph weight not integral");
}

}  // namespace

WeightedGraph::WeightedGraph(std::size_t n, std::vector<Triplet> entries, GraphKind kind)
    : kind_(kind) {
    for (const Triplet& t : entries) check_entry(t.row, t.col, t.value, kind);
    csr_ = Csr(n, std::move(entries));
    if (n <= kDenseLimit) {
        dense_.assign(n * n, 0.0);
        csr_.for_each([&](std::size_t i, std::size_t j, double v) { dense_[i * n + j] = v; });
    }
}

WeightedGraph WeightedGraph::from_rows(const std::vector<Vec>& rows, GraphKind kind) {
    const std::size_t n = rows.size();
    std::vector<Triplet> entries;
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw NotSquare("row " + std::to_string(i) + " has wrong length");
        for (std::size_t j = 0; j < n; ++j)
            if (rows[i][j] != 0.0) entries.push_back({i, j, rows[i][j]});
    }
    return WeightedGraph(n, std::move(entries), kind);
}

WeightedGraph WeightedGraph::transpose() const {
    std::vector<Triplet> entries;
    entries.reserve(edge_count());
    for_each_edge([&](std::size_t i, std::size_t j, double v) { entries.push_back({j, i, v}); });
    return WeightedGraph(size(), std::move(entries), kind_);
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

bool ValidationReport::has(ValidationIssue::Code code) const {
    for (const auto& issue : issues)
        if (issue.code == code) return true;
    return false;
}

ValidationReport validate(const std::vector<Vec>& rows, GraphKind kind) {
    const std::size_t n = rows.size();
    ValidationReport report;
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw NotSquare("row " + std::to_string(i) + " has wrong length");
        for (std::size_t j = 0; j < n; ++j) {
            const double w = rows[i][j];
            if (std::isnan(w)) throw InvalidWeight("NaN weight at (" + std::to_string(i) + "," + std::to_string(j) + ")");
            if (!std::isfinite(w)) {
                report.issues.push_back({ValidationIssue::Code::NonFiniteWeight, i, j, "infinite weight"});
            } else if (w < 0.0) {
                report.issues.push_back({ValidationIssue::Code::NegativeWeight, i, j, "negative weight"});
            } else if (kind == GraphKind::Simple && w != 0.0 && w != 1.0) {
                report.issues.push_back({ValidationIssue::Code::KindViolation, i, j, "simple graph weight not in {0,1}"});
            } else if (kind == GraphKind::MultiEdge && w != std::floor(w)) {
                report.issues.push_back({ValidationIssue::Code::KindViolation, i, j, "multi-edge weight not integral"});
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        bool isolated = true;
        for (std::size_t j = 0; j < n && isolated; ++j)
            if (rows[i][j] != 0.0 || rows[j][i] != 0.0) isolated = false;
        if (isolated)
            report.issues.push_back({ValidationIssue::Code::IsolatedVertex, i, i, "vertex has no incident edge"});
    }
    report.ok = report.issues.empty();
    return report;
}

ValidationReport validate(const WeightedGraph& graph) {
    const std::size_t n = graph.size();
    ValidationReport report;
    std::vector<char> touched(n, 0);
    graph.for_each_edge([&](std::size_t i, std::size_t j, double w) {
        touched[i] = touched[j] = 1;
        if (graph.kind() == GraphKind::Simple && w != 1.0)
            report.issues.push_back({ValidationIssue::Code::KindViolation, i, j, "simple graph weight not 1"});
        if (graph.kind() == GraphKind::MultiEdge && w != std::floor(w))
            report.issues.push_back({ValidationIssue::Code::KindViolation, i, j, "multi-edge weight not integral"});
    });
    for (std::size_t i = 0; i < n; ++i)
        if (!touched[i])
            report.issues.push_back({ValidationIssue::Code::IsolatedVertex, i, i, "vertex has no incident edge"});
    report.ok = report.issues.empty();
    return report;
}

// ---------------------------------------------------------------------------
// Degrees, SCC, period
// ---------------------------------------------------------------------------

Degrees degrees(const WeightedGraph& graph) {
    Degrees d;
    d.out.assign(graph.size(), 0.0);
    d.in.assign(graph.size(), 0.0);
    graph.for_each_edge([&](std::size_t i, std::size_t j, double w) {
        d.out[i] += w;
        d.in[j] += w;
    });
    return d;
}

namespace {

// Iterative Tarjan; recursion depth would be a liability on path-like graphs.
struct TarjanState {
    const WeightedGraph& g;
    std::vector<std::size_t> index, lowlink, component;
    std::vector<char> on_stack;
    std::vector<std::size_t> stack;
    std::size_t next_index = 0;
    std::size_t components = 0;
    static constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();

    explicit TarjanState(const WeightedGraph& graph)
        : g(graph),
          index(graph.size(), kUnset),
          lowlink(graph.size(), 0),
          component(graph.size(), kUnset),
          on_stack(graph.size(), 0) {}

    void run(std::size_t root, const std::vector<std::vector<std::size_t>>& adj) {
        struct Frame { std::size_t v; std::size_t next_child; };
        std::vector<Frame> frames;
        frames.push_back({root, 0});
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.next_child < adj[f.v].size()) {
                const std::size_t w = adj[f.v][f.next_child++];
                if (index[w] == kUnset) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    lowlink[f.v] = std::min(lowlink[f.v], index[w]);
                }
            } else {
                if (lowlink[f.v] == index[f.v]) {
                    while (true) {
                        const std::size_t w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        component[w] = components;
                        if (w == f.v) break;
                    }
                    ++components;
                }
                const std::size_t v = f.v;
                frames.pop_back();
                if (!frames.empty())
                    lowlink[frames.back().v] = std::min(lowlink[frames.back().v], lowlink[v]);
            }
        }
    }
};

std::vector<std::vector<std::size_t>> adjacency_lists(const WeightedGraph& graph) {
    std::vector<std::vector<std::size_t>> adj(graph.size());
    graph.for_each_edge([&](std::size_t i, std::size_t j, double) { adj[i].push_back(j); });
    return adj;
}

}  // namespace

SccResult strongly_connected(const WeightedGraph& graph) {
    const std::size_t n = graph.size();
    SccResult result;
    result.component_of.assign(n, 0);
    if (n == 0) {
        result.strongly_connected = true;
        result.component_count = 0;
        return result;
    }
    const auto adj = adjacency_lists(graph);
    TarjanState tarjan(graph);
    for (std::size_t v = 0; v < n; ++v)
        if (tarjan.index[v] == TarjanState::kUnset) tarjan.run(v, adj);
    result.component_of = tarjan.component;
    result.component_count = tarjan.components;
    result.strongly_connected = tarjan.components == 1;

    std::vector<std::size_t> sizes(tarjan.components, 0);
    for (std::size_t v = 0; v < n; ++v) ++sizes[tarjan.component[v]];
    const std::size_t best =
        static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    for (std::size_t v = 0; v < n; ++v)
        if (tarjan.component[v] == best) result.largest_component.push_back(v);
    return result;
}

std::pair<WeightedGraph, std::vector<std::size_t>> largest_scc_subgraph(const WeightedGraph& graph) {
    const SccResult scc = strongly_connected(graph);
    const std::vector<std::size_t>& keep = scc.largest_component;
    std::vector<std::size_t> new_id(graph.size(), std::numeric_limits<std::size_t>::max());
    for (std::size_t k = 0; k < keep.size(); ++k) new_id[keep[k]] = k;
    std::vector<Triplet> entries;
    graph.for_each_edge([&](std::size_t i, std::size_t j, double w) {
        if (new_id[i] != std::numeric_limits<std::size_t>::max() &&
            new_id[j] != std::numeric_limits<std::size_t>::max())
            entries.push_back({new_id[i], new_id[j], w});
    });
    return {WeightedGraph(keep.size(), std::move(entries), graph.kind()), keep};
}

PeriodDecomposition period(const WeightedGraph& graph) {
    const std::size_t n = graph.size();
    if (n == 0) throw InvalidArgument("period of empty graph");
    if (!strongly_connected(graph).strongly_connected)
        throw NotStronglyConnected("period requires a strongly connected graph");

    // BFS distances from the reference vertex, then p = gcd over all edges of
    // |dist(u) + 1 - dist(v)|.
    const auto adj = adjacency_lists(graph);
    std::vector<std::size_t> dist(n, std::numeric_limits<std::size_t>::max());
    std::vector<std::size_t> queue;
    queue.push_back(0);
    dist[0] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::size_t u = queue[head];
        for (std::size_t v : adj[u]) {
            if (dist[v] == std::numeric_limits<std::size_t>::max()) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }

    long long g = 0;
    graph.for_each_edge([&](std::size_t i, std::size_t j, double) {
        const long long discrepancy =
            static_cast<long long>(dist[i]) + 1 - static_cast<long long>(dist[j]);
        g = std::gcd(g, std::llabs(discrepancy));
    });
    if (g == 0) g = 1;  // single vertex without self-loop

    PeriodDecomposition result;
    result.period = static_cast<std::size_t>(g);
    result.reference_vertex = 0;
    result.component_of.resize(n);
    for (std::size_t v = 0; v < n; ++v) result.component_of[v] = dist[v] % result.period;
    return result;
}

// ---------------------------------------------------------------------------
// Matrix power
// ---------------------------------------------------------------------------

namespace {

constexpr double kSaturationLimit = 1e300;

void check_saturation(const Csr& m) {
    if (m.max_abs() > kSaturationLimit)
        throw Overflow("matrix power saturated the double range");
}

}  // namespace

WeightedGraph matrix_power(const WeightedGraph& graph, std::size_t l) {
    if (l == 0) throw InvalidArgument("matrix_power requires l >= 1");
    const GraphKind kind =
        graph.kind() == GraphKind::Weighted ? GraphKind::Weighted : GraphKind::MultiEdge;
    if (l == 1) {
        std::vector<Triplet> entries;
        graph.for_each_edge([&](std::size_t i, std::size_t j, double w) { entries.push_back({i, j, w}); });
        return WeightedGraph(graph.size(), std::move(entries), l == 1 && graph.kind() == GraphKind::Simple ? GraphKind::Simple : kind);
    }
    Csr base = graph.matrix();
    Csr result;
    bool have_result = false;
    std::size_t e = l;
    while (e > 0) {
        if (e & 1) {
            result = have_result ? result.multiply(base) : base;
            have_result = true;
            check_saturation(result);
        }
        e >>= 1;
        if (e > 0) {
            base = base.multiply(base);
            check_saturation(base);
        }
    }
    std::vector<Triplet> entries;
    result.for_each([&](std::size_t i, std::size_t j, double v) { entries.push_back({i, j, v}); });
    return WeightedGraph(graph.size(), std::move(entries), kind);
}

// ---------------------------------------------------------------------------
// Transition-time expansion
// ---------------------------------------------------------------------------

ExpandedGraph expand_transition_times(
    const WeightedGraph& graph,
    const std::map<std::pair<std::size_t, std::size_t>, std::size_t>& times) {
    const std::size_t n = graph.size();
    for (const auto& [edge, tau] : times) {
        if (tau < 1) throw InvalidArgument("transition time must be >= 1");
        if (graph.weight(edge.first, edge.second) == 0.0)
            throw InvalidArgument("transition time given for a missing edge");
    }

    std::size_t total = n;
    graph.for_each_edge([&](std::size_t i, std::size_t j, double) {
        auto it = times.find({i, j});
        const std::size_t tau = it == times.end() ? 1 : it->second;
        total += tau - 1;
    });

    ExpandedGraph out;
    out.main_vertex.resize(n);
    for (std::size_t v = 0; v < n; ++v) out.main_vertex[v] = v;
    out.source_of.resize(total);
    for (std::size_t v = 0; v < n; ++v) out.source_of[v] = v;

    std::vector<Triplet> entries;
    std::size_t next_aux = n;
    graph.for_each_edge([&](std::size_t i, std::size_t j, double w) {
        auto it = times.find({i, j});
        const std::size_t tau = it == times.end() ? 1 : it->second;
        if (tau == 1) {
            entries.push_back({i, j, w});
            return;
        }
        // chain i -> a_1 -> ... -> a_{tau-1} -> j; full weight on the first hop
        std::size_t prev = i;
        for (std::size_t step = 0; step + 1 < tau; ++step) {
            const std::size_t aux = next_aux++;
            out.source_of[aux] = i;
            entries.push_back({prev, aux, step == 0 ? w : 1.0});
            prev = aux;
        }
        entries.push_back({prev, j, 1.0});
    });

    const GraphKind kind =
        graph.kind() == GraphKind::Weighted ? GraphKind::Weighted : graph.kind();
    out.graph = WeightedGraph(total, std::move(entries), kind);
    return out;
}

// ---------------------------------------------------------------------------
// Paths
// ---------------------------------------------------------------------------

Path make_path(const WeightedGraph& graph, std::vector<std::size_t> vertices) {
    if (vertices.empty()) throw InvalidPath("path needs at least one vertex");
    Path p;
    p.weight_product = 1.0;
    for (std::size_t t = 0; t + 1 < vertices.size(); ++t) {
        if (vertices[t] >= graph.size() || vertices[t + 1] >= graph.size())
            throw InvalidPath("path vertex out of range");
        const double w = graph.weight(vertices[t], vertices[t + 1]);
        if (w <= 0.0) throw InvalidPath("missing edge on path step " + std::to_string(t));
        p.weight_product *= w;
    }
    if (vertices.back() >= graph.size()) throw InvalidPath("path vertex out of range");
    p.vertices = std::move(vertices);
    return p;
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

void save_graph(std::ostream& out, const WeightedGraph& graph) {
    out << "merw-graph v1 n=" << graph.size() << " kind=" << to_string(graph.kind()) << "\n";
    graph.for_each_edge([&](std::size_t i, std::size_t j, double w) {
        out << i << " " << j << " " << format_double(w) << "\n";
    });
}

WeightedGraph load_graph(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw ConfigParse("empty graph file");
    std::istringstream hs(header);
    std::string magic, version, nfield, kindfield;
    hs >> magic >> version >> nfield >> kindfield;
    if (magic != "merw-graph" || version != "v1" || nfield.rfind("n=", 0) != 0 ||
        kindfield.rfind("kind=", 0) != 0)
        throw ConfigParse("bad graph header: " + header);
    const std::size_t n = std::stoull(nfield.substr(2));
    const GraphKind kind = graph_kind_from_string(kindfield.substr(5));

    std::vector<Triplet> entries;
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::size_t i, j;
        double w;
        if (!(ls >> i >> j >> w))
            throw ConfigParse("bad edge at line " + std::to_string(lineno));
        if (i >= n || j >= n)
            throw ConfigParse("edge index out of range at line " + std::to_string(lineno));
        entries.push_back({i, j, w});
    }
    return WeightedGraph(n, std::move(entries), kind);
}

void save_graph_file(const std::string& path, const WeightedGraph& graph) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    save_graph(out, graph);
}

WeightedGraph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    return load_graph(in);
}

}  // namespace merw
