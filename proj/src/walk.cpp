#include "merw/walk.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "merw/rng.hpp"

namespace merw {

namespace {

Vec stationary_from_eigen(const WeightedGraph& s_graph, const PowerOptions& options) {
    // pi of a stochastic matrix is the PF left amplitude times the (constant)
    // right amplitude, which the shared eigensolver already normalizes to
    // sum(phi_i psi_i) = 1.
    const EigenPair pair = dominant_eigenpair(s_graph, options);
    Vec pi(s_graph.size());
    for (std::size_t i = 0; i < pi.size(); ++i) pi[i] = pair.phi[i] * pair.psi[i];
    const double total = sum(pi);
    scale(pi, 1.0 / total);
    return pi;
}

}  // namespace

StochasticMatrix generic_walk(const WeightedGraph& graph, const PowerOptions& options) {
    const Degrees deg = degrees(graph);
    for (std::size_t i = 0; i < graph.size(); ++i)
        if (deg.out[i] <= 0.0)
            throw DanglingVertex("vertex " + std::to_string(i) + " has no outgoing edge");

    std::vector<Triplet> entries;
    entries.reserve(graph.edge_count());
    graph.for_each_edge([&](std::size_t i, std::size_t j, double w) {
        entries.push_back({i, j, w / deg.out[i]});
    });
    StochasticMatrix result;
    result.s = WeightedGraph(graph.size(), std::move(entries), GraphKind::Weighted);
    result.provenance = WalkKind::GRW;
    if (graph.is_symmetric()) {
        const double total = sum(deg.out);
        result.pi.resize(graph.size());
        for (std::size_t i = 0; i < graph.size(); ++i) result.pi[i] = deg.out[i] / total;
    } else {
        result.pi = stationary_from_eigen(result.s, options);
    }
    return result;
}

StochasticMatrix generic_walk_l(const WeightedGraph& graph, std::size_t l, const PowerOptions& options) {
    if (l < 1) throw InvalidArgument("grw_l requires l >= 1");
    if (!strongly_connected(graph).strongly_connected)
        throw NotStronglyConnected("grw_l requires a strongly connected graph");

    // u = M^{l-1} * ones; only ratios matter, so renormalize along the way.
    Vec u(graph.size(), 1.0);
    for (std::size_t step = 1; step < l; ++step) {
        u = graph.apply_right(u);
        const double m = norm_inf(u);
        if (m == 0.0) throw DanglingVertex("graph has a vertex with no length-l continuation");
        scale(u, 1.0 / m);
    }

    Vec row_sum(graph.size(), 0.0);
    graph.for_each_edge([&](std::size_t i, std::size_t j, double w) { row_sum[i] += w * u[j]; });
    std::vector<Triplet> entries;
    entries.reserve(graph.edge_count());
    graph.for_each_edge([&](std::size_t i, std::size_t j, double w) {
        entries.push_back({i, j, w * u[j] / row_sum[i]});
    });
    StochasticMatrix result;
    result.s = WeightedGraph(graph.size(), std::move(entries), GraphKind::Weighted);
    result.provenance = l == 1 ? WalkKind::GRW : WalkKind::GRWl;
    result.path_length = l;
    result.pi = l == 1 && graph.is_symmetric()
                    ? generic_walk(graph, options).pi
                    : stationary_from_eigen(result.s, options);
    return result;
}

StochasticMatrix max_entropy_walk(const WeightedGraph& graph, const PowerOptions& options) {
    if (!strongly_connected(graph).strongly_connected)
        throw NotStronglyConnected("merw requires a strongly connected graph");
    EigenPair pair = dominant_eigenpair(graph, options);

    Vec row_sum(graph.size(), 0.0);
    graph.for_each_edge([&](std::size_t i, std::size_t j, double w) {
        row_sum[i] += w * pair.psi[j];
    });
    std::vector<Triplet> entries;
    entries.reserve(graph.edge_count());
    graph.for_each_edge([&](std::size_t i, std::size_t j, double w) {
        entries.push_back({i, j, w * pair.psi[j] / row_sum[i]});
    });

    StochasticMatrix result;
    result.s = WeightedGraph(graph.size(), std::move(entries), GraphKind::Weighted);
    result.provenance = WalkKind::MERW;
    result.pi.resize(graph.size());
    for (std::size_t i = 0; i < graph.size(); ++i) result.pi[i] = pair.phi[i] * pair.psi[i];
    const double total = sum(result.pi);
    scale(result.pi, 1.0 / total);
    result.eigen = std::move(pair);
    return result;
}

WeightedGraph propagator(const WeightedGraph& graph, const StochasticMatrix& stoch,
                         std::size_t l) {
    const std::size_t n = stoch.s.size();
    if (l == 0) {
        std::vector<Triplet> entries;
        for (std::size_t i = 0; i < n; ++i) entries.push_back({i, i, 1.0});
        return WeightedGraph(n, std::move(entries), GraphKind::Weighted);
    }
    if (stoch.provenance == WalkKind::MERW && stoch.eigen) {
        // (S^l)_ij = (M^l)_ij / lambda^l * psi_j / psi_i, evaluated on the
        // pre-scaled matrix M/lambda so large l stays bounded.
        const EigenPair& pair = *stoch.eigen;
        std::vector<Triplet> scaled;
        scaled.reserve(graph.edge_count());
        graph.for_each_edge([&](std::size_t i, std::size_t j, double w) {
            scaled.push_back({i, j, w / pair.lambda});
        });
        const WeightedGraph powered =
            matrix_power(WeightedGraph(n, std::move(scaled), GraphKind::Weighted), l);
        std::vector<Triplet> entries;
        powered.for_each_edge([&](std::size_t i, std::size_t j, double w) {
            entries.push_back({i, j, w * pair.psi[j] / pair.psi[i]});
        });
        return WeightedGraph(n, std::move(entries), GraphKind::Weighted);
    }
    return matrix_power(stoch.s, l);
}

double log_path_probability(const StochasticMatrix& stoch, const Path& path) {
    double log_p = 0.0;
    for (std::size_t t = 0; t + 1 < path.vertices.size(); ++t) {
        const double s = stoch.s.weight(path.vertices[t], path.vertices[t + 1]);
        if (s <= 0.0) throw InvalidPath("path uses a transition with zero probability");
        log_p += std::log(s);
    }
    return log_p;
}

double path_probability(const StochasticMatrix& stoch, const Path& path) {
    return std::exp(log_path_probability(stoch, path));
}

// ---------------------------------------------------------------------------
// Equiprobability of pathways
// ---------------------------------------------------------------------------

namespace {

struct PathGroupTable {
    // key -> (representative path, log(prob) - log(weight))
    std::vector<double> ratio;
    std::vector<char> seen;
    std::vector<std::vector<std::size_t>> representative;
    std::size_t n = 0;
    std::size_t max_len = 0;

    PathGroupTable(std::size_t n_, std::size_t max_len_) : n(n_), max_len(max_len_) {
        const std::size_t total = n * n * max_len;
        ratio.assign(total, 0.0);
        seen.assign(total, 0);
        representative.resize(total);
    }

    std::size_t key(std::size_t start, std::size_t end, std::size_t len) const {
        return (start * n + end) * max_len + (len - 1);
    }
};

}  // namespace

EquiprobabilityResult equiprobability_check(const WeightedGraph& graph,
                                            const StochasticMatrix& stoch, std::size_t max_len,
                                            double tol) {
    const std::size_t n = graph.size();
    if (n > 12 || max_len > 10)
        throw InvalidArgument("equiprobability_check is exhaustive; use n <= 12, max_len <= 10");

    PathGroupTable table(n, max_len);
    EquiprobabilityResult result;

    std::vector<std::size_t> path;
    std::function<void(std::size_t, double, double)> extend =
        [&](std::size_t v, double log_prob, double log_weight) {
            const std::size_t len = path.size() - 1;
            if (len >= 1) {
                const std::size_t k = table.key(path.front(), v, len);
                const double r = log_prob - log_weight;
                if (!table.seen[k]) {
                    table.seen[k] = 1;
                    table.ratio[k] = r;
                    table.representative[k] = path;
                } else if (std::abs(r - table.ratio[k]) > tol) {
                    if (result.equiprobable ||
                        std::abs(r - table.ratio[k]) > result.log_ratio_gap) {
                        result.equiprobable = false;
                        result.witness_a = table.representative[k];
                        result.witness_b = path;
                        result.log_ratio_gap = std::abs(r - table.ratio[k]);
                    }
                }
            }
            if (len == max_len) return;
            stoch.s.matrix().for_each_in_row(v, [&](std::size_t j, double s) {
                path.push_back(j);
                extend(j, log_prob + std::log(s), log_weight + std::log(graph.weight(v, j)));
                path.pop_back();
            });
        };

    for (std::size_t start = 0; start < n; ++start) {
        path.assign(1, start);
        extend(start, 0.0, 0.0);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Entropy and inequalities
// ---------------------------------------------------------------------------

EntropyReport entropy_report(const WeightedGraph& graph, const StochasticMatrix& stoch,
                             double beta, const PowerOptions& options) {
    if (beta <= 0.0) throw InvalidArgument("entropy_report requires beta > 0");
    EntropyReport report;

    double h = 0.0;
    double u = 0.0;
    stoch.s.for_each_edge([&](std::size_t i, std::size_t j, double s) {
        const double m = graph.weight(i, j);
        h -= stoch.pi[i] * s * lg(s / m);
        u += stoch.pi[i] * s * (-std::log(m) / beta);
    });
    report.entropy_rate = h;
    report.mean_energy = u;
    // F = U - T*S; the full lg-based rate converts to nats via ln 2.
    report.free_energy = u - std::log(2.0) / beta * h;

    const double lambda = stoch.provenance == WalkKind::MERW && stoch.eigen
                              ? stoch.eigen->lambda
                              : dominant_eigenpair(graph, options).lambda;
    report.max_rate = lg(lambda);
    return report;
}

std::array<double, 5> degree_inequality_chain(const WeightedGraph& graph,
                                              const PowerOptions& options) {
    if (!strongly_connected(graph).strongly_connected)
        throw NotStronglyConnected("degree_inequality_chain requires strong connectivity");
    const Degrees deg = degrees(graph);
    const double n = static_cast<double>(graph.size());
    const double dmin = *std::min_element(deg.out.begin(), deg.out.end());
    const double dmax = *std::max_element(deg.out.begin(), deg.out.end());
    const double dsum = sum(deg.out);
    double weighted_log = 0.0;
    for (double d : deg.out) weighted_log += d > 0.0 ? d * std::log(d) : 0.0;
    const double effective = std::exp(weighted_log / dsum);
    const double lambda = dominant_eigenpair(graph, options).lambda;

    const std::array<double, 5> chain{dmin, dsum / n, effective, lambda, dmax};
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
        const double slack = 1e-10 * std::max(1.0, std::abs(chain[k]));
        if (chain[k] > chain[k + 1] + slack)
            throw NumericFailure("degree inequality chain violated at link " + std::to_string(k));
    }
    return chain;
}

CurrentReport detailed_balance_and_current(const StochasticMatrix& stoch, double balance_tol) {
    const std::size_t n = stoch.s.size();
    std::vector<Triplet> entries;
    entries.reserve(stoch.s.edge_count() * 2);
    stoch.s.for_each_edge([&](std::size_t i, std::size_t j, double s) {
        if (i == j) return;
        const double flow = stoch.pi[i] * s;
        entries.push_back({i, j, flow});
        entries.push_back({j, i, -flow});
    });
    CurrentReport report;
    report.current = Csr(n, std::move(entries));
    report.max_abs_current = report.current.max_abs();
    report.balanced = report.max_abs_current <= balance_tol;
    Vec kirchhoff(n, 0.0);
    report.current.for_each([&](std::size_t i, std::size_t, double v) { kirchhoff[i] += v; });
    report.max_kirchhoff_residual = norm_inf(kirchhoff);
    return report;
}

// ---------------------------------------------------------------------------
// Kullback-Leibler divergence
// ---------------------------------------------------------------------------

double kl_divergence(const Vec& q, const Vec& p) {
    if (q.size() != p.size()) throw InvalidArgument("kl_divergence: length mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] < 0.0 || p[i] < 0.0) throw InvalidArgument("kl_divergence: negative density");
        if (q[i] > 0.0) {
            if (p[i] <= 0.0) throw SupportMismatch("q has mass outside supp(p)");
            d += q[i] * lg(q[i] / p[i]);
        }
    }
    return std::max(d, 0.0);
}

double concentration_probability(double n, const Vec& q, const Vec& p) {
    return std::exp2(-n * kl_divergence(q, p));
}

// ---------------------------------------------------------------------------
// Trajectory sampling
// ---------------------------------------------------------------------------

TrajectorySample sample_trajectory(const StochasticMatrix& stoch, std::size_t start,
                                   std::size_t steps, std::uint64_t seed,
                                   std::uint64_t trajectory_id) {
    if (start >= stoch.s.size()) throw InvalidArgument("start vertex out of range");
    const CounterRng rng(seed, CounterRng::fnv1a("trajectory") ^ CounterRng::mix(trajectory_id));

    TrajectorySample sample;
    sample.seed = seed;
    sample.path.reserve(steps + 1);
    sample.path.push_back(start);

    std::size_t v = start;
    for (std::size_t step = 0; step < steps; ++step) {
        const double u = rng.uniform(step);
        double acc = 0.0;
        std::size_t chosen = v;
        double chosen_p = 0.0;
        bool done = false;
        stoch.s.matrix().for_each_in_row(v, [&](std::size_t j, double s) {
            if (done) return;
            acc += s;
            chosen = j;
            chosen_p = s;
            if (u < acc) done = true;
        });
        if (chosen_p <= 0.0) throw DanglingVertex("trajectory reached a vertex with no transitions");
        sample.log_probability += std::log(chosen_p);
        sample.path.push_back(chosen);
        v = chosen;
    }
    return sample;
}

}  // namespace merw
