#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "merw/graph.hpp"
#include "merw/spectral.hpp"

namespace merw {

enum class WalkKind { GRW, GRWl, MERW, TimeSlice };

// Row-stochastic transition matrix together with its stationary density.
struct StochasticMatrix {
    WeightedGraph s;
    Vec pi;
    WalkKind provenance = WalkKind::GRW;
    std::size_t path_length = 1;      // l for GRWl
    std::optional<EigenPair> eigen;   // populated by merw()
};

// S_ij = M_ij / d_i. Throws DanglingVertex on zero out-degree.
StochasticMatrix generic_walk(const WeightedGraph& graph, const PowerOptions& options = {});

// Uniform distribution among length-l paths: S_ij proportional to
// M_ij * sum_k (M^{l-1})_{jk}. l = 1 reproduces grw exactly.
StochasticMatrix generic_walk_l(const WeightedGraph& graph, std::size_t l, const PowerOptions& options = {});

// S_ij = (M_ij / lambda) (psi_j / psi_i), pi_i = phi_i psi_i.
StochasticMatrix max_entropy_walk(const WeightedGraph& graph, const PowerOptions& options = {});

// l-step transition matrix. MERW provenance uses the closed form
// (M^l)_ij / lambda^l * psi_j / psi_i; other walks multiply S out.
WeightedGraph propagator(const WeightedGraph& graph, const StochasticMatrix& stoch, std::size_t l);

// Product of transition probabilities along the path (log-domain inside).
double path_probability(const StochasticMatrix& stoch, const Path& path);
double log_path_probability(const StochasticMatrix& stoch, const Path& path);

// Exhaustive check of the equal-pathway-probability property: for every pair
// of same-endpoint same-length paths, prob ratio must equal the weight ratio.
struct EquiprobabilityResult {
    bool equiprobable = true;
    std::vector<std::size_t> witness_a;
    std::vector<std::size_t> witness_b;
    double log_ratio_gap = 0.0;
};

EquiprobabilityResult equiprobability_check(const WeightedGraph& graph,
                                            const StochasticMatrix& stoch, std::size_t max_len,
                                            double tol = 1e-9);

// Entropy production (bits/step), its lg(lambda) bound, and the free-energy
// bookkeeping for Boltzmann-weighted graphs (V_ij = -ln(M_ij)/beta on edges).
struct EntropyReport {
    double entropy_rate = 0.0;  // bits per step
    double max_rate = 0.0;      // lg lambda
    double mean_energy = 0.0;   // action per step
    double free_energy = 0.0;   // action per step
};

EntropyReport entropy_report(const WeightedGraph& graph, const StochasticMatrix& stoch,
                             double beta = 1.0, const PowerOptions& options = {});

// (min d, mean d, exp(sum d ln d / sum d), lambda, max d), verified
// non-decreasing. Throws NumericFailure if a link is violated.
std::array<double, 5> degree_inequality_chain(const WeightedGraph& graph,
                                              const PowerOptions& options = {});

// Antisymmetric probability current I_ij = pi_i S_ij - pi_j S_ji.
struct CurrentReport {
    bool balanced = true;
    double max_abs_current = 0.0;
    double max_kirchhoff_residual = 0.0;
    Csr current;  // antisymmetric, pattern of S plus its transpose
};

CurrentReport detailed_balance_and_current(const StochasticMatrix& stoch,
                                           double balance_tol = 1e-10);

// D_KL(q || p) in bits. Throws SupportMismatch unless supp(q) within supp(p).
double kl_divergence(const Vec& q, const Vec& p);

// Asymptotic probability 2^{-n D_KL(q||p)} of drawing empirical density q
// from n samples of p.
double concentration_probability(double n, const Vec& q, const Vec& p);

// Deterministic trajectory sampling: every step draws from a counter-based
// generator keyed by (seed, trajectory id, step).
struct TrajectorySample {
    std::uint64_t seed = 0;
    std::vector<std::size_t> path;
    double log_probability = 0.0;
};

TrajectorySample sample_trajectory(const StochasticMatrix& stoch, std::size_t start,
                                   std::size_t steps, std::uint64_t seed,
                                   std::uint64_t trajectory_id = 0);

}  // namespace merw
