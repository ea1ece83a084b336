#pragma once

#include <cstddef>

#include "merw/graph.hpp"

namespace merw {

// Dominant Perron-Frobenius pair of a strongly connected nonnegative matrix:
// M psi = lambda psi and phi^T M = lambda phi^T, both positive, normalized so
// phi^T psi = 1 and ||psi||_2 == ||phi||_2 (so symmetric input gives psi==phi).
struct EigenPair {
    double lambda = 0.0;
    Vec psi;
    Vec phi;
    double residual = 0.0;
};

struct PowerOptions {
    double tol = 1e-12;            // relative inf-norm residual of the eigen-equation
    std::size_t max_iters = 500000;
    // Periodic graphs are handled component-wise through M^p by default; the
    // alternative is a small diagonal shift that breaks periodicity.
    bool componentwise_periodic = true;
};

// Power iteration from the all-ones vector with per-sweep inf-norm
// normalization. Throws NotStronglyConnected or NoConvergence (the latter
// carries the plateau residual, the signature of a near-degenerate pair).
EigenPair dominant_eigenpair(const WeightedGraph& graph, const PowerOptions& options = {});

// Full spectrum of a symmetric matrix, descending eigenvalues with an
// orthonormal eigenvector family (so left and right vectors coincide and
// (phi_k)^T psi_l = delta_kl holds by construction).
struct Spectrum {
    Vec values;                       // lambda_0 >= lambda_1 >= ...
    std::vector<Vec> right_vectors;   // unit 2-norm, deterministic sign
    std::vector<Vec> left_vectors;
};

struct SpectrumOptions {
    std::size_t max_size = 2048;
    double symmetry_tol = 0.0;  // exact symmetry required by default
};

// Householder tridiagonalization followed by implicit-shift QL.
// Throws TooLarge or NotSymmetric.
Spectrum small_spectrum(const WeightedGraph& graph, const SpectrumOptions& options = {});

}  // namespace merw
