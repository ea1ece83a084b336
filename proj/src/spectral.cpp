#include "merw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace merw {

namespace {

struct IterationResult {
    double scale = 0.0;  // eigenvalue of the iterated operator
    Vec vector;          // inf-normalized
    double residual = 0.0;
};

// Power iteration with per-sweep inf-norm normalization. Convergence is
// certified by the relative residual of the eigen-equation itself; iterate
// differences can stall near degenerate pairs without certifying anything.
IterationResult power_iterate(const std::function<Vec(const Vec&)>& apply, Vec start,
                              double tol, std::size_t max_iters) {
    const double start_norm = norm_inf(start);
    if (start_norm == 0.0) throw InvalidArgument("power iteration from zero vector");
    scale(start, 1.0 / start_norm);

    Vec x = std::move(start);
    double best_residual = std::numeric_limits<double>::infinity();
    std::size_t plateau = 0;
    constexpr std::size_t kPlateauSweeps = 200;

    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        Vec y = apply(x);
        const double xty = dot(x, y);
        const double xtx = dot(x, x);
        const double lambda = xty / xtx;
        if (!(lambda > 0.0) || !std::isfinite(lambda))
            throw NoConvergence("power iteration lost positivity", std::numeric_limits<double>::infinity());
        double residual = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            residual = std::max(residual, std::abs(y[i] - lambda * x[i]));
        residual /= lambda * norm_inf(x);

        const double ynorm = norm_inf(y);
        scale(y, 1.0 / ynorm);
        x = std::move(y);

        if (residual <= tol) {
            IterationResult r;
            r.scale = lambda;
            r.vector = std::move(x);
            r.residual = residual;
            return r;
        }
        if (residual < best_residual * 0.99) {
            best_residual = residual;
            plateau = 0;
        } else if (++plateau >= kPlateauSweeps) {
            throw NoConvergence("residual plateaued at " + std::to_string(best_residual) +
                                    " (near-degenerate dominant pair)",
                                best_residual);
        }
    }
    throw NoConvergence("power iteration hit max_iters with residual " +
                            std::to_string(best_residual),
                        best_residual);
}

Vec ones_masked(std::size_t n, const std::vector<std::size_t>& component_of, std::size_t target) {
    Vec v(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        if (component_of[i] == target) v[i] = 1.0;
    return v;
}

double relative_residual(const Vec& got, double lambda, const Vec& x) {
    double r = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        r = std::max(r, std::abs(got[i] - lambda * x[i]));
    return r / (lambda * norm_inf(x));
}

}  // namespace

EigenPair dominant_eigenpair(const WeightedGraph& graph, const PowerOptions& options) {
    const std::size_t n = graph.size();
    if (n == 0) throw InvalidArgument("empty graph");
    if (!strongly_connected(graph).strongly_connected)
        throw NotStronglyConnected("dominant_eigenpair requires a strongly connected graph");
    if (n == 1) {
        const double w = graph.weight(0, 0);
        if (w <= 0.0) throw NotStronglyConnected("single vertex without self-loop has no cycle");
        return EigenPair{w, Vec{1.0}, Vec{1.0}, 0.0};
    }

    const PeriodDecomposition pd = period(graph);
    const bool symmetric = graph.is_symmetric();

    double lambda = 0.0;
    Vec psi, phi;

    if (pd.period == 1) {
        auto right = power_iterate([&](const Vec& v) { return graph.apply_right(v); },
                                   Vec(n, 1.0), options.tol, options.max_iters);
        lambda = right.scale;
        psi = std::move(right.vector);
        if (symmetric) {
            phi = psi;
        } else {
            auto left = power_iterate([&](const Vec& v) { return graph.apply_left(v); },
                                      Vec(n, 1.0), options.tol, options.max_iters);
            phi = std::move(left.vector);
        }
    } else if (!options.componentwise_periodic) {
        // Diagonal shift breaks periodicity; the eigenvector is unchanged and
        // the eigenvalue shifts back exactly.
        const Degrees deg = degrees(graph);
        const double c = *std::max_element(deg.out.begin(), deg.out.end()) * 1e-3;
        auto shifted_right = [&](const Vec& v) {
            Vec y = graph.apply_right(v);
            for (std::size_t i = 0; i < n; ++i) y[i] += c * v[i];
            return y;
        };
        auto right = power_iterate(shifted_right, Vec(n, 1.0), options.tol, options.max_iters);
        lambda = right.scale - c;
        psi = std::move(right.vector);
        if (symmetric) {
            phi = psi;
        } else {
            auto shifted_left = [&](const Vec& v) {
                Vec y = graph.apply_left(v);
                for (std::size_t i = 0; i < n; ++i) y[i] += c * v[i];
                return y;
            };
            auto left = power_iterate(shifted_left, Vec(n, 1.0), options.tol, options.max_iters);
            phi = std::move(left.vector);
        }
    } else {
        // Component-wise treatment: iterate M^p inside component 0, then
        // propagate across components, psi = sum_j M^j psi0 / lambda^j.
        const std::size_t p = pd.period;
        auto apply_p_right = [&](const Vec& v) {
            Vec y = v;
            for (std::size_t k = 0; k < p; ++k) y = graph.apply_right(y);
            return y;
        };
        auto right = power_iterate(apply_p_right, ones_masked(n, pd.component_of, 0),
                                   options.tol, options.max_iters);
        lambda = std::pow(right.scale, 1.0 / static_cast<double>(p));
        psi = right.vector;
        {
            Vec z = right.vector;
            for (std::size_t j = 1; j < p; ++j) {
                z = graph.apply_right(z);
                scale(z, 1.0 / lambda);
                for (std::size_t i = 0; i < n; ++i) psi[i] += z[i];
            }
        }
        if (symmetric) {
            phi = psi;
        } else {
            auto apply_p_left = [&](const Vec& v) {
                Vec y = v;
                for (std::size_t k = 0; k < p; ++k) y = graph.apply_left(y);
                return y;
            };
            auto left = power_iterate(apply_p_left, ones_masked(n, pd.component_of, 0),
                                      options.tol, options.max_iters);
            phi = left.vector;
            Vec z = left.vector;
            for (std::size_t j = 1; j < p; ++j) {
                z = graph.apply_left(z);
                scale(z, 1.0 / lambda);
                for (std::size_t i = 0; i < n; ++i) phi[i] += z[i];
            }
        }
    }

    // Joint normalization: phi^T psi = 1 with the scale split evenly, so
    // symmetric input keeps psi == phi.
    scale(psi, 1.0 / norm_2(psi));
    scale(phi, 1.0 / norm_2(phi));
    const double s = dot(phi, psi);
    if (!(s > 0.0)) throw NoConvergence("left/right eigenvectors lost alignment", s);
    scale(psi, 1.0 / std::sqrt(s));
    scale(phi, 1.0 / std::sqrt(s));

    // Two-sided Rayleigh refinement of lambda, then the final certificate.
    const Vec mpsi = graph.apply_right(psi);
    lambda = dot(phi, mpsi) / dot(phi, psi);
    const Vec mtphi = graph.apply_left(phi);
    const double residual =
        std::max(relative_residual(mpsi, lambda, psi), relative_residual(mtphi, lambda, phi));
    if (residual > options.tol * 16.0)
        throw NoConvergence("assembled eigenpair residual " + std::to_string(residual), residual);

    for (std::size_t i = 0; i < n; ++i)
        if (!(psi[i] > 0.0) || !(phi[i] > 0.0))
            throw NoConvergence("eigenvector lost strict positivity", residual);

    EigenPair pair;
    pair.lambda = lambda;
    pair.psi = std::move(psi);
    pair.phi = std::move(phi);
    pair.residual = residual;
    return pair;
}

// ---------------------------------------------------------------------------
// Symmetric dense eigensolver: Householder tridiagonalization (tred2) plus
// implicit-shift QL with eigenvector accumulation (tqli).
// ---------------------------------------------------------------------------

namespace {

void tred2(std::vector<double>& z, std::size_t n, Vec& d, Vec& e) {
    auto at = [&](std::size_t i, std::size_t j) -> double& { return z[i * n + j]; };
    for (std::size_t i = n - 1; i >= 1; --i) {
        const std::size_t l = i - 1;
        double h = 0.0, scale_ = 0.0;
        if (l > 0) {
            for (std::size_t k = 0; k <= l; ++k) scale_ += std::abs(at(i, k));
            if (scale_ == 0.0) {
                e[i] = at(i, l);
            } else {
                for (std::size_t k = 0; k <= l; ++k) {
                    at(i, k) /= scale_;
                    h += at(i, k) * at(i, k);
                }
                double f = at(i, l);
                double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale_ * g;
                h -= f * g;
                at(i, l) = f - g;
                f = 0.0;
                for (std::size_t j = 0; j <= l; ++j) {
                    at(j, i) = at(i, j) / h;
                    g = 0.0;
                    for (std::size_t k = 0; k <= j; ++k) g += at(j, k) * at(i, k);
                    for (std::size_t k = j + 1; k <= l; ++k) g += at(k, j) * at(i, k);
                    e[j] = g / h;
                    f += e[j] * at(i, j);
                }
                const double hh = f / (h + h);
                for (std::size_t j = 0; j <= l; ++j) {
                    f = at(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (std::size_t k = 0; k <= j; ++k)
                        at(j, k) -= f * e[k] + g * at(i, k);
                }
            }
        } else {
            e[i] = at(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] != 0.0) {
            for (std::size_t j = 0; j < i; ++j) {
                double g = 0.0;
                for (std::size_t k = 0; k < i; ++k) g += at(i, k) * at(k, j);
                for (std::size_t k = 0; k < i; ++k) at(k, j) -= g * at(k, i);
            }
        }
        d[i] = at(i, i);
        at(i, i) = 1.0;
        for (std::size_t j = 0; j < i; ++j) at(j, i) = at(i, j) = 0.0;
    }
}

void tqli(Vec& d, Vec& e, std::vector<double>& z, std::size_t n) {
    auto at = [&](std::size_t i, std::size_t j) -> double& { return z[i * n + j]; };
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        std::size_t iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (iter++ == 64) throw NumericFailure("tqli: too many QL iterations");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                for (std::size_t i = m; i-- > l;) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (std::size_t k = 0; k < n; ++k) {
                        f = at(k, i + 1);
                        at(k, i + 1) = s * at(k, i) + c * f;
                        at(k, i) = c * at(k, i) - s * f;
                    }
                }
                if (r == 0.0 && m - l > 1) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

Spectrum small_spectrum(const WeightedGraph& graph, const SpectrumOptions& options) {
    const std::size_t n = graph.size();
    if (n == 0) throw InvalidArgument("empty graph");
    if (n > options.max_size)
        throw TooLarge("small_spectrum limited to n <= " + std::to_string(options.max_size));
    if (!graph.matrix().is_symmetric(options.symmetry_tol))
        throw NotSymmetric("small_spectrum requires a symmetric matrix");

    std::vector<double> z(n * n, 0.0);
    graph.for_each_edge([&](std::size_t i, std::size_t j, double w) { z[i * n + j] = w; });
    Vec d(n, 0.0), e(n, 0.0);
    if (n == 1) {
        d[0] = z[0];
        z[0] = 1.0;
    } else {
        tred2(z, n, d, e);
        tqli(d, e, z, n);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });

    Spectrum spec;
    spec.values.resize(n);
    spec.right_vectors.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        spec.values[k] = d[order[k]];
        Vec v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = z[i * n + order[k]];
        scale(v, 1.0 / norm_2(v));
        // deterministic sign: largest-magnitude entry positive
        std::size_t imax = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
        if (v[imax] < 0.0) scale(v, -1.0);
        spec.right_vectors[k] = std::move(v);
    }
    spec.left_vectors = spec.right_vectors;
    return spec;
}

}  // namespace merw
