#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "merw/walk.hpp"

using namespace merw;
using namespace merw::testing;

namespace {

void check_stochastic(const StochasticMatrix& stoch) {
    const std::size_t n = stoch.s.size();
    Vec row_sum(n, 0.0);
    stoch.s.for_each_edge([&](std::size_t i, std::size_t, double w) {
        CHECK(w >= 0.0);
        row_sum[i] += w;
    });
    for (std::size_t i = 0; i < n; ++i) CHECK(row_sum[i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sum(stoch.pi) == doctest::Approx(1.0).epsilon(1e-12));
    const Vec next = stoch.s.apply_left(stoch.pi);
    CHECK(max_abs_diff(next, stoch.pi) <= 1e-10);
}

}  // namespace

TEST_CASE("GRW on P3: rows by degree, pi proportional to degrees") {
    const auto walk = generic_walk(path_graph(3));
    CHECK(walk.s.weight(1, 0) == 0.5);
    CHECK(walk.s.weight(1, 2) == 0.5);
    CHECK(walk.s.weight(0, 1) == 1.0);
    CHECK(walk.pi == Vec{0.25, 0.5, 0.25});
    check_stochastic(walk);
}

TEST_CASE("GRW on K3 is uniform") {
    const auto walk = generic_walk(complete_graph(3));
    CHECK(walk.s.weight(0, 1) == 0.5);
    CHECK(walk.pi == Vec{1.0 / 3, 1.0 / 3, 1.0 / 3});
    check_stochastic(walk);
}

TEST_CASE("GRW throws on dangling vertices") {
    CHECK_THROWS_AS(generic_walk(WeightedGraph::from_rows({{0, 1}, {0, 0}}, GraphKind::Simple)),
                    DanglingVertex);
}

TEST_CASE("MERW on P3 matches the closed form") {
    const auto walk = max_entropy_walk(path_graph(3));
    CHECK(walk.s.weight(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(walk.s.weight(1, 0) == doctest::Approx(0.5).epsilon(1e-11));
    CHECK(walk.s.weight(1, 2) == doctest::Approx(0.5).epsilon(1e-11));
    CHECK(walk.s.weight(2, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(walk.pi[0] == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(walk.pi[1] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(walk.pi[2] == doctest::Approx(0.25).epsilon(1e-10));
    check_stochastic(walk);
}

TEST_CASE("GRW and MERW differ on the chain with a self-loop") {
    const auto g = chain_with_loop();
    const auto local = generic_walk(g);
    CHECK(local.s.weight(1, 0) == 0.5);
    CHECK(local.s.weight(1, 2) == 0.5);

    const auto entropic = max_entropy_walk(g);
    CHECK(entropic.s.weight(1, 0) == doctest::Approx(0.30798).epsilon(2e-5));
    CHECK(entropic.s.weight(1, 2) == doctest::Approx(0.69202).epsilon(2e-5));
    check_stochastic(local);
    check_stochastic(entropic);
}

TEST_CASE("GRW equals MERW on graphs with constant out-degree per periodic component") {
    for (const auto& g : {complete_graph(4), directed_cycle(5), path_graph(2)}) {
        const auto a = generic_walk(g);
        const auto b = max_entropy_walk(g);
        double max_diff = 0.0;
        g.for_each_edge([&](std::size_t i, std::size_t j, double) {
            max_diff = std::max(max_diff, std::abs(a.s.weight(i, j) - b.s.weight(i, j)));
        });
        CHECK(max_diff <= 1e-10);
    }
    // irregular graph: the difference is macroscopic
    const auto g = chain_with_loop();
    double max_diff = 0.0;
    const auto a = generic_walk(g);
    const auto b = max_entropy_walk(g);
    g.for_each_edge([&](std::size_t i, std::size_t j, double) {
        max_diff = std::max(max_diff, std::abs(a.s.weight(i, j) - b.s.weight(i, j)));
    });
    CHECK(max_diff > 1e-3);
}

TEST_CASE("GRW_l with l=1 reproduces GRW exactly") {
    const auto g = random_strongly_connected(6, 2, GraphKind::Weighted, true);
    const auto a = generic_walk(g);
    const auto b = generic_walk_l(g, 1);
    g.for_each_edge([&](std::size_t i, std::size_t j, double) {
        CHECK(a.s.weight(i, j) == b.s.weight(i, j));
    });
}

TEST_CASE("GRW_l converges to MERW as l grows") {
    const auto g = chain_with_loop();
    const auto limit = max_entropy_walk(g);
    const auto l64 = generic_walk_l(g, 64);
    double max_diff = 0.0;
    g.for_each_edge([&](std::size_t i, std::size_t j, double) {
        max_diff = std::max(max_diff, std::abs(limit.s.weight(i, j) - l64.s.weight(i, j)));
    });
    CHECK(max_diff <= 1e-6);
    check_stochastic(l64);
}

TEST_CASE("GRW_l on a regular graph is uniform for every l") {
    for (std::size_t l : {1u, 3u, 7u}) {
        const auto walk = generic_walk_l(complete_graph(3), l);
        CHECK(walk.s.weight(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(walk.s.weight(0, 2) == doctest::Approx(0.5).epsilon(1e-14));
    }
}

TEST_CASE("propagator at l=0 is the identity") {
    const auto g = chain_with_loop();
    const auto p = propagator(g, max_entropy_walk(g), 0);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(p.weight(i, j) == (i == j ? 1.0 : 0.0));
}

TEST_CASE("MERW propagator on P3 matches per-component MERW of M^2") {
    const auto g = path_graph(3);
    const auto walk = max_entropy_walk(g);
    const auto two_step = propagator(g, walk, 2);

    // M^2 splits into components {0,2} and {1}; assemble MERW on each
    const auto g2 = matrix_power(g, 2);
    // component {0,2}: [[1,1],[1,1]] -> uniform rows 1/2; component {1}: [[2]] -> 1
    const std::vector<Vec> expected{{0.5, 0.0, 0.5}, {0.0, 1.0, 0.0}, {0.5, 0.0, 0.5}};
    CHECK(g2.weight(0, 0) == 1.0);
    CHECK(g2.weight(1, 1) == 2.0);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(two_step.weight(i, j) == doctest::Approx(expected[i][j]).epsilon(1e-10));
}

TEST_CASE("GRW two-step propagator differs from GRW of the squared graph") {
    const auto g = path_graph(3);
    const auto two_step = propagator(g, generic_walk(g), 2);
    // GRW(M^2) on component {0,2}: rows (1/2, 1/2); but (S^G)^2 row 0 is
    // (1/2, 0, 1/2) as well -- the difference shows on row 1 of M^2: GRW(M^2)
    // row 1 is all mass on vertex 1, equal here; the real contrast is between
    // stationary densities: pi^GRW = (1/4, 1/2, 1/4) vs uniform-by-rowsum of
    // M^2 which weights vertex 1 by 2/4.
    CHECK(two_step.weight(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(two_step.weight(0, 2) == doctest::Approx(0.5).epsilon(1e-12));

    // explicit 3x3 arithmetic on a graph where they genuinely differ
    const auto h = chain_with_loop();
    const auto lhs = propagator(h, generic_walk(h), 2);
    const auto rhs = generic_walk(matrix_power(h, 2)).s;
    double max_diff = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            max_diff = std::max(max_diff, std::abs(lhs.weight(i, j) - rhs.weight(i, j)));
    CHECK(max_diff > 1e-3);
}

TEST_CASE("renormalization identity: merw(M^l) equals merw(M)^l") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto g = random_strongly_connected(6, seed, GraphKind::Simple, true);
        const auto walk = max_entropy_walk(g);
        for (std::size_t l : {2u, 3u, 4u}) {
            const auto lhs = max_entropy_walk(matrix_power(g, l)).s;
            const auto rhs = propagator(g, walk, l);
            double max_diff = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i)
                for (std::size_t j = 0; j < g.size(); ++j)
                    max_diff = std::max(max_diff, std::abs(lhs.weight(i, j) - rhs.weight(i, j)));
            CHECK(max_diff <= 1e-10);
        }
    }
}

TEST_CASE("path probabilities: equal pathways in MERW, degree bias in GRW") {
    const auto g = path_graph(4);
    const auto entropic = max_entropy_walk(g);
    const auto local = generic_walk(g);

    const auto out_back = make_path(g, {1, 0, 1});
    const auto in_back = make_path(g, {1, 2, 1});

    const double lambda = 2.0 * std::cos(M_PI / 5.0);
    CHECK(path_probability(entropic, out_back) ==
          doctest::Approx(1.0 / (lambda * lambda)).epsilon(1e-10));
    CHECK(path_probability(entropic, in_back) ==
          doctest::Approx(path_probability(entropic, out_back)).epsilon(1e-12));

    CHECK(path_probability(local, out_back) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(path_probability(local, in_back) == doctest::Approx(0.25).epsilon(1e-12));

    const auto trivial = make_path(g, {2});
    CHECK(path_probability(entropic, trivial) == 1.0);

    // MERW closed form: weight_product / lambda^l * psi_end / psi_start
    const auto& pair = *entropic.eigen;
    const auto longer = make_path(g, {0, 1, 2, 3});
    const double closed = longer.weight_product / std::pow(pair.lambda, 3.0) * pair.psi[3] / pair.psi[0];
    CHECK(path_probability(entropic, longer) == doctest::Approx(closed).epsilon(1e-12));
}

TEST_CASE("equiprobability check: exhaustive enumeration") {
    const auto g = chain_with_loop();
    const auto entropic = max_entropy_walk(g);
    const auto res = equiprobability_check(g, entropic, 6);
    CHECK(res.equiprobable);

    const auto local = generic_walk(g);
    const auto bad = equiprobability_check(g, local, 6);
    CHECK_FALSE(bad.equiprobable);
    CHECK(bad.witness_a.size() == bad.witness_b.size());
    CHECK(bad.witness_a.front() == bad.witness_b.front());
    CHECK(bad.witness_a.back() == bad.witness_b.back());

    const auto k3 = complete_graph(3);
    CHECK(equiprobability_check(k3, generic_walk(k3), 5).equiprobable);
}

TEST_CASE("entropy: MERW attains lg(lambda), GRW stays below") {
    const auto g = chain_with_loop();
    const auto entropic = max_entropy_walk(g);
    const auto report = entropy_report(g, entropic);
    CHECK(report.entropy_rate == doctest::Approx(report.max_rate).epsilon(1e-10));

    const auto local = generic_walk(g);
    const auto local_report = entropy_report(g, local);
    // degrees (1,2,2): H = (1*0 + 2*1 + 2*1)/5 = 0.8 bits
    CHECK(local_report.entropy_rate == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(local_report.max_rate == doctest::Approx(std::log2(1.80194)).epsilon(1e-5));
    CHECK(local_report.entropy_rate < local_report.max_rate);

    // symmetric-M closed form: sum d lg d / sum d
    const Degrees deg = degrees(g);
    double expect = 0.0;
    for (double d : deg.out) expect += xlg(d);
    expect /= sum(deg.out);
    CHECK(local_report.entropy_rate == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("free energy bookkeeping on a Boltzmann-weighted graph") {
    // M_ij = e^{-beta V_ij}: simple two-state system
    const double beta = 2.0;
    const double v01 = 0.3, v00 = 0.1;
    const auto g = WeightedGraph::from_rows(
        {{std::exp(-beta * v00), std::exp(-beta * v01)},
         {std::exp(-beta * v01), std::exp(-beta * v00)}},
        GraphKind::Weighted);
    const auto walk = max_entropy_walk(g);
    const auto report = entropy_report(g, walk, beta);
    // F = U - T S must equal -lg(lambda) ln2 / beta for MERW
    CHECK(report.free_energy ==
          doctest::Approx(-std::log(2.0) / beta * report.max_rate).epsilon(1e-10));
    CHECK(report.mean_energy > 0.0);
}

TEST_CASE("degree inequality chain on K3 and the chain with loop") {
    const auto k3 = degree_inequality_chain(complete_graph(3));
    for (double v : k3) CHECK(v == doctest::Approx(2.0).epsilon(1e-10));

    const auto chain = degree_inequality_chain(chain_with_loop());
    CHECK(chain[0] == 1.0);
    CHECK(chain[1] == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
    CHECK(chain[2] == doctest::Approx(std::pow(2.0, 0.8)).epsilon(1e-12));
    CHECK(chain[3] == doctest::Approx(2.0 * std::cos(M_PI / 7.0)).epsilon(1e-10));
    CHECK(chain[4] == 2.0);
}

TEST_CASE("inequality chain holds on random strongly connected digraphs") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto kind = seed % 3 == 0   ? GraphKind::Simple
                          : seed % 3 == 1 ? GraphKind::MultiEdge
                                          : GraphKind::Weighted;
        const auto g = random_strongly_connected(4 + seed % 6, seed, kind, true);
        CHECK_NOTHROW(degree_inequality_chain(g));
    }
}

TEST_CASE("detailed balance on symmetric graphs, current on the directed cycle") {
    const auto g = chain_with_loop();
    CHECK(detailed_balance_and_current(max_entropy_walk(g)).balanced);
    CHECK(detailed_balance_and_current(generic_walk(g)).balanced);

    const auto cyc = directed_cycle(3);
    const auto report = detailed_balance_and_current(max_entropy_walk(cyc));
    CHECK_FALSE(report.balanced);
    CHECK(report.current.at(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(report.current.at(1, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(report.current.at(2, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(report.current.at(1, 0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-10));
    CHECK(report.max_kirchhoff_residual <= 1e-10);
}

TEST_CASE("KL divergence values and support checks") {
    CHECK(kl_divergence({0.5, 0.5}, {0.5, 0.5}) == 0.0);
    CHECK(concentration_probability(1000, {0.5, 0.5}, {0.5, 0.5}) == 1.0);
    CHECK(kl_divergence({0.6, 0.4}, {0.5, 0.5}) == doctest::Approx(0.029049).epsilon(1e-4));
    CHECK_THROWS_AS(kl_divergence({0.5, 0.5}, {1.0, 0.0}), SupportMismatch);
}

TEST_CASE("KL concentration matches a Monte Carlo binomial oracle") {
    // n draws from p = (1/2, 1/2); probability of hitting exactly q*n heads is
    // 2^{-n D(q||p)} / sqrt(2 pi n q (1-q)) up to Stirling corrections.
    const std::size_t n = 200;
    const std::size_t target = 110;  // q = 0.55
    const Vec q{0.55, 0.45};
    const Vec p{0.5, 0.5};
    const double predicted = concentration_probability(static_cast<double>(n), q, p) /
                             std::sqrt(2.0 * M_PI * n * q[0] * q[1]);

    const CounterRng rng(99, "kl-mc");
    const std::size_t trials = 40000;
    std::size_t hits = 0;
    std::uint64_t ctr = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        std::size_t heads = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (rng.uniform(ctr++) < 0.5) ++heads;
        if (heads == target) ++hits;
    }
    const double observed = static_cast<double>(hits) / static_cast<double>(trials);
    CHECK(observed > predicted / 2.0);
    CHECK(observed < predicted * 2.0);
}

TEST_CASE("trajectory sampling: determinism and stationary frequencies") {
    const auto g = path_graph(3);
    const auto walk = max_entropy_walk(g);

    const auto empty = sample_trajectory(walk, 1, 0, 42);
    CHECK(empty.path == std::vector<std::size_t>{1});
    CHECK(empty.log_probability == 0.0);

    const auto a = sample_trajectory(walk, 0, 5000, 42);
    const auto b = sample_trajectory(walk, 0, 5000, 42);
    CHECK(a.path == b.path);
    CHECK(a.log_probability == b.log_probability);
    const auto c = sample_trajectory(walk, 0, 5000, 43);
    CHECK(a.path != c.path);

    const std::size_t steps = 1000000;
    const auto run = sample_trajectory(walk, 0, steps, 7);
    Vec counts(3, 0.0);
    for (std::size_t v : run.path) counts[v] += 1.0;
    const Vec expect{0.25, 0.5, 0.25};
    for (std::size_t v = 0; v < 3; ++v) {
        const double mean = expect[v] * static_cast<double>(steps + 1);
        // 3 sigma of a multinomial count; steps are correlated over one lag
        // only (period-2 alternation), widen by 2x to stay robust
        const double sigma = std::sqrt(static_cast<double>(steps + 1) * expect[v] * (1 - expect[v]));
        CHECK(std::abs(counts[v] - mean) <= 6.0 * sigma);
    }

    // log-probability is the exact sum of logs along the path
    double log_p = 0.0;
    for (std::size_t t = 0; t + 1 < a.path.size(); ++t)
        log_p += std::log(walk.s.weight(a.path[t], a.path[t + 1]));
    CHECK(a.log_probability == log_p);
}

TEST_CASE("MERW entropy dominates GRW and GRW_l on random graphs") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto g = random_strongly_connected(5 + seed % 4, seed, GraphKind::Simple, true);
        const double h_grw = entropy_report(g, generic_walk(g)).entropy_rate;
        const double h_l4 = entropy_report(g, generic_walk_l(g, 4)).entropy_rate;
        const auto m = max_entropy_walk(g);
        const auto mr = entropy_report(g, m);
        CHECK(mr.entropy_rate == doctest::Approx(lg(m.eigen->lambda)).epsilon(1e-9));
        CHECK(h_grw <= mr.entropy_rate + 1e-12);
        CHECK(h_l4 <= mr.entropy_rate + 1e-12);
    }
}
