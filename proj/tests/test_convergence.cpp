#include <cmath>
#include <sstream>

#include "doctest.h"
#include "qbask/convergence.hpp"

using namespace qbask;

TEST_CASE("deformation sequences") {
    auto canon = QSequence::canonical();
    CHECK(canon(100) == doctest::Approx(0.99).epsilon(1e-15));
    CHECK(canon(1) == doctest::Approx(0.5));
    CHECK_THROWS_AS(canon(0), std::invalid_argument);

    auto slow = QSequence::slow_log();
    CHECK(slow(10) > 0.0);
    CHECK(slow(10) < 1.0);
    CHECK(slow(100) > slow(10));

    CHECK(QSequence::constant(0.9)(7) == 0.9);
    CHECK_THROWS_AS(QSequence::constant(1.5), std::invalid_argument);

    QSequence bad{[](int) { return 2.0; }, "out of range"};
    CHECK_THROWS_AS(bad(3), std::invalid_argument);
}

TEST_CASE("index densities") {
    CHECK(asymptotic_density(IndexSet::evens(1000), 1000) == doctest::Approx(0.5));
    CHECK(asymptotic_density(IndexSet::all(100), 100) == 1.0);
    CHECK(asymptotic_density(IndexSet::empty(100), 100) == 0.0);
    CHECK(asymptotic_density(IndexSet::squares(10000), 10000) == doctest::Approx(0.01));
    CHECK_THROWS_AS(asymptotic_density(IndexSet::all(10), 20), std::invalid_argument);

    // weighted density: all integers sum to exactly [n]_q / [n]_q
    CHECK(q_density(IndexSet::all(30), 30, QParam(1.1)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q_density(IndexSet::evens(100), 100, QParam(1.0)) == doctest::Approx(0.5));
    CHECK(q_density(IndexSet::empty(50), 50, QParam(1.3)) == 0.0);
    CHECK_THROWS_AS(q_density(IndexSet::all(10), 10, QParam(0.9)), std::invalid_argument);

    // monotone in set inclusion
    for (double qv : {1.0, 1.05, 1.2}) {
        double evens = q_density(IndexSet::evens(200), 200, QParam(qv));
        double all = q_density(IndexSet::all(200), 200, QParam(qv));
        CHECK(evens >= 0.0);
        CHECK(evens <= all + 1e-12);
        CHECK(all <= 1.0 + 1e-12);
    }
}

TEST_CASE("finite-horizon statistical limit estimator") {
    std::vector<double> constant(100, 3.0);
    auto r1 = q_statistical_limit(constant, 3.0, 0.5, QParam(1.0), 100);
    CHECK(r1.density_estimate == 0.0);
    CHECK(r1.verdict);

    // sparse perturbation on the perfect squares
    std::vector<double> eta(10000, 0.0);
    for (long k = 1; k * k <= 10000; ++k) eta[k * k - 1] = 1.0;
    auto r2 = q_statistical_limit(eta, 0.0, 0.5, QParam(1.0), 10000, 0.02);
    CHECK(r2.density_estimate == doctest::Approx(0.01));
    CHECK(r2.verdict);

    // oscillation exceeds everywhere
    std::vector<double> osc(1000);
    for (int k = 0; k < 1000; ++k) osc[k] = (k % 2 == 0) ? 1.0 : -1.0;
    auto r3 = q_statistical_limit(osc, 0.0, 0.5, QParam(1.0), 1000);
    CHECK(r3.density_estimate == doctest::Approx(1.0));
    CHECK_FALSE(r3.verdict);

    CHECK_THROWS_AS(q_statistical_limit(constant, 3.0, 0.0, QParam(1.0), 100),
                    std::invalid_argument);
    CHECK_THROWS_AS(q_statistical_limit(constant, 3.0, 0.5, QParam(0.9), 100),
                    std::invalid_argument);
    CHECK_THROWS_AS(q_statistical_limit(constant, 3.0, 0.5, QParam(1.0), 500),
                    std::invalid_argument);
}

TEST_CASE("weighted norm estimates") {
    WeightedGrid grid(50.0, 2001, 0.0);
    CHECK(weighted_norm([](double) { return 0.0; }, grid) == 0.0);
    double n2 = weighted_norm([](double x) { return x * x; }, grid);
    CHECK(n2 < 1.0);
    CHECK(n2 > 0.999);
}

TEST_CASE("weighted modulus: frozen value, monotonicity, scaling") {
    WeightedGrid grid(50.0, 2001, 0.0);
    auto e1 = [](double t) { return t; };
    auto e2 = [](double t) { return t * t; };
    auto smooth = [](double t) { return std::sin(t); };

    CHECK(weighted_modulus(e1, 0.1, grid) ==
          doctest::Approx(0.0990099009900990).epsilon(1e-13));
    CHECK_THROWS_AS(weighted_modulus(e1, 0.0, grid), std::invalid_argument);
    CHECK_THROWS_AS(weighted_modulus(e1, 0.1, grid, 1), std::invalid_argument);

    std::vector<RealFn> gs = {e1, e2, smooth};
    const double delta = 0.1;
    for (const auto& g : gs) {
        // nested i-lattices keep monotonicity exact
        CHECK(weighted_modulus(g, delta / 2, grid, 32) <=
              weighted_modulus(g, delta, grid, 64) + 1e-15);

        double base = weighted_modulus(g, delta, grid, 64);
        for (double beta : {0.5, 1.0, 2.0, 3.7})
            CHECK(weighted_modulus(g, beta * delta, grid, 64) <=
                  (beta + 1.0) * base + 1e-10);
        for (int ell : {1, 2, 3})
            CHECK(weighted_modulus(g, ell * delta, grid, 64) <= ell * base + 1e-10);
    }
}

TEST_CASE("rate delta values") {
    auto canon = QSequence::canonical();
    CHECK(rate_delta(100, canon) == doctest::Approx(0.126226009025082).epsilon(1e-12));
    double prev = rate_delta(10, canon);
    for (int n : {20, 40, 80, 100, 160}) {
        double cur = rate_delta(n, canon);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("pointwise error bound holds and is tight where expected") {
    WeightedGrid grid(50.0, 2001, 0.0);
    QParam q(0.9);
    OperatorSpec spec(OperatorFamily::WaveletQBaskakovKantorovich, 10, q);
    double delta = std::sqrt(1.0 / (q.value() * q_integer(10, q)));

    // linear functions are reproduced exactly
    auto b1 = pointwise_error_bound([](double t) { return t; }, spec, 1.0, delta, grid);
    CHECK(b1.lhs <= 1e-10);
    CHECK(b1.lhs <= b1.rhs);

    // the quadratic error equals the second central moment
    auto b2 = pointwise_error_bound([](double t) { return t * t; }, spec, 1.0, delta, grid);
    CHECK(b2.lhs == doctest::Approx(0.324127319144055).epsilon(1e-10));
    CHECK(b2.lhs <= b2.rhs);

    // at x = 0 the central moment vanishes but the bound still dominates
    auto b0 = pointwise_error_bound([](double t) { return t * t; }, spec, 0.0, delta, grid);
    CHECK(b0.lhs <= b0.rhs);

    CHECK_THROWS_AS(pointwise_error_bound([](double t) { return t; }, spec, 1.0, 0.0, grid),
                    std::invalid_argument);
}

TEST_CASE("weighted-norm harness over the canonical sequence") {
    WeightedGrid grid(50.0, 2001, 0.0);
    auto report = korovkin_harness(QSequence::canonical(), Wavelet::haar(), {10, 50}, grid);
    CHECK(report.verdict == Verdict::Pass);
    REQUIRE(report.rows.size() == 2);
    for (const auto& r : report.rows) {
        CHECK(r.norm_e0 <= 1e-10);
        CHECK(r.norm_e1 <= 1e-10);
        CHECK(r.norm_e2 <= r.bound + 1e-8);
        CHECK(r.delta_n > 0.0);
    }

    std::ostringstream os;
    report.write_csv(os);
    CHECK(os.str().rfind("n,q_n,norm_e0,norm_e1,norm_e2,bound,delta_n,omega_at_delta\n",
                         0) == 0);
    CHECK_THROWS_AS(korovkin_harness(QSequence::canonical(), Wavelet::haar(), {}, grid),
                    std::invalid_argument);
}

TEST_CASE("rate experiment rows and verdict") {
    WeightedGrid grid(50.0, 2001, 0.0);
    auto report = rate_experiment([](double t) { return t * t; }, QSequence::canonical(),
                                  {10, 20}, grid);
    CHECK(report.verdict == Verdict::Pass);
    for (const auto& r : report.rows) {
        CHECK(r.g_norm <= r.rate_bound);
        CHECK(r.c_alpha > 0.0);
    }
    std::ostringstream os;
    report.write_csv(os);
    CHECK(os.str().rfind("n,q_n,g_norm,delta_n,omega_at_delta,c_alpha,rate_bound\n", 0) ==
          0);
}
