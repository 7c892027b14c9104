#include <cmath>
#include <cstdlib>

#include "doctest.h"
#include "qbask/operators.hpp"

using namespace qbask;

namespace {
RealFn monomial(int j) {
    return [j](double t) { return std::pow(t, j); };
}
}  // namespace

TEST_CASE("basis terms: weights, nodes, cells") {
    TruncationPolicy policy;
    QParam q(0.8);
    auto terms = q_basis_terms(2, 0.5, q, policy);
    REQUIRE(terms.size() >= 2);

    // s = 0: weight 1/((1+x)(1+qx)), node 0, cell [0, 1/[m]]
    CHECK(terms[0].weight == doctest::Approx(1.0 / (1.5 * 1.4)).epsilon(1e-12));
    CHECK(terms[0].node == 0.0);
    CHECK(terms[0].cell.lower == 0.0);
    CHECK(terms[0].cell.upper == doctest::Approx(1.0 / q_integer(2, q)).epsilon(1e-12));

    // frozen: B_{2,1,0.8}(0.5)
    CHECK(terms[1].weight == doctest::Approx(0.324675324675325).epsilon(1e-12));
    CHECK(terms[1].node == doctest::Approx(1.0 / q_integer(2, q)).epsilon(1e-12));

    // partition of unity within the tail tolerance
    double sum = 0.0;
    for (const auto& t : terms) sum += t.weight;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));

    // adjacent cells: lower(s+1) = q * upper(s), since [s+1] = 1 + q[s]
    for (std::size_t i = 0; i + 1 < terms.size(); ++i)
        CHECK(terms[i + 1].cell.lower ==
              doctest::Approx(q.value() * terms[i].cell.upper).epsilon(1e-12));
}

TEST_CASE("basis argument validation") {
    TruncationPolicy policy;
    CHECK_THROWS_AS(q_basis_terms(0, 0.5, QParam(0.8), policy), std::invalid_argument);
    CHECK_THROWS_AS(q_basis_terms(2, -0.5, QParam(0.8), policy), std::invalid_argument);
    CHECK_THROWS_AS(q_basis_terms(2, 0.5, QParam(1.5), policy), std::invalid_argument);
}

TEST_CASE("moment closed forms and frozen values") {
    QParam q(0.9);
    CHECK(moment_closed_form(0, 10, q, 1.0) == 1.0);
    CHECK(moment_closed_form(1, 10, q, 1.0) == 1.0);
    CHECK(moment_closed_form(2, 10, q, 1.0) ==
          doctest::Approx(1.32412731914406).epsilon(1e-13));
    CHECK(second_central_moment(10, q, 1.0) ==
          doctest::Approx(0.324127319144055).epsilon(1e-13));
    CHECK(second_central_moment(10, q, 0.0) == 0.0);
    CHECK_THROWS_AS(moment_closed_form(3, 10, q, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(moment_closed_form(2, 0, q, 1.0), std::invalid_argument);
}

TEST_CASE("point-sampling operator reproduces the moment closed forms") {
    for (double qv : {0.8, 0.95, 1.0}) {
        QParam q(qv);
        for (int m : {2, 5, 20}) {
            OperatorSpec spec(OperatorFamily::QBaskakov, m, q);
            for (int j = 0; j <= 2; ++j)
                for (double x : {0.0, 0.5, 2.0})
                    CHECK(q_baskakov(monomial(j), spec, x) ==
                          doctest::Approx(moment_closed_form(j, m, q, x))
                              .epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("wavelet route equals the point-sampling route") {
    const Wavelet haar = Wavelet::haar();
    for (double qv : {0.8, 0.9, 1.0}) {
        QParam q(qv);
        for (int m : {5, 20, 50}) {
            OperatorSpec ws(OperatorFamily::WaveletQBaskakovKantorovich, m, q);
            OperatorSpec vs(OperatorFamily::QBaskakov, m, q);
            for (int j = 0; j <= 2; ++j)
                for (double x : {0.0, 0.25, 1.0, 2.0}) {
                    double a = wavelet_q_operator(monomial(j), ws, haar, x);
                    double b = q_baskakov(monomial(j), vs, x);
                    CHECK(std::abs(a - b) <= 1e-10);
                }
        }
    }
}

TEST_CASE("cell-averaging operator at q = 1 matches the classical one") {
    TruncationPolicy policy;
    QParam one(1.0);
    auto poly = [](double t) { return (t - 0.2) * (t - 4.0 / 9.0); };
    std::vector<RealFn> gs = {monomial(0), monomial(1), monomial(2), poly};
    for (int m : {3, 10}) {
        OperatorSpec spec(OperatorFamily::QBaskakovKantorovich, m, one, policy);
        for (const auto& g : gs)
            for (double x : {0.0, 0.5, 1.0, 2.0})
                CHECK(q_baskakov_kantorovich(g, spec, x) ==
                      doctest::Approx(baskakov_kantorovich(g, m, x, policy))
                          .epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("reference operators on [0,1]") {
    // endpoint interpolation and linear reproduction
    auto g = [](double t) { return 3.0 * t + 1.0; };
    for (int m : {1, 4, 9}) {
        CHECK(bernstein(g, m, 0.0) == doctest::Approx(1.0));
        CHECK(bernstein(g, m, 1.0) == doctest::Approx(4.0));
        CHECK(bernstein(g, m, 0.3) == doctest::Approx(g(0.3)).epsilon(1e-12));
        CHECK(bernstein_kantorovich([](double) { return 1.0; }, m, 0.5) ==
              doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK_THROWS_AS(bernstein(g, 3, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(bernstein_kantorovich(g, 0, 0.5), std::invalid_argument);
}

TEST_CASE("operator spec validation") {
    CHECK_THROWS_AS(OperatorSpec(OperatorFamily::QBaskakov, 0, QParam(0.9)),
                    std::invalid_argument);
    CHECK_THROWS_AS(OperatorSpec(OperatorFamily::QBaskakov, 5, QParam(1.1)),
                    std::invalid_argument);
    OperatorSpec spec(OperatorFamily::QBaskakov, 5, QParam(0.9));
    CHECK_THROWS_AS(q_baskakov(monomial(1), spec, -1.0), std::invalid_argument);
    OperatorSpec other(OperatorFamily::QBaskakovKantorovich, 5, QParam(0.9));
    CHECK_THROWS_AS(q_baskakov(monomial(1), other, 1.0), std::invalid_argument);
}

TEST_CASE("error curve is deterministic across thread counts") {
    WeightedGrid grid(5.0, 101, 0.0);
    OperatorSpec spec(OperatorFamily::WaveletQBaskakovKantorovich, 10, QParam(0.9));
    const Wavelet haar = Wavelet::haar();
    auto g = [](double t) { return t * t - 1.0; };

    setenv("QBASK_THREADS", "1", 1);
    auto serial = operator_error_curve(g, spec, haar, grid);
    setenv("QBASK_THREADS", "4", 1);
    auto parallel = operator_error_curve(g, spec, haar, grid);
    setenv("QBASK_THREADS", "0", 1);

    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].operator_value == parallel[i].operator_value);
        CHECK(serial[i].abs_error == parallel[i].abs_error);
    }
}

TEST_CASE("error curve flags non-convergent points instead of throwing") {
    WeightedGrid grid(40.0, 11, 0.0);
    TruncationPolicy starved;
    starved.max_terms = 3;
    OperatorSpec spec(OperatorFamily::WaveletQBaskakovKantorovich, 10, QParam(0.9),
                      starved);
    auto curve = operator_error_curve([](double t) { return t; }, spec,
                                      Wavelet::haar(), grid);
    bool flagged = false;
    for (const auto& p : curve)
        if (!p.diagnostic.empty()) {
            flagged = true;
            CHECK(std::isnan(p.operator_value));
            CHECK(std::isnan(p.abs_error));
        }
    CHECK(flagged);
}

TEST_CASE("thread count respects the environment override") {
    setenv("QBASK_THREADS", "3", 1);
    CHECK(grid_thread_count() == 3);
    setenv("QBASK_THREADS", "0", 1);
    CHECK(grid_thread_count() >= 1);
    unsetenv("QBASK_THREADS");
    CHECK(grid_thread_count() >= 1);
}
