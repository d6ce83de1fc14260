#include "pineq/pnorm.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using Eigen::MatrixXd;
using Eigen::VectorXd;
using pineq::pnorm_power_iteration;

TEST_CASE("identity matrix has norm 1 for every p") {
    const MatrixXd I = MatrixXd::Identity(5, 5);
    for (double p : {1.0, 1.5, 2.0, 3.0, 7.0}) {
        const auto res = pnorm_power_iteration(I, p);
        REQUIRE(res.converged);
        REQUIRE(res.value == Catch::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("p = 1 returns the exact maximum column sum") {
    MatrixXd A(3, 4);
    A << 1, 0, 2, 0.5,
         0, 3, 1, 0.5,
         2, 0, 0, 4.0;
    const auto res = pnorm_power_iteration(A, 1.0);
    REQUIRE(res.converged);
    REQUIRE(res.value == 5.0);
}

TEST_CASE("rank-one matrices match the Holder closed form") {
    // ||u v^T||_p = ||u||_p ||v||_q with 1/p + 1/q = 1.
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (double p : {1.5, 2.0, 3.0}) {
        const double q = p / (p - 1.0);
        for (int trial = 0; trial < 10; ++trial) {
            VectorXd u(4), v(5);
            for (int i = 0; i < 4; ++i) u[i] = unif(rng);
            for (int i = 0; i < 5; ++i) v[i] = unif(rng) + 0.01;
            const MatrixXd A = u * v.transpose();
            const double expected =
                std::pow(u.array().pow(p).sum(), 1.0 / p) *
                std::pow(v.array().pow(q).sum(), 1.0 / q);
            const auto res = pnorm_power_iteration(A, p);
            REQUIRE(res.value == Catch::Approx(expected).epsilon(1e-9));
        }
    }
}

TEST_CASE("p = 2 agrees with the largest singular value") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        MatrixXd A(6, 6);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) A(i, j) = unif(rng);
        const double sigma = A.jacobiSvd().singularValues()(0);
        const auto res = pnorm_power_iteration(A, 2.0);
        REQUIRE(res.value == Catch::Approx(sigma).epsilon(1e-10));
    }
}

TEST_CASE("bound sequence stays above the true norm and tightens") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    MatrixXd A(5, 5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) A(i, j) = unif(rng);
    const double sigma = A.jacobiSvd().singularValues()(0);
    const auto res = pnorm_power_iteration(A, 2.0);
    REQUIRE(res.bounds.size() >= 2);
    for (double b : res.bounds) REQUIRE(b >= sigma - 1e-10 * sigma);
    REQUIRE(res.bounds.back() <= res.bounds.front() + 1e-12);
}

TEST_CASE("degenerate inputs") {
    SECTION("zero matrix") {
        const auto res = pnorm_power_iteration(MatrixXd::Zero(3, 3), 2.0);
        REQUIRE(res.converged);
        REQUIRE(res.value == 0.0);
    }
    SECTION("zero columns are ignored") {
        MatrixXd A = MatrixXd::Zero(3, 3);
        A(0, 1) = 2.0;
        const auto res = pnorm_power_iteration(A, 2.0);
        REQUIRE(res.value == Catch::Approx(2.0));
    }
    SECTION("negative entries are rejected") {
        MatrixXd A = MatrixXd::Ones(2, 2);
        A(1, 0) = -0.5;
        REQUIRE_THROWS_AS(pnorm_power_iteration(A, 2.0), std::invalid_argument);
    }
    SECTION("p below 1 is rejected") {
        REQUIRE_THROWS_AS(pnorm_power_iteration(MatrixXd::Ones(2, 2), 0.5),
                          std::invalid_argument);
    }
}
