#include "pineq/constants.hpp"
#include "pineq/scenarios.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using namespace pineq;

namespace {

Relation complete_edges(int n) {
    Relation rel(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) rel[static_cast<size_t>(i)].push_back(j);
    return rel;
}

}  // namespace

TEST_CASE("graph scenarios") {
    SECTION("complete graph with zero decay is admissible with constant 1/2") {
        const auto sc = make_graph_scenario(complete_edges(5), 0, 0.0);
        REQUIRE(sc.connected);
        REQUIRE(sc.max_valence == 4);
        REQUIRE(sc.weights.X0.size() == 5);
        const GrowthFit fit = fit_growth_constant(sc.space, 4);
        const auto search = search_admissibility(sc.space, sc.weights, fit);
        REQUIRE(search.feasible());
        const auto exact = best_constant_p2(sc.space, sc.weights, CenterMode::Mu);
        REQUIRE_FALSE(exact.unbounded);
        REQUIRE(exact.value == Catch::Approx(0.5).epsilon(1e-12));
    }
    SECTION("positive decay uses BFS distance from the root") {
        Relation path(static_cast<size_t>(4));
        path[0] = {1};
        path[1] = {0, 2};
        path[2] = {1, 3};
        path[3] = {2};
        const auto sc = make_graph_scenario(path, 1, 0.7);
        REQUIRE(sc.weights.X0 == std::vector<int>{1});
        REQUIRE(sc.weights.W[1] == Catch::Approx(1.0));
        REQUIRE(sc.weights.W[0] == Catch::Approx(std::exp(-0.7)));
        REQUIRE(sc.weights.W[3] == Catch::Approx(std::exp(-1.4)));
    }
    SECTION("two disjoint triangles are flagged and unbounded") {
        Relation adj(static_cast<size_t>(6));
        for (int base : {0, 3})
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    if (i != j) adj[static_cast<size_t>(base + i)].push_back(base + j);
        const auto sc = make_graph_scenario(adj, 0, 0.0);
        REQUIRE_FALSE(sc.connected);
        // Unreachable vertices carry weight 0; the mass-weighted constant blows up.
        auto wp = sc.weights;
        for (int i = 3; i < 6; ++i) {
            wp.W[i] = 1.0;  // restore positive mass so unboundedness comes from topology
            wp.W_plus[i] = 1.0;
        }
        const auto exact = best_constant_p2(sc.space, wp, CenterMode::Mu);
        REQUIRE(exact.unbounded);
    }
}

TEST_CASE("lattice scenarios") {
    SECTION("plain Neumann weights follow the radial formulas") {
        const auto sc = make_lattice_scenario(1, 3.0, 0.5, 2.0, 0.25);
        const auto& lat = sc.lattice;
        for (int i = 0; i < lat.space.size(); ++i) {
            const double r = lat.radius(i);
            REQUIRE(sc.weights.W[i] == Catch::Approx(std::exp(-r * r)));
            REQUIRE(sc.weights.W_plus[i] ==
                    Catch::Approx(std::exp(0.25 * 2.0 * r) * std::exp(-r * r)));
        }
        // X0 is the closed half-unit ball around the origin.
        for (int x : sc.weights.X0) REQUIRE(lat.radius(x) <= 0.5 + 1e-9);
        REQUIRE_FALSE(sc.weights.X0.empty());
        REQUIRE(sc.lattice.space.has_scales());
        REQUIRE(sc.lattice.space.scale_count() == 2);
    }
    SECTION("eps = 0 collapses W_plus onto W") {
        const auto sc = make_lattice_scenario(1, 3.0, 0.5, 2.0, 0.0);
        REQUIRE((sc.weights.W_plus - sc.weights.W).cwiseAbs().maxCoeff() < 1e-15);
    }
    SECTION("dirichlet variant grows outward and keeps X0 empty") {
        const auto sc =
            make_lattice_scenario(1, 3.0, 0.5, 2.0, 0.25, LatticeVariant::Dirichlet);
        REQUIRE(sc.weights.X0.empty());
        for (int i = 0; i < sc.lattice.space.size(); ++i) {
            const double r = sc.lattice.radius(i);
            REQUIRE(sc.weights.W[i] == Catch::Approx(std::exp(r * r)));
        }
    }
    SECTION("modified mode replaces the pair consistently") {
        const auto sc = make_lattice_scenario(1, 8.0, 0.25, 2.0, 0.5, LatticeVariant::Neumann,
                                              LatticeMode::Modified);
        REQUIRE(sc.rho == 1.0);
        REQUIRE(sc.R == Catch::Approx(std::sqrt((1.0 + 2.0) / (4.0 * 0.5))));
        const auto& lat = sc.lattice;
        const double front = (2.0 * 3 + sc.eta) / (2.0 * 3 + sc.rho);
        for (int i = 0; i < lat.space.size(); ++i) {
            const double r = lat.radius(i);
            REQUIRE(sc.weights.W_plus[i] >= sc.weights.W[i]);
            if (r <= sc.R + 1.0) {
                // Inner branch: steep exponential in r, equal weights.
                REQUIRE(sc.weights.W[i] ==
                        Catch::Approx(sc.A * std::exp(-3.0 * sc.lambda_w * (r - sc.R - 1.0))));
                REQUIRE(sc.weights.W_plus[i] == sc.weights.W[i]);
            } else {
                // Outer branch: W untouched, W_plus from the averaged form.
                REQUIRE(sc.weights.W[i] == Catch::Approx(std::exp(-r * r)));
                double avg = 0.0;
                for (int y : lat.space.ball(i))
                    avg += std::pow(std::exp(-lat.radius(y) * lat.radius(y)), sc.s_diff) *
                           lat.space.mu(y);
                avg /= lat.space.mu_ball(i);
                const double formula = std::pow(front * avg, 1.0 / sc.s_diff);
                REQUIRE(sc.weights.W_plus[i] ==
                        Catch::Approx(std::max(sc.weights.W[i], formula)));
            }
        }
    }
    SECTION("modified dirichlet is rejected") {
        REQUIRE_THROWS_AS(make_lattice_scenario(1, 3.0, 0.5, 2.0, 0.25,
                                                LatticeVariant::Dirichlet, LatticeMode::Modified),
                          std::invalid_argument);
    }
}

TEST_CASE("pixel masks") {
    SECTION("dumbbell geometry") {
        const auto mask = make_dumbbell_mask(0.1);
        int count = 0;
        for (int j = 0; j < mask.ny; ++j)
            for (int i = 0; i < mask.nx; ++i)
                if (mask.at(i, j)) ++count;
        // Two unit squares (100 cells each at pixel 0.1) plus a 5-column
        // corridor over the band (0.35, 0.65); the band edges land exactly on
        // cell centers, so the corridor is 2 or 3 rows wide up to roundoff.
        REQUIRE((count == 210 || count == 215));
        REQUIRE(mask.at(2, 2));
        REQUIRE_FALSE(mask.at(12, 1));  // gap below the corridor
    }
    SECTION("separated mask has no connecting cells") {
        const auto mask = make_separated_mask(0.1, 1.2);
        for (int j = 0; j < mask.ny; ++j)
            for (int i = 0; i < mask.nx; ++i)
                if (mask.at(i, j)) {
                    const double x = mask.cx(i);
                    REQUIRE((x < 1.0 || x > 2.2));
                }
    }
}

TEST_CASE("domain covering recursion") {
    SECTION("a single square is covered quickly") {
        const auto mask = make_rect_union_mask({{0.0, 2.0, 0.0, 2.0}}, 0.1);
        const auto sc = make_domain_scenario(mask);
        REQUIRE(sc.covered);
        REQUIRE(sc.n_star <= 10);
        // Coverage counts are nondecreasing and V is finite everywhere.
        for (size_t k = 1; k < sc.coverage_history.size(); ++k)
            REQUIRE(sc.coverage_history[k] >= sc.coverage_history[k - 1]);
        for (int v : sc.V) {
            REQUIRE(v >= 1);
            REQUIRE(v <= sc.n_star);
        }
        // Weights are e^{-V} with X0 = O_1.
        for (int p = 0; p < sc.space.size(); ++p)
            REQUIRE(sc.weights.W[p] == Catch::Approx(std::exp(-sc.V[static_cast<size_t>(p)])));
        for (int p : sc.weights.X0) REQUIRE(sc.V[static_cast<size_t>(p)] == 1);
    }
    SECTION("dumbbell is covered and admissible at the covering parameters") {
        const auto sc = make_domain_scenario(make_dumbbell_mask(0.1));
        REQUIRE(sc.covered);
        const GrowthFit fit = fit_growth_constant(sc.space, 6);
        REQUIRE(fit.lambda0 < std::exp(1.0));
        const auto cert =
            check_admissibility(sc.space, sc.weights, std::exp(1.0), 1e-3, 0.0, fit);
        REQUIRE(cert.passed);
    }
    SECTION("separated squares stall before covering") {
        const auto sc = make_domain_scenario(make_separated_mask(0.1, 1.2));
        REQUIRE_FALSE(sc.covered);
        // The far square never gets covered and sits at the sentinel level.
        int uncovered = 0;
        for (int v : sc.V)
            if (v == sc.n_star + 1) ++uncovered;
        REQUIRE(uncovered > 0);
    }
    SECTION("too-large threshold is rejected") {
        const auto mask = make_rect_union_mask({{0.0, 1.0, 0.0, 1.0}}, 0.2);
        REQUIRE_THROWS_AS(make_domain_scenario(mask, 10.0), std::invalid_argument);
    }
}

TEST_CASE("boltzmann scenario") {
    SECTION("collision metric identities") {
        Eigen::RowVectorXd v(2), w(2), z(2);
        v << 2.0, 0.0;
        w << 0.0, 0.0;
        z << 0.0, 2.0;
        REQUIRE(boltzmann_dist2(v, v) == 0.0);
        REQUIRE(boltzmann_dist2(v, w) == boltzmann_dist2(w, v));
        // |v-w|^2 = 4 and (|v|^2-|w|^2)^2/4 = 4.
        REQUIRE(boltzmann_dist2(v, w) == Catch::Approx(8.0));
        // Equal speeds kill the energy term.
        REQUIRE(boltzmann_dist2(v, z) == Catch::Approx(8.0));
    }
    SECTION("grid restriction and weights") {
        const auto sc = make_boltzmann_scenario(2, 2.0, 0.5, 1.0);
        for (int i = 0; i < sc.space.size(); ++i) {
            REQUIRE(sc.coords.row(i).norm() <= 2.0 + 1e-9);
            const double v2 = sc.coords.row(i).squaredNorm();
            REQUIRE(sc.weights.W[i] ==
                    Catch::Approx(std::pow(1.0 + v2, 1.0) * std::exp(-v2)));
            REQUIRE(sc.weights.W_plus[i] ==
                    Catch::Approx(std::sqrt(1.0 + v2) * std::exp(-v2)));
            // Reversed dominance away from the origin: W >= W_plus.
            REQUIRE(sc.weights.W[i] >= sc.weights.W_plus[i]);
        }
        // The relation is symmetric because the metric is.
        for (int i = 0; i < sc.space.size(); ++i)
            for (int j : sc.space.ball(i)) REQUIRE(sc.space.in_unit(j, i));
    }
}
