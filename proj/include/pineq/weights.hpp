#pragma once

// Weight pairs and the admissibility certificates that license the
// two-weight Poincare inequality on a finite space.

#include "pineq/space.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace pineq {

inline constexpr double kRelSlack = 1e-12;

/// lhs <= rhs up to relative slack on the right-hand side magnitude.
inline bool leq_with_slack(double lhs, double rhs, double rel = kRelSlack) {
    return lhs <= rhs + rel * std::abs(rhs) + std::numeric_limits<double>::min();
}

struct WeightPair {
    VectorXd W;
    VectorXd W_plus;
    std::vector<int> X0;  // sorted point subset, possibly empty

    bool in_x0(int x) const { return std::binary_search(X0.begin(), X0.end(), x); }
};

/// Validating constructor: W_plus >= W pointwise, X0 indices in range.
inline WeightPair make_weight_pair(VectorXd W, VectorXd W_plus, std::vector<int> X0 = {}) {
    if (W.size() != W_plus.size()) throw std::invalid_argument("weight length mismatch");
    for (int i = 0; i < W.size(); ++i) {
        if (W[i] < 0.0 || W_plus[i] < 0.0)
            throw std::invalid_argument("weights must be nonnegative");
        if (W_plus[i] < W[i])
            throw std::invalid_argument("W_plus must dominate W at point " + std::to_string(i));
    }
    std::sort(X0.begin(), X0.end());
    for (int x : X0)
        if (x < 0 || x >= W.size()) throw std::invalid_argument("X0 index out of range");
    return WeightPair{std::move(W), std::move(W_plus), std::move(X0)};
}

/// Same but without the W_plus >= W check (inequalities stated with the
/// heavier weight on the right-hand side need the reversed pair).
inline WeightPair make_weight_pair_unchecked(VectorXd W, VectorXd W_plus,
                                             std::vector<int> X0 = {}) {
    std::sort(X0.begin(), X0.end());
    return WeightPair{std::move(W), std::move(W_plus), std::move(X0)};
}

enum class ViolationKind { Connect, X0Pair, X0Bound, GrowthHypothesis, Parameter };

struct Violation {
    int point = -1;
    double deficit = 0.0;
    ViolationKind kind = ViolationKind::Connect;
};

struct AdmissibilityCertificate {
    double lambda = 0.0;
    double epsilon = 0.0;
    double s = 0.0;
    double x0_constant = 1.0;  // minimal C in W_+(x) mu(B_y) <= C W(y) mu(X0)
    double lambda0 = 1.0;      // fitted growth constant the hypothesis is checked against
    bool passed = false;
    std::vector<Violation> violations;
};

namespace detail {

/// max_{y in B_x} mu(B_y), the worst right-ball mass paired with x.
inline VectorXd worst_pair_ball_mass(const Space& space) {
    VectorXd out(space.size());
    for (int x = 0; x < space.size(); ++x) {
        double m = 0.0;
        for (int y : space.ball(x)) m = std::max(m, space.mu_ball(y));
        out[x] = m;
    }
    return out;
}

inline void check_x0_conditions(const Space& space, const WeightPair& wp,
                                AdmissibilityCertificate& cert) {
    if (wp.X0.empty()) {
        cert.x0_constant = 1.0;
        return;
    }
    const double mu_x0 = space.set_measure(wp.X0);
    double c_min = 0.0;
    for (int x : wp.X0) {
        for (int y : wp.X0) {
            if (!space.in_unit(x, y)) {
                cert.violations.push_back({x, 1.0, ViolationKind::X0Pair});
                continue;
            }
            const double num = wp.W_plus[x] * space.mu_ball(y);
            const double den = wp.W[y] * mu_x0;
            if (den <= 0.0) {
                if (num > 0.0)
                    cert.violations.push_back(
                        {y, std::numeric_limits<double>::infinity(), ViolationKind::X0Bound});
                continue;
            }
            c_min = std::max(c_min, num / den);
        }
    }
    cert.x0_constant = std::max(c_min, 1e-300);
}

}  // namespace detail

/// Check the admissibility condition
///   [W_+(x)]^s eps mu(B_y) <= sum_{z in B*_x, W(z) >= lambda W_+(x)} [W(z)]^s mu(z)
/// for all (x,y) in U with x outside X0, together with the X0 compatibility
/// conditions and the growth hypothesis lambda > lambda0.
inline AdmissibilityCertificate check_admissibility(const Space& space, const WeightPair& wp,
                                                    double lambda, double epsilon, double s,
                                                    const GrowthFit& growth) {
    if (!(lambda > 1.0)) throw std::invalid_argument("admissibility requires lambda > 1");
    if (!(epsilon > 0.0)) throw std::invalid_argument("admissibility requires epsilon > 0");
    if (s < 0.0 || s >= 1.0) throw std::invalid_argument("admissibility requires s in [0,1)");

    AdmissibilityCertificate cert;
    cert.lambda = lambda;
    cert.epsilon = epsilon;
    cert.s = s;
    cert.lambda0 = growth.lambda0;

    const VectorXd worst_mass = detail::worst_pair_ball_mass(space);
    for (int x = 0; x < space.size(); ++x) {
        if (wp.in_x0(x)) continue;
        const double threshold = lambda * wp.W_plus[x];
        double rhs = 0.0;
        for (int z : space.dual_ball(x))
            if (wp.W[z] >= threshold) rhs += std::pow(wp.W[z], s) * space.mu(z);
        const double lhs = std::pow(wp.W_plus[x], s) * epsilon * worst_mass[x];
        if (!leq_with_slack(lhs, rhs))
            cert.violations.push_back({x, lhs - rhs, ViolationKind::Connect});
    }
    detail::check_x0_conditions(space, wp, cert);
    if (!(lambda > growth.lambda0))
        cert.violations.push_back({-1, growth.lambda0 - lambda, ViolationKind::GrowthHypothesis});
    cert.passed = cert.violations.empty();
    return cert;
}

inline AdmissibilityCertificate check_admissibility(const Space& space, const WeightPair& wp,
                                                    double lambda, double epsilon, double s,
                                                    int growth_max_n = 10) {
    return check_admissibility(space, wp, lambda, epsilon, s,
                               fit_growth_constant(space, growth_max_n));
}

/// The cleaner substitute condition
///   [lambda W_+(x)]^s [mu(B*_x) + eps mu(B_y)] <= sum_{z in B*_x} [W(z)]^s mu(z),
/// valid for s in (0,1). A pass implies the main condition passes with the
/// same parameters, which is asserted.
inline AdmissibilityCertificate check_admissibility_alt(const Space& space, const WeightPair& wp,
                                                        double lambda, double epsilon, double s,
                                                        const GrowthFit& growth) {
    if (!(s > 0.0) || s >= 1.0)
        throw std::invalid_argument("alternate admissibility requires s in (0,1)");
    if (!(lambda > 1.0)) throw std::invalid_argument("admissibility requires lambda > 1");
    if (!(epsilon > 0.0)) throw std::invalid_argument("admissibility requires epsilon > 0");

    AdmissibilityCertificate cert;
    cert.lambda = lambda;
    cert.epsilon = epsilon;
    cert.s = s;
    cert.lambda0 = growth.lambda0;

    const VectorXd worst_mass = detail::worst_pair_ball_mass(space);
    for (int x = 0; x < space.size(); ++x) {
        if (wp.in_x0(x)) continue;
        double rhs = 0.0;
        double mu_dual = 0.0;
        for (int z : space.dual_ball(x)) {
            rhs += std::pow(wp.W[z], s) * space.mu(z);
            mu_dual += space.mu(z);
        }
        const double lhs = std::pow(lambda * wp.W_plus[x], s) *
                           (mu_dual + epsilon * worst_mass[x]);
        if (!leq_with_slack(lhs, rhs))
            cert.violations.push_back({x, lhs - rhs, ViolationKind::Connect});
    }
    detail::check_x0_conditions(space, wp, cert);
    if (!(lambda > growth.lambda0))
        cert.violations.push_back({-1, growth.lambda0 - lambda, ViolationKind::GrowthHypothesis});
    cert.passed = cert.violations.empty();

    if (cert.passed) {
        const auto main = check_admissibility(space, wp, lambda, epsilon, s, growth);
        if (!main.passed)
            throw std::logic_error("alternate admissibility passed but main condition failed");
    }
    return cert;
}

struct GridPointFailure {
    double lambda = 0.0;
    double epsilon = 0.0;
    double s = 0.0;
    Violation worst;
};

struct AdmissibilitySearchResult {
    std::optional<AdmissibilityCertificate> best;
    std::vector<GridPointFailure> failures;  // only populated when infeasible
    bool feasible() const { return best.has_value(); }
};

inline std::vector<double> default_s_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 9; ++i) g.push_back(0.1 * i);
    return g;
}

inline std::vector<double> default_lambda_grid(double lambda0, int count = 24) {
    std::vector<double> g;
    for (int i = 1; i <= count; ++i)
        g.push_back(lambda0 * std::pow(64.0, static_cast<double>(i) / count));
    return g;
}

inline std::vector<double> default_epsilon_grid(int count = 13) {
    std::vector<double> g;
    for (int i = 0; i < count; ++i)
        g.push_back(1e-6 * std::pow(1e6, static_cast<double>(i) / (count - 1)));
    return g;
}

/// Grid search maximizing lambda (tie-break: larger epsilon, then smaller s).
inline AdmissibilitySearchResult search_admissibility(const Space& space, const WeightPair& wp,
                                                      const std::vector<double>& s_grid,
                                                      const std::vector<double>& lambda_grid,
                                                      const std::vector<double>& epsilon_grid,
                                                      const GrowthFit& growth) {
    if (s_grid.empty() || lambda_grid.empty() || epsilon_grid.empty())
        throw std::invalid_argument("search grids must be nonempty");
    std::vector<double> lambdas = lambda_grid;
    std::vector<double> epsilons = epsilon_grid;
    std::sort(lambdas.rbegin(), lambdas.rend());
    std::sort(epsilons.rbegin(), epsilons.rend());

    AdmissibilitySearchResult result;
    for (double lambda : lambdas) {
        if (!(lambda > 1.0)) continue;
        for (double epsilon : epsilons) {
            for (double s : s_grid) {
                auto cert = check_admissibility(space, wp, lambda, epsilon, s, growth);
                if (cert.passed) {
                    result.best = std::move(cert);
                    result.failures.clear();
                    return result;
                }
                Violation worst;
                for (const auto& v : cert.violations)
                    if (v.deficit >= worst.deficit || worst.point == -1) worst = v;
                result.failures.push_back({lambda, epsilon, s, worst});
            }
        }
    }
    return result;
}

inline AdmissibilitySearchResult search_admissibility(const Space& space, const WeightPair& wp,
                                                      const GrowthFit& growth) {
    return search_admissibility(space, wp, default_s_grid(),
                                default_lambda_grid(growth.lambda0), default_epsilon_grid(),
                                growth);
}

struct ComparabilityReport {
    double sup_ratio = 0.0;
    int argmax = -1;
    bool infinite = false;
};

/// sup_y ( sum_{x in B*_y} W(x)/mu(B_x) mu(x) ) / W_+(y); finite values
/// certify two-sided comparability of the Poincare functional.
inline ComparabilityReport check_comparability(const Space& space, const WeightPair& wp) {
    ComparabilityReport rep;
    for (int y = 0; y < space.size(); ++y) {
        double num = 0.0;
        for (int x : space.dual_ball(y)) num += wp.W[x] / space.mu_ball(x) * space.mu(x);
        if (wp.W_plus[y] <= 0.0) {
            if (num > 0.0) {
                rep.infinite = true;
                rep.argmax = y;
                rep.sup_ratio = std::numeric_limits<double>::infinity();
                return rep;
            }
            continue;
        }
        const double ratio = num / wp.W_plus[y];
        if (ratio > rep.sup_ratio) {
            rep.sup_ratio = ratio;
            rep.argmax = y;
        }
    }
    return rep;
}

}  // namespace pineq
