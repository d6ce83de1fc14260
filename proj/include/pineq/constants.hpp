#pragma once

// Optimal-constant estimation for the two-weight Poincare inequality:
// exact p=2 value by generalized eigensolve, projected-ascent lower bounds,
// and the constructive upper bound through the transition-kernel chain.

#include "pineq/functionals.hpp"
#include "pineq/pnorm.hpp"
#include "pineq/space.hpp"
#include "pineq/weights.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <random>
#include <vector>

namespace pineq {

inline VectorXd constraint_vector(const Space& space, const WeightPair& wp, CenterMode mode) {
    VectorXd c = VectorXd::Zero(space.size());
    switch (mode) {
        case CenterMode::Mu:
            c = space.measure();
            break;
        case CenterMode::X0:
            if (wp.X0.empty()) throw std::invalid_argument("X0 constraint with empty X0");
            for (int x : wp.X0) c[x] = space.mu(x);
            break;
        case CenterMode::WPlus:
            c = wp.W_plus.cwiseProduct(space.measure());
            break;
        case CenterMode::Raw:
            throw std::invalid_argument("constant estimation needs a centering constraint");
    }
    if (c.norm() <= 0.0) throw std::invalid_argument("degenerate centering constraint");
    return c;
}

/// Orthonormal basis of { f : c^T f = 0 }, as columns.
inline MatrixXd zero_mean_basis(const VectorXd& c) {
    const int n = static_cast<int>(c.size());
    Eigen::HouseholderQR<MatrixXd> qr(c);
    MatrixXd q = qr.householderQ() * MatrixXd::Identity(n, n);
    return q.rightCols(n - 1);
}

/// lhs quadratic form: diag(W_+ mu).
inline MatrixXd lhs_form(const Space& space, const WeightPair& wp) {
    return VectorXd(wp.W_plus.cwiseProduct(space.measure())).asDiagonal();
}

/// rhs quadratic form of the nonlocal energy at p = 2.
inline MatrixXd rhs_form(const Space& space, const WeightPair& wp) {
    const int n = space.size();
    MatrixXd B = MatrixXd::Zero(n, n);
    for (int x = 0; x < n; ++x) {
        const double w = wp.W[x] * space.mu(x) / space.mu_ball(x);
        for (int y : space.ball(x)) {
            const double coeff = w * space.mu(y);
            B(x, x) += coeff;
            B(y, y) += coeff;
            B(x, y) -= coeff;
            B(y, x) -= coeff;
        }
    }
    return B;
}

struct SpectralConstant {
    bool unbounded = false;
    double value = 0.0;
    VectorXd witness;
};

/// Exact optimal constant at p = 2: top generalized eigenvalue of the pair
/// (lhs form, rhs form) on the centered subspace. A singular rhs form on the
/// subspace (disconnected unit relation) makes the constant unbounded.
inline SpectralConstant best_constant_p2(const Space& space, const WeightPair& wp,
                                         CenterMode mode) {
    const int n = space.size();
    const VectorXd c = constraint_vector(space, wp, mode);
    // Whiten by the lhs weight (f = D g, D = diag((W_+ mu)^{-1/2})): an exact
    // change of variables that keeps the pencil conditioned when the weights
    // span many orders of magnitude.
    VectorXd d(n);
    for (int i = 0; i < n; ++i) {
        const double mass = wp.W_plus[i] * space.mu(i);
        d[i] = mass > 0.0 ? 1.0 / std::sqrt(mass) : 1.0;
    }
    const MatrixXd Q = zero_mean_basis(d.cwiseProduct(c));
    const MatrixXd DAD = d.asDiagonal() * lhs_form(space, wp) * d.asDiagonal();
    const MatrixXd DBD = d.asDiagonal() * rhs_form(space, wp) * d.asDiagonal();
    const MatrixXd Ar = Q.transpose() * DAD * Q;
    const MatrixXd Br = Q.transpose() * DBD * Q;

    Eigen::SelfAdjointEigenSolver<MatrixXd> br_eig(Br);
    const double scale = std::max(1e-300, br_eig.eigenvalues().cwiseAbs().maxCoeff());
    SpectralConstant out;
    if (br_eig.eigenvalues().minCoeff() <= 1e-12 * scale) {
        out.unbounded = true;
        // Witness: a rhs-null direction in the subspace.
        out.witness = d.cwiseProduct(Q * br_eig.eigenvectors().col(0));
        return out;
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> gen(Ar, Br);
    const int top = static_cast<int>(gen.eigenvalues().size()) - 1;
    out.value = gen.eigenvalues()[top];
    out.witness = d.cwiseProduct(Q * gen.eigenvectors().col(top));
    return out;
}

struct AscentResult {
    double value = 0.0;
    VectorXd witness;
    bool degenerate = true;
};

/// Lower bound on the optimal constant at general p by projected normalized
/// gradient ascent of lhs/rhs from random starts.
inline AscentResult lower_bound_constant(const Space& space, const WeightPair& wp, double p,
                                         CenterMode mode, int restarts = 32,
                                         std::uint64_t seed = 0x5eed, int max_iters = 2000) {
    if (p < 1.0) throw std::invalid_argument("lower_bound_constant requires p >= 1");
    const int n = space.size();
    const VectorXd c = constraint_vector(space, wp, mode);
    const VectorXd c_unit = c / c.norm();

    auto project = [&](VectorXd v) {
        v -= c_unit * c_unit.dot(v);
        return v;
    };
    auto ratio = [&](const VectorXd& f) -> double {
        auto [lhs, rhs] = poincare_sides(space, wp, {f, mode}, p);
        if (rhs <= 0.0) return -1.0;
        return lhs / rhs;
    };
    auto spow = [p](double t) {
        return (t >= 0.0 ? 1.0 : -1.0) * std::pow(std::abs(t), p - 1.0);
    };
    auto gradient = [&](const VectorXd& f, double r) {
        VectorXd g_lhs(n), g_rhs = VectorXd::Zero(n);
        for (int x = 0; x < n; ++x) g_lhs[x] = p * spow(f[x]) * wp.W_plus[x] * space.mu(x);
        for (int x = 0; x < n; ++x) {
            const double w = wp.W[x] * space.mu(x) / space.mu_ball(x);
            for (int y : space.ball(x)) {
                const double d = p * spow(f[x] - f[y]) * w * space.mu(y);
                g_rhs[x] += d;
                g_rhs[y] -= d;
            }
        }
        return VectorXd(g_lhs - r * g_rhs);
    };

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    AscentResult best;
    for (int r = 0; r < restarts; ++r) {
        VectorXd f(n);
        for (int i = 0; i < n; ++i) f[i] = gauss(rng);
        f = project(f);
        if (f.norm() <= 0.0) continue;
        f.normalize();
        double val = ratio(f);
        if (val < 0.0) continue;
        double step = 1.0;
        for (int it = 0; it < max_iters; ++it) {
            VectorXd g = project(gradient(f, val));
            const double gn = g.norm();
            if (gn <= 1e-15 * std::max(1.0, val)) break;
            g /= gn;
            bool improved = false;
            for (int bt = 0; bt < 48; ++bt) {
                VectorXd cand = (f + step * g).normalized();
                const double cand_val = ratio(cand);
                if (cand_val > val) {
                    f = cand;
                    val = cand_val;
                    improved = true;
                    step *= 1.5;
                    break;
                }
                step *= 0.5;
            }
            if (!improved) break;
        }
        if (val > best.value || best.degenerate) {
            best.value = val;
            best.witness = f;
            best.degenerate = false;
        }
    }
    return best;
}

struct TransitionKernel {
    MatrixXd P;                      // kernel density wrt mu
    MatrixXd M;                      // operator matrix, M = P * diag(mu)
    std::vector<std::vector<int>> E; // E rows: x -> {y in B*_x : W(y) >= lambda W_+(x)}, x not in X0
    AdmissibilityCertificate certificate;
    double row_sum_max_dev = 0.0;    // deviation of mu-row-sums from {0,1}
    double linfty_max_ratio = 0.0;   // max of P(x,y) eps mu(B_y) [W_+(x)/W(y)]^s over E

    VectorXd apply_T(const VectorXd& f) const { return M * f; }

    /// S_1 g(x) = int P(x,y) g(x,y) dmu(y) + chi_X0(x)/mu(X0) int_X0 g(x,y) dmu(y)
    VectorXd apply_S1(const Space& space, const WeightPair& wp, const MatrixXd& g) const {
        const int n = space.size();
        VectorXd out = VectorXd::Zero(n);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) out[x] += P(x, y) * space.mu(y) * g(x, y);
        if (!wp.X0.empty()) {
            const double mu_x0 = space.set_measure(wp.X0);
            for (int x : wp.X0) {
                double acc = 0.0;
                for (int y : wp.X0) acc += g(x, y) * space.mu(y);
                out[x] += acc / mu_x0;
            }
        }
        return out;
    }

    VectorXd apply_Sn(const Space& space, const WeightPair& wp, const MatrixXd& g, int n) const {
        VectorXd acc = apply_S1(space, wp, g);
        VectorXd s1 = acc;
        for (int k = 2; k <= n; ++k) acc = s1 + M * acc;
        return acc;
    }
};

inline TransitionKernel build_transition_kernel(const Space& space, const WeightPair& wp,
                                                const AdmissibilityCertificate& cert) {
    if (!cert.passed)
        throw std::invalid_argument("build_transition_kernel requires a passing certificate");
    const int n = space.size();
    TransitionKernel kernel;
    kernel.certificate = cert;
    kernel.P = MatrixXd::Zero(n, n);
    kernel.E.assign(static_cast<size_t>(n), {});

    for (int x = 0; x < n; ++x) {
        if (wp.in_x0(x)) continue;
        const double threshold = cert.lambda * wp.W_plus[x];
        double denom = 0.0;
        auto& row = kernel.E[static_cast<size_t>(x)];
        for (int y : space.dual_ball(x))
            if (wp.W[y] >= threshold) {
                row.push_back(y);
                denom += std::pow(wp.W[y], cert.s) * space.mu(y);
            }
        if (row.empty() || denom <= 0.0)
            throw std::logic_error("transition kernel inconsistency: empty row at point " +
                                   std::to_string(x) + " despite passing certificate");
        for (int y : row) kernel.P(x, y) = std::pow(wp.W[y], cert.s) / denom;
    }
    kernel.M = kernel.P * space.measure().asDiagonal();

    for (int x = 0; x < n; ++x) {
        const double target = wp.in_x0(x) ? 0.0 : 1.0;
        kernel.row_sum_max_dev =
            std::max(kernel.row_sum_max_dev, std::abs(kernel.M.row(x).sum() - target));
        for (int y : kernel.E[static_cast<size_t>(x)]) {
            const double bound_ratio = kernel.P(x, y) * cert.epsilon * space.mu_ball(y) *
                                       std::pow(wp.W_plus[x] / wp.W[y], cert.s);
            kernel.linfty_max_ratio = std::max(kernel.linfty_max_ratio, bound_ratio);
        }
    }
    return kernel;
}

/// delta small enough that s' = 1 - delta(p-1) >= s and lambda^{s'} > lambda0;
/// midpoint of the feasible interval (constraints are vacuous at p = 1).
inline double choose_delta(const AdmissibilityCertificate& cert, double p,
                           const GrowthFit& growth) {
    if (!(cert.lambda > growth.lambda0))
        throw std::invalid_argument("choose_delta: lambda must exceed the growth constant");
    if (p == 1.0) return 0.5 * (1.0 - cert.s);
    const double from_s = (1.0 - cert.s) / (p - 1.0);
    const double from_growth =
        (1.0 - std::log(std::max(growth.lambda0, 1.0)) / std::log(cert.lambda)) / (p - 1.0);
    return 0.5 * std::min(from_s, from_growth);
}

struct ChainResult {
    double delta = 0.0;
    double s_prime = 0.0;
    double c_upper = 0.0;                    // constant with lhs(f) <= c_upper * rhs(f)
    double operator_norm = 0.0;              // p-norm bound on S_{n_max}
    double lyapunov_max_excess = 0.0;        // max of (S_n F - W_+^{-delta}) / sup W_+^{-delta}
    double sn_identity_max_dev = 0.0;        // |S_n F - (W_+^{-delta} - T^n W_+^{-delta})| / sup W_+^{-delta}
    double lower_envelope_min_margin = 0.0;  // min over E of F - (1-lambda^{-delta}) W_+^{-delta}
    double validation_worst_ratio = 0.0;     // max lhs/(c_upper*rhs) over validation f
    double sn_delta_min_margin = 0.0;        // min over x, f of S_n Delta_f - |f - T^n f|
    double tn_final_sup = 0.0;               // sup |T^{n_max} f| over validation f
    int n_max = 0;
    int validation_count = 0;
};

/// Full constructive chain: Lyapunov verification, S_n operator-norm bound,
/// and validation that lhs(f) <= c_upper * rhs(f) on random centered f.
inline ChainResult run_constructive_chain(const Space& space, const WeightPair& wp,
                                          const AdmissibilityCertificate& cert, double p,
                                          int n_max = 50, std::uint64_t seed = 0x5eed,
                                          int validation_count = 200,
                                          const std::optional<GrowthFit>& growth_opt = std::nullopt) {
    const GrowthFit growth =
        growth_opt ? *growth_opt : fit_growth_constant(space, std::min(space.size(), 10));
    const TransitionKernel kernel = build_transition_kernel(space, wp, cert);
    const int n = space.size();

    ChainResult res;
    res.n_max = n_max;
    res.validation_count = validation_count;
    res.delta = choose_delta(cert, p, growth);
    res.s_prime = 1.0 - res.delta * (p - 1.0);

    // Lyapunov function F(x,y).
    VectorXd wp_delta(n);
    for (int i = 0; i < n; ++i) wp_delta[i] = std::pow(wp.W_plus[i], -res.delta);
    MatrixXd F(n, n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            F(x, y) = wp.in_x0(x) ? wp_delta[x] : wp_delta[x] - wp_delta[y];

    // F >= (1 - lambda^{-delta}) W_+^{-delta} on the support of E,
    // as a margin relative to W_+(x)^{-delta}.
    const double shrink = 1.0 - std::pow(cert.lambda, -res.delta);
    res.lower_envelope_min_margin = std::numeric_limits<double>::infinity();
    for (int x = 0; x < n; ++x)
        for (int y : kernel.E[static_cast<size_t>(x)])
            res.lower_envelope_min_margin =
                std::min(res.lower_envelope_min_margin,
                         (F(x, y) - shrink * wp_delta[x]) / wp_delta[x]);

    // S_n F = W_+^{-delta} - T^n W_+^{-delta} and S_n F <= W_+^{-delta},
    // both relative to the dynamic range of the Lyapunov vector.
    {
        const double lyap_scale = std::max(1.0, wp_delta.maxCoeff());
        VectorXd s1f = kernel.apply_S1(space, wp, F);
        VectorXd snf = s1f;
        VectorXd tn = wp_delta;
        for (int step = 1; step <= n_max; ++step) {
            tn = kernel.apply_T(tn);
            if (step > 1) snf = s1f + kernel.apply_T(snf);
            res.sn_identity_max_dev =
                std::max(res.sn_identity_max_dev,
                         (snf - (wp_delta - tn)).cwiseAbs().maxCoeff() / lyap_scale);
            res.lyapunov_max_excess =
                std::max(res.lyapunov_max_excess, (snf - wp_delta).maxCoeff() / lyap_scale);
        }
    }

    // Operator norm of S_{n_max} from the pair-indexed energy space
    //   nu(a,b) = chi_U(b,a) W(b) mu(a) mu(b) / mu(B_b)
    // to L^p(W_+ dmu), computed on the ell^p conjugated matrix.
    std::vector<std::pair<int, int>> pairs;  // (a, b) with a in B_b
    std::vector<double> nu;
    for (int b = 0; b < n; ++b) {
        const double w = wp.W[b] * space.mu(b) / space.mu_ball(b);
        for (int a : space.ball(b)) {
            pairs.emplace_back(a, b);
            nu.push_back(w * space.mu(a));
        }
    }
    const int m = static_cast<int>(pairs.size());
    MatrixXd S1 = MatrixXd::Zero(n, m);
    const double mu_x0 = wp.X0.empty() ? 0.0 : space.set_measure(wp.X0);
    for (int k = 0; k < m; ++k) {
        const auto [a, b] = pairs[static_cast<size_t>(k)];
        // S_1 reads g(a,b) through P(a,b) mu(b), plus the X0 averaging term.
        S1(a, k) += kernel.P(a, b) * space.mu(b);
        if (mu_x0 > 0.0 && wp.in_x0(a) && wp.in_x0(b)) S1(a, k) += space.mu(b) / mu_x0;
    }
    MatrixXd Sn = S1;
    MatrixXd term = S1;
    for (int step = 2; step <= n_max; ++step) {
        term = kernel.M * term;
        Sn += term;
        if (term.cwiseAbs().maxCoeff() < 1e-300) break;  // chain already absorbed
    }
    MatrixXd conj = Sn;
    bool norm_unbounded = false;
    for (int x = 0; x < n; ++x)
        conj.row(x) *= std::pow(wp.W_plus[x] * space.mu(x), 1.0 / p);
    for (int k = 0; k < m; ++k) {
        if (nu[static_cast<size_t>(k)] > 0.0) {
            conj.col(k) *= std::pow(nu[static_cast<size_t>(k)], -1.0 / p);
        } else if (conj.col(k).cwiseAbs().maxCoeff() > 0.0) {
            norm_unbounded = true;
        }
    }
    if (norm_unbounded) {
        res.operator_norm = std::numeric_limits<double>::infinity();
        res.c_upper = std::numeric_limits<double>::infinity();
        return res;
    }
    const PNormResult norm = pnorm_power_iteration(conj, p);
    res.operator_norm = norm.value;
    res.c_upper = std::pow(norm.value, p);

    // Validation on random centered f: the asserted Poincare bound, the
    // pointwise domination S_n Delta_f >= |f - T^n f|, and T^n decay.
    const CenterMode mode = wp.X0.empty() ? CenterMode::WPlus : CenterMode::X0;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    res.sn_delta_min_margin = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < validation_count; ++trial) {
        VectorXd raw(n);
        for (int i = 0; i < n; ++i) raw[i] = gauss(rng);
        const FunctionOnSpace f = project_mean_zero({raw, CenterMode::Raw}, space, wp, mode);
        const auto [lhs, rhs] = poincare_sides(space, wp, f, p);
        if (rhs > 0.0) res.validation_worst_ratio = std::max(res.validation_worst_ratio,
                                                             lhs / (res.c_upper * rhs));
        MatrixXd delta_f(n, n);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) delta_f(x, y) = std::abs(f.values[x] - f.values[y]);
        const VectorXd sn_delta = kernel.apply_Sn(space, wp, delta_f, n_max);
        VectorXd tn_f = f.values;
        for (int step = 0; step < n_max; ++step) {
            tn_f = kernel.apply_T(tn_f);
            if (tn_f.cwiseAbs().maxCoeff() < 1e-14) break;
        }
        VectorXd tnf_full = f.values;
        for (int step = 0; step < n_max; ++step) tnf_full = kernel.apply_T(tnf_full);
        res.tn_final_sup = std::max(res.tn_final_sup, tnf_full.cwiseAbs().maxCoeff());
        res.sn_delta_min_margin = std::min(
            res.sn_delta_min_margin,
            (sn_delta - (f.values - tnf_full).cwiseAbs()).minCoeff());
    }
    return res;
}

}  // namespace pineq
