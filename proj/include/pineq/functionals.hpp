#pragma once

// The functionals of the two main inequalities: Poincare left/right sides,
// psi-weighted seminorms, the Orlicz functional, and the sequence bound.

#include "pineq/psi.hpp"
#include "pineq/space.hpp"
#include "pineq/weights.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace pineq {

enum class CenterMode { Raw, X0, WPlus, Mu };

struct FunctionOnSpace {
    VectorXd values;
    CenterMode mode = CenterMode::Raw;
};

/// Subtract the weighted average selected by the mode, making the result
/// exactly centered (up to roundoff).
inline FunctionOnSpace project_mean_zero(const FunctionOnSpace& f, const Space& space,
                                         const WeightPair& wp, CenterMode mode) {
    if (mode == CenterMode::Raw) return {f.values, CenterMode::Raw};
    double num = 0.0, den = 0.0;
    switch (mode) {
        case CenterMode::X0:
            for (int x : wp.X0) {
                num += f.values[x] * space.mu(x);
                den += space.mu(x);
            }
            if (den <= 0.0) throw std::domain_error("X0 centering requires mu(X0) > 0");
            break;
        case CenterMode::WPlus:
            for (int x = 0; x < space.size(); ++x) {
                num += f.values[x] * wp.W_plus[x] * space.mu(x);
                den += wp.W_plus[x] * space.mu(x);
            }
            if (den <= 0.0) throw std::domain_error("W_plus centering requires positive mass");
            break;
        case CenterMode::Mu:
            num = f.values.dot(space.measure());
            den = space.total_measure();
            break;
        case CenterMode::Raw:
            break;
    }
    return {f.values.array() - num / den, mode};
}

/// lhs = sum |f|^p W_+ mu;
/// rhs = sum_x [ (1/mu(B_x)) sum_{y in B_x} |f(x)-f(y)|^p mu(y) ] W(x) mu(x).
inline std::pair<double, double> poincare_sides(const Space& space, const WeightPair& wp,
                                                const FunctionOnSpace& f, double p) {
    if (p < 1.0) throw std::invalid_argument("poincare_sides requires p >= 1");
    double lhs = 0.0, rhs = 0.0;
    for (int x = 0; x < space.size(); ++x) {
        lhs += std::pow(std::abs(f.values[x]), p) * wp.W_plus[x] * space.mu(x);
        double inner = 0.0;
        for (int y : space.ball(x))
            inner += std::pow(std::abs(f.values[x] - f.values[y]), p) * space.mu(y);
        rhs += inner / space.mu_ball(x) * wp.W[x] * space.mu(x);
    }
    return {lhs, rhs};
}

/// Kernel K_{p,psi}(x,y) = psi(VOL*(x,y)^{-1/p}) / VOL*(x,y) + 1/mu(U_0(x)).
inline double seminorm_kernel(const Space& space, const PsiPair& psi, double p, int x, int y) {
    const double vol = vol_star(space, x, y);
    const double mu_u0 = space.set_measure(space.scale_ball(0, x));
    return psi.psi(std::pow(vol, -1.0 / p)) / vol + 1.0 / mu_u0;
}

/// ||f||_{p,psi}^p over the scale-family unit balls U_0(x).
inline double seminorm_psi(const Space& space, const WeightPair& wp, const PsiPair& psi,
                           const FunctionOnSpace& f, double p) {
    if (!space.has_scales()) throw std::invalid_argument("seminorm_psi requires a scale family");
    if (p < 1.0) throw std::invalid_argument("seminorm_psi requires p >= 1");
    double total = 0.0;
    for (int x = 0; x < space.size(); ++x) {
        double inner = 0.0;
        for (int y : space.scale_ball(0, x))
            inner += std::pow(std::abs(f.values[x] - f.values[y]), p) *
                     seminorm_kernel(space, psi, p, x, y) * space.mu(y);
        total += inner * wp.W[x] * space.mu(x);
    }
    return total;
}

/// sum_y psi(c|f(y)|/S) (c|f(y)|/S)^p W(y) mu(y) with S = ||f||_{p,psi}.
inline double orlicz_functional(const Space& space, const WeightPair& wp, const PsiPair& psi,
                                const FunctionOnSpace& f, double p, double c,
                                std::optional<double> seminorm_p = std::nullopt) {
    const double sn = seminorm_p ? *seminorm_p : seminorm_psi(space, wp, psi, f, p);
    if (!(sn > 0.0)) {
        if (f.values.cwiseAbs().maxCoeff() > 0.0)
            throw std::domain_error("orlicz_functional: zero seminorm with nonzero f");
        return 0.0;
    }
    const double scale = c / std::pow(sn, 1.0 / p);
    double total = 0.0;
    for (int y = 0; y < space.size(); ++y) {
        const double t = scale * std::abs(f.values[y]);
        total += psi.psi(t) * std::pow(t, p) * wp.W[y] * space.mu(y);
    }
    return total;
}

struct LogSobResult {
    bool feasible = false;
    double c = 0.0;
    double final_value = 0.0;  // max functional value over the family at c
};

/// Largest c such that the Orlicz functional stays <= 1 for every family
/// member, located by bisection on the monotone functional.
inline LogSobResult find_logsob_constant(const Space& space, const WeightPair& wp,
                                         const PsiPair& psi,
                                         const std::vector<FunctionOnSpace>& family, double p,
                                         double rel_tol = 1e-7) {
    if (family.empty()) throw std::invalid_argument("find_logsob_constant: empty family");
    std::vector<double> seminorms;
    seminorms.reserve(family.size());
    for (const auto& f : family) {
        const double sn = seminorm_psi(space, wp, psi, f, p);
        if (!(sn > 0.0)) throw std::domain_error("find_logsob_constant: member with zero seminorm");
        seminorms.push_back(sn);
    }
    auto worst = [&](double c) {
        double m = 0.0;
        for (size_t i = 0; i < family.size(); ++i)
            m = std::max(m, orlicz_functional(space, wp, psi, family[i], p, c, seminorms[i]));
        return m;
    };

    double lo = 1e-12;
    if (worst(lo) > 1.0) return {false, 0.0, worst(lo)};
    double hi = std::max(lo * 2.0, 1.0);
    int guard = 0;
    while (worst(hi) <= 1.0 && guard++ < 200) hi *= 2.0;
    if (guard >= 200) return {true, hi, worst(hi)};  // effectively unconstrained
    while (hi - lo > rel_tol * lo) {
        const double mid = 0.5 * (lo + hi);
        (worst(mid) <= 1.0 ? lo : hi) = mid;
    }
    return {true, lo, worst(lo)};
}

struct SobolevWeightDiagnostics {
    double K1 = 0.0;  // W_+(x) >= K1^{-1} W(x) [psi(..) + psi~(..)]
    double K2 = 0.0;  // W(x) <= K2 * average of W over U_j^*(x), all j
    std::vector<int> flagged;  // points where a side degenerates
};

inline SobolevWeightDiagnostics check_sobolev_weight_conditions(const Space& space,
                                                                const WeightPair& wp,
                                                                const PsiPair& psi, double p) {
    if (!space.has_scales())
        throw std::invalid_argument("sobolev weight conditions need a scale family");
    SobolevWeightDiagnostics out;
    for (int x = 0; x < space.size(); ++x) {
        const double mu_u0_dual = space.mu_scale_dual(0, x);
        const double w = wp.W[x];
        double bracket = psi.psi(std::pow(mu_u0_dual, -1.0 / p));
        if (w > 0.0) {
            bracket += psi.psi_tilde(std::pow(w, -1.0 / p));
        } else if (psi.kind != PsiKind::Constant) {
            out.flagged.push_back(x);
            continue;
        }
        const double need = w * bracket;
        if (wp.W_plus[x] > 0.0) {
            out.K1 = std::max(out.K1, need / wp.W_plus[x]);
        } else if (need > 0.0) {
            out.flagged.push_back(x);
        }
        for (int j = 0; j < space.scale_count(); ++j) {
            double avg = 0.0;
            for (int z : space.scale_dual_ball(j, x)) avg += wp.W[z] * space.mu(z);
            avg /= space.mu_scale_dual(j, x);
            if (avg > 0.0)
                out.K2 = std::max(out.K2, w / avg);
            else if (w > 0.0)
                out.flagged.push_back(x);
        }
    }
    return out;
}

struct SequenceBoundResult {
    double lhs = 0.0;
    double rhs = 0.0;
    bool passed = false;
};

/// Verify psi(|L|) u(|L|) <= psi(|a_0|/(1-theta)) u(|L|)
///   + sup_{k>=1} psi(|a_k|/(1-theta)) u(|a_{k-1}-L|/theta)
/// for a convergent sequence, or its averaged refinement over index sets
/// G_k = {j : (k,j) in G} (G must contain every pair (k, k-1)).
inline SequenceBoundResult sequence_bound_check(
    const std::vector<std::complex<double>>& a, std::complex<double> L, const PsiPair& psi,
    const std::function<double(double)>& u, double theta,
    const std::optional<std::vector<std::pair<int, int>>>& G = std::nullopt) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("sequence bound requires theta in (0,1)");
    if (a.empty()) throw std::invalid_argument("sequence bound requires a nonempty sequence");

    std::vector<std::vector<int>> g_k(a.size());
    if (G) {
        for (const auto& [k, j] : *G) {
            if (!(k > j && j >= 0) || k >= static_cast<int>(a.size()))
                throw std::invalid_argument("G pair out of range or not k > j >= 0");
            g_k[static_cast<size_t>(k)].push_back(j);
        }
        for (size_t k = 1; k < a.size(); ++k) {
            bool has_prev = false;
            for (int j : g_k[k]) has_prev = has_prev || (j == static_cast<int>(k) - 1);
            if (!has_prev) throw std::invalid_argument("G must contain every pair (k, k-1)");
        }
    } else {
        for (size_t k = 1; k < a.size(); ++k) g_k[k] = {static_cast<int>(k) - 1};
    }

    SequenceBoundResult res;
    const double abs_l = std::abs(L);
    res.lhs = psi.psi(abs_l) * u(abs_l);
    const double base = psi.psi(std::abs(a[0]) / (1.0 - theta)) * u(abs_l);
    double sup_term = 0.0;
    for (size_t k = 1; k < a.size(); ++k) {
        const double head = psi.psi(std::abs(a[k]) / (1.0 - theta));
        double avg = 0.0;
        for (int j : g_k[k]) avg += u(std::abs(a[static_cast<size_t>(j)] - L) / theta);
        avg /= static_cast<double>(g_k[k].size());
        sup_term = std::max(sup_term, head * avg);
    }
    res.rhs = base + sup_term;
    res.passed = leq_with_slack(res.lhs, res.rhs);
    return res;
}

inline std::function<double(double)> power_u(double p) {
    return [p](double t) { return std::pow(t, p); };
}

}  // namespace pineq
