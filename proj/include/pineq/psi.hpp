#pragma once

// Slowly growing Orlicz generators psi with companions psi~ satisfying
// psi(xy) <= K (psi(x) + psi~(y)).

#include <cmath>
#include <stdexcept>
#include <vector>

namespace pineq {

enum class PsiKind { LogPower, ExpLogPower, Constant };

struct PsiPair {
    PsiKind kind = PsiKind::LogPower;
    double alpha = 0.0;
    double c = 0.0;
    double slow_growth_constant = 1.0;  // empirical K on the sample grid

    double psi(double t) const { return eval(t, alpha); }

    double psi_tilde(double t) const {
        if (kind == PsiKind::ExpLogPower) return eval(t, alpha / (1.0 - alpha));
        return eval(t, alpha);
    }

private:
    double eval(double t, double exponent) const {
        // Clamp before powering; log of the clamp still fits comfortably.
        const double arg = std::exp(1.0) + std::min(std::abs(t), 1e300);
        switch (kind) {
            case PsiKind::LogPower:
                return std::pow(std::log(arg), exponent);
            case PsiKind::ExpLogPower:
                return std::exp(c * std::pow(std::log(arg), exponent));
            case PsiKind::Constant:
                return c;
        }
        return c;
    }
};

/// Build a psi pair and measure its slow-growth constant over a log-spaced
/// sample of (x,y) in [0, 1e8]^2.
inline PsiPair make_psi_pair(PsiKind kind, double alpha, double c = 0.0) {
    if (alpha < 0.0) throw std::invalid_argument("psi requires alpha >= 0");
    if (kind == PsiKind::ExpLogPower && alpha >= 1.0)
        throw std::invalid_argument("exp-log-power psi requires alpha in [0,1)");
    if (kind == PsiKind::ExpLogPower && c < 0.0)
        throw std::invalid_argument("exp-log-power psi requires c >= 0");
    PsiPair pair{kind, alpha, c, 1.0};

    std::vector<double> grid = {0.0};
    constexpr int kSamples = 56;
    for (int i = 0; i <= kSamples; ++i)
        grid.push_back(1e-6 * std::pow(1e14, static_cast<double>(i) / kSamples));
    double worst = 0.0;
    for (double x : grid)
        for (double y : grid) {
            const double denom = pair.psi(x) + pair.psi_tilde(y);
            if (denom > 0.0) worst = std::max(worst, pair.psi(x * y) / denom);
        }
    pair.slow_growth_constant = worst;
    return pair;
}

}  // namespace pineq
