#pragma once

// Regular grids on [-L,L]^d with Euclidean unit balls, plus the
// finite-difference differential condition and the mean-value bound.

#include "pineq/space.hpp"
#include "pineq/weights.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace pineq {

struct Lattice {
    Space space;
    int dim = 1;
    double extent = 0.0;   // L
    double spacing = 1.0;  // h
    int per_axis = 1;      // points per axis, 2L/h + 1
    MatrixXd coords;       // N x d, row i = coordinates of point i

    double radius(int i) const { return coords.row(i).norm(); }

    /// Point index offset by one grid step along an axis, if inside.
    std::optional<int> neighbor(int i, int axis, int step) const {
        int idx = i;
        int divisor = 1;
        for (int a = 0; a < axis; ++a) divisor *= per_axis;
        const int coord = (idx / divisor) % per_axis;
        const int moved = coord + step;
        if (moved < 0 || moved >= per_axis) return std::nullopt;
        return i + step * divisor;
    }

    bool is_interior(int i) const {
        for (int a = 0; a < dim; ++a)
            if (!neighbor(i, a, 1) || !neighbor(i, a, -1)) return false;
        return true;
    }
};

/// Full grid on [-L,L]^d with cell measure h^d and U = {|x-y| <= radius}.
/// Point i has axis-a coordinate -L + h * ((i / per_axis^a) mod per_axis).
inline Lattice make_lattice(int dim, double L, double h, double unit_radius = 1.0) {
    if (dim < 1 || !(L > 0.0) || !(h > 0.0)) throw std::invalid_argument("bad lattice geometry");
    const int per_axis = static_cast<int>(std::llround(2.0 * L / h)) + 1;
    long long total = 1;
    for (int a = 0; a < dim; ++a) total *= per_axis;
    if (total > 100000) throw std::invalid_argument("lattice point count exceeds cap 1e5");
    const int n = static_cast<int>(total);

    MatrixXd coords(n, dim);
    for (int i = 0; i < n; ++i) {
        int idx = i;
        for (int a = 0; a < dim; ++a) {
            coords(i, a) = -L + h * (idx % per_axis);
            idx /= per_axis;
        }
    }

    const double r2 = unit_radius * unit_radius * (1.0 + 1e-12);
    Relation rel(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if ((coords.row(i) - coords.row(j)).squaredNorm() <= r2)
                rel[static_cast<size_t>(i)].push_back(j);

    VectorXd mu = VectorXd::Constant(n, std::pow(h, dim));
    return Lattice{Space(std::move(mu), std::move(rel)), dim, L, h, per_axis, std::move(coords)};
}

/// Nested scale family of Euclidean-radius relations, deepest first radius
/// halving; used by the psi-seminorm machinery.
inline ScaleFamily lattice_scales(const Lattice& lat, const std::vector<double>& radii) {
    ScaleFamily fam;
    const int n = lat.space.size();
    for (double r : radii) {
        const double r2 = r * r * (1.0 + 1e-12);
        Relation rel(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if ((lat.coords.row(i) - lat.coords.row(j)).squaredNorm() <= r2)
                    rel[static_cast<size_t>(i)].push_back(j);
        fam.levels.push_back(std::move(rel));
    }
    return fam;
}

struct DifferentialCheck {
    std::vector<int> violations;  // interior points with |x| > R failing the bound
    std::vector<int> boundary;    // points excluded for lacking a full stencil
    double worst_value = std::numeric_limits<double>::infinity();
};

/// Evaluate s|grad V|^2 - Laplacian(V) >= rho by central differences at every
/// interior point with |x| > R.
inline DifferentialCheck check_differential_condition(const Lattice& lat, const VectorXd& V,
                                                      double s, double rho, double R) {
    DifferentialCheck out;
    const double h = lat.spacing;
    for (int i = 0; i < lat.space.size(); ++i) {
        if (!lat.is_interior(i)) {
            out.boundary.push_back(i);
            continue;
        }
        if (lat.radius(i) <= R) continue;
        double grad2 = 0.0;
        double laplacian = 0.0;
        for (int a = 0; a < lat.dim; ++a) {
            const double vp = V[*lat.neighbor(i, a, 1)];
            const double vm = V[*lat.neighbor(i, a, -1)];
            const double d1 = (vp - vm) / (2.0 * h);
            grad2 += d1 * d1;
            laplacian += (vp + vm - 2.0 * V[i]) / (h * h);
        }
        const double value = s * grad2 - laplacian;
        out.worst_value = std::min(out.worst_value, value);
        if (value < rho - kRelSlack * std::max(1.0, std::abs(value)))
            out.violations.push_back(i);
    }
    return out;
}

struct MeanValueCheck {
    std::vector<int> failing;  // checked points where the bound fails
    std::vector<int> skipped;  // points whose t-ball exits the grid
    int checked = 0;
    double worst_margin = std::numeric_limits<double>::infinity();  // min of ratio - bound
};

/// Check (1/m(B^t_x)) int_{B^t_x} F >= (1 + rho t^2 / (2(d+2))) F(x) by
/// cell-center quadrature.
inline MeanValueCheck check_mean_value_bound(const Lattice& lat, const VectorXd& F, double rho,
                                             double t) {
    if (!(t > 0.0)) throw std::invalid_argument("mean value bound requires t > 0");
    for (int i = 0; i < F.size(); ++i)
        if (F[i] < 0.0) throw std::invalid_argument("mean value bound requires F >= 0");
    MeanValueCheck out;
    const double bound_factor = 1.0 + rho * t * t / (2.0 * (lat.dim + 2));
    const double t2 = t * t * (1.0 + 1e-12);
    for (int i = 0; i < lat.space.size(); ++i) {
        bool inside = true;
        for (int a = 0; a < lat.dim; ++a)
            if (std::abs(lat.coords(i, a)) + t > lat.extent + 1e-12) inside = false;
        if (!inside) {
            out.skipped.push_back(i);
            continue;
        }
        double sum = 0.0;
        int count = 0;
        for (int j = 0; j < lat.space.size(); ++j)
            if ((lat.coords.row(i) - lat.coords.row(j)).squaredNorm() <= t2) {
                sum += F[j];
                ++count;
            }
        const double avg = sum / count;
        const double target = bound_factor * F[i];
        ++out.checked;
        if (F[i] > 0.0) out.worst_margin = std::min(out.worst_margin, avg / F[i] - bound_factor);
        if (!leq_with_slack(target, avg, 1e-10)) out.failing.push_back(i);
    }
    return out;
}

}  // namespace pineq
