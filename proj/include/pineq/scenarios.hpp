#pragma once

// Ready-to-run worked examples: weighted graphs, Gaussian-type lattices
// (plain and modified-weight variants), pixelated planar domains with the
// O_n covering recursion, and the Boltzmann-metric velocity grid.

#include "pineq/lattice.hpp"
#include "pineq/space.hpp"
#include "pineq/weights.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace pineq {

struct GraphScenario {
    Space space;
    WeightPair weights;
    int max_valence = 0;
    bool connected = true;
};

/// Counting measure, U = edges plus diagonal, W = W_+ = exp(-decay * dist
/// to root). X0 is the whole vertex set for decay 0 (constant weights),
/// otherwise just the root. Disconnected graphs are flagged, not rejected;
/// unreachable vertices get weight 0 and the constant is expected unbounded.
inline GraphScenario make_graph_scenario(const Relation& adjacency, int root, double decay_rate) {
    const int n = static_cast<int>(adjacency.size());
    if (root < 0 || root >= n) throw std::invalid_argument("graph root out of range");
    if (decay_rate < 0.0) throw std::invalid_argument("decay rate must be nonnegative");

    Relation rel = adjacency;
    for (int x = 0; x < n; ++x) rel[static_cast<size_t>(x)].push_back(x);

    std::vector<int> dist(static_cast<size_t>(n), -1);
    std::queue<int> bfs;
    dist[static_cast<size_t>(root)] = 0;
    bfs.push(root);
    while (!bfs.empty()) {
        const int x = bfs.front();
        bfs.pop();
        for (int y : adjacency[static_cast<size_t>(x)])
            if (dist[static_cast<size_t>(y)] < 0) {
                dist[static_cast<size_t>(y)] = dist[static_cast<size_t>(x)] + 1;
                bfs.push(y);
            }
    }

    GraphScenario out{Space(VectorXd::Ones(n), std::move(rel)), WeightPair{}, 0, true};
    for (const auto& row : adjacency)
        out.max_valence = std::max(out.max_valence, static_cast<int>(row.size()));

    VectorXd w(n);
    for (int x = 0; x < n; ++x) {
        if (dist[static_cast<size_t>(x)] < 0) {
            out.connected = false;
            w[x] = 0.0;
        } else {
            w[x] = std::exp(-decay_rate * dist[static_cast<size_t>(x)]);
        }
    }
    std::vector<int> x0;
    if (decay_rate == 0.0) {
        for (int x = 0; x < n; ++x) x0.push_back(x);
    } else {
        x0 = {root};
    }
    out.weights = make_weight_pair(w, w, std::move(x0));
    return out;
}

enum class LatticeVariant { Neumann, Dirichlet };
enum class LatticeMode { Plain, Modified };

struct LatticeScenario {
    Lattice lattice;
    WeightPair weights;
    // Modified-weight parameters, populated in Modified mode.
    double rho = 0.0;
    double R = 0.0;
    double eta = 0.0;
    double lambda_w = 0.0;
    double s_diff = 0.0;
    double A = 0.0;
    double clipped_fraction = 0.0;  // points whose unit ball exits the window
};

namespace detail {

/// Smallest radius beyond which s|grad V|^2 - Delta V >= rho holds for
/// V = |x|^s_exp: closed form for s_exp = 2, bisection on the radial profile
/// otherwise.
inline double differential_radius(int d, double s_exp, double s_diff, double rho) {
    if (s_exp == 2.0) return std::sqrt((rho + 2.0 * d) / (4.0 * s_diff));
    auto value = [&](double r) {
        const double g = s_exp * std::pow(r, s_exp - 1.0);
        const double lap = s_exp * (s_exp - 1.0) * std::pow(r, s_exp - 2.0) +
                           (d - 1.0) * s_exp * std::pow(r, s_exp - 2.0);
        return s_diff * g * g - lap;
    };
    double lo = 1e-6, hi = 1.0;
    while (value(hi) < rho && hi < 1e6) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (value(mid) < rho ? lo : hi) = mid;
    }
    return hi;
}

}  // namespace detail

/// Grid on [-L,L]^d with cell measure h^d and Euclidean unit balls.
/// Plain mode: W = exp(-|x|^s_exp) (Neumann) or exp(+|x|^s_exp) (Dirichlet)
/// with W_+ = exp(eps * s_exp * |x|^{s_exp-1}) W. Modified mode replaces the
/// pair inside |x| <= R+1 by a steep radial exponential and outside by the
/// averaged form that the mean-value bound controls.
inline LatticeScenario make_lattice_scenario(int d, double L, double h, double s_exp, double eps,
                                             LatticeVariant variant = LatticeVariant::Neumann,
                                             LatticeMode mode = LatticeMode::Plain,
                                             std::vector<double> scale_radii = {1.0, 0.5}) {
    if (s_exp < 1.0) throw std::invalid_argument("lattice scenario requires s_exp >= 1");
    if (eps < 0.0 || eps >= 1.0) throw std::invalid_argument("lattice scenario needs eps in [0,1)");
    LatticeScenario out{make_lattice(d, L, h)};
    const int n = out.lattice.space.size();

    const double sign = variant == LatticeVariant::Dirichlet ? 1.0 : -1.0;
    VectorXd W(n), W_plus(n);
    for (int i = 0; i < n; ++i) {
        const double r = out.lattice.radius(i);
        W[i] = std::exp(sign * std::pow(r, s_exp));
        W_plus[i] = std::exp(eps * s_exp * std::pow(r, s_exp - 1.0)) * W[i];
    }

    std::vector<int> x0;
    if (variant == LatticeVariant::Neumann)
        for (int i = 0; i < n; ++i)
            if (out.lattice.radius(i) <= 0.5 + kRelSlack) x0.push_back(i);

    int clipped = 0;
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < d; ++a)
            if (std::abs(out.lattice.coords(i, a)) + 1.0 > L + kRelSlack) {
                ++clipped;
                break;
            }
    out.clipped_fraction = static_cast<double>(clipped) / n;

    if (mode == LatticeMode::Modified) {
        if (variant == LatticeVariant::Dirichlet)
            throw std::invalid_argument("modified weights apply to the Neumann variant");
        out.s_diff = 0.5;
        out.rho = 1.0;
        out.eta = 0.5 * out.rho;
        out.lambda_w = 1.05;
        out.R = detail::differential_radius(d, s_exp, out.s_diff, out.rho);
        // A bounds W from above on |x| <= R+1; for radial decreasing W that
        // is the center value.
        out.A = 1.0;
        for (int i = 0; i < n; ++i)
            if (out.lattice.radius(i) <= out.R + 1.0) out.A = std::max(out.A, W[i]);

        const double front_factor =
            (2.0 * (d + 2) + out.eta) / (2.0 * (d + 2) + out.rho);
        VectorXd Wm(n), Wm_plus(n);
        for (int i = 0; i < n; ++i) {
            const double r = out.lattice.radius(i);
            if (r <= out.R + 1.0) {
                Wm[i] = out.A * std::exp(-3.0 * out.lambda_w * (r - out.R - 1.0));
                Wm_plus[i] = Wm[i];
            } else {
                Wm[i] = W[i];
                double avg = 0.0;
                for (int y : out.lattice.space.ball(i))
                    avg += std::pow(W[y], out.s_diff) * out.lattice.space.mu(y);
                avg /= out.lattice.space.mu_ball(i);
                // Clipped boundary balls can push the average below the
                // center value; the pair invariant keeps W as a floor.
                Wm_plus[i] = std::max(Wm[i], std::pow(front_factor * avg, 1.0 / out.s_diff));
            }
        }
        W = std::move(Wm);
        W_plus = std::move(Wm_plus);
    }

    if (!scale_radii.empty()) {
        ScaleFamily fam = lattice_scales(out.lattice, scale_radii);
        out.lattice.space = Space(out.lattice.space.measure(),
                                  [&] {
                                      Relation rel(static_cast<size_t>(n));
                                      for (int i = 0; i < n; ++i)
                                          rel[static_cast<size_t>(i)] = out.lattice.space.ball(i);
                                      return rel;
                                  }(),
                                  std::move(fam));
    }
    out.weights = make_weight_pair(std::move(W), std::move(W_plus), std::move(x0));
    return out;
}

// --- pixelated planar domains ---

struct PixelMask {
    int nx = 0, ny = 0;
    double x0 = 0.0, y0 = 0.0;  // coordinates of cell (0,0)'s center
    double pixel = 1.0;
    std::vector<std::uint8_t> cells;  // row-major, 1 = in the domain

    bool at(int i, int j) const {
        if (i < 0 || i >= nx || j < 0 || j >= ny) return false;
        return cells[static_cast<size_t>(j) * nx + i] != 0;
    }
    double cx(int i) const { return x0 + pixel * i; }
    double cy(int j) const { return y0 + pixel * j; }
};

/// Rasterize a union of axis-aligned rectangles {xmin, xmax, ymin, ymax}
/// onto a pixel grid; a cell belongs to the mask when its center does.
inline PixelMask make_rect_union_mask(const std::vector<std::array<double, 4>>& rects,
                                      double pixel) {
    if (rects.empty() || !(pixel > 0.0)) throw std::invalid_argument("bad mask geometry");
    double xmin = rects[0][0], xmax = rects[0][1], ymin = rects[0][2], ymax = rects[0][3];
    for (const auto& r : rects) {
        xmin = std::min(xmin, r[0]);
        xmax = std::max(xmax, r[1]);
        ymin = std::min(ymin, r[2]);
        ymax = std::max(ymax, r[3]);
    }
    PixelMask mask;
    mask.pixel = pixel;
    mask.x0 = xmin + 0.5 * pixel;
    mask.y0 = ymin + 0.5 * pixel;
    mask.nx = static_cast<int>(std::ceil((xmax - xmin) / pixel - 1e-9));
    mask.ny = static_cast<int>(std::ceil((ymax - ymin) / pixel - 1e-9));
    mask.cells.assign(static_cast<size_t>(mask.nx) * mask.ny, 0);
    for (int j = 0; j < mask.ny; ++j)
        for (int i = 0; i < mask.nx; ++i) {
            const double x = mask.cx(i), y = mask.cy(j);
            for (const auto& r : rects)
                if (x > r[0] && x < r[1] && y > r[2] && y < r[3]) {
                    mask.cells[static_cast<size_t>(j) * mask.nx + i] = 1;
                    break;
                }
        }
    return mask;
}

/// Two unit squares joined by a corridor of the given width.
inline PixelMask make_dumbbell_mask(double pixel, double corridor_width = 0.3) {
    return make_rect_union_mask({{0.0, 1.0, 0.0, 1.0},
                                 {1.5, 2.5, 0.0, 1.0},
                                 {1.0, 1.5, 0.5 - corridor_width / 2, 0.5 + corridor_width / 2}},
                                pixel);
}

/// Two unit squares separated by a gap (no corridor).
inline PixelMask make_separated_mask(double pixel, double gap) {
    return make_rect_union_mask({{0.0, 1.0, 0.0, 1.0}, {1.0 + gap, 2.0 + gap, 0.0, 1.0}}, pixel);
}

struct DomainScenario {
    Space space;
    WeightPair weights;
    std::vector<int> V;     // covering index per point; n_star + 1 if uncovered
    int n_star = 0;         // first n with O_n covering everything, or stall index
    bool covered = false;
    std::vector<int> coverage_history;  // |O_n| per iteration
};

/// O_n covering recursion on the pixelated domain: O_1 is a largest inscribed
/// pixel disk of radius <= 1/2, O_n = {y : m(B_y cap O_{n-1} cap Omega) > c/n}
/// with cell-center counting measure. Weights are (e^{-V}, e^{-V}), X0 = O_1.
inline DomainScenario make_domain_scenario(const PixelMask& mask, double c_threshold = 0.05) {
    const double pixel = mask.pixel;
    const double area = pixel * pixel;
    std::vector<std::pair<int, int>> idx;  // point -> (i, j)
    std::vector<std::vector<int>> point_at(static_cast<size_t>(mask.nx),
                                           std::vector<int>(static_cast<size_t>(mask.ny), -1));
    for (int j = 0; j < mask.ny; ++j)
        for (int i = 0; i < mask.nx; ++i)
            if (mask.at(i, j)) {
                point_at[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    static_cast<int>(idx.size());
                idx.emplace_back(i, j);
            }
    const int n = static_cast<int>(idx.size());
    if (n == 0) throw std::invalid_argument("empty pixel mask");

    auto center = [&](int p) {
        return std::pair<double, double>{mask.cx(idx[static_cast<size_t>(p)].first),
                                         mask.cy(idx[static_cast<size_t>(p)].second)};
    };
    auto dist2 = [&](int p, int q) {
        const auto [px, py] = center(p);
        const auto [qx, qy] = center(q);
        return (px - qx) * (px - qx) + (py - qy) * (py - qy);
    };

    Relation rel(static_cast<size_t>(n));
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            if (dist2(p, q) <= 1.0 + kRelSlack) rel[static_cast<size_t>(p)].push_back(q);
    Space space(VectorXd::Constant(n, area), std::move(rel));

    // Inscribed radius at each cell center: distance to the nearest cell
    // center outside the domain (grid padded by one ring), capped at 1/2.
    int seed_point = 0;
    double seed_radius = -1.0;
    for (int p = 0; p < n; ++p) {
        const auto [i, j] = idx[static_cast<size_t>(p)];
        double best = std::numeric_limits<double>::infinity();
        const int reach = static_cast<int>(std::ceil(0.5 / pixel)) + 1;
        for (int dj = -reach; dj <= reach; ++dj)
            for (int di = -reach; di <= reach; ++di)
                if (!mask.at(i + di, j + dj))
                    best = std::min(best, pixel * std::sqrt(double(di * di + dj * dj)));
        const double r = std::min(best, 0.5);
        if (r > seed_radius) {
            seed_radius = r;
            seed_point = p;
        }
    }

    std::vector<std::uint8_t> on(static_cast<size_t>(n), 0);
    for (int q = 0; q < n; ++q)
        if (dist2(seed_point, q) <= seed_radius * seed_radius + kRelSlack)
            on[static_cast<size_t>(q)] = 1;

    DomainScenario out{std::move(space), WeightPair{}, std::vector<int>(static_cast<size_t>(n), 0),
                       1, false, {}};
    auto record = [&](const std::vector<std::uint8_t>& set, int level) {
        int count = 0;
        for (int p = 0; p < n; ++p)
            if (set[static_cast<size_t>(p)]) {
                ++count;
                if (out.V[static_cast<size_t>(p)] == 0) out.V[static_cast<size_t>(p)] = level;
            }
        out.coverage_history.push_back(count);
        return count;
    };
    int on_count = record(on, 1);

    std::vector<int> x0;
    for (int p = 0; p < n; ++p)
        if (on[static_cast<size_t>(p)]) x0.push_back(p);

    for (int level = 2; level <= 4 * n + 4; ++level) {
        std::vector<std::uint8_t> next(static_cast<size_t>(n), 0);
        for (int p = 0; p < n; ++p) {
            double covered_mass = 0.0;
            for (int q : out.space.ball(p))
                if (on[static_cast<size_t>(q)]) covered_mass += area;
            if (covered_mass > c_threshold / level) next[static_cast<size_t>(p)] = 1;
        }
        if (level == 2)
            for (int p = 0; p < n; ++p)
                if (on[static_cast<size_t>(p)] && !next[static_cast<size_t>(p)])
                    throw std::invalid_argument(
                        "c_threshold too large: O_1 is not contained in O_2");
        const int next_count = record(next, level);
        out.n_star = level;
        if (next_count == n) {
            out.covered = true;
            break;
        }
        if (next_count == on_count) break;  // coverage stalled
        on = std::move(next);
        on_count = next_count;
    }

    VectorXd w(n);
    for (int p = 0; p < n; ++p) {
        if (out.V[static_cast<size_t>(p)] == 0) out.V[static_cast<size_t>(p)] = out.n_star + 1;
        w[p] = std::exp(-static_cast<double>(out.V[static_cast<size_t>(p)]));
    }
    out.weights = make_weight_pair(w, w, std::move(x0));
    return out;
}

// --- Boltzmann velocity grid ---

/// Anisotropic collision metric d(v,v')^2 = |v-v'|^2 + (|v|^2 - |v'|^2)^2 / 4.
inline double boltzmann_dist2(const Eigen::RowVectorXd& v, const Eigen::RowVectorXd& w) {
    const double energy_gap = v.squaredNorm() - w.squaredNorm();
    return (v - w).squaredNorm() + 0.25 * energy_gap * energy_gap;
}

struct BoltzmannScenario {
    Space space;
    WeightPair weights;  // W carries <v>^{alpha+1}, W_plus carries <v>^alpha
    MatrixXd coords;
};

/// Velocity grid restricted to the ball |v| <= L (the metric isolates the
/// corners of the full cube), with U = {d(v,v') <= 1}. The inequality of
/// interest puts the heavier weight <v>^{alpha+1} e^{-|v|^2} on the energy
/// side, so the pair is built without the dominance check.
inline BoltzmannScenario make_boltzmann_scenario(int d, double L, double h, double alpha) {
    if (d < 1 || d > 3) throw std::invalid_argument("boltzmann scenario supports d in {1,2,3}");
    if (!(h < 1.0)) throw std::invalid_argument("boltzmann scenario requires h < 1");
    const Lattice cube = make_lattice(d, L, h);
    // Largest radius at which a grid step toward the origin stays within
    // metric distance 1: h^2 + (2rh - h^2)^2/4 <= 1. Beyond it points become
    // isolated (the energy-gap term alone exceeds the interaction range), so
    // the grid is capped there to keep the restriction connected.
    const double r_connected = (2.0 * std::sqrt(1.0 - h * h) + h * h) / (2.0 * h);
    const double r_cap = std::min(L, r_connected);
    std::vector<int> keep;
    for (int i = 0; i < cube.space.size(); ++i)
        if (cube.radius(i) <= r_cap + kRelSlack) keep.push_back(i);
    const int n = static_cast<int>(keep.size());

    MatrixXd coords(n, d);
    for (int i = 0; i < n; ++i) coords.row(i) = cube.coords.row(keep[static_cast<size_t>(i)]);

    Relation rel(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (boltzmann_dist2(coords.row(i), coords.row(j)) <= 1.0 + kRelSlack)
                rel[static_cast<size_t>(i)].push_back(j);

    VectorXd W(n), W_plus(n);
    for (int i = 0; i < n; ++i) {
        const double v2 = coords.row(i).squaredNorm();
        const double bracket = std::sqrt(1.0 + v2);
        const double gauss = std::exp(-v2);
        W[i] = std::pow(bracket, alpha + 1.0) * gauss;
        W_plus[i] = std::pow(bracket, alpha) * gauss;
    }
    BoltzmannScenario out{Space(VectorXd::Constant(n, std::pow(h, d)), std::move(rel)),
                          make_weight_pair_unchecked(std::move(W), std::move(W_plus)),
                          std::move(coords)};
    return out;
}

}  // namespace pineq
