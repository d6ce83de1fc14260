#pragma once

// Finite measure spaces with a unit-ball relation, iterated balls,
// growth-constant fitting, and nested scale families.

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pineq {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Sparse boolean relation on points x points: row x lists all y with
/// (x,y) in the relation, sorted ascending.
using Relation = std::vector<std::vector<int>>;

inline bool relation_contains(const Relation& rel, int x, int y) {
    const auto& row = rel[static_cast<size_t>(x)];
    return std::binary_search(row.begin(), row.end(), y);
}

inline Relation transpose_relation(const Relation& rel) {
    Relation out(rel.size());
    for (size_t x = 0; x < rel.size(); ++x)
        for (int y : rel[x]) out[static_cast<size_t>(y)].push_back(static_cast<int>(x));
    for (auto& row : out) std::sort(row.begin(), row.end());
    return out;
}

inline Relation diagonal_relation(int n) {
    Relation rel(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) rel[static_cast<size_t>(i)] = {i};
    return rel;
}

/// Nested scale relations U_0 > U_1 > ... > U_J, each reflexive.
struct ScaleFamily {
    std::vector<Relation> levels;
};

/// Fit of the ball-growth bound mu(B^n_x) <= C * lambda0^n * mu(B_x).
struct GrowthFit {
    double C = 1.0;
    double lambda0 = 1.0;
    int max_n_tested = 1;
};

class Space {
public:
    Space(VectorXd measure, Relation unit_relation,
          std::optional<ScaleFamily> scales = std::nullopt)
        : mu_(std::move(measure)), ball_(std::move(unit_relation)) {
        const int n = size();
        if (static_cast<int>(ball_.size()) != n)
            throw std::invalid_argument("unit relation size does not match point count");
        for (int i = 0; i < n; ++i)
            if (!(mu_[i] > 0.0))
                throw std::invalid_argument("measure must be strictly positive at point " +
                                            std::to_string(i));
        for (auto& row : ball_) {
            std::sort(row.begin(), row.end());
            row.erase(std::unique(row.begin(), row.end()), row.end());
            for (int y : row)
                if (y < 0 || y >= n) throw std::invalid_argument("relation index out of range");
        }
        for (int x = 0; x < n; ++x)
            if (!relation_contains(ball_, x, x))
                throw std::invalid_argument("reflexivity violation: missing diagonal pair (" +
                                            std::to_string(x) + "," + std::to_string(x) + ")");
        dual_ = transpose_relation(ball_);
        mu_ball_.resize(n);
        for (int x = 0; x < n; ++x) mu_ball_[x] = set_measure(ball_[static_cast<size_t>(x)]);

        if (scales) {
            validate_scales(*scales, n);
            scales_ = std::move(*scales);
            for (const auto& level : scales_->levels) {
                scale_duals_.push_back(transpose_relation(level));
                VectorXd m(n);
                for (int y = 0; y < n; ++y)
                    m[y] = set_measure(scale_duals_.back()[static_cast<size_t>(y)]);
                mu_scale_dual_.push_back(std::move(m));
            }
        }
    }

    int size() const { return static_cast<int>(mu_.size()); }
    const VectorXd& measure() const { return mu_; }
    double mu(int x) const { return mu_[x]; }
    double total_measure() const { return mu_.sum(); }

    /// B_x = { y : (x,y) in U }
    const std::vector<int>& ball(int x) const { return ball_[static_cast<size_t>(x)]; }
    /// B*_y = { x : (x,y) in U }
    const std::vector<int>& dual_ball(int y) const { return dual_[static_cast<size_t>(y)]; }
    double mu_ball(int x) const { return mu_ball_[x]; }
    bool in_unit(int x, int y) const { return relation_contains(ball_, x, y); }

    bool has_scales() const { return scales_.has_value(); }
    int scale_count() const { return scales_ ? static_cast<int>(scales_->levels.size()) : 0; }
    const Relation& scale(int j) const { return scales_->levels[static_cast<size_t>(j)]; }
    /// U_j(x)
    const std::vector<int>& scale_ball(int j, int x) const {
        return scales_->levels[static_cast<size_t>(j)][static_cast<size_t>(x)];
    }
    /// U_j^*(y)
    const std::vector<int>& scale_dual_ball(int j, int y) const {
        return scale_duals_[static_cast<size_t>(j)][static_cast<size_t>(y)];
    }
    double mu_scale_dual(int j, int y) const { return mu_scale_dual_[static_cast<size_t>(j)][y]; }

    double set_measure(const std::vector<int>& pts) const {
        double s = 0.0;
        for (int p : pts) s += mu_[p];
        return s;
    }

private:
    static void validate_scales(ScaleFamily& scales, int n) {
        for (auto& level : scales.levels) {
            if (static_cast<int>(level.size()) != n)
                throw std::invalid_argument("scale relation size mismatch");
            for (auto& row : level) std::sort(row.begin(), row.end());
            for (int x = 0; x < n; ++x)
                if (!relation_contains(level, x, x))
                    throw std::invalid_argument("scale relation not reflexive");
        }
        for (size_t j = 0; j + 1 < scales.levels.size(); ++j) {
            const auto& outer = scales.levels[j];
            const auto& inner = scales.levels[j + 1];
            for (int x = 0; x < n; ++x)
                for (int y : inner[static_cast<size_t>(x)])
                    if (!relation_contains(outer, x, y))
                        throw std::invalid_argument("nesting violation: U_" + std::to_string(j + 1) +
                                                    " not contained in U_" + std::to_string(j));
        }
    }

    VectorXd mu_;
    Relation ball_;
    Relation dual_;
    VectorXd mu_ball_;
    std::optional<ScaleFamily> scales_;
    std::vector<Relation> scale_duals_;
    std::vector<VectorXd> mu_scale_dual_;
};

inline Space build_space(const VectorXd& measure, const Relation& unit_relation,
                         std::optional<ScaleFamily> scales = std::nullopt) {
    return Space(measure, unit_relation, std::move(scales));
}

/// B^n_x: n-1 compositions of the unit relation applied to B_x.
inline std::vector<int> iterated_ball(const Space& space, int x, int n) {
    if (n < 1) throw std::invalid_argument("iterated_ball requires n >= 1");
    std::vector<char> member(static_cast<size_t>(space.size()), 0);
    std::vector<int> frontier = {x};
    member[static_cast<size_t>(x)] = 1;
    // Centers of step k are the members of B^{k-1}; reflexivity keeps old points.
    for (int step = 0; step < n && !frontier.empty(); ++step) {
        std::vector<int> next;
        for (int c : frontier)
            for (int y : space.ball(c))
                if (!member[static_cast<size_t>(y)]) {
                    member[static_cast<size_t>(y)] = 1;
                    next.push_back(y);
                }
        frontier = std::move(next);
    }
    std::vector<int> out;
    for (int y = 0; y < space.size(); ++y)
        if (member[static_cast<size_t>(y)]) out.push_back(y);
    return out;
}

/// Exhaustive table of ratios mu(B^n_x)/mu(B_x) for n = 1..max_n.
inline MatrixXd ball_growth_ratios(const Space& space, int max_n) {
    const int n_pts = space.size();
    MatrixXd ratios(n_pts, max_n);
    for (int x = 0; x < n_pts; ++x) {
        std::vector<char> member(static_cast<size_t>(n_pts), 0);
        std::vector<int> frontier;
        double mass = 0.0;
        for (int y : space.ball(x)) {
            member[static_cast<size_t>(y)] = 1;
            frontier.push_back(y);
            mass += space.mu(y);
        }
        ratios(x, 0) = mass / space.mu_ball(x);
        for (int step = 1; step < max_n; ++step) {
            std::vector<int> next;
            for (int c : frontier)
                for (int y : space.ball(c))
                    if (!member[static_cast<size_t>(y)]) {
                        member[static_cast<size_t>(y)] = 1;
                        next.push_back(y);
                        mass += space.mu(y);
                    }
            frontier = std::move(next);
            ratios(x, step) = mass / space.mu_ball(x);
        }
    }
    return ratios;
}

/// Minimal grid-feasible growth constant: smallest lambda0 on a geometric
/// grid such that mu(B^n_x) <= lambda0^n mu(B_x) holds for all x, n <= max_n,
/// reported together with the exact companion C for that lambda0.
inline GrowthFit fit_growth_constant(const Space& space, int max_n) {
    if (max_n < 1) throw std::invalid_argument("fit_growth_constant requires max_n >= 1");
    const MatrixXd ratios = ball_growth_ratios(space, max_n);
    const double r_max = ratios.maxCoeff();
    const double hi = std::max({static_cast<double>(space.size()), r_max, 2.0});
    constexpr int kGridSize = 200;
    constexpr double kSlack = 1.0 + 1e-12;

    auto companion = [&](double lambda) {
        double c = 0.0;
        for (int n = 1; n <= max_n; ++n) {
            const double scale = std::pow(lambda, n);
            for (int x = 0; x < space.size(); ++x) c = std::max(c, ratios(x, n - 1) / scale);
        }
        return c;
    };

    GrowthFit fit;
    fit.max_n_tested = max_n;
    for (int i = 0; i < kGridSize; ++i) {
        const double lambda = std::pow(hi, static_cast<double>(i) / (kGridSize - 1));
        const double c = companion(lambda);
        if (c <= kSlack) {
            fit.lambda0 = lambda;
            fit.C = std::max(c, 1.0);
            return fit;
        }
    }
    // The grid endpoint hi always satisfies the bound at n >= 1.
    fit.lambda0 = hi;
    fit.C = std::max(companion(hi), 1.0);
    return fit;
}

/// Re-verify a growth fit: number of (x, n) pairs violating the bound.
inline int verify_growth_fit(const Space& space, const GrowthFit& fit) {
    const MatrixXd ratios = ball_growth_ratios(space, fit.max_n_tested);
    int violations = 0;
    for (int n = 1; n <= fit.max_n_tested; ++n) {
        const double bound = fit.C * std::pow(fit.lambda0, n) * (1.0 + 1e-12);
        for (int x = 0; x < space.size(); ++x)
            if (ratios(x, n - 1) > bound) ++violations;
    }
    return violations;
}

/// VOL*(x,y): infimum of mu(U_{j+1}^*(y)) over scales j with x in U_j^*(y),
/// with the tail convention U_{J+1} = diagonal.
inline double vol_star(const Space& space, int x, int y) {
    if (!space.has_scales()) throw std::invalid_argument("vol_star requires a scale family");
    const int levels = space.scale_count();
    if (!relation_contains(space.scale(0), x, y))
        throw std::domain_error("vol_star undefined: y not in U_0(x)");
    int j_deepest = 0;
    for (int j = levels - 1; j >= 1; --j)
        if (relation_contains(space.scale(j), x, y)) {
            j_deepest = j;
            break;
        }
    if (j_deepest == levels - 1) return space.mu(y);
    return space.mu_scale_dual(j_deepest + 1, y);
}

// --- serialization (structured text schema shared with the CLI) ---

inline nlohmann::ordered_json relation_to_json(const Relation& rel) {
    nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
    for (size_t x = 0; x < rel.size(); ++x)
        for (int y : rel[x]) pairs.push_back({static_cast<int>(x), y});
    return pairs;
}

inline Relation relation_from_json(const nlohmann::json& pairs, int n) {
    Relation rel(static_cast<size_t>(n));
    for (const auto& p : pairs) {
        const int x = p.at(0).get<int>();
        const int y = p.at(1).get<int>();
        if (x < 0 || x >= n || y < 0 || y >= n)
            throw std::invalid_argument("relation pair out of range");
        rel[static_cast<size_t>(x)].push_back(y);
    }
    for (auto& row : rel) std::sort(row.begin(), row.end());
    return rel;
}

inline nlohmann::ordered_json space_to_json(const Space& space) {
    nlohmann::ordered_json doc;
    doc["points"] = space.size();
    doc["measure"] = std::vector<double>(space.measure().data(),
                                         space.measure().data() + space.size());
    Relation rel(static_cast<size_t>(space.size()));
    for (int x = 0; x < space.size(); ++x) rel[static_cast<size_t>(x)] = space.ball(x);
    doc["relation"] = relation_to_json(rel);
    doc["scales"] = nlohmann::ordered_json::array();
    for (int j = 0; j < space.scale_count(); ++j)
        doc["scales"].push_back(relation_to_json(space.scale(j)));
    return doc;
}

inline Space space_from_json(const nlohmann::json& doc) {
    const int n = doc.at("points").get<int>();
    VectorXd mu(n);
    const auto& m = doc.at("measure");
    if (static_cast<int>(m.size()) != n) throw std::invalid_argument("measure length mismatch");
    for (int i = 0; i < n; ++i) mu[i] = m[static_cast<size_t>(i)].get<double>();
    Relation rel = relation_from_json(doc.at("relation"), n);
    std::optional<ScaleFamily> scales;
    if (doc.contains("scales") && !doc["scales"].empty()) {
        ScaleFamily fam;
        for (const auto& level : doc["scales"]) fam.levels.push_back(relation_from_json(level, n));
        scales = std::move(fam);
    }
    return Space(std::move(mu), std::move(rel), std::move(scales));
}

}  // namespace pineq
