#pragma once

// Upper bounds on the lp operator norm of a nonnegative matrix via the
// nonlinear iteration v -> (A^T (A v)^{p-1})^{1/(p-1)}. For a positive
// Lyapunov vector v with S v <= K^{p/(p-1)} v the norm is at most K, so the
// running max-ratio estimates form a valid, nonincreasing bound sequence.

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace pineq {

struct PNormResult {
    std::vector<double> bounds;  // per-iteration upper bounds, nonincreasing
    double value = 0.0;          // final (tightest) bound
    bool converged = false;
    bool unbounded = false;
};

inline PNormResult pnorm_power_iteration(const Eigen::MatrixXd& A, double p, int max_iters = 2000,
                                         double rel_tol = 1e-13) {
    if (p < 1.0) throw std::invalid_argument("pnorm_power_iteration requires p >= 1");
    if ((A.array() < 0.0).any())
        throw std::invalid_argument("pnorm_power_iteration requires a nonnegative matrix");
    PNormResult res;

    if (p == 1.0) {
        // Exact: max column sum.
        res.value = A.cols() > 0 ? A.colwise().sum().maxCoeff() : 0.0;
        res.bounds = {res.value};
        res.converged = true;
        return res;
    }

    // Drop zero columns; they never contribute to ||A v||.
    std::vector<int> keep;
    for (int j = 0; j < A.cols(); ++j)
        if (A.col(j).maxCoeff() > 0.0) keep.push_back(j);
    if (keep.empty()) {
        res.value = 0.0;
        res.bounds = {0.0};
        res.converged = true;
        return res;
    }
    Eigen::MatrixXd B(A.rows(), static_cast<int>(keep.size()));
    for (size_t j = 0; j < keep.size(); ++j) B.col(static_cast<int>(j)) = A.col(keep[j]);

    const double q = p - 1.0;
    Eigen::VectorXd v = Eigen::VectorXd::Ones(B.cols());
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iters; ++it) {
        Eigen::VectorXd w = (B * v).array().pow(q);
        Eigen::VectorXd sv = (B.transpose() * w).array().pow(1.0 / q);
        const double ratio = (sv.array() / v.array()).maxCoeff();
        if (!std::isfinite(ratio) || ratio > 1e280) {
            res.unbounded = true;
            res.value = std::numeric_limits<double>::infinity();
            return res;
        }
        const double bound = std::pow(ratio, q / p);
        res.bounds.push_back(bound);
        v = sv / sv.maxCoeff();
        if (std::abs(prev - bound) <= rel_tol * bound) {
            res.converged = true;
            res.value = bound;
            return res;
        }
        prev = bound;
    }
    res.value = res.bounds.back();
    return res;
}

}  // namespace pineq
