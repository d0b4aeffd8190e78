#pragma once

#include <Eigen/Dense>
#include <random>
#include <span>
#include <vector>

#include "mfg/grid.hpp"

// Dense 1D operators assembled entry by entry from the stencil definitions.
namespace oracle {

inline Eigen::MatrixXd forward_diff(int n_x, double dx) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n_x + 1, n_x + 1);
    for (int i = 0; i < n_x; ++i) {
        D(i, i) = -1.0 / dx;
        D(i, i + 1) = 1.0 / dx;
    }
    return D;
}

inline Eigen::MatrixXd backward_diff(int n_x, double dx) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n_x + 1, n_x + 1);
    for (int i = 1; i <= n_x; ++i) {
        D(i, i - 1) = -1.0 / dx;
        D(i, i) = 1.0 / dx;
    }
    return D;
}

inline Eigen::MatrixXd neumann_laplacian(int n_x, double dx) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n_x + 1, n_x + 1);
    for (int i = 0; i <= n_x; ++i) {
        if (i > 0) {
            A(i, i - 1) += 1.0;
            A(i, i) -= 1.0;
        }
        if (i < n_x) {
            A(i, i + 1) += 1.0;
            A(i, i) -= 1.0;
        }
    }
    return A / (dx * dx);
}

inline Eigen::VectorXd vec(std::span<const double> v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline std::vector<double> random_vector(std::size_t n, std::mt19937& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace oracle
