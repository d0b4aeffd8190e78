#include "mfg/linsolve.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mfg/error.hpp"

namespace mfg {

BandedMatrix::BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), band_(n * (kl + ku + 1), 0.0) {
    if (n == 0) throw Error(ErrorKind::Shape, "banded matrix: empty dimension");
    if ((kl >= n && n > 1) || (ku >= n && n > 1)) {
        throw Error(ErrorKind::Shape, "banded matrix: bandwidth must be below the dimension");
    }
}

bool BandedMatrix::in_band(std::size_t i, std::size_t j) const {
    return i < n_ && j < n_ && j + kl_ >= i && j <= i + ku_;
}

double BandedMatrix::operator()(std::size_t i, std::size_t j) const {
    if (!in_band(i, j)) return 0.0;
    return band_[i * (kl_ + ku_ + 1) + (j + kl_ - i)];
}

double& BandedMatrix::operator()(std::size_t i, std::size_t j) {
    if (!in_band(i, j)) throw Error(ErrorKind::Shape, "banded matrix: write outside the band");
    return band_[i * (kl_ + ku_ + 1) + (j + kl_ - i)];
}

std::vector<double> BandedMatrix::multiply(std::span<const double> x) const {
    if (x.size() != n_) throw Error(ErrorKind::Shape, "banded multiply: vector length mismatch");
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t lo = i >= kl_ ? i - kl_ : 0;
        const std::size_t hi = std::min(n_ - 1, i + ku_);
        double acc = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) acc += (*this)(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

double BandedMatrix::norm_inf() const {
    double m = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t lo = i >= kl_ ? i - kl_ : 0;
        const std::size_t hi = std::min(n_ - 1, i + ku_);
        double s = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) s += std::abs((*this)(i, j));
        m = std::max(m, s);
    }
    return m;
}

std::vector<double> solve_banded(const BandedMatrix& A, std::span<const double> rhs) {
    const std::size_t n = A.n();
    if (rhs.size() != n) throw Error(ErrorKind::Shape, "solve_banded: rhs length mismatch");
    const std::size_t kl = A.kl();
    const std::size_t ku = A.ku();
    // Row swaps widen the upper band of U to kl + ku.
    const std::size_t width = 2 * kl + ku + 1;
    std::vector<double> u(n * width, 0.0);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return u[i * width + (j + kl - i)]; };
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= kl ? i - kl : 0;
        const std::size_t hi = std::min(n - 1, i + ku);
        for (std::size_t j = lo; j <= hi; ++j) at(i, j) = A(i, j);
    }
    std::vector<double> b(rhs.begin(), rhs.end());

    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t last_row = std::min(n - 1, k + kl);
        const std::size_t last_col = std::min(n - 1, k + kl + ku);
        std::size_t p = k;
        double best = std::abs(at(k, k));
        for (std::size_t i = k + 1; i <= last_row; ++i) {
            if (std::abs(at(i, k)) > best) {
                best = std::abs(at(i, k));
                p = i;
            }
        }
        if (best == 0.0) throw SingularMatrixError(k, "solve_banded: zero pivot at index " + std::to_string(k));
        if (p != k) {
            for (std::size_t j = k; j <= last_col; ++j) std::swap(at(k, j), at(p, j));
            std::swap(b[k], b[p]);
        }
        const double pivot = at(k, k);
        for (std::size_t i = k + 1; i <= last_row; ++i) {
            const double l = at(i, k) / pivot;
            if (l == 0.0) continue;
            at(i, k) = 0.0;
            for (std::size_t j = k + 1; j <= last_col; ++j) at(i, j) -= l * at(k, j);
            b[i] -= l * b[k];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        const std::size_t last_col = std::min(n - 1, k + kl + ku);
        double acc = b[k];
        for (std::size_t j = k + 1; j <= last_col; ++j) acc -= at(k, j) * x[j];
        x[k] = acc / at(k, k);
    }
    return x;
}

SparseMatrix::SparseMatrix(std::size_t n, std::vector<Triplet> triplets) : n_(n) {
    for (const auto& t : triplets) {
        if (t.row >= n || t.col >= n) throw Error(ErrorKind::Shape, "sparse matrix: triplet index out of range");
    }
    std::sort(triplets.begin(), triplets.end(),
              [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
    row_offsets_.assign(n + 1, 0);
    for (std::size_t k = 0; k < triplets.size(); ++k) {
        const auto& t = triplets[k];
        if (!columns_.empty() && k > 0 && triplets[k - 1].row == t.row && triplets[k - 1].col == t.col) {
            values_.back() += t.value;
            continue;
        }
        columns_.push_back(t.col);
        values_.push_back(t.value);
        row_offsets_[t.row + 1] += 1;
    }
    for (std::size_t i = 0; i < n; ++i) row_offsets_[i + 1] += row_offsets_[i];
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
    if (x.size() != n_) throw Error(ErrorKind::Shape, "sparse multiply: vector length mismatch");
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) acc += values_[k] * x[columns_[k]];
        y[i] = acc;
    }
    return y;
}

namespace {

double relative_residual(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
    const double nb = b.norm();
    const double nr = (A * x - b).norm();
    return nb > 0.0 ? nr / nb : nr;
}

}  // namespace

std::vector<double> solve_sparse(const SparseMatrix& A, std::span<const double> rhs, double tol, int max_iter) {
    const std::size_t n = A.n();
    if (rhs.size() != n) throw Error(ErrorKind::Shape, "solve_sparse: rhs length mismatch");
    if (!(tol > 0.0) || max_iter < 1) throw Error(ErrorKind::Range, "solve_sparse: tol must be positive, max_iter >= 1");

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(A.nonzeros());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = A.row_offsets()[i]; k < A.row_offsets()[i + 1]; ++k) {
            trips.emplace_back(static_cast<int>(i), static_cast<int>(A.columns()[k]), A.values()[k]);
        }
    }
    Eigen::SparseMatrix<double> M(static_cast<int>(n), static_cast<int>(n));
    M.setFromTriplets(trips.begin(), trips.end());
    M.makeCompressed();
    const Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<int>(n));

    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<int>(n));
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(M);
    if (lu.info() == Eigen::Success) {
        x = lu.solve(b);
        if (x.allFinite()) {
            double res = relative_residual(M, x, b);
            for (int refine = 0; refine < 2 && res > tol; ++refine) {
                x += lu.solve(b - M * x);
                res = relative_residual(M, x, b);
            }
            if (res <= tol) return std::vector<double>(x.data(), x.data() + n);
        } else {
            x.setZero();
        }
    }

    Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> it;
    it.setTolerance(tol);
    it.setMaxIterations(max_iter);
    it.compute(M);
    double res = std::numeric_limits<double>::infinity();
    if (it.info() == Eigen::Success) {
        Eigen::VectorXd y = it.solveWithGuess(b, x);
        if (y.allFinite()) {
            res = relative_residual(M, y, b);
            if (res <= tol) return std::vector<double>(y.data(), y.data() + n);
        }
    }
    throw IterativeFailure(res, "solve_sparse: no convergence, relative residual " + std::to_string(res));
}

}  // namespace mfg
