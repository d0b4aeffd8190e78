#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mfg {

/// Square band matrix with kl subdiagonals and ku superdiagonals. Entries
/// outside the band read as zero and may not be written.
class BandedMatrix {
public:
    BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku);

    std::size_t n() const { return n_; }
    std::size_t kl() const { return kl_; }
    std::size_t ku() const { return ku_; }

    bool in_band(std::size_t i, std::size_t j) const;
    double operator()(std::size_t i, std::size_t j) const;
    double& operator()(std::size_t i, std::size_t j);

    std::vector<double> multiply(std::span<const double> x) const;
    double norm_inf() const;

private:
    std::size_t n_, kl_, ku_;
    std::vector<double> band_;  // row-major, width kl + ku + 1, offset j - i + kl
};

/// LU with partial pivoting restricted to the band.
std::vector<double> solve_banded(const BandedMatrix& A, std::span<const double> rhs);

struct Triplet {
    std::size_t row, col;
    double value;
};

/// Compressed-row square matrix. Duplicate triplets are summed.
class SparseMatrix {
public:
    SparseMatrix(std::size_t n, std::vector<Triplet> triplets);

    std::size_t n() const { return n_; }
    std::size_t nonzeros() const { return values_.size(); }
    const std::vector<std::size_t>& row_offsets() const { return row_offsets_; }
    const std::vector<std::size_t>& columns() const { return columns_; }
    const std::vector<double>& values() const { return values_; }

    std::vector<double> multiply(std::span<const double> x) const;

private:
    std::size_t n_;
    std::vector<std::size_t> row_offsets_;
    std::vector<std::size_t> columns_;
    std::vector<double> values_;
};

/// Returns x with ‖Ax − rhs‖₂ ≤ tol·‖rhs‖₂. Direct factorization first,
/// BiCGSTAB with max_iter iterations when that fails.
std::vector<double> solve_sparse(const SparseMatrix& A, std::span<const double> rhs, double tol = 1e-12,
                                 int max_iter = 1000);

}  // namespace mfg
