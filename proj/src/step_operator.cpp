#include "step_operator.hpp"

#include "mfg/error.hpp"
#include "mfg/linsolve.hpp"

namespace mfg::detail {

namespace {

// Visits every nonzero (row, col, value) of M.
template <typename Emit>
void for_each_entry(const GridSpec& grid, double nu, const LfSlopes& slopes, Emit&& emit) {
    const std::size_t size = grid.slice_size();
    const double inv_dt = 1.0 / grid.dt();
    for (std::size_t p = 0; p < size; ++p) {
        const auto idx = grid.multi_index(p);
        double diag = inv_dt;
        for (int d = 0; d < grid.dim(); ++d) {
            const std::size_t s = grid.stride(d);
            const double inv = 1.0 / grid.dx(d);
            const double diff = nu * inv * inv;
            const double ap = slopes.plus[d][p] * inv;
            const double am = slopes.minus[d][p] * inv;
            if (idx[d] < grid.n_x(d)) {
                diag += diff - ap;
                emit(p, p + s, -diff + ap);
            }
            if (idx[d] > 0) {
                diag += diff + am;
                emit(p, p - s, -diff - am);
            }
        }
        emit(p, p, diag);
    }
}

}  // namespace

std::vector<double> solve_step(const GridSpec& grid, double nu, const LfSlopes& slopes, bool transpose,
                               std::span<const double> rhs) {
    const std::size_t size = grid.slice_size();
    if (rhs.size() != size) throw Error(ErrorKind::Shape, "step solve: rhs extent mismatch");
    if (grid.dim() == 1) {
        BandedMatrix A(size, 1, 1);
        for_each_entry(grid, nu, slopes, [&](std::size_t r, std::size_t c, double v) {
            if (transpose) std::swap(r, c);
            A(r, c) += v;
        });
        return solve_banded(A, rhs);
    }
    std::vector<Triplet> trips;
    trips.reserve(5 * size);
    for_each_entry(grid, nu, slopes, [&](std::size_t r, std::size_t c, double v) {
        if (transpose) std::swap(r, c);
        trips.push_back({r, c, v});
    });
    return solve_sparse(SparseMatrix(size, std::move(trips)), rhs, 1e-13, 2000);
}

std::vector<double> step_matrix_dense(const GridSpec& grid, double nu, const LfSlopes& slopes) {
    const std::size_t size = grid.slice_size();
    std::vector<double> M(size * size, 0.0);
    for_each_entry(grid, nu, slopes, [&](std::size_t r, std::size_t c, double v) { M[r * size + c] += v; });
    return M;
}

}  // namespace mfg::detail
