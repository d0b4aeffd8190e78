#include "mfg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mfg/error.hpp"

namespace mfg {

namespace {

void require_slice(std::span<const double> u, const GridSpec& grid, const char* what) {
    if (u.size() != grid.slice_size()) {
        throw Error(ErrorKind::Shape, std::string(what) + ": slice has " + std::to_string(u.size()) +
                                          " entries, grid expects " + std::to_string(grid.slice_size()));
    }
}

void require_pair(const SidedPair& v, const GridSpec& grid, const char* what) {
    if (v.dim() != grid.dim() || static_cast<int>(v.minus.size()) != grid.dim()) {
        throw Error(ErrorKind::Shape, std::string(what) + ": pair dimension does not match grid");
    }
    for (int d = 0; d < grid.dim(); ++d) {
        require_slice(v.plus[d], grid, what);
        require_slice(v.minus[d], grid, what);
    }
}

}  // namespace

GridSpec GridSpec::line(double x_min, double x_max, int n_x, double T, int n_t, int level) {
    GridSpec g;
    g.dim_ = 1;
    g.lower_ = {x_min, 0.0};
    g.upper_ = {x_max, 0.0};
    g.n_x_ = {n_x, 0};
    g.T_ = T;
    g.n_t_ = n_t;
    g.level_ = level;
    g.validate();
    return g;
}

GridSpec GridSpec::plane(Point lower, Point upper, std::array<int, 2> n_x, double T, int n_t, int level) {
    GridSpec g;
    g.dim_ = 2;
    g.lower_ = lower;
    g.upper_ = upper;
    g.n_x_ = n_x;
    g.T_ = T;
    g.n_t_ = n_t;
    g.level_ = level;
    g.validate();
    return g;
}

void GridSpec::validate() const {
    for (int d = 0; d < dim_; ++d) {
        if (n_x_[d] < 2) throw Error(ErrorKind::Range, "grid: n_x must be at least 2");
        if (!(upper_[d] > lower_[d])) throw Error(ErrorKind::Range, "grid: x_max must exceed x_min");
    }
    if (n_t_ < 1) throw Error(ErrorKind::Range, "grid: n_t must be at least 1");
    if (!(T_ > 0.0)) throw Error(ErrorKind::Range, "grid: T must be positive");
    if (level_ < 0) throw Error(ErrorKind::Range, "grid: level must be nonnegative");
}

std::size_t GridSpec::slice_size() const {
    std::size_t n = 1;
    for (int d = 0; d < dim_; ++d) n *= static_cast<std::size_t>(n_x_[d] + 1);
    return n;
}

std::size_t GridSpec::stride(int d) const {
    std::size_t s = 1;
    for (int e = dim_ - 1; e > d; --e) s *= static_cast<std::size_t>(n_x_[e] + 1);
    return s;
}

double GridSpec::cell_volume() const {
    double v = 1.0;
    for (int d = 0; d < dim_; ++d) v *= dx(d);
    return v;
}

double GridSpec::coordinate(int d, int i) const {
    if (i == n_x_[d]) return upper_[d];
    return lower_[d] + i * dx(d);
}

double GridSpec::time(int n) const {
    if (n == n_t_) return T_;
    return n * dt();
}

std::array<int, 2> GridSpec::multi_index(std::size_t flat) const {
    if (dim_ == 1) return {static_cast<int>(flat), 0};
    const std::size_t s = stride(0);
    return {static_cast<int>(flat / s), static_cast<int>(flat % s)};
}

Point GridSpec::point(std::size_t flat) const {
    const auto idx = multi_index(flat);
    Point p{0.0, 0.0};
    for (int d = 0; d < dim_; ++d) p[d] = coordinate(d, idx[d]);
    return p;
}

GridSpec GridSpec::refined() const {
    GridSpec g = *this;
    for (int d = 0; d < dim_; ++d) g.n_x_[d] *= 2;
    g.n_t_ *= 2;
    g.level_ += 1;
    return g;
}

ScalarField::ScalarField(const GridSpec& grid, double value) : grid_(grid), values_(grid.total_size(), value) {}

ScalarField::ScalarField(const GridSpec& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.total_size()) {
        throw Error(ErrorKind::Shape, "field: value count does not match grid extent");
    }
}

std::span<double> ScalarField::slice(int n) {
    return std::span<double>(values_).subspan(n * grid_.slice_size(), grid_.slice_size());
}

std::span<const double> ScalarField::slice(int n) const {
    return std::span<const double>(values_).subspan(n * grid_.slice_size(), grid_.slice_size());
}

void ScalarField::set_slice(int n, std::span<const double> values) {
    require_slice(values, grid_, "set_slice");
    std::copy(values.begin(), values.end(), slice(n).begin());
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool ScalarField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

SidedPair one_sided_gradients(std::span<const double> u, const GridSpec& grid) {
    require_slice(u, grid, "one_sided_gradients");
    const std::size_t size = grid.slice_size();
    SidedPair g;
    g.plus.assign(grid.dim(), std::vector<double>(size, 0.0));
    g.minus.assign(grid.dim(), std::vector<double>(size, 0.0));
    for (int d = 0; d < grid.dim(); ++d) {
        const std::size_t s = grid.stride(d);
        const int n = grid.n_x(d);
        const double inv = 1.0 / grid.dx(d);
        for (std::size_t p = 0; p < size; ++p) {
            const int i = grid.multi_index(p)[d];
            if (i < n) g.plus[d][p] = (u[p + s] - u[p]) * inv;
            if (i > 0) g.minus[d][p] = (u[p] - u[p - s]) * inv;
        }
    }
    return g;
}

std::vector<std::vector<double>> central_gradient(const SidedPair& g) {
    std::vector<std::vector<double>> c(g.dim());
    for (int d = 0; d < g.dim(); ++d) {
        if (g.plus[d].size() != g.minus[d].size()) throw Error(ErrorKind::Shape, "central_gradient: ragged pair");
        c[d].resize(g.plus[d].size());
        for (std::size_t p = 0; p < c[d].size(); ++p) c[d][p] = 0.5 * g.plus[d][p] + 0.5 * g.minus[d][p];
    }
    return c;
}

std::vector<double> laplacian(std::span<const double> u, const GridSpec& grid) {
    require_slice(u, grid, "laplacian");
    const std::size_t size = grid.slice_size();
    std::vector<double> out(size, 0.0);
    for (int d = 0; d < grid.dim(); ++d) {
        const std::size_t s = grid.stride(d);
        const int n = grid.n_x(d);
        const double inv2 = 1.0 / (grid.dx(d) * grid.dx(d));
        for (std::size_t p = 0; p < size; ++p) {
            const int i = grid.multi_index(p)[d];
            double acc = 0.0;
            if (i < n) acc += u[p + s] - u[p];
            if (i > 0) acc += u[p - s] - u[p];
            out[p] += acc * inv2;
        }
    }
    return out;
}

std::vector<double> adjoint_divergence(const SidedPair& v, const GridSpec& grid) {
    require_pair(v, grid, "adjoint_divergence");
    const std::size_t size = grid.slice_size();
    std::vector<double> out(size, 0.0);
    for (int d = 0; d < grid.dim(); ++d) {
        const std::size_t s = grid.stride(d);
        const int n = grid.n_x(d);
        const double half_inv = 0.5 / grid.dx(d);
        const auto& vp = v.plus[d];
        const auto& vm = v.minus[d];
        for (std::size_t p = 0; p < size; ++p) {
            const int i = grid.multi_index(p)[d];
            double acc = 0.0;
            if (i > 0) acc += vp[p - s] + vm[p];
            if (i < n) acc -= vp[p] + vm[p + s];
            out[p] += acc * half_inv;
        }
    }
    return out;
}

double slice_inner_product(std::span<const double> u, std::span<const double> w, const GridSpec& grid) {
    require_slice(u, grid, "slice_inner_product");
    require_slice(w, grid, "slice_inner_product");
    double acc = 0.0;
    for (std::size_t p = 0; p < u.size(); ++p) acc += u[p] * w[p];
    return acc * grid.cell_volume();
}

double slice_pair_inner_product(const SidedPair& a, const SidedPair& b, const GridSpec& grid) {
    require_pair(a, grid, "slice_pair_inner_product");
    require_pair(b, grid, "slice_pair_inner_product");
    double acc = 0.0;
    for (int d = 0; d < grid.dim(); ++d) {
        acc += slice_inner_product(a.plus[d], b.plus[d], grid);
        acc += slice_inner_product(a.minus[d], b.minus[d], grid);
    }
    return 0.5 * acc;
}

double inner_product(const ScalarField& u, const ScalarField& w) {
    if (!(u.grid() == w.grid())) throw Error(ErrorKind::GridMismatch, "inner_product: fields live on different grids");
    double acc = 0.0;
    const auto& a = u.values();
    const auto& b = w.values();
    for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
    return acc * u.grid().cell_volume() * u.grid().dt();
}

double grid_norm(const ScalarField& u) { return std::sqrt(std::max(0.0, inner_product(u, u))); }

namespace {

// Coarse neighbours and weights of a fine index along one axis.
struct AxisStencil {
    int lo, hi;
    double w_lo, w_hi;
};

AxisStencil axis_stencil(int fine) {
    if (fine % 2 == 0) return {fine / 2, fine / 2, 1.0, 0.0};
    return {(fine - 1) / 2, (fine + 1) / 2, 0.5, 0.5};
}

}  // namespace

ScalarField prolongate(const ScalarField& coarse, const GridSpec& fine) {
    const GridSpec& cg = coarse.grid();
    bool doubling = fine.dim() == cg.dim() && fine.n_t() == 2 * cg.n_t();
    for (int d = 0; d < cg.dim() && doubling; ++d) {
        doubling = fine.n_x(d) == 2 * cg.n_x(d) && fine.x_min(d) == cg.x_min(d) && fine.x_max(d) == cg.x_max(d);
    }
    if (!doubling) throw Error(ErrorKind::Shape, "prolongate: target grid is not a uniform doubling of the source");

    ScalarField out(fine);
    const std::size_t fine_size = fine.slice_size();
    for (int n = 0; n <= fine.n_t(); ++n) {
        const AxisStencil ts = axis_stencil(n);
        auto dst = out.slice(n);
        for (std::size_t p = 0; p < fine_size; ++p) {
            const auto idx = fine.multi_index(p);
            std::array<AxisStencil, 2> ss{axis_stencil(idx[0]), AxisStencil{0, 0, 1.0, 0.0}};
            if (fine.dim() == 2) ss[1] = axis_stencil(idx[1]);
            double acc = 0.0;
            for (int a = 0; a < 2; ++a) {
                const double wt = a == 0 ? ts.w_lo : ts.w_hi;
                if (wt == 0.0) continue;
                const int cn = a == 0 ? ts.lo : ts.hi;
                for (int b = 0; b < 2; ++b) {
                    const double w0 = b == 0 ? ss[0].w_lo : ss[0].w_hi;
                    if (w0 == 0.0) continue;
                    const int c0 = b == 0 ? ss[0].lo : ss[0].hi;
                    for (int c = 0; c < 2; ++c) {
                        const double w1 = c == 0 ? ss[1].w_lo : ss[1].w_hi;
                        if (w1 == 0.0) continue;
                        const int c1 = c == 0 ? ss[1].lo : ss[1].hi;
                        const std::size_t cp = cg.dim() == 1 ? static_cast<std::size_t>(c0)
                                                              : c0 * cg.stride(0) + static_cast<std::size_t>(c1);
                        acc += wt * w0 * w1 * coarse.at(cp, cn);
                    }
                }
            }
            dst[p] = acc;
        }
    }
    return out;
}

ScalarField prolongate(const ScalarField& coarse) { return prolongate(coarse, coarse.grid().refined()); }

}  // namespace mfg
