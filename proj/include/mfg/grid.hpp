#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace mfg {

/// Spatial coordinates of a grid node; the second entry is 0 on 1D grids.
using Point = std::array<double, 2>;

/// Uniform space-time tensor grid on a box (1D interval or 2D rectangle)
/// times [0, T]. Nodes include both endpoints: n_x intervals give n_x + 1
/// nodes per dimension, n_t intervals give n_t + 1 time slices.
class GridSpec {
public:
    GridSpec() = default;

    static GridSpec line(double x_min, double x_max, int n_x, double T, int n_t, int level = 0);
    static GridSpec plane(Point lower, Point upper, std::array<int, 2> n_x, double T, int n_t,
                          int level = 0);

    int dim() const { return dim_; }
    double x_min(int d) const { return lower_[d]; }
    double x_max(int d) const { return upper_[d]; }
    int n_x(int d) const { return n_x_[d]; }
    double dx(int d) const { return (upper_[d] - lower_[d]) / n_x_[d]; }
    double T() const { return T_; }
    int n_t() const { return n_t_; }
    double dt() const { return T_ / n_t_; }
    int level() const { return level_; }

    /// Node count of one spatial slice.
    std::size_t slice_size() const;
    std::size_t total_size() const { return slice_size() * static_cast<std::size_t>(n_t_ + 1); }
    /// Flat-index step between neighbours along dimension d (row-major, last
    /// dimension fastest).
    std::size_t stride(int d) const;
    /// Product of the spatial mesh steps.
    double cell_volume() const;

    double coordinate(int d, int i) const;
    double time(int n) const;
    std::array<int, 2> multi_index(std::size_t flat) const;
    Point point(std::size_t flat) const;

    /// Grid with both the spatial and the temporal step halved, level + 1.
    GridSpec refined() const;

    bool operator==(const GridSpec&) const = default;

private:
    void validate() const;

    int dim_ = 1;
    Point lower_{0.0, 0.0};
    Point upper_{1.0, 0.0};
    std::array<int, 2> n_x_{2, 0};
    double T_ = 1.0;
    int n_t_ = 1;
    int level_ = 0;
};

/// One real value per space-time node, stored as time-major slabs of
/// spatial slices.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const GridSpec& grid, double value = 0.0);
    ScalarField(const GridSpec& grid, std::vector<double> values);

    const GridSpec& grid() const { return grid_; }
    std::span<double> slice(int n);
    std::span<const double> slice(int n) const;
    void set_slice(int n, std::span<const double> values);

    double& at(std::size_t point, int n) { return values_[n * grid_.slice_size() + point]; }
    double at(std::size_t point, int n) const { return values_[n * grid_.slice_size() + point]; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    double max_abs() const;
    bool all_finite() const;

private:
    GridSpec grid_;
    std::vector<double> values_;
};

/// Forward and backward one-sided values per spatial dimension, each a full
/// spatial slice: plus[d][i], minus[d][i].
struct SidedPair {
    std::vector<std::vector<double>> plus;
    std::vector<std::vector<double>> minus;

    int dim() const { return static_cast<int>(plus.size()); }
};

// Discrete operators on spatial slices. Boundary rows follow the homogeneous
// Neumann / zero-flux convention; 2D operators act dimension by dimension.

SidedPair one_sided_gradients(std::span<const double> u, const GridSpec& grid);
std::vector<std::vector<double>> central_gradient(const SidedPair& g);
std::vector<double> laplacian(std::span<const double> u, const GridSpec& grid);
/// Adjoint of u -> [D u] under the pair product ½(<plus,plus> + <minus,minus>).
/// Its negative is the discrete divergence.
std::vector<double> adjoint_divergence(const SidedPair& v, const GridSpec& grid);

/// Spatial inner product with weight Δx (product of steps in 2D).
double slice_inner_product(std::span<const double> u, std::span<const double> w, const GridSpec& grid);
/// Pair inner product ½ Σ_d (<plus_d, plus_d'> + <minus_d, minus_d'>), spatial weights.
double slice_pair_inner_product(const SidedPair& a, const SidedPair& b, const GridSpec& grid);

/// Space-time inner product ΔxΔt Σ_{i,n} u w.
double inner_product(const ScalarField& u, const ScalarField& w);
double grid_norm(const ScalarField& u);

/// Coarse-to-fine bilinear (trilinear in 2D+time) interpolation onto a grid
/// with every interval count doubled.
ScalarField prolongate(const ScalarField& coarse, const GridSpec& fine);
ScalarField prolongate(const ScalarField& coarse);

}  // namespace mfg
