#pragma once

#include <array>
#include <complex>
#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "tlw/errors.hpp"
#include "tlw/numeric.hpp"

namespace tlw {

using Index = std::int64_t;

/// The dyadic cube Q_{k,m} = 2^{-k}([0,1)^n + m). Only the first n entries of
/// `index` are meaningful; the rest stay zero so that comparison is exact.
struct DyadicCube {
    int level = 0;
    std::array<Index, 2> index{};

    friend auto operator<=>(const DyadicCube&, const DyadicCube&) = default;
};

/// A cell-aligned cube of `side` finest cells starting at cell `origin`.
/// Dyadic cubes are the windows whose origin is a multiple of the side.
struct CellWindow {
    std::array<Index, 2> origin{};
    Index side = 1;

    friend bool operator==(const CellWindow&, const CellWindow&) = default;
};

/// Finest-level discretization of the domain cube [0, 2^L)^n.
///
/// Cells are the level-J dyadic cubes, stored row-major with the first
/// coordinate slowest: cell (i0, i1) has linear index i0 * N + i1.
/// `k_min..k_max` is the level range used by weight sequences and
/// coefficient fields built on this grid.
class Grid {
public:
    Grid(int dimension, int domain_exponent, int finest_level);
    Grid(int dimension, int domain_exponent, int finest_level, int k_min, int k_max);

    int dimension() const { return n_; }
    /// L, where the domain is [0, 2^L)^n (domain level is -L).
    int domain_exponent() const { return L_; }
    int coarsest_level() const { return -L_; }
    int finest_level() const { return J_; }
    int k_min() const { return k_min_; }
    int k_max() const { return k_max_; }

    Index cells_per_axis() const { return Index{1} << (L_ + J_); }
    Index cell_count() const;
    double cell_width() const { return std::ldexp(1.0, -J_); }
    double cell_volume() const { return std::ldexp(1.0, -J_ * n_); }
    double domain_side() const { return std::ldexp(1.0, L_); }

    bool has_level(int k) const { return k >= -L_ && k <= J_; }
    /// Throws RangeError unless -L <= k <= J.
    void check_level(int k) const;

    Index cubes_per_axis(int k) const { return Index{1} << (L_ + k); }
    Index cube_count(int k) const;
    /// Side length of a level-k cube measured in finest cells.
    Index cube_side_cells(int k) const { return Index{1} << (J_ - k); }
    Index cells_per_cube(int k) const;
    double cube_volume(int k) const { return std::ldexp(1.0, -k * n_); }

    bool contains(const DyadicCube& q) const;
    /// Throws DomainError/RangeError unless q is an in-domain cube.
    void check_cube(const DyadicCube& q) const;

    Index linear_index(const DyadicCube& q) const;
    DyadicCube cube_at(int k, Index linear) const;
    /// Linear index of the level-k cube that contains finest cell `cell`.
    Index cube_of_cell(Index cell, int k) const;

    std::array<Index, 2> cell_coords(Index cell) const;
    Index cell_linear(std::array<Index, 2> coords) const;
    /// Cell center (i + 1/2) h per axis.
    std::array<double, 2> cell_center(Index cell) const;
    /// Cell corner i h per axis; the sampling point of band signals.
    std::array<double, 2> cell_corner(Index cell) const;

    CellWindow window(const DyadicCube& q) const;
    bool contains(const CellWindow& w) const;

    /// Same geometry, different coefficient level range.
    Grid with_levels(int k_min, int k_max) const { return Grid(n_, L_, J_, k_min, k_max); }

    /// Geometry only; the default level range is not compared.
    friend bool operator==(const Grid& a, const Grid& b) { return a.n_ == b.n_ && a.L_ == b.L_ && a.J_ == b.J_; }

private:
    int n_;
    int L_;
    int J_;
    int k_min_;
    int k_max_;
};

/// One value per finest cell of a grid.
template <class T>
class BasicGridFunction {
public:
    using value_type = T;

    explicit BasicGridFunction(Grid grid, T fill = T{})
        : grid_(grid), values_(static_cast<std::size_t>(grid.cell_count()), fill) {}

    BasicGridFunction(Grid grid, std::vector<T> values) : grid_(grid), values_(std::move(values)) {
        if (static_cast<Index>(values_.size()) != grid_.cell_count())
            throw ShapeError("grid function: value count does not match the grid");
    }

    const Grid& grid() const { return grid_; }
    std::span<const T> values() const { return values_; }
    std::span<T> values() { return values_; }
    Index size() const { return static_cast<Index>(values_.size()); }

    const T& operator[](Index cell) const { return values_[static_cast<std::size_t>(cell)]; }
    T& operator[](Index cell) { return values_[static_cast<std::size_t>(cell)]; }

private:
    Grid grid_;
    std::vector<T> values_;
};

using GridFunction = BasicGridFunction<double>;
using ComplexGridFunction = BasicGridFunction<std::complex<double>>;

/// Unique level-k cube containing x: m_i = floor(2^k x_i).
DyadicCube cube_containing(const Grid& grid, int k, std::span<const double> x);

/// All in-domain cubes of level k in lexicographic index order.
std::vector<DyadicCube> cubes_at_level(const Grid& grid, int k);

/// Calls fn(cell) for every finest cell inside the window, in row-major order.
template <class Fn>
void for_each_cell(const Grid& grid, const CellWindow& w, Fn&& fn) {
    const Index n_cells = grid.cells_per_axis();
    if (grid.dimension() == 1) {
        for (Index i = 0; i < w.side; ++i) fn(w.origin[0] + i);
    } else {
        for (Index i = 0; i < w.side; ++i) {
            const Index row = (w.origin[0] + i) * n_cells + w.origin[1];
            for (Index j = 0; j < w.side; ++j) fn(row + j);
        }
    }
}

template <class Fn>
void for_each_cell(const Grid& grid, const DyadicCube& q, Fn&& fn) {
    for_each_cell(grid, grid.window(q), std::forward<Fn>(fn));
}

/// Exact quadrature of a piecewise-constant function: (sum over cells) * h^n.
double integrate(const GridFunction& f, const DyadicCube& q);
std::complex<double> integrate(const ComplexGridFunction& f, const DyadicCube& q);

/// Characteristic function of q.
GridFunction indicator(const Grid& grid, const DyadicCube& q);

/// Cell sums of `cells` over every dyadic cube with level in
/// [coarsest, J]; result[k - coarsest][linear cube index]. Sums are built
/// bottom-up from children, which is pairwise summation.
template <class T>
std::vector<std::vector<T>> cube_sums(const Grid& grid, std::span<const T> cells, int coarsest);

extern template std::vector<std::vector<double>> cube_sums(const Grid&, std::span<const double>, int);
extern template std::vector<std::vector<std::complex<double>>> cube_sums(
    const Grid&, std::span<const std::complex<double>>, int);

/// Aggregates per-cube values of level `from` up to every level in
/// [to, from]; result[k - to][cube] is the sum over level-`from` subcubes.
template <class T>
std::vector<std::vector<T>> aggregate_up(const Grid& grid, std::vector<T> level_values, int from, int to);

extern template std::vector<std::vector<double>> aggregate_up(const Grid&, std::vector<double>, int, int);
extern template std::vector<std::vector<std::complex<double>>> aggregate_up(
    const Grid&, std::vector<std::complex<double>>, int, int);

}  // namespace tlw
