#include "tlw/dyadic.hpp"

#include <cmath>
#include <string>

namespace tlw {

Grid::Grid(int dimension, int domain_exponent, int finest_level)
    : Grid(dimension, domain_exponent, finest_level, -domain_exponent, finest_level) {}

Grid::Grid(int dimension, int domain_exponent, int finest_level, int k_min, int k_max)
    : n_(dimension), L_(domain_exponent), J_(finest_level), k_min_(k_min), k_max_(k_max) {
    if (n_ != 1 && n_ != 2) throw RangeError("grid: dimension must be 1 or 2");
    if (L_ < 0) throw RangeError("grid: domain exponent L must be >= 0");
    if (J_ < -L_) throw RangeError("grid: finest level J must be >= -L");
    if (L_ + J_ > (n_ == 1 ? 24 : 12)) throw RangeError("grid: too many cells");
    if (k_min_ < -L_ || k_min_ > k_max_ || k_max_ > J_)
        throw RangeError("grid: level range must satisfy -L <= k_min <= k_max <= J");
}

Index Grid::cell_count() const {
    const Index per_axis = cells_per_axis();
    return n_ == 1 ? per_axis : per_axis * per_axis;
}

void Grid::check_level(int k) const {
    if (!has_level(k))
        throw RangeError("level " + std::to_string(k) + " outside [" + std::to_string(-L_) + ", " +
                         std::to_string(J_) + "]");
}

Index Grid::cube_count(int k) const {
    const Index per_axis = cubes_per_axis(k);
    return n_ == 1 ? per_axis : per_axis * per_axis;
}

Index Grid::cells_per_cube(int k) const {
    const Index side = cube_side_cells(k);
    return n_ == 1 ? side : side * side;
}

bool Grid::contains(const DyadicCube& q) const {
    if (!has_level(q.level)) return false;
    const Index per_axis = cubes_per_axis(q.level);
    for (int i = 0; i < n_; ++i)
        if (q.index[i] < 0 || q.index[i] >= per_axis) return false;
    for (int i = n_; i < 2; ++i)
        if (q.index[i] != 0) return false;
    return true;
}

void Grid::check_cube(const DyadicCube& q) const {
    check_level(q.level);
    if (!contains(q)) throw DomainError("cube outside the domain");
}

Index Grid::linear_index(const DyadicCube& q) const {
    return n_ == 1 ? q.index[0] : q.index[0] * cubes_per_axis(q.level) + q.index[1];
}

DyadicCube Grid::cube_at(int k, Index linear) const {
    DyadicCube q{k, {}};
    if (n_ == 1) {
        q.index[0] = linear;
    } else {
        const Index per_axis = cubes_per_axis(k);
        q.index[0] = linear / per_axis;
        q.index[1] = linear % per_axis;
    }
    return q;
}

Index Grid::cube_of_cell(Index cell, int k) const {
    const int shift = J_ - k;
    if (n_ == 1) return cell >> shift;
    const Index per_axis = cells_per_axis();
    const Index i0 = (cell / per_axis) >> shift;
    const Index i1 = (cell % per_axis) >> shift;
    return i0 * cubes_per_axis(k) + i1;
}

std::array<Index, 2> Grid::cell_coords(Index cell) const {
    if (n_ == 1) return {cell, 0};
    const Index per_axis = cells_per_axis();
    return {cell / per_axis, cell % per_axis};
}

Index Grid::cell_linear(std::array<Index, 2> coords) const {
    return n_ == 1 ? coords[0] : coords[0] * cells_per_axis() + coords[1];
}

std::array<double, 2> Grid::cell_center(Index cell) const {
    const auto c = cell_coords(cell);
    const double h = cell_width();
    std::array<double, 2> x{};
    for (int i = 0; i < n_; ++i) x[i] = (static_cast<double>(c[i]) + 0.5) * h;
    return x;
}

std::array<double, 2> Grid::cell_corner(Index cell) const {
    const auto c = cell_coords(cell);
    const double h = cell_width();
    std::array<double, 2> x{};
    for (int i = 0; i < n_; ++i) x[i] = static_cast<double>(c[i]) * h;
    return x;
}

CellWindow Grid::window(const DyadicCube& q) const {
    const Index side = cube_side_cells(q.level);
    CellWindow w;
    w.side = side;
    for (int i = 0; i < n_; ++i) w.origin[i] = q.index[i] * side;
    return w;
}

bool Grid::contains(const CellWindow& w) const {
    if (w.side < 1) return false;
    const Index per_axis = cells_per_axis();
    for (int i = 0; i < n_; ++i)
        if (w.origin[i] < 0 || w.origin[i] + w.side > per_axis) return false;
    return true;
}

DyadicCube cube_containing(const Grid& grid, int k, std::span<const double> x) {
    grid.check_level(k);
    if (static_cast<int>(x.size()) != grid.dimension()) throw ShapeError("point has wrong dimension");
    const double side = grid.domain_side();
    DyadicCube q{k, {}};
    for (int i = 0; i < grid.dimension(); ++i) {
        if (!(x[i] >= 0.0 && x[i] < side)) throw DomainError("point outside the domain");
        q.index[i] = static_cast<Index>(std::floor(std::ldexp(x[i], k)));
    }
    return q;
}

std::vector<DyadicCube> cubes_at_level(const Grid& grid, int k) {
    grid.check_level(k);
    const Index count = grid.cube_count(k);
    std::vector<DyadicCube> out;
    out.reserve(static_cast<std::size_t>(count));
    for (Index i = 0; i < count; ++i) out.push_back(grid.cube_at(k, i));
    return out;
}

template <class T>
static T integrate_impl(const BasicGridFunction<T>& f, const DyadicCube& q) {
    const Grid& grid = f.grid();
    grid.check_cube(q);
    CompensatedSum<T> acc;
    for_each_cell(grid, q, [&](Index cell) { acc += f[cell]; });
    return acc.value() * grid.cell_volume();
}

double integrate(const GridFunction& f, const DyadicCube& q) { return integrate_impl(f, q); }

std::complex<double> integrate(const ComplexGridFunction& f, const DyadicCube& q) {
    return integrate_impl(f, q);
}

GridFunction indicator(const Grid& grid, const DyadicCube& q) {
    grid.check_cube(q);
    GridFunction out(grid);
    for_each_cell(grid, q, [&](Index cell) { out[cell] = 1.0; });
    return out;
}

namespace {

// One coarsening step: level k+1 values -> level k values.
template <class T>
std::vector<T> coarsen(const Grid& grid, const std::vector<T>& fine, int k) {
    const Index per_axis = grid.cubes_per_axis(k);
    std::vector<T> coarse(static_cast<std::size_t>(grid.cube_count(k)));
    if (grid.dimension() == 1) {
        for (Index m = 0; m < per_axis; ++m)
            coarse[m] = fine[2 * m] + fine[2 * m + 1];
    } else {
        const Index fine_axis = 2 * per_axis;
        for (Index a = 0; a < per_axis; ++a)
            for (Index b = 0; b < per_axis; ++b) {
                const Index r0 = (2 * a) * fine_axis + 2 * b;
                const Index r1 = r0 + fine_axis;
                coarse[a * per_axis + b] = (fine[r0] + fine[r0 + 1]) + (fine[r1] + fine[r1 + 1]);
            }
    }
    return coarse;
}

}  // namespace

template <class T>
std::vector<std::vector<T>> aggregate_up(const Grid& grid, std::vector<T> level_values, int from, int to) {
    grid.check_level(from);
    grid.check_level(to);
    if (to > from) throw RangeError("aggregate_up: target level finer than source");
    if (static_cast<Index>(level_values.size()) != grid.cube_count(from))
        throw ShapeError("aggregate_up: value count does not match level");
    std::vector<std::vector<T>> out(static_cast<std::size_t>(from - to + 1));
    out.back() = std::move(level_values);
    for (int k = from - 1; k >= to; --k) out[k - to] = coarsen(grid, out[k - to + 1], k);
    return out;
}

template <class T>
std::vector<std::vector<T>> cube_sums(const Grid& grid, std::span<const T> cells, int coarsest) {
    return aggregate_up(grid, std::vector<T>(cells.begin(), cells.end()), grid.finest_level(), coarsest);
}

template std::vector<std::vector<double>> cube_sums(const Grid&, std::span<const double>, int);
template std::vector<std::vector<std::complex<double>>> cube_sums(const Grid&,
                                                                  std::span<const std::complex<double>>, int);
template std::vector<std::vector<double>> aggregate_up(const Grid&, std::vector<double>, int, int);
template std::vector<std::vector<std::complex<double>>> aggregate_up(const Grid&,
                                                                     std::vector<std::complex<double>>, int, int);

}  // namespace tlw
