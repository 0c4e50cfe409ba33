#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "tlw/dyadic.hpp"
#include "tlw/weights.hpp"

namespace tlw {

using Complex = std::complex<double>;

/// Amplitudes lambda_{k,m} for every in-domain cube at levels [k_min, k_max],
/// stored densely per level in the grid's linear cube order.
class CoeffField {
public:
    CoeffField(const Grid& grid, int k_min, int k_max);
    /// Levels taken from grid.k_min() .. grid.k_max().
    explicit CoeffField(const Grid& grid) : CoeffField(grid, grid.k_min(), grid.k_max()) {}

    const Grid& grid() const { return grid_; }
    int k_min() const { return k_min_; }
    int k_max() const { return k_max_; }
    bool covers(int k) const { return k >= k_min_ && k <= k_max_; }

    std::span<const Complex> level(int k) const;
    std::span<Complex> level(int k);
    Complex& operator()(const DyadicCube& q);
    const Complex& operator()(const DyadicCube& q) const;

    bool same_lattice(const CoeffField& other) const;
    /// Total number of coefficients.
    Index size() const;

    CoeffField& operator*=(Complex c);
    CoeffField& operator+=(const CoeffField& other);

    /// Independent standard complex normals (or real normals), drawn level
    /// by level in cube order so the values do not depend on J.
    static CoeffField random(const Grid& grid, int k_min, int k_max, Rng& rng, bool complex_values = true);
    /// One nonzero entry.
    static CoeffField atom(const Grid& grid, int k_min, int k_max, const DyadicCube& q, Complex value = 1.0);

private:
    Grid grid_;
    int k_min_;
    int k_max_;
    std::vector<std::vector<Complex>> levels_;
};

CoeffField operator*(Complex c, CoeffField f);
CoeffField operator+(CoeffField a, const CoeffField& b);

/// Throws ShapeError unless the weights cover exactly the field's levels.
void require_matching_levels(const CoeffField& lambda, const WeightSequence& w);

/// ||(sum_{k,m} 2^{knq/2} t_k^q |lambda_{k,m}|^q chi_{k,m})^{1/q} | L_p||;
/// q = infinity takes the sup over k.
double f_pq_norm(const CoeffField& lambda, const WeightSequence& w, double p, double q);

/// The same with t_k replaced by 2^{kn/(delta p)} t_{k,m,delta p} on each cube.
double f_pq_norm_star(const CoeffField& lambda, const WeightSequence& w, double p, double q, double delta);

struct SupNorm {
    double value = 0.0;
    DyadicCube argmax;
};

/// sup over dyadic P with level in [-L, k_max] of
/// ((1/|P|) int_P sum_{k >= max(k_P, k_min)} I_k)^{1/q}, where integrand(k)
/// returns the cell values of I_k. Shared by every f_inf-type norm.
SupNorm sup_average_norm(const Grid& grid, int k_min, int k_max, double q,
                         const std::function<std::vector<double>(int)>& integrand);

/// sup over dyadic P with level in [-L, k_max] of
/// ((1/|P|) int_P sum_{k >= max(k_P, k_min)} 2^{knq/2} t_k^q |lambda_{k,m}|^q chi_{k,m})^{1/q}.
SupNorm f_inf_norm_detail(const CoeffField& lambda, const WeightSequence& w, double q);
double f_inf_norm(const CoeffField& lambda, const WeightSequence& w, double q);

/// Same supremum from the cube-averaged integrand 2^{knq(1/2+1/q)} t_{k,m,q}^q.
/// Evaluated along an independent route (per-cube norms aggregated upward).
double f_inf_norm_cubeavg(const CoeffField& lambda, const WeightSequence& w, double q);

/// lambda*_{k,m} = (sum_h |lambda_{k,h}|^r (1 + |h - m|)^{-d})^{1/r} over in-domain h
/// at level k; r = infinity takes max_h |lambda_{k,h}|. Requires d > 2n.
CoeffField lambda_star(const CoeffField& lambda, double r, double d);

/// (||lambda*_{q,d}||, ||lambda||) in f_inf with weights t'_k = t_{k - shift}.
std::pair<double, double> lambda_star_equivalence(const CoeffField& lambda, const WeightSequence& w, double q,
                                                  double d, int shift);

/// G_P on the cells of P, zero elsewhere.
GridFunction g_p(const CoeffField& lambda, const WeightSequence& w, double q, const DyadicCube& p);

/// Smallest eps among the values of G_P (and 0) with #{G_P > eps} < N_P/4.
/// ResolutionError when P has fewer than 4 cells.
double m_p(const CoeffField& lambda, const WeightSequence& w, double q, const DyadicCube& p);

/// x -> sup over dyadic P containing x, level in [-L, k_max], of m_P.
/// ResolutionError if level-k_max cubes have fewer than 4 cells.
GridFunction m_fun(const CoeffField& lambda, const WeightSequence& w, double q);

double m_fun_p_norm(const CoeffField& lambda, const WeightSequence& w, double p, double q);

/// Cell subsets E_Q of every cube Q at levels [k_min, k_max]: masks[k - k_min][cell]
/// says whether the cell lies in E of the level-k cube containing it.
class RestrictionSets {
public:
    /// PreconditionError unless |E_Q| > eps |Q| for every cube.
    RestrictionSets(const Grid& grid, int k_min, std::vector<std::vector<std::uint8_t>> masks, double eps);

    static RestrictionSets full(const Grid& grid, int k_min, int k_max, double eps = 0.5);
    /// E_Q = {x in Q : G_Q(x) <= m(x)}; always more than 3/4 of Q, so eps = 3/4.
    static RestrictionSets from_m_fun(const CoeffField& lambda, const WeightSequence& w, double q);
    /// E_Q = a random union of floor(eps 2^{depth n}) + 1 subcubes at relative
    /// depth `depth`; the choice depends on (seed, k, m) only, not on J.
    static RestrictionSets random(const Grid& grid, int k_min, int k_max, double eps, int depth, std::uint64_t seed);
    /// E_Q = the subcube of a quarter of Q's volume at the lowest corner.
    static RestrictionSets lower_left_quarter(const Grid& grid, int k_min, int k_max, double eps);

    const Grid& grid() const { return grid_; }
    int k_min() const { return k_min_; }
    int k_max() const { return k_min_ + static_cast<int>(masks_.size()) - 1; }
    double eps() const { return eps_; }
    bool contains(int k, Index cell) const { return masks_[static_cast<std::size_t>(k - k_min_)][cell] != 0; }
    /// min over cubes of |E_Q| / |Q|.
    double min_fraction() const { return min_fraction_; }

private:
    Grid grid_;
    int k_min_;
    std::vector<std::vector<std::uint8_t>> masks_;
    double eps_;
    double min_fraction_ = 1.0;
};

/// The f_inf supremum with chi_{k,m} replaced by chi_{E_{Q_{k,m}}}.
double restricted_norm(const CoeffField& lambda, const WeightSequence& w, double q, const RestrictionSets& e);
/// ||(sum_{k,m} 2^{knq/2} t_k^q |lambda_{k,m}|^q chi_{E_{Q_{k,m}}})^{1/q} | L_inf||.
double restricted_norm_linf(const CoeffField& lambda, const WeightSequence& w, double q, const RestrictionSets& e);

}  // namespace tlw
