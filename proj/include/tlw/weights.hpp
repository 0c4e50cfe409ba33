#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tlw/dyadic.hpp"

namespace tlw {

/// Declared class data of a weight sequence.
struct WeightMeta {
    double p = 2.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double sigma1 = 2.0;
    double sigma2 = 2.0;
};

/// Family {t_k}, k in [k_min, k_max], of strictly positive grid functions.
///
/// Sequences of the form t_k = 2^{ks} * base carry the exponent s as a tag,
/// which lets class checks cancel the scale factors symbolically.
class WeightSequence {
public:
    /// Throws PositivityError on a nonpositive or non-finite cell.
    WeightSequence(Grid grid, int k_min, std::vector<GridFunction> levels, WeightMeta meta = {});

    /// t_k = 2^{ks} on every cell.
    static WeightSequence exp2(const Grid& grid, double s, WeightMeta meta = {});
    /// t_k = 2^{ks} * base.
    static WeightSequence exp2_times(const GridFunction& base, double s, WeightMeta meta = {});
    /// t_k(x) = 2^{ks} |x|^alpha sampled at cell centers.
    static WeightSequence power(const Grid& grid, double s, double alpha, WeightMeta meta = {});
    /// Same function on every level.
    static WeightSequence constant_in_k(const GridFunction& t, WeightMeta meta = {});

    const Grid& grid() const { return grid_; }
    int k_min() const { return k_min_; }
    int k_max() const { return k_min_ + static_cast<int>(levels_.size()) - 1; }
    bool covers(int k) const { return k >= k_min() && k <= k_max(); }
    /// Throws RangeError outside [k_min, k_max].
    const GridFunction& at(int k) const;
    const WeightMeta& meta() const { return meta_; }
    void set_meta(const WeightMeta& meta) { meta_ = meta; }

    /// Scale exponent s when t_k = 2^{ks} * base.
    std::optional<double> exp2_exponent() const { return exp2_s_; }
    /// The base function of a tagged sequence.
    const std::optional<GridFunction>& exp2_base() const { return exp2_base_; }

    /// Sequence t'_k = t_{k - shift} on [k_min, k_max]; RangeError if the
    /// shifted range leaves the stored one.
    WeightSequence shifted(int shift, int k_min, int k_max) const;
    WeightSequence slice(int k_min, int k_max) const { return shifted(0, k_min, k_max); }

    /// t'_k = scale(k) * t_k^power; keeps the exp2 tag when it can.
    WeightSequence transformed(double power, double exp2_per_level) const;

private:
    Grid grid_;
    int k_min_;
    std::vector<GridFunction> levels_;
    WeightMeta meta_;
    std::optional<double> exp2_s_;
    std::optional<GridFunction> exp2_base_;
};

/// Throws PositivityError unless every cell is finite and > 0.
void require_positive(const GridFunction& t, const char* what);

/// M_{Q,p}(t) = ((1/|Q|) int_Q t^p)^{1/p}; p = infinity gives the max.
double cube_mean_p(const GridFunction& t, const DyadicCube& q, double p);
double window_mean_p(const GridFunction& t, const CellWindow& w, double p);

/// M_{Q,p}(t) for every dyadic Q with level in [coarsest, J];
/// result[k - coarsest][cube]. Uses pairwise sums of t^p (or maxima).
std::vector<std::vector<double>> mean_pyramid(const GridFunction& t, double p, int coarsest);

/// ||t | L_q(Q_{k,m})|| for every level-k cube.
std::vector<double> cube_lq_norms(const GridFunction& t, double q, int k);

/// One member of an audited cube family.
struct AuditCube {
    CellWindow window;
    int level = 0;
    bool dyadic = true;
};

/// All dyadic cubes with level in [k_lo, k_hi].
std::vector<AuditCube> dyadic_family(const Grid& grid, int k_lo, int k_hi);
std::vector<AuditCube> dyadic_family(const Grid& grid);
/// Dyadic cubes plus the 2^n lattices shifted by a third of the side
/// (rounded down to whole cells); shifted cubes must fit in the domain.
std::vector<AuditCube> shifted_family(const Grid& grid, int k_lo, int k_hi);

/// Per-cube Muckenhoupt quantity: M_Q(g) M_{Q,1/(p-1)}(g^{-1}) for p > 1
/// and M_Q(g) max_Q g^{-1} for p = 1. Exactly 1 on constant cubes.
double ap_cube_value(const GridFunction& gamma, double p, const CellWindow& w);
double ap_cube_value(const GridFunction& gamma, double p, const DyadicCube& q);

struct ApReport {
    double p = 2.0;
    /// Supremum over the audited family: a lower bound of the true constant.
    double constant = 1.0;
    AuditCube argmax;
    std::vector<double> per_cube;  ///< aligned with the family when requested
};

ApReport ap_constant(const GridFunction& gamma, double p, std::span<const AuditCube> family,
                     bool keep_per_cube = false);

/// (a, b) with a = A_{p'} value of gamma^{1-p'} on Q, b = (A_p value on Q)^{p'-1}.
std::pair<double, double> ap_duality_identity(const GridFunction& gamma, double p, const DyadicCube& q);

/// Both sides of (|E|/|Q|)^{p-1} M_Q(g) <= C M_E(g) for a cell subset E of Q.
struct SubsetMeans {
    double lhs = 0.0;     ///< (|E|/|Q|)^{p-1} M_Q(g)
    double mean_e = 0.0;  ///< M_E(g)
};
SubsetMeans subset_means(const GridFunction& gamma, double p, const DyadicCube& q, std::span<const Index> e_cells);

/// Least-squares fit of log(M_S/M_Q) against log(|S|/|Q|) over dyadic S in Q;
/// C is then the smallest constant making M_S/M_Q <= C (|S|/|Q|)^{delta-1}
/// hold on every sample.
struct DoublingFit {
    double delta = 1.0;
    double constant = 1.0;
    int samples = 0;
};
DoublingFit fit_subset_exponent(const GridFunction& gamma, const DyadicCube& q);

struct XWitness {
    int k = 0;
    int j = 0;
    DyadicCube cube;
    double value = 0.0;
};

struct XClassReport {
    double c1 = 0.0;
    double c2 = 0.0;
    XWitness witness1;
    XWitness witness2;
    /// profile[g] = max candidate with j - k = g.
    std::vector<double> profile1;
    std::vector<double> profile2;
    /// (log2 P(G) - log2 P(0)) / G over the largest gap G; 0 if G = 0.
    double growth1 = 0.0;
    double growth2 = 0.0;
    double tolerance = 0.05;
    bool holds1 = true;
    bool holds2 = true;
    bool used_closed_form = false;
};

/// Audits the class conditions over all dyadic cubes with level in
/// [cube_lo, J] and all k <= j in the weight's level range.
XClassReport verify_x_class(const WeightSequence& w, double alpha1, double alpha2, double sigma1, double sigma2,
                            double p, double tolerance = 0.05);
XClassReport verify_x_class(const WeightSequence& w, double alpha1, double alpha2, double sigma1, double sigma2,
                            double p, int cube_lo, double tolerance, bool allow_closed_form);

/// alpha2 >= alpha1 for a report that validates both conditions, up to the
/// resolution 2 * tolerance of the finite level range. Vacuously true when
/// either condition fails. PreconditionError unless sigma1 > 0, sigma2 >= p.
bool alpha_consistency(const XClassReport& report, double alpha1, double alpha2, double sigma1, double sigma2,
                       double p);

}  // namespace tlw
