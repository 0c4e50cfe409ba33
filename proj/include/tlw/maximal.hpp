#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tlw/dyadic.hpp"
#include "tlw/weights.hpp"

namespace tlw {

/// Window family of the discrete maximal operator: cubes of side 2^{-k}
/// for k in [min_level, max_level], at every cell-aligned position that
/// lies inside the domain.
struct MaximalConfig {
    int min_level;  ///< coarsest side, default -L (the whole domain)
    int max_level;  ///< finest side, default J (a single cell)

    static MaximalConfig full(const Grid& grid) { return {grid.coarsest_level(), grid.finest_level()}; }
};

/// Uncentered maximal function of |f| over the configured windows.
/// Window sums are built by doubling, so domination, monotonicity and
/// power-of-two scaling hold bit for bit.
GridFunction maximal(const GridFunction& f, const MaximalConfig& cfg);
GridFunction maximal(const ComplexGridFunction& f, const MaximalConfig& cfg);
inline GridFunction maximal(const GridFunction& f) { return maximal(f, MaximalConfig::full(f.grid())); }

/// (M(|f|^sigma))^{1/sigma}.
GridFunction maximal_sigma(const GridFunction& f, double sigma, const MaximalConfig& cfg);

/// ||f t | L_p|| on the grid; p = infinity gives the max.
double weighted_lp_norm(const GridFunction& f, const GridFunction& t, double p);
double lp_norm(const GridFunction& f, double p);

/// ||(sum_k |F_k|^q)^{1/q} | L_p||; q = infinity takes the sup over k.
double lp_lq_norm(std::span<const GridFunction> fs, double p, double q);

/// ||M(f) t||_p / ||f t||_p; empty when the denominator vanishes.
std::optional<double> scalar_maximal_ratio(const GridFunction& f, const GridFunction& t, double p,
                                           const MaximalConfig& cfg);

/// ||M(f) t_k||_p / ||f t_j||_p for j >= k.
std::optional<double> shifted_maximal_ratio(const GridFunction& f, const WeightSequence& w, int k, int j, double p,
                                            const MaximalConfig& cfg);

struct FSRatioReport {
    double p = 2.0;
    double q = 2.0;
    int J = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    std::optional<double> ratio;
};

/// Weighted vector-valued maximal ratio; fs[i] sits at level w.k_min() + i.
FSRatioReport fs_ratio(std::span<const GridFunction> fs, const WeightSequence& w, double p, double q,
                       const MaximalConfig& cfg);

}  // namespace tlw
