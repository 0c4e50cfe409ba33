#pragma once

#include <string>
#include <vector>

#include "tlw/seqspace.hpp"

namespace tlw {

/// Radial filter pair on the periodic grid. Frequencies are
/// xi = 2 pi nu / 2^L for DFT indices nu in (-N/2, N/2]^n.
///
/// Phi is 1 on [3/5, 5/3], 0 outside (1/2, 2), with exp(-1/x) transitions
/// whose length is `width` times the available gap. Psi = Phi / D where
/// D(r) = sum_j Phi(2^{-j} r)^2 is evaluated on the mantissa of r, so
/// D(2^k r) == D(r) bit for bit.
class FilterPair {
public:
    FilterPair(const Grid& grid, double width);

    const Grid& grid() const { return grid_; }
    double width() const { return width_; }

    double phi(double r) const;
    double psi(double r) const;
    double dilation_sum(double r) const;

    /// |xi| for every DFT index, in the grid's cell order.
    const std::vector<double>& radius() const { return radius_; }
    /// Phi(2^{-k} |xi|) and Psi(2^{-k} |xi|) per DFT index.
    std::vector<double> phi_level(int k) const;
    std::vector<double> psi_level(int k) const;

    /// Levels whose sampling lattice fits the grid: [-L, J-1].
    int lowest_level() const { return grid_.coarsest_level(); }
    int highest_level() const { return grid_.finest_level() - 1; }
    void check_levels(int k_min, int k_max) const;

    /// CSV rows "radius,phi,psi" over the distinct represented radii.
    std::string spectrum_csv() const;

private:
    Grid grid_;
    double width_;
    double in_lo_, out_hi_;
    std::vector<double> radius_;
};

/// ResolutionError if no represented frequency lies in [1/2, 2].
FilterPair build_filter_pair(const Grid& grid, double width = 1.0);

struct FilterInvariants {
    double max_outside = 0.0;     ///< max |Phi| off [1/2, 2]
    double min_plateau = 0.0;     ///< min |Phi| on [3/5, 5/3] (over represented radii, all dilations)
    double max_identity_dev = 0.0;  ///< max |sum_k Phi Psi (2^{-k} xi) - 1| over nonzero xi
    int plateau_samples = 0;
};

/// Checks Phi and the reproducing identity at every represented frequency
/// and every dilation 2^{-k}, k in [-L - 2, J + 2].
FilterInvariants filter_invariants(const FilterPair& fp);

/// Complex grid function with the dyadic band [2^lo, 2^hi] its spectrum lives in.
struct BandSignal {
    ComplexGridFunction values;
    int band_lo = 0;
    int band_hi = 0;
};

/// Trigonometric polynomial sampled at cell corners x = i h, with independent
/// complex normal coefficients on every frequency with 2^lo <= |xi| <= 2^hi.
/// The coefficients depend on the frequency and one draw from rng, not on J.
BandSignal random_band_signal(const Grid& grid, int lo, int hi, Rng& rng);

/// Unnormalized forward DFT and normalized inverse on the grid.
std::vector<Complex> dft(const ComplexGridFunction& f);
ComplexGridFunction idft(const Grid& grid, std::vector<Complex> spectrum);

/// phi_k * f for one level, by spectral multiplication.
ComplexGridFunction filter_level(const ComplexGridFunction& f, const FilterPair& fp, int k);

/// (S_phi f)_{k,m} = 2^{-kn/2} (phi_k * f)(2^{-k} m).
CoeffField analyze(const ComplexGridFunction& f, const FilterPair& fp, int k_min, int k_max);
/// sum_{k,m} lambda_{k,m} psi_{k,m} as level-wise Dirac combs filtered by Psi_k.
ComplexGridFunction synthesize(const CoeffField& lambda, const FilterPair& fp);

/// ||synthesize(analyze(f)) - f||_2 / ||f||_2, 0 for f = 0.
double roundtrip_residual(const ComplexGridFunction& f, const FilterPair& fp, int k_min, int k_max);

/// Fraction of the L2 energy of f at frequencies outside [2^k_min, 2^k_max].
double spectral_leakage(const ComplexGridFunction& f, const FilterPair& fp, int k_min, int k_max);

/// ||(sum_k t_k^q |phi_k * f|^q)^{1/q} | L_p||; q = infinity takes the sup.
double F_pq_norm(const ComplexGridFunction& f, const FilterPair& fp, const WeightSequence& w, double p, double q);
/// sup over dyadic P of ((1/|P|) int_P sum_{k >= k_P} t_k^q |phi_k * f|^q)^{1/q}.
double F_inf_norm(const ComplexGridFunction& f, const FilterPair& fp, const WeightSequence& w, double q);

/// (||S_phi f | f_pq(t)||, ||f | F_pq(t)||).
std::pair<double, double> transfer_check(const ComplexGridFunction& f, const FilterPair& fp, const WeightSequence& w,
                                         double p, double q);

}  // namespace tlw
