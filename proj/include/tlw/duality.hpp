#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "tlw/seqspace.hpp"

namespace tlw {

/// sum_{k,m} s_{k,m} conj(lambda_{k,m}).
Complex pairing(const CoeffField& s, const CoeffField& lambda);

/// One Hoelder-type estimate |pairing| <= factor * lhs_norm * rhs_norm.
struct DualityReport {
    double p = 2.0;
    double q = 2.0;
    Complex pairing;
    double lhs_norm = 0.0;  ///< norm of s in the primal space
    double rhs_norm = 0.0;  ///< norm of lambda in the dual space
    double factor = 1.0;
    double slack = 0.0;     ///< factor * lhs_norm * rhs_norm - |pairing|
    /// |pairing| / (factor * lhs_norm * rhs_norm); empty when the bound is 0.
    std::optional<double> ratio;
};

/// |<s, lambda>| <= ||s | f_pq(t)|| ||lambda | f_{p'q'}(t^{-1})|| for p, q in (1, infinity).
DualityReport hoelder_check_pq(const CoeffField& s, const CoeffField& lambda, const WeightSequence& w, double p,
                               double q);

/// |<s, lambda>| <= (1/eps) ||s | f_1q(t)|| ||(sum 2^{knq'/2} t_k^{-q'} |lambda|^{q'} chi_E)^{1/q'}||_inf.
/// The default E comes from the level sets of m^{q'}(lambda, t^{-1}), with eps = 3/4.
DualityReport hoelder_check_1q(const CoeffField& s, const CoeffField& lambda, const WeightSequence& w, double q);
DualityReport hoelder_check_1q(const CoeffField& s, const CoeffField& lambda, const WeightSequence& w, double q,
                               const RestrictionSets& e);

/// The constraint weights {2^{-nk} t_k^{-1}} of the conjugate norm.
WeightSequence constraint_weights(const WeightSequence& w);

/// ||s||^* = f_inf norm of s with weights 2^{-nk} t_k^{-1} and exponent q'.
double constraint_norm(const CoeffField& s, const WeightSequence& w, double q);

/// sup_P |(1/|P|) sum_{k >= k_P} sum_{Q subset P} lambda_Q conj(s_Q) |Q||.
double conjugate_functional(const CoeffField& lambda, const CoeffField& s);

/// s_{k,m} = t_{k,m,q}^{q-1} 2^{kn(1/2 + q/(2q'))} t~_{k,m,q'}^{-1} |lambda_{k,m}/N|^{q-1} sgn lambda_{k,m},
/// N = ||lambda | f_inf,q(t)||, t~ = ||t_k^{-1} | L_{q'}(Q)||. UndefinedError for lambda = 0.
CoeffField extremal_sequence(const CoeffField& lambda, const WeightSequence& w, double q);

enum class ConjugateStrategy { Extremal, RandomSearch };

struct ConjugateNormReport {
    double value = 0.0;           ///< best lower bound of the conjugate norm
    double extremal_value = 0.0;  ///< value reached by the extremal sequence
    double extremal_constraint = 0.0;
    double plain_norm = 0.0;      ///< ||lambda | f_inf,q(t)||, an upper bound
    int random_trials = 0;
};

/// Lower bound of sup over ||s||^* <= 1 of the conjugate functional.
ConjugateNormReport conjugate_norm(const CoeffField& lambda, const WeightSequence& w, double q,
                                   ConjugateStrategy strategy = ConjugateStrategy::Extremal, int trials = 0,
                                   std::uint64_t seed = 0);

/// |Q|^{-1} t_{k,m,q} t~_{k,m,q'} for every level-k cube; equals the per-cube
/// A_q value of t_k^q raised to 1/q.
std::vector<double> cube_duality_factor(const GridFunction& t, double q, int k);

/// D_{k,h,P} = |kappa_{k,h}| |Q_{k,h}| / |P| for Q_{k,h} in P with k >= k_P, else 0.
CoeffField d_p_sequence(const CoeffField& kappa, const DyadicCube& p);

/// ||D_P | f_1q(t)|| after scaling kappa to unit f_inf,q norm with weights
/// 2^{-nk} t_k. Jensen gives the value <= 1.
double d_p_claim(const CoeffField& kappa, const WeightSequence& w, double q, const DyadicCube& p);

/// Coefficients lambda with pairing(s, lambda) = l(s) for every s on the
/// lattice of `shape`: lambda_{k,m} = conj(l(e_{k,m})).
CoeffField represent_functional(const std::function<Complex(const CoeffField&)>& l, const CoeffField& shape);

}  // namespace tlw
