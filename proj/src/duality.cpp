#include "tlw/duality.hpp"

#include <algorithm>
#include <cmath>

namespace tlw {

Complex pairing(const CoeffField& s, const CoeffField& lambda) {
    if (!s.same_lattice(lambda)) throw ShapeError("pairing: lattices differ");
    CompensatedSum<Complex> acc;
    for (int k = s.k_min(); k <= s.k_max(); ++k) {
        const auto a = s.level(k);
        const auto b = lambda.level(k);
        for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * std::conj(b[i]);
    }
    return acc.value();
}

namespace {

DualityReport finish(DualityReport r) {
    const double bound = r.factor * r.lhs_norm * r.rhs_norm;
    r.slack = bound - std::abs(r.pairing);
    if (bound > 0.0) r.ratio = std::abs(r.pairing) / bound;
    return r;
}

void check_open_exponent(double x, const char* what) {
    if (!(x > 1.0) || std::isinf(x)) throw UnsupportedError(std::string(what) + " must lie in (1, infinity) here");
}

}  // namespace

DualityReport hoelder_check_pq(const CoeffField& s, const CoeffField& lambda, const WeightSequence& w, double p,
                               double q) {
    check_open_exponent(p, "p");
    check_open_exponent(q, "q");
    DualityReport r;
    r.p = p;
    r.q = q;
    r.pairing = pairing(s, lambda);
    r.lhs_norm = f_pq_norm(s, w, p, q);
    r.rhs_norm = f_pq_norm(lambda, w.transformed(-1.0, 0.0), conjugate_exponent(p), conjugate_exponent(q));
    return finish(r);
}

DualityReport hoelder_check_1q(const CoeffField& s, const CoeffField& lambda, const WeightSequence& w, double q,
                               const RestrictionSets& e) {
    check_open_exponent(q, "q");
    DualityReport r;
    r.p = 1.0;
    r.q = q;
    r.pairing = pairing(s, lambda);
    r.factor = 1.0 / e.eps();
    r.lhs_norm = f_pq_norm(s, w, 1.0, q);
    r.rhs_norm = restricted_norm_linf(lambda, w.transformed(-1.0, 0.0), conjugate_exponent(q), e);
    return finish(r);
}

DualityReport hoelder_check_1q(const CoeffField& s, const CoeffField& lambda, const WeightSequence& w, double q) {
    check_open_exponent(q, "q");
    const RestrictionSets e = RestrictionSets::from_m_fun(lambda, w.transformed(-1.0, 0.0), conjugate_exponent(q));
    return hoelder_check_1q(s, lambda, w, q, e);
}

WeightSequence constraint_weights(const WeightSequence& w) {
    return w.transformed(-1.0, -static_cast<double>(w.grid().dimension()));
}

double constraint_norm(const CoeffField& s, const WeightSequence& w, double q) {
    return f_inf_norm(s, constraint_weights(w), conjugate_exponent(q));
}

double conjugate_functional(const CoeffField& lambda, const CoeffField& s) {
    if (!s.same_lattice(lambda)) throw ShapeError("conjugate functional: lattices differ");
    const Grid& grid = lambda.grid();
    const int lo = grid.coarsest_level();
    const int n = grid.dimension();
    std::vector<std::vector<Complex>> totals;
    for (int l = lo; l <= lambda.k_max(); ++l) totals.emplace_back(static_cast<std::size_t>(grid.cube_count(l)));
    for (int k = lambda.k_max(); k >= lambda.k_min(); --k) {
        const auto a = lambda.level(k);
        const auto b = s.level(k);
        const double volume = grid.cube_volume(k);
        std::vector<Complex> per_cube(a.size());
        for (std::size_t m = 0; m < a.size(); ++m) per_cube[m] = a[m] * std::conj(b[m]) * volume;
        const auto agg = aggregate_up(grid, std::move(per_cube), k, lo);
        for (int l = lo; l <= k; ++l)
            for (std::size_t i = 0; i < agg[l - lo].size(); ++i) totals[l - lo][i] += agg[l - lo][i];
    }
    double best = 0.0;
    for (int l = lo; l <= lambda.k_max(); ++l) {
        const double inv_volume = std::exp2(l * n);
        for (const Complex& v : totals[l - lo]) best = std::max(best, std::abs(v) * inv_volume);
    }
    return best;
}

CoeffField extremal_sequence(const CoeffField& lambda, const WeightSequence& w, double q) {
    require_matching_levels(lambda, w);
    check_open_exponent(q, "q");
    const double norm = f_inf_norm(lambda, w, q);
    if (norm == 0.0) throw UndefinedError("extremal sequence: lambda = 0 cannot be normalized");
    const double qc = conjugate_exponent(q);
    const int n = lambda.grid().dimension();
    CoeffField s(lambda.grid(), lambda.k_min(), lambda.k_max());
    for (int k = lambda.k_min(); k <= lambda.k_max(); ++k) {
        const GridFunction& t = w.at(k);
        GridFunction inv(t.grid());
        for (Index c = 0; c < t.size(); ++c) inv[c] = 1.0 / t[c];
        const auto tq = cube_lq_norms(t, q, k);
        const auto tt = cube_lq_norms(inv, qc, k);
        const double scale = std::exp2(k * n * (0.5 + q / (2.0 * qc)));
        const auto src = lambda.level(k);
        auto dst = s.level(k);
        for (std::size_t m = 0; m < src.size(); ++m) {
            const double a = std::abs(src[m]);
            if (a == 0.0) continue;
            dst[m] = std::pow(tq[m], q - 1.0) * scale / tt[m] * std::pow(a / norm, q - 1.0) * sgn(src[m]);
        }
    }
    return s;
}

ConjugateNormReport conjugate_norm(const CoeffField& lambda, const WeightSequence& w, double q,
                                   ConjugateStrategy strategy, int trials, std::uint64_t seed) {
    require_matching_levels(lambda, w);
    check_open_exponent(q, "q");
    ConjugateNormReport r;
    r.plain_norm = f_inf_norm(lambda, w, q);
    if (r.plain_norm == 0.0) return r;
    const CoeffField s = extremal_sequence(lambda, w, q);
    r.extremal_constraint = constraint_norm(s, w, q);
    r.extremal_value = conjugate_functional(lambda, s) / r.extremal_constraint;
    r.value = r.extremal_value;
    if (strategy == ConjugateStrategy::RandomSearch) {
        Rng rng(seed);
        for (int i = 0; i < trials; ++i) {
            // Perturb the extremal sequence multiplicatively; plain noise is a poor direction.
            CoeffField cand = s;
            for (int k = cand.k_min(); k <= cand.k_max(); ++k)
                for (auto& v : cand.level(k)) v *= std::exp(0.5 * rng.normal());
            const double c = constraint_norm(cand, w, q);
            if (c > 0.0) r.value = std::max(r.value, conjugate_functional(lambda, cand) / c);
            ++r.random_trials;
        }
    }
    return r;
}

std::vector<double> cube_duality_factor(const GridFunction& t, double q, int k) {
    check_open_exponent(q, "q");
    GridFunction inv(t.grid());
    for (Index c = 0; c < t.size(); ++c) inv[c] = 1.0 / t[c];
    auto a = cube_lq_norms(t, q, k);
    const auto b = cube_lq_norms(inv, conjugate_exponent(q), k);
    const double inv_volume = 1.0 / t.grid().cube_volume(k);
    for (std::size_t m = 0; m < a.size(); ++m) a[m] *= b[m] * inv_volume;
    return a;
}

CoeffField d_p_sequence(const CoeffField& kappa, const DyadicCube& p) {
    const Grid& grid = kappa.grid();
    grid.check_cube(p);
    CoeffField d(grid, kappa.k_min(), kappa.k_max());
    const double inv_p = 1.0 / grid.cube_volume(p.level);
    const Index p_lin = grid.linear_index(p);
    for (int k = std::max(p.level, kappa.k_min()); k <= kappa.k_max(); ++k) {
        const auto src = kappa.level(k);
        auto dst = d.level(k);
        const double ratio = grid.cube_volume(k) * inv_p;
        const int shift = k - p.level;
        for (Index m = 0; m < static_cast<Index>(src.size()); ++m) {
            const DyadicCube q = grid.cube_at(k, m);
            const DyadicCube parent{p.level, {q.index[0] >> shift, q.index[1] >> shift}};
            if (grid.linear_index(parent) == p_lin) dst[m] = std::abs(src[m]) * ratio;
        }
    }
    return d;
}

double d_p_claim(const CoeffField& kappa, const WeightSequence& w, double q, const DyadicCube& p) {
    const double norm = f_inf_norm(kappa, w.transformed(1.0, -static_cast<double>(w.grid().dimension())), q);
    if (norm == 0.0) return 0.0;
    CoeffField scaled = kappa;
    scaled *= 1.0 / norm;
    return f_pq_norm(d_p_sequence(scaled, p), w, 1.0, q);
}

CoeffField represent_functional(const std::function<Complex(const CoeffField&)>& l, const CoeffField& shape) {
    CoeffField lambda(shape.grid(), shape.k_min(), shape.k_max());
    CoeffField basis(shape.grid(), shape.k_min(), shape.k_max());
    for (int k = shape.k_min(); k <= shape.k_max(); ++k) {
        auto dst = lambda.level(k);
        for (std::size_t m = 0; m < dst.size(); ++m) {
            basis.level(k)[m] = 1.0;
            dst[m] = std::conj(l(basis));
            basis.level(k)[m] = 0.0;
        }
    }
    return lambda;
}

}  // namespace tlw
