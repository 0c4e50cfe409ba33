#include "tlw/seqspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tlw {

CoeffField::CoeffField(const Grid& grid, int k_min, int k_max) : grid_(grid), k_min_(k_min), k_max_(k_max) {
    if (k_min > k_max) throw RangeError("coefficient field: empty level range");
    grid.check_level(k_min);
    grid.check_level(k_max);
    for (int k = k_min; k <= k_max; ++k) levels_.emplace_back(static_cast<std::size_t>(grid.cube_count(k)));
}

std::span<const Complex> CoeffField::level(int k) const {
    if (!covers(k)) throw RangeError("coefficient field: level " + std::to_string(k) + " not stored");
    return levels_[static_cast<std::size_t>(k - k_min_)];
}

std::span<Complex> CoeffField::level(int k) {
    if (!covers(k)) throw RangeError("coefficient field: level " + std::to_string(k) + " not stored");
    return levels_[static_cast<std::size_t>(k - k_min_)];
}

Complex& CoeffField::operator()(const DyadicCube& q) {
    grid_.check_cube(q);
    return level(q.level)[grid_.linear_index(q)];
}

const Complex& CoeffField::operator()(const DyadicCube& q) const {
    grid_.check_cube(q);
    return level(q.level)[grid_.linear_index(q)];
}

bool CoeffField::same_lattice(const CoeffField& other) const {
    return grid_ == other.grid_ && k_min_ == other.k_min_ && k_max_ == other.k_max_;
}

Index CoeffField::size() const {
    Index total = 0;
    for (const auto& l : levels_) total += static_cast<Index>(l.size());
    return total;
}

CoeffField& CoeffField::operator*=(Complex c) {
    for (auto& l : levels_)
        for (auto& v : l) v *= c;
    return *this;
}

CoeffField& CoeffField::operator+=(const CoeffField& other) {
    if (!same_lattice(other)) throw ShapeError("coefficient fields live on different lattices");
    for (std::size_t i = 0; i < levels_.size(); ++i)
        for (std::size_t j = 0; j < levels_[i].size(); ++j) levels_[i][j] += other.levels_[i][j];
    return *this;
}

CoeffField CoeffField::random(const Grid& grid, int k_min, int k_max, Rng& rng, bool complex_values) {
    CoeffField f(grid, k_min, k_max);
    for (auto& l : f.levels_)
        for (auto& v : l) v = complex_values ? rng.complex_normal() : Complex(rng.normal(), 0.0);
    return f;
}

CoeffField CoeffField::atom(const Grid& grid, int k_min, int k_max, const DyadicCube& q, Complex value) {
    CoeffField f(grid, k_min, k_max);
    f(q) = value;
    return f;
}

CoeffField operator*(Complex c, CoeffField f) { return f *= c; }
CoeffField operator+(CoeffField a, const CoeffField& b) { return a += b; }

void require_matching_levels(const CoeffField& lambda, const WeightSequence& w) {
    if (!(lambda.grid() == w.grid()) || lambda.k_min() != w.k_min() || lambda.k_max() != w.k_max())
        throw ShapeError("coefficient and weight level ranges differ");
}

namespace {

void check_q(double q, bool allow_inf) {
    if (!(q > 0.0) || (!allow_inf && std::isinf(q))) throw RangeError("q must lie in (0, infinity)");
}

// I_k(x) = 2^{knq/2} t_k(x)^q |lambda_{k,m(x)}|^q, optionally masked by E.
std::vector<double> level_integrand(const CoeffField& lambda, const WeightSequence& w, double q, int k,
                                    const RestrictionSets* e = nullptr) {
    const Grid& grid = lambda.grid();
    const auto coeffs = lambda.level(k);
    const GridFunction& t = w.at(k);
    const double scale = std::exp2(0.5 * k * grid.dimension());
    std::vector<double> out(static_cast<std::size_t>(grid.cell_count()));
    for (Index c = 0; c < grid.cell_count(); ++c) {
        if (e && !e->contains(k, c)) {
            out[c] = 0.0;
            continue;
        }
        const double a = std::abs(coeffs[grid.cube_of_cell(c, k)]);
        out[c] = a == 0.0 ? 0.0 : std::pow(scale * t[c] * a, q);
    }
    return out;
}

// Sum of cell values over the window.
double window_sum(const Grid& grid, const CellWindow& win, const std::vector<double>& v) {
    CompensatedSum<double> acc;
    for_each_cell(grid, win, [&](Index c) { acc += v[c]; });
    return acc.value();
}

// sup over P of ((1/|P|) int_P sum_{k >= max(k_P, k_min)} I_k)^{1/q}, levels of P in [-L, k_max].
// T accumulates the suffix sum over k in decreasing order.
template <class IntegrandFn>
SupNorm sup_over_cubes(const Grid& grid, int k_min, int k_max, double q, IntegrandFn&& integrand) {
    std::vector<double> T(static_cast<std::size_t>(grid.cell_count()), 0.0);
    SupNorm best;
    best.value = -1.0;
    const int n = grid.dimension();
    for (int l = k_max; l >= grid.coarsest_level(); --l) {
        if (l >= k_min) {
            const std::vector<double> I = integrand(l);
            for (std::size_t c = 0; c < T.size(); ++c) T[c] += I[c];
        }
        // (cell sum) h^n / |P| = (cell sum) 2^{(l - J) n}
        const double norm = std::exp2((l - grid.finest_level()) * n);
        for (Index i = 0; i < grid.cube_count(l); ++i) {
            const DyadicCube p = grid.cube_at(l, i);
            const double avg = window_sum(grid, grid.window(p), T) * norm;
            if (avg > best.value) {
                best.value = avg;
                best.argmax = p;
            }
        }
    }
    best.value = std::pow(best.value, 1.0 / q);
    return best;
}

}  // namespace

SupNorm sup_average_norm(const Grid& grid, int k_min, int k_max, double q,
                         const std::function<std::vector<double>(int)>& integrand) {
    grid.check_level(k_min);
    grid.check_level(k_max);
    return sup_over_cubes(grid, k_min, k_max, q, integrand);
}

double f_pq_norm(const CoeffField& lambda, const WeightSequence& w, double p, double q) {
    require_matching_levels(lambda, w);
    if (!(p > 0.0) || std::isinf(p)) throw RangeError("f_pq: p must lie in (0, infinity)");
    check_q(q, true);
    const Grid& grid = lambda.grid();
    const int n = grid.dimension();
    CompensatedSum<double> total;
    for (Index c = 0; c < grid.cell_count(); ++c) {
        double inner = 0.0;
        for (int k = lambda.k_max(); k >= lambda.k_min(); --k) {
            const double a = std::abs(lambda.level(k)[grid.cube_of_cell(c, k)]);
            if (a == 0.0) continue;
            const double term = std::exp2(0.5 * k * n) * w.at(k)[c] * a;
            inner = std::isinf(q) ? std::max(inner, term) : inner + std::pow(term, q);
        }
        total += std::isinf(q) ? std::pow(inner, p) : std::pow(inner, p / q);
    }
    return std::pow(total.value() * grid.cell_volume(), 1.0 / p);
}

double f_pq_norm_star(const CoeffField& lambda, const WeightSequence& w, double p, double q, double delta) {
    require_matching_levels(lambda, w);
    if (!(p > 0.0) || std::isinf(p)) throw RangeError("f_pq*: p must lie in (0, infinity)");
    if (!(delta > 0.0 && delta <= 1.0)) throw RangeError("f_pq*: delta must lie in (0, 1]");
    check_q(q, true);
    const Grid& grid = lambda.grid();
    const int n = grid.dimension();
    const double r = delta * p;
    std::vector<std::vector<double>> cube_weight;
    for (int k = lambda.k_min(); k <= lambda.k_max(); ++k) {
        auto norms = cube_lq_norms(w.at(k), r, k);
        const double scale = std::exp2(k * n * (0.5 + 1.0 / r));
        for (double& v : norms) v *= scale;
        cube_weight.push_back(std::move(norms));
    }
    CompensatedSum<double> total;
    for (Index c = 0; c < grid.cell_count(); ++c) {
        double inner = 0.0;
        for (int k = lambda.k_max(); k >= lambda.k_min(); --k) {
            const Index m = grid.cube_of_cell(c, k);
            const double a = std::abs(lambda.level(k)[m]);
            if (a == 0.0) continue;
            const double term = cube_weight[k - lambda.k_min()][m] * a;
            inner = std::isinf(q) ? std::max(inner, term) : inner + std::pow(term, q);
        }
        total += std::isinf(q) ? std::pow(inner, p) : std::pow(inner, p / q);
    }
    return std::pow(total.value() * grid.cell_volume(), 1.0 / p);
}

SupNorm f_inf_norm_detail(const CoeffField& lambda, const WeightSequence& w, double q) {
    require_matching_levels(lambda, w);
    check_q(q, false);
    return sup_over_cubes(lambda.grid(), lambda.k_min(), lambda.k_max(), q,
                          [&](int k) { return level_integrand(lambda, w, q, k); });
}

double f_inf_norm(const CoeffField& lambda, const WeightSequence& w, double q) {
    return f_inf_norm_detail(lambda, w, q).value;
}

double f_inf_norm_cubeavg(const CoeffField& lambda, const WeightSequence& w, double q) {
    require_matching_levels(lambda, w);
    check_q(q, false);
    const Grid& grid = lambda.grid();
    const int n = grid.dimension();
    const int lo = grid.coarsest_level();
    // totals[l - lo][P] = sum over k >= max(l, k_min) of int_P (cube-averaged integrand at level k)
    std::vector<std::vector<double>> totals;
    for (int l = lo; l <= lambda.k_max(); ++l) totals.emplace_back(static_cast<std::size_t>(grid.cube_count(l)), 0.0);
    for (int k = lambda.k_max(); k >= lambda.k_min(); --k) {
        const auto tq = cube_lq_norms(w.at(k), q, k);
        const auto coeffs = lambda.level(k);
        const double scale = std::exp2(k * n * (0.5 + 1.0 / q));
        const double volume = grid.cube_volume(k);
        std::vector<double> per_cube(coeffs.size());
        for (std::size_t m = 0; m < coeffs.size(); ++m) {
            const double a = std::abs(coeffs[m]);
            per_cube[m] = a == 0.0 ? 0.0 : std::pow(scale * tq[m] * a, q) * volume;
        }
        const auto agg = aggregate_up(grid, std::move(per_cube), k, lo);
        for (int l = lo; l <= k; ++l)
            for (std::size_t i = 0; i < agg[l - lo].size(); ++i) totals[l - lo][i] += agg[l - lo][i];
    }
    double best = 0.0;
    for (int l = lo; l <= lambda.k_max(); ++l) {
        const double inv_volume = std::exp2(l * n);
        for (double v : totals[l - lo]) best = std::max(best, v * inv_volume);
    }
    return std::pow(best, 1.0 / q);
}

CoeffField lambda_star(const CoeffField& lambda, double r, double d) {
    if (!(r > 0.0)) throw RangeError("lambda*: r must be > 0");
    const Grid& grid = lambda.grid();
    const int n = grid.dimension();
    if (!(d > 2.0 * n)) throw PreconditionError("lambda*: requires d > 2n");
    CoeffField out(grid, lambda.k_min(), lambda.k_max());
    for (int k = lambda.k_min(); k <= lambda.k_max(); ++k) {
        const auto in = lambda.level(k);
        auto dst = out.level(k);
        const Index per_axis = grid.cubes_per_axis(k);
        const Index count = grid.cube_count(k);
        std::vector<double> a(in.size());
        for (std::size_t i = 0; i < in.size(); ++i) a[i] = std::abs(in[i]);
        if (std::isinf(r)) {
            const double m = *std::max_element(a.begin(), a.end());
            for (auto& v : dst) v = m;
            continue;
        }
        // decay[(|dh0|, |dh1|)] = (1 + |dh|)^{-d}
        std::vector<double> decay(static_cast<std::size_t>(n == 1 ? per_axis : per_axis * per_axis));
        for (Index i = 0; i < per_axis; ++i)
            for (Index j = 0; j < (n == 1 ? 1 : per_axis); ++j)
                decay[i * (n == 1 ? 1 : per_axis) + j] =
                    std::pow(1.0 + std::hypot(double(i), double(j)), -d);
        std::vector<double> ar(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) ar[i] = std::pow(a[i], r);
        for (Index m = 0; m < count; ++m) {
            const DyadicCube qm = grid.cube_at(k, m);
            // Factor out the h = m term so that lambda*_m >= |lambda_m| holds bit for bit.
            const bool pivot = a[m] > 0.0;
            CompensatedSum<double> acc;
            for (Index h = 0; h < count; ++h) {
                if (h == m || ar[h] == 0.0) continue;
                const DyadicCube qh = grid.cube_at(k, h);
                const Index d0 = std::abs(qh.index[0] - qm.index[0]);
                const Index d1 = std::abs(qh.index[1] - qm.index[1]);
                const double wgt = decay[d0 * (n == 1 ? 1 : per_axis) + d1];
                acc += pivot ? (ar[h] / ar[m]) * wgt : ar[h] * wgt;
            }
            dst[m] = pivot ? a[m] * std::pow(1.0 + acc.value(), 1.0 / r) : std::pow(acc.value(), 1.0 / r);
        }
    }
    return out;
}

std::pair<double, double> lambda_star_equivalence(const CoeffField& lambda, const WeightSequence& w, double q,
                                                  double d, int shift) {
    const WeightSequence ws = w.shifted(shift, lambda.k_min(), lambda.k_max());
    const CoeffField star = lambda_star(lambda, q, d);
    return {f_inf_norm(star, ws, q), f_inf_norm(lambda, ws, q)};
}

namespace {

// Suffix sum T_l(x) = sum_{k >= max(l, k_min)} I_k(x) on the cells of window,
// accumulated in decreasing k like sup_over_cubes.
std::vector<double> suffix_on_cube(const CoeffField& lambda, const WeightSequence& w, double q, const DyadicCube& p) {
    const Grid& grid = lambda.grid();
    const int n = grid.dimension();
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(grid.cells_per_cube(p.level)));
    const int k_lo = std::max(p.level, lambda.k_min());
    for_each_cell(grid, p, [&](Index c) {
        double T = 0.0;
        for (int k = lambda.k_max(); k >= k_lo; --k) {
            const double a = std::abs(lambda.level(k)[grid.cube_of_cell(c, k)]);
            T += a == 0.0 ? 0.0 : std::pow(std::exp2(0.5 * k * n) * w.at(k)[c] * a, q);
        }
        vals.push_back(T);
    });
    return vals;
}

double quarter_quantile(std::vector<double> vals) {
    const std::size_t N = vals.size();
    const std::size_t t = (N + 3) / 4 - 1;  // ceil(N/4) - 1
    std::nth_element(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(t), vals.end(), std::greater<>());
    return vals[t];
}

void check_m_resolution(const Grid& grid, int level) {
    if (grid.cells_per_cube(level) < 4)
        throw ResolutionError("median functional: cube at level " + std::to_string(level) +
                              " has fewer than 4 cells");
}

}  // namespace

GridFunction g_p(const CoeffField& lambda, const WeightSequence& w, double q, const DyadicCube& p) {
    require_matching_levels(lambda, w);
    check_q(q, false);
    const Grid& grid = lambda.grid();
    grid.check_cube(p);
    GridFunction out(grid, 0.0);
    const auto vals = suffix_on_cube(lambda, w, q, p);
    std::size_t i = 0;
    for_each_cell(grid, p, [&](Index c) { out[c] = std::pow(vals[i++], 1.0 / q); });
    return out;
}

double m_p(const CoeffField& lambda, const WeightSequence& w, double q, const DyadicCube& p) {
    require_matching_levels(lambda, w);
    check_q(q, false);
    lambda.grid().check_cube(p);
    check_m_resolution(lambda.grid(), p.level);
    auto vals = suffix_on_cube(lambda, w, q, p);
    for (double& v : vals) v = std::pow(v, 1.0 / q);
    return quarter_quantile(std::move(vals));
}

GridFunction m_fun(const CoeffField& lambda, const WeightSequence& w, double q) {
    require_matching_levels(lambda, w);
    check_q(q, false);
    const Grid& grid = lambda.grid();
    check_m_resolution(grid, lambda.k_max());
    GridFunction out(grid, 0.0);
    std::vector<double> T(static_cast<std::size_t>(grid.cell_count()), 0.0);
    std::vector<double> vals;
    for (int l = lambda.k_max(); l >= grid.coarsest_level(); --l) {
        if (l >= lambda.k_min()) {
            const auto I = level_integrand(lambda, w, q, l);
            for (std::size_t c = 0; c < T.size(); ++c) T[c] += I[c];
        }
        for (Index i = 0; i < grid.cube_count(l); ++i) {
            const CellWindow win = grid.window(grid.cube_at(l, i));
            vals.clear();
            for_each_cell(grid, win, [&](Index c) { vals.push_back(std::pow(T[c], 1.0 / q)); });
            const double m = quarter_quantile(vals);
            for_each_cell(grid, win, [&](Index c) { out[c] = std::max(out[c], m); });
        }
    }
    return out;
}

double m_fun_p_norm(const CoeffField& lambda, const WeightSequence& w, double p, double q) {
    if (!(p > 0.0) || std::isinf(p)) throw RangeError("m_fun norm: p must lie in (0, infinity)");
    const GridFunction m = m_fun(lambda, w, q);
    CompensatedSum<double> acc;
    for (double v : m.values()) acc += std::pow(v, p);
    return std::pow(acc.value() * lambda.grid().cell_volume(), 1.0 / p);
}

RestrictionSets::RestrictionSets(const Grid& grid, int k_min, std::vector<std::vector<std::uint8_t>> masks, double eps)
    : grid_(grid), k_min_(k_min), masks_(std::move(masks)), eps_(eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw RangeError("restriction sets: eps must lie in (0, 1)");
    if (masks_.empty()) throw RangeError("restriction sets: empty level range");
    grid.check_level(k_min);
    grid.check_level(k_max());
    for (int k = k_min; k <= k_max(); ++k) {
        const auto& mask = masks_[static_cast<std::size_t>(k - k_min)];
        if (static_cast<Index>(mask.size()) != grid.cell_count()) throw ShapeError("restriction mask size");
        std::vector<Index> counts(static_cast<std::size_t>(grid.cube_count(k)), 0);
        for (Index c = 0; c < grid.cell_count(); ++c)
            if (mask[c]) ++counts[grid.cube_of_cell(c, k)];
        const double total = static_cast<double>(grid.cells_per_cube(k));
        for (Index m = 0; m < grid.cube_count(k); ++m) {
            const double frac = static_cast<double>(counts[m]) / total;
            if (!(static_cast<double>(counts[m]) > eps * total))
                throw PreconditionError("restriction sets: |E_Q| must exceed eps |Q| (level " + std::to_string(k) +
                                        ", fraction " + std::to_string(frac) + ")");
            min_fraction_ = std::min(min_fraction_, frac);
        }
    }
}

RestrictionSets RestrictionSets::full(const Grid& grid, int k_min, int k_max, double eps) {
    std::vector<std::vector<std::uint8_t>> masks(static_cast<std::size_t>(k_max - k_min + 1),
                                                 std::vector<std::uint8_t>(static_cast<std::size_t>(grid.cell_count()), 1));
    return RestrictionSets(grid, k_min, std::move(masks), eps);
}

RestrictionSets RestrictionSets::from_m_fun(const CoeffField& lambda, const WeightSequence& w, double q) {
    const Grid& grid = lambda.grid();
    const GridFunction m = m_fun(lambda, w, q);
    std::vector<std::vector<std::uint8_t>> masks;
    std::vector<double> T(static_cast<std::size_t>(grid.cell_count()), 0.0);
    for (int k = lambda.k_max(); k >= lambda.k_min(); --k) {
        const auto I = level_integrand(lambda, w, q, k);
        for (std::size_t c = 0; c < T.size(); ++c) T[c] += I[c];
        std::vector<std::uint8_t> mask(T.size());
        for (std::size_t c = 0; c < T.size(); ++c) mask[c] = std::pow(T[c], 1.0 / q) <= m[static_cast<Index>(c)];
        masks.push_back(std::move(mask));
    }
    std::reverse(masks.begin(), masks.end());
    return RestrictionSets(grid, lambda.k_min(), std::move(masks), 0.75);
}

namespace {

// Marks the chosen level-(k + depth) subcubes of every level-k cube.
template <class Choose>
std::vector<std::uint8_t> subcube_mask(const Grid& grid, int k, int depth, Choose&& choose) {
    if (k + depth > grid.finest_level())
        throw ResolutionError("restriction sets: level " + std::to_string(k) + " too fine for subcube depth");
    const int n = grid.dimension();
    const Index per_side = Index{1} << depth;
    const Index subs = n == 1 ? per_side : per_side * per_side;
    const int fine = k + depth;
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(grid.cell_count()), 0);
    for (Index m = 0; m < grid.cube_count(k); ++m) {
        const DyadicCube q = grid.cube_at(k, m);
        std::vector<std::uint8_t> pick = choose(q, subs);
        for (Index s = 0; s < subs; ++s) {
            if (!pick[s]) continue;
            DyadicCube sub{fine, {}};
            sub.index[0] = q.index[0] * per_side + (n == 1 ? s : s / per_side);
            if (n == 2) sub.index[1] = q.index[1] * per_side + s % per_side;
            for_each_cell(grid, sub, [&](Index c) { mask[c] = 1; });
        }
    }
    return mask;
}

}  // namespace

RestrictionSets RestrictionSets::random(const Grid& grid, int k_min, int k_max, double eps, int depth,
                                        std::uint64_t seed) {
    if (!(eps > 0.0 && eps < 1.0)) throw RangeError("restriction sets: eps must lie in (0, 1)");
    if (depth < 1) throw RangeError("restriction sets: depth must be >= 1");
    std::vector<std::vector<std::uint8_t>> masks;
    for (int k = k_min; k <= k_max; ++k) {
        masks.push_back(subcube_mask(grid, k, depth, [&](const DyadicCube& q, Index subs) {
            std::uint64_t h = splitmix64(seed);
            h = splitmix64(h ^ static_cast<std::uint64_t>(q.level + 1000));
            h = splitmix64(h ^ static_cast<std::uint64_t>(q.index[0]));
            h = splitmix64(h ^ static_cast<std::uint64_t>(q.index[1]));
            Rng rng(h);
            const Index want = std::min<Index>(subs, static_cast<Index>(std::floor(eps * double(subs))) + 1);
            std::vector<Index> order(static_cast<std::size_t>(subs));
            std::iota(order.begin(), order.end(), Index{0});
            for (Index i = 0; i < want; ++i) {
                const Index j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(subs - i)));
                std::swap(order[i], order[j]);
            }
            std::vector<std::uint8_t> pick(static_cast<std::size_t>(subs), 0);
            for (Index i = 0; i < want; ++i) pick[order[i]] = 1;
            return pick;
        }));
    }
    return RestrictionSets(grid, k_min, std::move(masks), eps);
}

RestrictionSets RestrictionSets::lower_left_quarter(const Grid& grid, int k_min, int k_max, double eps) {
    const int depth = grid.dimension() == 1 ? 2 : 1;
    std::vector<std::vector<std::uint8_t>> masks;
    for (int k = k_min; k <= k_max; ++k)
        masks.push_back(subcube_mask(grid, k, depth, [](const DyadicCube&, Index subs) {
            std::vector<std::uint8_t> pick(static_cast<std::size_t>(subs), 0);
            pick[0] = 1;
            return pick;
        }));
    return RestrictionSets(grid, k_min, std::move(masks), eps);
}

namespace {

void require_matching_sets(const CoeffField& lambda, const RestrictionSets& e) {
    if (!(e.grid() == lambda.grid()) || e.k_min() != lambda.k_min() || e.k_max() != lambda.k_max())
        throw ShapeError("restriction sets do not match the coefficient levels");
}

}  // namespace

double restricted_norm(const CoeffField& lambda, const WeightSequence& w, double q, const RestrictionSets& e) {
    require_matching_levels(lambda, w);
    require_matching_sets(lambda, e);
    check_q(q, false);
    return sup_over_cubes(lambda.grid(), lambda.k_min(), lambda.k_max(), q,
                          [&](int k) { return level_integrand(lambda, w, q, k, &e); })
        .value;
}

double restricted_norm_linf(const CoeffField& lambda, const WeightSequence& w, double q, const RestrictionSets& e) {
    require_matching_levels(lambda, w);
    require_matching_sets(lambda, e);
    check_q(q, false);
    std::vector<double> T(static_cast<std::size_t>(lambda.grid().cell_count()), 0.0);
    for (int k = lambda.k_max(); k >= lambda.k_min(); --k) {
        const auto I = level_integrand(lambda, w, q, k, &e);
        for (std::size_t c = 0; c < T.size(); ++c) T[c] += I[c];
    }
    return std::pow(*std::max_element(T.begin(), T.end()), 1.0 / q);
}

}  // namespace tlw
