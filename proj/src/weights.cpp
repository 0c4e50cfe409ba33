#include "tlw/weights.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tlw {

void require_positive(const GridFunction& t, const char* what) {
    for (double v : t.values())
        if (!(v > 0.0) || !std::isfinite(v))
            throw PositivityError(std::string(what) + ": weight must be finite and strictly positive");
}

WeightSequence::WeightSequence(Grid grid, int k_min, std::vector<GridFunction> levels, WeightMeta meta)
    : grid_(grid), k_min_(k_min), levels_(std::move(levels)), meta_(meta) {
    if (levels_.empty()) throw RangeError("weight sequence: empty level range");
    for (const auto& t : levels_) {
        if (!(t.grid() == grid_)) throw ShapeError("weight sequence: level on a different grid");
        require_positive(t, "weight sequence");
    }
}

WeightSequence WeightSequence::exp2(const Grid& grid, double s, WeightMeta meta) {
    std::vector<GridFunction> levels;
    for (int k = grid.k_min(); k <= grid.k_max(); ++k) levels.emplace_back(grid, std::exp2(k * s));
    WeightSequence w(grid, grid.k_min(), std::move(levels), meta);
    w.exp2_s_ = s;
    return w;
}

WeightSequence WeightSequence::exp2_times(const GridFunction& base, double s, WeightMeta meta) {
    require_positive(base, "exp2 base");
    const Grid& grid = base.grid();
    std::vector<GridFunction> levels;
    for (int k = grid.k_min(); k <= grid.k_max(); ++k) {
        GridFunction t = base;
        const double scale = std::exp2(k * s);
        for (double& v : t.values()) v *= scale;
        levels.push_back(std::move(t));
    }
    WeightSequence w(grid, grid.k_min(), std::move(levels), meta);
    w.exp2_s_ = s;
    w.exp2_base_ = base;
    return w;
}

WeightSequence WeightSequence::power(const Grid& grid, double s, double alpha, WeightMeta meta) {
    GridFunction base(grid);
    for (Index c = 0; c < grid.cell_count(); ++c) {
        const auto x = grid.cell_center(c);
        base[c] = std::pow(std::hypot(x[0], x[1]), alpha);
    }
    return exp2_times(base, s, meta);
}

WeightSequence WeightSequence::constant_in_k(const GridFunction& t, WeightMeta meta) {
    return exp2_times(t, 0.0, meta);
}

const GridFunction& WeightSequence::at(int k) const {
    if (!covers(k))
        throw RangeError("weight sequence: level " + std::to_string(k) + " not stored");
    return levels_[static_cast<std::size_t>(k - k_min_)];
}

WeightSequence WeightSequence::shifted(int shift, int k_min, int k_max) const {
    if (k_min > k_max) throw RangeError("weight sequence: empty level range");
    if (!covers(k_min - shift) || !covers(k_max - shift))
        throw RangeError("weight sequence: shifted range leaves the stored levels");
    std::vector<GridFunction> levels;
    for (int k = k_min; k <= k_max; ++k) levels.push_back(at(k - shift));
    WeightSequence w(grid_, k_min, std::move(levels), meta_);
    if (shift == 0) {
        w.exp2_s_ = exp2_s_;
        w.exp2_base_ = exp2_base_;
    }
    return w;
}

WeightSequence WeightSequence::transformed(double power, double exp2_per_level) const {
    std::vector<GridFunction> levels;
    for (int k = k_min(); k <= k_max(); ++k) {
        GridFunction t = at(k);
        const double scale = std::exp2(k * exp2_per_level);
        for (double& v : t.values()) v = scale * std::pow(v, power);
        levels.push_back(std::move(t));
    }
    WeightSequence w(grid_, k_min_, std::move(levels), meta_);
    if (exp2_s_) {
        w.exp2_s_ = *exp2_s_ * power + exp2_per_level;
        if (exp2_base_) {
            GridFunction b = *exp2_base_;
            for (double& v : b.values()) v = std::pow(v, power);
            w.exp2_base_ = std::move(b);
        }
    }
    return w;
}

namespace {

void check_exponent(double p) {
    if (!(p > 0.0) || std::isnan(p)) throw RangeError("mean exponent must be > 0 or infinity");
}

// Average of term(cell) over the window.
template <class Fn>
double scaled_power_mean(const Grid& grid, const CellWindow& w, Fn&& term) {
    CompensatedSum<double> acc;
    for_each_cell(grid, w, [&](Index cell) { acc += term(cell); });
    const double count = grid.dimension() == 1 ? double(w.side) : double(w.side) * double(w.side);
    return acc.value() / count;
}

}  // namespace

double window_mean_p(const GridFunction& t, const CellWindow& w, double p) {
    check_exponent(p);
    const Grid& grid = t.grid();
    if (!grid.contains(w)) throw DomainError("window outside the domain");
    if (std::isinf(p)) {
        double m = 0.0;
        for_each_cell(grid, w, [&](Index cell) { m = std::max(m, std::abs(t[cell])); });
        return m;
    }
    // Scaling by the window max keeps constant windows exact and avoids overflow.
    double c = 0.0;
    for_each_cell(grid, w, [&](Index cell) { c = std::max(c, std::abs(t[cell])); });
    if (c == 0.0) return 0.0;
    const double mean = scaled_power_mean(grid, w, [&](Index cell) { return std::pow(std::abs(t[cell]) / c, p); });
    return c * std::pow(mean, 1.0 / p);
}

double cube_mean_p(const GridFunction& t, const DyadicCube& q, double p) {
    check_exponent(p);
    t.grid().check_cube(q);
    return window_mean_p(t, t.grid().window(q), p);
}

std::vector<std::vector<double>> mean_pyramid(const GridFunction& t, double p, int coarsest) {
    check_exponent(p);
    const Grid& grid = t.grid();
    grid.check_level(coarsest);
    const int J = grid.finest_level();
    std::vector<std::vector<double>> out(static_cast<std::size_t>(J - coarsest + 1));
    if (std::isinf(p)) {
        std::vector<double> cur(t.values().begin(), t.values().end());
        for (double& v : cur) v = std::abs(v);
        out.back() = cur;
        for (int k = J - 1; k >= coarsest; --k) {
            const auto& fine = out[k - coarsest + 1];
            std::vector<double> coarse(static_cast<std::size_t>(grid.cube_count(k)), 0.0);
            for (Index c = 0; c < static_cast<Index>(fine.size()); ++c) {
                // fine cube c at level k+1 -> parent at level k
                const DyadicCube child = grid.cube_at(k + 1, c);
                DyadicCube parent{k, {child.index[0] >> 1, child.index[1] >> 1}};
                double& slot = coarse[grid.linear_index(parent)];
                slot = std::max(slot, fine[c]);
            }
            out[k - coarsest] = std::move(coarse);
        }
        return out;
    }
    std::vector<double> powered(t.values().begin(), t.values().end());
    for (double& v : powered) v = std::pow(std::abs(v), p);
    out = cube_sums<double>(grid, powered, coarsest);
    for (int k = coarsest; k <= J; ++k) {
        const double count = static_cast<double>(grid.cells_per_cube(k));
        for (double& v : out[k - coarsest]) v = std::pow(v / count, 1.0 / p);
    }
    return out;
}

std::vector<double> cube_lq_norms(const GridFunction& t, double q, int k) {
    const Grid& grid = t.grid();
    grid.check_level(k);
    check_exponent(q);
    auto means = mean_pyramid(t, q, k);
    std::vector<double> out = std::move(means.front());
    if (std::isinf(q)) return out;
    // ||t|L_q(Q)|| = |Q|^{1/q} M_{Q,q}(t)
    const double scale = std::pow(grid.cube_volume(k), 1.0 / q);
    for (double& v : out) v *= scale;
    return out;
}

std::vector<AuditCube> dyadic_family(const Grid& grid, int k_lo, int k_hi) {
    grid.check_level(k_lo);
    grid.check_level(k_hi);
    std::vector<AuditCube> out;
    for (int k = k_lo; k <= k_hi; ++k)
        for (Index i = 0; i < grid.cube_count(k); ++i) out.push_back({grid.window(grid.cube_at(k, i)), k, true});
    return out;
}

std::vector<AuditCube> dyadic_family(const Grid& grid) {
    return dyadic_family(grid, grid.coarsest_level(), grid.finest_level());
}

std::vector<AuditCube> shifted_family(const Grid& grid, int k_lo, int k_hi) {
    std::vector<AuditCube> out = dyadic_family(grid, k_lo, k_hi);
    const int n = grid.dimension();
    for (int k = k_lo; k <= k_hi; ++k) {
        const Index side = grid.cube_side_cells(k);
        const Index shift = side / 3;
        if (shift == 0) continue;
        for (int mask = 1; mask < (1 << n); ++mask) {
            for (Index i = 0; i < grid.cube_count(k); ++i) {
                CellWindow w = grid.window(grid.cube_at(k, i));
                for (int a = 0; a < n; ++a)
                    if (mask & (1 << a)) w.origin[a] += shift;
                if (grid.contains(w)) out.push_back({w, k, false});
            }
        }
    }
    return out;
}

double ap_cube_value(const GridFunction& gamma, double p, const CellWindow& w) {
    if (!(p >= 1.0)) throw RangeError("A_p: p must be >= 1");
    const Grid& grid = gamma.grid();
    if (!grid.contains(w)) throw DomainError("window outside the domain");
    const double c = gamma[grid.cell_linear(w.origin)];
    if (!(c > 0.0)) throw PositivityError("A_p: weight must be strictly positive");
    CompensatedSum<double> direct;
    CompensatedSum<double> dual;
    double dual_max = 0.0;
    const double r = std::isinf(p) ? 0.0 : 1.0 / (p - 1.0);
    bool positive = true;
    for_each_cell(grid, w, [&](Index cell) {
        const double g = gamma[cell];
        if (!(g > 0.0)) positive = false;
        direct += g / c;
        if (p == 1.0)
            dual_max = std::max(dual_max, c / g);
        else
            dual += std::pow(c / g, r);
    });
    if (!positive) throw PositivityError("A_p: weight must be strictly positive");
    const double count = grid.dimension() == 1 ? double(w.side) : double(w.side) * double(w.side);
    const double m = direct.value() / count;
    if (p == 1.0) return m * dual_max;
    return m * std::pow(dual.value() / count, p - 1.0);
}

double ap_cube_value(const GridFunction& gamma, double p, const DyadicCube& q) {
    gamma.grid().check_cube(q);
    return ap_cube_value(gamma, p, gamma.grid().window(q));
}

ApReport ap_constant(const GridFunction& gamma, double p, std::span<const AuditCube> family, bool keep_per_cube) {
    if (family.empty()) throw RangeError("A_p: empty cube family");
    require_positive(gamma, "A_p");
    ApReport report;
    report.p = p;
    report.constant = -1.0;
    if (keep_per_cube) report.per_cube.reserve(family.size());
    for (const AuditCube& q : family) {
        const double v = ap_cube_value(gamma, p, q.window);
        if (keep_per_cube) report.per_cube.push_back(v);
        if (v > report.constant) {
            report.constant = v;
            report.argmax = q;
        }
    }
    return report;
}

std::pair<double, double> ap_duality_identity(const GridFunction& gamma, double p, const DyadicCube& q) {
    if (p == 1.0) throw UnsupportedError("A_p duality: p = 1 has no finite conjugate");
    if (!(p > 1.0) || std::isinf(p)) throw RangeError("A_p duality: p must lie in (1, infinity)");
    require_positive(gamma, "A_p duality");
    const double pc = conjugate_exponent(p);
    GridFunction dual(gamma.grid());
    for (Index c = 0; c < gamma.size(); ++c) dual[c] = std::pow(gamma[c], 1.0 - pc);
    const double a = ap_cube_value(dual, pc, q);
    const double b = std::pow(ap_cube_value(gamma, p, q), pc - 1.0);
    return {a, b};
}

SubsetMeans subset_means(const GridFunction& gamma, double p, const DyadicCube& q, std::span<const Index> e_cells) {
    const Grid& grid = gamma.grid();
    grid.check_cube(q);
    if (e_cells.empty()) throw RangeError("subset means: empty subset");
    const Index parent = grid.linear_index(q);
    CompensatedSum<double> e_sum;
    for (Index cell : e_cells) {
        if (cell < 0 || cell >= grid.cell_count() || grid.cube_of_cell(cell, q.level) != parent)
            throw DomainError("subset means: cell outside the cube");
        e_sum += gamma[cell];
    }
    const double ratio = static_cast<double>(e_cells.size()) / static_cast<double>(grid.cells_per_cube(q.level));
    SubsetMeans out;
    out.lhs = std::pow(ratio, p - 1.0) * cube_mean_p(gamma, q, 1.0);
    out.mean_e = e_sum.value() / static_cast<double>(e_cells.size());
    return out;
}

DoublingFit fit_subset_exponent(const GridFunction& gamma, const DyadicCube& q) {
    const Grid& grid = gamma.grid();
    grid.check_cube(q);
    const double mq = cube_mean_p(gamma, q, 1.0);
    const auto pyramid = mean_pyramid(gamma, 1.0, q.level);
    std::vector<double> xs, ys;
    const int n = grid.dimension();
    for (int k = q.level + 1; k <= grid.finest_level(); ++k) {
        const int d = k - q.level;
        const double x = -n * d * std::log(2.0);
        const Index side = Index{1} << d;
        const Index per_axis = grid.cubes_per_axis(k);
        for (Index a = 0; a < side; ++a)
            for (Index b = 0; b < (n == 1 ? 1 : side); ++b) {
                const Index i0 = q.index[0] * side + a;
                const Index lin = n == 1 ? i0 : i0 * per_axis + q.index[1] * side + b;
                xs.push_back(x);
                ys.push_back(std::log(pyramid[k - q.level][lin] / mq));
            }
    }
    DoublingFit fit;
    fit.samples = static_cast<int>(xs.size());
    if (xs.empty()) return fit;
    const double nx = static_cast<double>(xs.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) sx += xs[i], sy += ys[i];
    const double mx = sx / nx, my = sy / nx;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxx > 0 ? sxy / sxx : 0.0;
    fit.delta = slope + 1.0;
    double log_c = -kInfinity;
    for (std::size_t i = 0; i < xs.size(); ++i) log_c = std::max(log_c, ys[i] - slope * xs[i]);
    fit.constant = std::exp(log_c);
    return fit;
}

namespace {

double growth_rate(const std::vector<double>& profile) {
    const int g = static_cast<int>(profile.size()) - 1;
    if (g <= 0) return 0.0;
    return (std::log2(profile.back()) - std::log2(profile.front())) / g;
}

}  // namespace

XClassReport verify_x_class(const WeightSequence& w, double alpha1, double alpha2, double sigma1, double sigma2,
                            double p, double tolerance) {
    return verify_x_class(w, alpha1, alpha2, sigma1, sigma2, p, w.grid().coarsest_level(), tolerance, true);
}

XClassReport verify_x_class(const WeightSequence& w, double alpha1, double alpha2, double sigma1, double sigma2,
                            double p, int cube_lo, double tolerance, bool allow_closed_form) {
    check_exponent(p);
    check_exponent(sigma1);
    check_exponent(sigma2);
    const Grid& grid = w.grid();
    grid.check_level(cube_lo);
    const int J = grid.finest_level();
    const int k0 = w.k_min(), k1 = w.k_max();
    const int gaps = k1 - k0 + 1;

    XClassReport rep;
    rep.tolerance = tolerance;
    rep.profile1.assign(static_cast<std::size_t>(gaps), 0.0);
    rep.profile2.assign(static_cast<std::size_t>(gaps), 0.0);

    auto record = [&](double v, std::vector<double>& profile, double& best, XWitness& wit, int k, int j,
                      const DyadicCube& q) {
        double& slot = profile[static_cast<std::size_t>(j - k)];
        slot = std::max(slot, v);
        if (v > best) {
            best = v;
            wit = {k, j, q, v};
        }
    };

    const auto s_tag = w.exp2_exponent();
    if (allow_closed_form && s_tag) {
        // t_k = 2^{ks} b: the gap enters only through 2^{(alpha1 - s) g} and
        // 2^{(s - alpha2) g}; the cube factor is computed once per Q.
        rep.used_closed_form = true;
        const double s = *s_tag;
        std::vector<std::vector<double>> bp, bs1, bs2;
        const bool has_base = w.exp2_base().has_value();
        if (has_base) {
            const GridFunction& b = *w.exp2_base();
            GridFunction inv(grid);
            for (Index c = 0; c < grid.cell_count(); ++c) inv[c] = 1.0 / b[c];
            bp = mean_pyramid(b, p, cube_lo);
            bs1 = mean_pyramid(inv, sigma1, cube_lo);
            bs2 = mean_pyramid(b, sigma2, cube_lo);
        }
        for (int l = cube_lo; l <= J; ++l) {
            for (Index m = 0; m < grid.cube_count(l); ++m) {
                const std::size_t li = static_cast<std::size_t>(l - cube_lo);
                const double f1 = has_base ? bp[li][m] * bs1[li][m] : 1.0;
                const double f2 = has_base ? bs2[li][m] / bp[li][m] : 1.0;
                const DyadicCube q = grid.cube_at(l, m);
                for (int k = k0; k <= k1; ++k)
                    for (int j = k; j <= k1; ++j) {
                        const int g = j - k;
                        record(f1 * std::exp2((alpha1 - s) * g), rep.profile1, rep.c1, rep.witness1, k, j, q);
                        record(f2 * std::exp2((s - alpha2) * g), rep.profile2, rep.c2, rep.witness2, k, j, q);
                    }
            }
        }
    } else {
        std::vector<std::vector<std::vector<double>>> mp, m1, m2;
        for (int k = k0; k <= k1; ++k) {
            const GridFunction& t = w.at(k);
            GridFunction inv(grid);
            for (Index c = 0; c < grid.cell_count(); ++c) inv[c] = 1.0 / t[c];
            mp.push_back(mean_pyramid(t, p, cube_lo));
            m1.push_back(mean_pyramid(inv, sigma1, cube_lo));
            m2.push_back(mean_pyramid(t, sigma2, cube_lo));
        }
        for (int l = cube_lo; l <= J; ++l) {
            const std::size_t li = static_cast<std::size_t>(l - cube_lo);
            for (Index m = 0; m < grid.cube_count(l); ++m) {
                const DyadicCube q = grid.cube_at(l, m);
                for (int k = k0; k <= k1; ++k)
                    for (int j = k; j <= k1; ++j) {
                        const double a = mp[k - k0][li][m];
                        const int g = j - k;
                        record(a * m1[j - k0][li][m] * std::exp2(alpha1 * g), rep.profile1, rep.c1, rep.witness1,
                               k, j, q);
                        record(m2[j - k0][li][m] * std::exp2(-alpha2 * g) / a, rep.profile2, rep.c2, rep.witness2,
                               k, j, q);
                    }
            }
        }
    }
    rep.growth1 = growth_rate(rep.profile1);
    rep.growth2 = growth_rate(rep.profile2);
    rep.holds1 = rep.growth1 <= tolerance;
    rep.holds2 = rep.growth2 <= tolerance;
    return rep;
}

bool alpha_consistency(const XClassReport& report, double alpha1, double alpha2, double sigma1, double sigma2,
                       double p) {
    // Every sigma1 > 0 equals theta (p/theta)' with theta = p sigma1 / (p + sigma1) < p.
    if (!(sigma1 > 0.0)) throw PreconditionError("alpha consistency: sigma1 must be positive");
    if (!(sigma2 >= p)) throw PreconditionError("alpha consistency: requires sigma2 >= p");
    if (!report.holds1 || !report.holds2) return true;
    return alpha2 + 2.0 * report.tolerance >= alpha1;
}

}  // namespace tlw
