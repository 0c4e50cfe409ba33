#include "tlw/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace tlw {

namespace {

// out[x] = max of in[a] over starts a in [max(0, x-s+1), min(x, m-1)], x < n.
// Strided so the same routine serves rows and columns.
void sliding_max(const double* in, Index m, Index s, Index n, Index in_stride, double* out, Index out_stride) {
    std::deque<Index> dq;
    Index next = 0;
    for (Index x = 0; x < n; ++x) {
        const Index hi = std::min(x, m - 1);
        while (next <= hi) {
            while (!dq.empty() && in[dq.back() * in_stride] <= in[next * in_stride]) dq.pop_back();
            dq.push_back(next++);
        }
        const Index lo = std::max<Index>(0, x - s + 1);
        while (dq.front() < lo) dq.pop_front();
        out[x * out_stride] = in[dq.front() * in_stride];
    }
}

void check_config(const Grid& grid, const MaximalConfig& cfg) {
    grid.check_level(cfg.min_level);
    grid.check_level(cfg.max_level);
    if (cfg.min_level > cfg.max_level) throw RangeError("maximal: empty side-length range");
}

GridFunction maximal_of_abs(const Grid& grid, std::vector<double> a, const MaximalConfig& cfg) {
    check_config(grid, cfg);
    const Index N = grid.cells_per_axis();
    const int n = grid.dimension();
    const int J = grid.finest_level();
    GridFunction out(grid, 0.0);
    std::vector<double> sums = std::move(a);  // window sums for side s, starts in [0, N-s]
    std::vector<double> avg, tmp;
    for (int k = J; k >= cfg.min_level; --k) {
        const Index s = grid.cube_side_cells(k);
        const Index m = N - s + 1;
        if (k < J) {
            // double the side: W_{2h}[i] = W_h[i] + W_h[i+h]
            const Index h = s / 2;
            const Index mh = N - h + 1;
            std::vector<double> next(static_cast<std::size_t>(n == 1 ? m : m * m));
            if (n == 1) {
                for (Index i = 0; i < m; ++i) next[i] = sums[i] + sums[i + h];
            } else {
                for (Index i = 0; i < m; ++i)
                    for (Index j = 0; j < m; ++j) {
                        const Index r0 = i * mh, r1 = (i + h) * mh;
                        next[i * m + j] = (sums[r0 + j] + sums[r0 + j + h]) + (sums[r1 + j] + sums[r1 + j + h]);
                    }
            }
            sums = std::move(next);
        }
        if (k > cfg.max_level) continue;
        const double inv_volume = std::ldexp(1.0, -(J - k) * n);
        avg.resize(sums.size());
        for (std::size_t i = 0; i < sums.size(); ++i) avg[i] = sums[i] * inv_volume;
        if (n == 1) {
            tmp.resize(static_cast<std::size_t>(N));
            sliding_max(avg.data(), m, s, N, 1, tmp.data(), 1);
            for (Index x = 0; x < N; ++x) out[x] = std::max(out[x], tmp[x]);
        } else {
            // rows of starts first, then columns
            std::vector<double> rows(static_cast<std::size_t>(m * N));
            for (Index i = 0; i < m; ++i) sliding_max(avg.data() + i * m, m, s, N, 1, rows.data() + i * N, 1);
            tmp.resize(static_cast<std::size_t>(N * N));
            for (Index y = 0; y < N; ++y) sliding_max(rows.data() + y, m, s, N, N, tmp.data() + y, N);
            for (Index c = 0; c < N * N; ++c) out[c] = std::max(out[c], tmp[c]);
        }
    }
    return out;
}

}  // namespace

GridFunction maximal(const GridFunction& f, const MaximalConfig& cfg) {
    std::vector<double> a(f.values().begin(), f.values().end());
    for (double& v : a) v = std::abs(v);
    return maximal_of_abs(f.grid(), std::move(a), cfg);
}

GridFunction maximal(const ComplexGridFunction& f, const MaximalConfig& cfg) {
    std::vector<double> a(static_cast<std::size_t>(f.size()));
    for (Index c = 0; c < f.size(); ++c) a[c] = std::abs(f[c]);
    return maximal_of_abs(f.grid(), std::move(a), cfg);
}

GridFunction maximal_sigma(const GridFunction& f, double sigma, const MaximalConfig& cfg) {
    if (!(sigma > 0.0) || std::isinf(sigma)) throw RangeError("maximal_sigma: sigma must lie in (0, infinity)");
    std::vector<double> a(f.values().begin(), f.values().end());
    for (double& v : a) v = std::pow(std::abs(v), sigma);
    GridFunction m = maximal_of_abs(f.grid(), std::move(a), cfg);
    for (double& v : m.values()) v = std::pow(v, 1.0 / sigma);
    return m;
}

double weighted_lp_norm(const GridFunction& f, const GridFunction& t, double p) {
    if (!(f.grid() == t.grid())) throw ShapeError("weighted norm: grids differ");
    if (!(p > 0.0)) throw RangeError("weighted norm: p must be > 0");
    if (std::isinf(p)) {
        double m = 0.0;
        for (Index c = 0; c < f.size(); ++c) m = std::max(m, std::abs(f[c] * t[c]));
        return m;
    }
    CompensatedSum<double> acc;
    for (Index c = 0; c < f.size(); ++c) acc += std::pow(std::abs(f[c] * t[c]), p);
    return std::pow(acc.value() * f.grid().cell_volume(), 1.0 / p);
}

double lp_norm(const GridFunction& f, double p) {
    return weighted_lp_norm(f, GridFunction(f.grid(), 1.0), p);
}

double lp_lq_norm(std::span<const GridFunction> fs, double p, double q) {
    if (fs.empty()) return 0.0;
    if (!(p > 0.0) || !(q > 0.0)) throw RangeError("L_p(l_q) norm: exponents must be > 0");
    const Grid& grid = fs.front().grid();
    GridFunction inner(grid, 0.0);
    for (Index c = 0; c < grid.cell_count(); ++c) {
        if (std::isinf(q)) {
            double m = 0.0;
            for (const auto& f : fs) m = std::max(m, std::abs(f[c]));
            inner[c] = m;
        } else {
            CompensatedSum<double> acc;
            for (const auto& f : fs) acc += std::pow(std::abs(f[c]), q);
            inner[c] = std::pow(acc.value(), 1.0 / q);
        }
    }
    return lp_norm(inner, p);
}

std::optional<double> scalar_maximal_ratio(const GridFunction& f, const GridFunction& t, double p,
                                           const MaximalConfig& cfg) {
    const double den = weighted_lp_norm(f, t, p);
    if (den == 0.0) return std::nullopt;
    return weighted_lp_norm(maximal(f, cfg), t, p) / den;
}

std::optional<double> shifted_maximal_ratio(const GridFunction& f, const WeightSequence& w, int k, int j, double p,
                                            const MaximalConfig& cfg) {
    if (j < k) throw RangeError("shifted maximal: requires j >= k");
    const double den = weighted_lp_norm(f, w.at(j), p);
    if (den == 0.0) return std::nullopt;
    return weighted_lp_norm(maximal(f, cfg), w.at(k), p) / den;
}

FSRatioReport fs_ratio(std::span<const GridFunction> fs, const WeightSequence& w, double p, double q,
                       const MaximalConfig& cfg) {
    if (static_cast<int>(fs.size()) != w.k_max() - w.k_min() + 1)
        throw ShapeError("fs_ratio: level ranges of functions and weights differ");
    std::vector<GridFunction> lhs_terms, rhs_terms;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const GridFunction& t = w.at(w.k_min() + static_cast<int>(i));
        GridFunction m = maximal(fs[i], cfg);
        GridFunction g = fs[i];
        for (Index c = 0; c < m.size(); ++c) {
            m[c] *= t[c];
            g[c] *= t[c];
        }
        lhs_terms.push_back(std::move(m));
        rhs_terms.push_back(std::move(g));
    }
    FSRatioReport rep;
    rep.p = p;
    rep.q = q;
    rep.J = w.grid().finest_level();
    rep.lhs = lp_lq_norm(lhs_terms, p, q);
    rep.rhs = lp_lq_norm(rhs_terms, p, q);
    if (rep.rhs != 0.0) rep.ratio = rep.lhs / rep.rhs;
    return rep;
}

}  // namespace tlw
