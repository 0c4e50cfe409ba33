#include "tlw/phitransform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "tlw/maximal.hpp"

namespace tlw {

namespace {

constexpr double kPlateauLo = 3.0 / 5.0;
constexpr double kPlateauHi = 5.0 / 3.0;
constexpr double kSupportLo = 0.5;
constexpr double kSupportHi = 2.0;

double bump_edge(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// C-infinity step: 0 for x <= 0, 1 for x >= 1.
double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = bump_edge(x);
    return a / (a + bump_edge(1.0 - x));
}

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

void transform(const Grid& grid, std::vector<Complex>& data, int sign) {
    const int N = static_cast<int>(grid.cells_per_axis());
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = grid.dimension() == 1 ? fftw_plan_dft_1d(N, ptr, ptr, sign, FFTW_ESTIMATE)
                                     : fftw_plan_dft_2d(N, N, ptr, ptr, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
}

Index lattice_cell(const Grid& grid, int k, Index m) {
    const DyadicCube q = grid.cube_at(k, m);
    const Index step = grid.cube_side_cells(k);
    return grid.cell_linear({q.index[0] * step, q.index[1] * step});
}

}  // namespace

FilterPair::FilterPair(const Grid& grid, double width) : grid_(grid), width_(width) {
    if (!(width > 0.0 && width <= 1.0)) throw RangeError("filter pair: width must lie in (0, 1]");
    in_lo_ = kPlateauLo - width * (kPlateauLo - kSupportLo);
    out_hi_ = kPlateauHi + width * (kSupportHi - kPlateauHi);
    const Index N = grid.cells_per_axis();
    const double unit = 2.0 * M_PI / grid.domain_side();
    radius_.resize(static_cast<std::size_t>(grid.cell_count()));
    for (Index c = 0; c < grid.cell_count(); ++c) {
        const auto idx = grid.cell_coords(c);
        double nu[2] = {0.0, 0.0};
        for (int a = 0; a < grid.dimension(); ++a) nu[a] = static_cast<double>(idx[a] <= N / 2 ? idx[a] : idx[a] - N);
        radius_[c] = unit * std::hypot(nu[0], nu[1]);
    }
}

double FilterPair::phi(double r) const {
    r = std::abs(r);
    if (r <= in_lo_ || r >= out_hi_) return 0.0;
    if (r < kPlateauLo) return smooth_step((r - in_lo_) / (kPlateauLo - in_lo_));
    if (r <= kPlateauHi) return 1.0;
    return smooth_step((out_hi_ - r) / (out_hi_ - kPlateauHi));
}

double FilterPair::dilation_sum(double r) const {
    r = std::abs(r);
    if (r == 0.0 || std::isinf(r)) return 0.0;
    int e = 0;
    const double rho = 2.0 * std::frexp(r, &e);  // r = rho 2^{e-1}, rho in [1, 2)
    double d = 0.0;
    for (int i = -2; i <= 1; ++i) {
        const double v = phi(std::ldexp(rho, i));
        d += v * v;
    }
    return d;
}

double FilterPair::psi(double r) const {
    const double v = phi(r);
    return v == 0.0 ? 0.0 : v / dilation_sum(r);
}

std::vector<double> FilterPair::phi_level(int k) const {
    std::vector<double> out(radius_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = phi(std::ldexp(radius_[i], -k));
    return out;
}

std::vector<double> FilterPair::psi_level(int k) const {
    std::vector<double> out(radius_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = psi(std::ldexp(radius_[i], -k));
    return out;
}

void FilterPair::check_levels(int k_min, int k_max) const {
    if (k_min > k_max || k_min < lowest_level() || k_max > highest_level())
        throw RangeError("phi-transform: levels must lie in [" + std::to_string(lowest_level()) + ", " +
                         std::to_string(highest_level()) + "]");
}

std::string FilterPair::spectrum_csv() const {
    std::map<double, std::pair<double, double>> rows;
    for (double r : radius_) rows.emplace(r, std::make_pair(phi(r), psi(r)));
    std::ostringstream os;
    os.precision(17);
    os << "radius,phi,psi\n";
    for (const auto& [r, v] : rows) os << r << ',' << v.first << ',' << v.second << '\n';
    return os.str();
}

FilterPair build_filter_pair(const Grid& grid, double width) {
    FilterPair fp(grid, width);
    const auto& r = fp.radius();
    if (std::none_of(r.begin(), r.end(), [](double x) { return x >= kSupportLo && x <= kSupportHi; }))
        throw ResolutionError("filter pair: no represented frequency in the annulus [1/2, 2]");
    return fp;
}

FilterInvariants filter_invariants(const FilterPair& fp) {
    FilterInvariants inv;
    inv.min_plateau = kInfinity;
    const Grid& grid = fp.grid();
    std::vector<double> radii(fp.radius());
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    for (double r : radii) {
        if (r == 0.0) continue;
        for (int k = grid.coarsest_level() - 2; k <= grid.finest_level() + 2; ++k) {
            const double x = std::ldexp(r, -k);
            const double v = fp.phi(x);
            if (x < kSupportLo || x > kSupportHi) inv.max_outside = std::max(inv.max_outside, std::abs(v));
            if (x >= kPlateauLo && x <= kPlateauHi) {
                inv.min_plateau = std::min(inv.min_plateau, std::abs(v));
                ++inv.plateau_samples;
            }
        }
        // Only dilations with 2^{-j} r in (1/2, 2) contribute.
        int e = 0;
        std::frexp(r, &e);
        double sum = 0.0;
        for (int j = e - 4; j <= e + 3; ++j) {
            const double x = std::ldexp(r, -j);
            sum += fp.phi(x) * fp.psi(x);
        }
        inv.max_identity_dev = std::max(inv.max_identity_dev, std::abs(sum - 1.0));
    }
    if (inv.plateau_samples == 0) inv.min_plateau = 0.0;
    return inv;
}

std::vector<Complex> dft(const ComplexGridFunction& f) {
    std::vector<Complex> data(f.values().begin(), f.values().end());
    transform(f.grid(), data, FFTW_FORWARD);
    return data;
}

ComplexGridFunction idft(const Grid& grid, std::vector<Complex> spectrum) {
    if (static_cast<Index>(spectrum.size()) != grid.cell_count()) throw ShapeError("idft: spectrum size");
    transform(grid, spectrum, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(grid.cell_count());
    for (Complex& v : spectrum) v *= scale;
    return ComplexGridFunction(grid, std::move(spectrum));
}

BandSignal random_band_signal(const Grid& grid, int lo, int hi, Rng& rng) {
    if (lo > hi) throw RangeError("band signal: empty band");
    const FilterPair fp(grid, 1.0);
    const double r_lo = std::ldexp(1.0, lo), r_hi = std::ldexp(1.0, hi);
    const Index N = grid.cells_per_axis();
    const std::uint64_t base = rng.next();
    // Coefficients are keyed by the signed frequency and scaled by N^n, so the
    // sampled trigonometric polynomial does not depend on J.
    const double scale = static_cast<double>(grid.cell_count());
    std::vector<Complex> spec(static_cast<std::size_t>(grid.cell_count()));
    bool any = false;
    for (Index c = 0; c < grid.cell_count(); ++c) {
        const double r = fp.radius()[c];
        if (r < r_lo || r > r_hi) continue;
        const auto idx = grid.cell_coords(c);
        std::uint64_t h = base;
        for (int a = 0; a < grid.dimension(); ++a) {
            const Index nu = idx[a] <= N / 2 ? idx[a] : idx[a] - N;
            h = splitmix64(h ^ static_cast<std::uint64_t>(nu));
        }
        Rng local(h);
        spec[c] = scale * local.complex_normal();
        any = true;
    }
    if (!any) throw ResolutionError("band signal: no represented frequency in the band");
    return {idft(grid, std::move(spec)), lo, hi};
}

ComplexGridFunction filter_level(const ComplexGridFunction& f, const FilterPair& fp, int k) {
    if (!(f.grid() == fp.grid())) throw ShapeError("filter: grid mismatch");
    auto spec = dft(f);
    const auto mult = fp.phi_level(k);
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= mult[i];
    return idft(f.grid(), std::move(spec));
}

CoeffField analyze(const ComplexGridFunction& f, const FilterPair& fp, int k_min, int k_max) {
    if (!(f.grid() == fp.grid())) throw ShapeError("analyze: grid mismatch");
    fp.check_levels(k_min, k_max);
    const Grid& grid = f.grid();
    const auto spec = dft(f);
    CoeffField out(grid, k_min, k_max);
    for (int k = k_min; k <= k_max; ++k) {
        const auto mult = fp.phi_level(k);
        std::vector<Complex> s(spec);
        for (std::size_t i = 0; i < s.size(); ++i) s[i] *= mult[i];
        const ComplexGridFunction g = idft(grid, std::move(s));
        const double scale = std::exp2(-0.5 * k * grid.dimension());
        auto dst = out.level(k);
        for (Index m = 0; m < static_cast<Index>(dst.size()); ++m) dst[m] = scale * g[lattice_cell(grid, k, m)];
    }
    return out;
}

ComplexGridFunction synthesize(const CoeffField& lambda, const FilterPair& fp) {
    if (!(lambda.grid() == fp.grid())) throw ShapeError("synthesize: grid mismatch");
    fp.check_levels(lambda.k_min(), lambda.k_max());
    const Grid& grid = lambda.grid();
    const int n = grid.dimension();
    std::vector<Complex> total(static_cast<std::size_t>(grid.cell_count()));
    for (int k = lambda.k_min(); k <= lambda.k_max(); ++k) {
        // Dirac mass 2^{-kn/2} lambda at 2^{-k} m has cell value 2^{-kn/2} lambda / h^n.
        const double scale = std::exp2(n * (grid.finest_level() - 0.5 * k));
        ComplexGridFunction comb(grid);
        const auto src = lambda.level(k);
        for (Index m = 0; m < static_cast<Index>(src.size()); ++m) comb[lattice_cell(grid, k, m)] = scale * src[m];
        const auto spec = dft(comb);
        const auto mult = fp.psi_level(k);
        for (std::size_t i = 0; i < total.size(); ++i) total[i] += mult[i] * spec[i];
    }
    return idft(grid, std::move(total));
}

namespace {

double l2_norm(const ComplexGridFunction& f) {
    CompensatedSum<double> acc;
    for (const Complex& v : f.values()) acc += std::norm(v);
    return std::sqrt(acc.value() * f.grid().cell_volume());
}

}  // namespace

double roundtrip_residual(const ComplexGridFunction& f, const FilterPair& fp, int k_min, int k_max) {
    const double norm = l2_norm(f);
    if (norm == 0.0) return 0.0;
    ComplexGridFunction diff = synthesize(analyze(f, fp, k_min, k_max), fp);
    for (Index c = 0; c < diff.size(); ++c) diff[c] -= f[c];
    return l2_norm(diff) / norm;
}

double spectral_leakage(const ComplexGridFunction& f, const FilterPair& fp, int k_min, int k_max) {
    const auto spec = dft(f);
    const double r_lo = std::ldexp(1.0, k_min), r_hi = std::ldexp(1.0, k_max);
    CompensatedSum<double> all, out;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const double e = std::norm(spec[i]);
        all += e;
        const double r = fp.radius()[i];
        if (r < r_lo || r > r_hi) out += e;
    }
    return all.value() == 0.0 ? 0.0 : std::sqrt(out.value() / all.value());
}

namespace {

// t_k |phi_k * f| for every level of w.
std::vector<GridFunction> weighted_bands(const ComplexGridFunction& f, const FilterPair& fp, const WeightSequence& w) {
    if (!(w.grid() == f.grid())) throw ShapeError("F norm: grid mismatch");
    fp.check_levels(w.k_min(), w.k_max());
    const auto spec = dft(f);
    std::vector<GridFunction> out;
    for (int k = w.k_min(); k <= w.k_max(); ++k) {
        const auto mult = fp.phi_level(k);
        std::vector<Complex> s(spec);
        for (std::size_t i = 0; i < s.size(); ++i) s[i] *= mult[i];
        const ComplexGridFunction g = idft(f.grid(), std::move(s));
        GridFunction a(f.grid());
        const GridFunction& t = w.at(k);
        for (Index c = 0; c < a.size(); ++c) a[c] = t[c] * std::abs(g[c]);
        out.push_back(std::move(a));
    }
    return out;
}

}  // namespace

double F_pq_norm(const ComplexGridFunction& f, const FilterPair& fp, const WeightSequence& w, double p, double q) {
    if (!(p > 0.0) || std::isinf(p)) throw RangeError("F_pq: p must lie in (0, infinity)");
    return lp_lq_norm(weighted_bands(f, fp, w), p, q);
}

double F_inf_norm(const ComplexGridFunction& f, const FilterPair& fp, const WeightSequence& w, double q) {
    if (!(q > 0.0) || std::isinf(q)) throw RangeError("F_inf: q must lie in (0, infinity)");
    const auto bands = weighted_bands(f, fp, w);
    return sup_average_norm(f.grid(), w.k_min(), w.k_max(), q,
                            [&](int k) {
                                const auto& b = bands[static_cast<std::size_t>(k - w.k_min())];
                                std::vector<double> out(b.values().begin(), b.values().end());
                                for (double& v : out) v = std::pow(v, q);
                                return out;
                            })
        .value;
}

std::pair<double, double> transfer_check(const ComplexGridFunction& f, const FilterPair& fp, const WeightSequence& w,
                                         double p, double q) {
    const CoeffField lambda = analyze(f, fp, w.k_min(), w.k_max());
    return {f_pq_norm(lambda, w, p, q), F_pq_norm(f, fp, w, p, q)};
}

}  // namespace tlw
