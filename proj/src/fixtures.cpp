#include "tlw/fixtures.hpp"

#include <algorithm>

#include "tlw/phitransform.hpp"

namespace tlw {

const std::vector<std::string>& fixture_kinds() {
    static const std::vector<std::string> kinds = {"exp2", "power", "random-ap", "band-signal", "coeff-field"};
    return kinds;
}

GridFunction random_step_weight(const Grid& grid, int level, double ratio, std::uint64_t seed) {
    grid.check_level(level);
    if (!(ratio >= 1.0)) throw RangeError("random step weight: ratio must be >= 1");
    Rng rng(seed);
    std::vector<double> per_cube(static_cast<std::size_t>(grid.cube_count(level)));
    for (double& v : per_cube) v = rng.log_uniform(1.0 / ratio, ratio);
    GridFunction w(grid);
    for (Index c = 0; c < w.size(); ++c) w[c] = per_cube[static_cast<std::size_t>(grid.cube_of_cell(c, level))];
    return w;
}

void write_fixture(const std::string& kind, const FixtureParams& p, const std::filesystem::path& header) {
    if (std::find(fixture_kinds().begin(), fixture_kinds().end(), kind) == fixture_kinds().end())
        throw ConfigError("kind", "unknown fixture kind '" + kind + "'");
    const bool signal = kind == "band-signal";
    Grid grid(1, 0, 0);
    try {
        grid = Grid(p.n, p.L, p.J);
    } catch (const RangeError& e) {
        throw ConfigError("params.grid", e.what());
    }
    const int k_min = p.k_min.value_or(-p.L);
    const int k_max = p.k_max.value_or(signal ? p.J - 1 : p.J);
    if (k_min < -p.L || k_min > k_max || k_max > p.J)
        throw ConfigError("params.k_min", "levels must satisfy -L <= k_min <= k_max <= J");
    const Grid levels = grid.with_levels(k_min, k_max);
    const Json extra = Json{{"fixture", kind}, {"seed", p.seed}};

    if (kind == "exp2") {
        write_weights(header, WeightSequence::exp2(levels, p.s), Json{{"fixture", kind}, {"s", p.s}});
    } else if (kind == "power") {
        write_weights(header, WeightSequence::power(levels, p.s, p.alpha),
                      Json{{"fixture", kind}, {"s", p.s}, {"alpha", p.alpha}});
    } else if (kind == "random-ap") {
        if (!grid.has_level(p.level)) throw ConfigError("params.level", "must lie in [-L, J]");
        if (!(p.ratio >= 1.0)) throw ConfigError("params.ratio", "must be >= 1");
        const GridFunction base = random_step_weight(grid, p.level, p.ratio, p.seed);
        WeightSequence w = WeightSequence::exp2_times(base, p.s);
        write_weights(header, w.slice(k_min, k_max),
                      Json{{"fixture", kind}, {"s", p.s}, {"level", p.level}, {"ratio", p.ratio}, {"seed", p.seed}});
    } else if (signal) {
        if (p.band_lo > p.band_hi) throw ConfigError("params.band", "band_lo must not exceed band_hi");
        Rng rng(p.seed);
        const BandSignal sig = [&] {
            try {
                return random_band_signal(grid, p.band_lo, p.band_hi, rng);
            } catch (const ResolutionError& e) {
                throw ConfigError("params.band", e.what());
            }
        }();
        Json e = extra;
        e["band"] = {sig.band_lo, sig.band_hi};
        write_grid_function(header, sig.values, p.encoding, e);
    } else {
        Rng rng(p.seed);
        write_coeff_field(header, CoeffField::random(levels, k_min, k_max, rng, true));
    }
}

}  // namespace tlw
