#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tlw/io.hpp"

namespace tlw {

/// Parameters shared by every fixture kind; unused fields are ignored.
struct FixtureParams {
    int n = 1;
    int L = 1;
    int J = 6;
    std::optional<int> k_min;  ///< default -L
    std::optional<int> k_max;  ///< default J (weights) or J - 1 (signals)
    double s = 0.0;
    double alpha = 0.0;
    int level = 0;        ///< random-ap: weight constant on cubes of this level
    double ratio = 4.0;   ///< random-ap: values in [1/ratio, ratio]
    int band_lo = 0;      ///< band-signal
    int band_hi = 1;
    Encoding encoding = Encoding::Binary;
    std::uint64_t seed = 1;
};

const std::vector<std::string>& fixture_kinds();

/// Writes a deterministic fixture at `header`; ConfigError for invalid params.
///   exp2, power  -> weight sequence 2^{ks} and 2^{ks} |x|^alpha
///   random-ap    -> weight sequence 2^{ks} w with w piecewise constant, J-independent
///   band-signal  -> complex grid function, header adds "band": [lo, hi]
///   coeff-field  -> complex normal coefficients
void write_fixture(const std::string& kind, const FixtureParams& params, const std::filesystem::path& header);

/// The random-ap base weight.
GridFunction random_step_weight(const Grid& grid, int level, double ratio, std::uint64_t seed);

}  // namespace tlw
