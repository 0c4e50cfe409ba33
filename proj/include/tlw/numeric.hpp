#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <span>

namespace tlw {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Hoelder conjugate p' with 1/p + 1/p' = 1 (p = 1 maps to infinity).
inline double conjugate_exponent(double p) {
    if (p == 1.0) return kInfinity;
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
}

/// Neumaier-compensated accumulator.
template <class T>
class CompensatedSum {
public:
    CompensatedSum& operator+=(T x) {
        if constexpr (std::is_floating_point_v<T>) {
            add(sum_, comp_, x);
        } else {
            double sr = sum_.real(), cr = comp_.real();
            double si = sum_.imag(), ci = comp_.imag();
            add(sr, cr, x.real());
            add(si, ci, x.imag());
            sum_ = {sr, si};
            comp_ = {cr, ci};
        }
        return *this;
    }

    T value() const { return sum_ + comp_; }

private:
    static void add(double& sum, double& comp, double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }

    T sum_{};
    T comp_{};
};

template <class T>
T compensated_sum(std::span<const T> xs) {
    CompensatedSum<T> acc;
    for (const T& x : xs) acc += x;
    return acc.value();
}

/// Complex sign: z/|z|, with sgn 0 = 0.
inline std::complex<double> sgn(std::complex<double> z) {
    double a = std::abs(z);
    return a == 0.0 ? std::complex<double>{} : z / a;
}

/// Seeded generator whose derived variates do not depend on the standard
/// library's distribution implementations (only the mt19937_64 engine,
/// whose output sequence is fixed by the standard).
/// SplitMix64 finalizer, used to derive independent seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// exp of a uniform variate on [log lo, log hi).
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    /// Standard normal via Box-Muller.
    double normal() {
        double u1 = 1.0 - uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }

    std::complex<double> complex_normal() { return {normal(), normal()}; }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace tlw
