// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <cfloat>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tlw/duality.hpp"
#include "tlw/fixtures.hpp"
#include "tlw/maximal.hpp"
#include "tlw/phitransform.hpp"

using namespace tlw;

namespace {

using Family = std::function<WeightSequence(const Grid&)>;

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        notes.push_back((ok ? "ok   " : "FAIL ") + what);
    }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double rel_dev(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

double drift(double at_j, double at_j1) { return std::abs(at_j1 / at_j - 1.0); }

constexpr double kRefinement = 0.10;

// Stability of a measured constant under J -> J + 1.
void refinement(Outcome& o, const std::string& name, const std::function<double(const Grid&)>& measure,
                const Grid& g) {
    const Grid fine(g.dimension(), g.domain_exponent(), g.finest_level() + 1, g.k_min(), g.k_max());
    const double a = measure(g), b = measure(fine);
    o.require(std::isfinite(a) && std::isfinite(b) && drift(a, b) <= kRefinement,
              name + fmt(": %.6g at J=%g, %.6g at J+1, drift %.3g", a, g.finest_level(), b, drift(a, b)));
}

// Nonnegative function constant on level-`level` cubes, so it does not change with J.
GridFunction piecewise_random(const Grid& grid, int level, Rng& rng) {
    std::vector<double> per_cube(static_cast<std::size_t>(grid.cube_count(level)));
    for (double& v : per_cube) v = rng.log_uniform(1e-2, 1.0) * (rng.uniform() < 0.25 ? 0.0 : 1.0);
    GridFunction f(grid);
    for (Index c = 0; c < f.size(); ++c) f[c] = per_cube[static_cast<std::size_t>(grid.cube_of_cell(c, level))];
    return f;
}

CoeffField random_field(const Grid& g, Rng& rng) { return CoeffField::random(g, g.k_min(), g.k_max(), rng, true); }

WeightSequence exp2_family(const Grid& g) { return WeightSequence::exp2(g, 0.5); }
WeightSequence power_family(const Grid& g) { return WeightSequence::power(g, 0.25, 0.5); }
// Cube-constant A_p weight times 2^{-k/4}.
WeightSequence step_family(const Grid& g) {
    return WeightSequence::exp2_times(random_step_weight(g, g.k_min(), 4.0, 17), -0.25);
}

struct Named {
    const char* name;
    Family make;
};
const std::vector<Named> kFamilies = {{"exp2", exp2_family}, {"power", power_family}, {"step", step_family}};
const std::vector<Named> kStableFamilies = {{"exp2", exp2_family}, {"step", step_family}};

const Grid kLine(1, 2, 6, -1, 3);
const Grid kPlane(2, 1, 4, -1, 2);

// ---- 1. f_inf equals its cube-averaged form

Outcome criterion1() {
    Outcome o;
    for (const Grid& g : {kLine, kPlane})
        for (const auto& fam : kFamilies) {
            const WeightSequence w = fam.make(g);
            Rng rng(101);
            double worst = 0.0;
            for (int t = 0; t < 100; ++t) {
                const CoeffField l = random_field(g, rng);
                for (double q : {1.0, 2.0, 3.0}) worst = std::max(worst, rel_dev(f_inf_norm(l, w, q), f_inf_norm_cubeavg(l, w, q)));
            }
            o.require(worst <= 1e-12, std::string(fam.name) + fmt(" n=%g: max rel dev %.3g over 100 fields", g.dimension(), worst));
        }
    return o;
}

// ---- 2. A_p duality identity

Outcome criterion2() {
    Outcome o;
    Rng rng(202);
    double worst = 0.0;
    int cubes = 0;
    for (int t = 0; t < 50; ++t) {
        const Grid g = t % 2 ? kPlane : kLine;
        GridFunction gamma(g);
        if (t % 4 < 2) {
            gamma = random_step_weight(g, static_cast<int>(rng.below(3)), rng.uniform(1.5, 20.0), rng.next());
        } else {
            for (double& v : gamma.values()) v = rng.log_uniform(1e-3, 1e3);
        }
        for (double p : {1.5, 2.0, 3.0})
            for (int k = g.coarsest_level(); k <= g.finest_level(); ++k)
                for (const DyadicCube& q : cubes_at_level(g, k)) {
                    const auto [a, b] = ap_duality_identity(gamma, p, q);
                    worst = std::max(worst, rel_dev(a, b));
                    ++cubes;
                }
    }
    o.require(worst <= 1e-12, fmt("50 weights, %g cube evaluations: max rel dev %.3g", cubes, worst));
    return o;
}

// ---- 3. exactness of the class constants for 2^{ks}

Outcome criterion3() {
    Outcome o;
    const double eps = 4 * DBL_EPSILON;
    for (const Grid& g : {Grid(1, 2, 6, -2, 3), Grid(2, 1, 4, -1, 2)})
        for (double s : {-1.0, -0.5, 0.0, 0.5, 1.5})
            for (bool closed : {true, false}) {
                const WeightSequence w = WeightSequence::exp2(g, s);
                const XClassReport r = verify_x_class(w, s, s, 2.0, 2.0, 2.0, g.coarsest_level(), 0.05, closed);
                const double dev = std::max(std::abs(r.c1 - 1.0), std::abs(r.c2 - 1.0));
                o.require(r.holds1 && r.holds2 && dev <= eps,
                          fmt("n=%g s=%g", g.dimension(), s) + (closed ? " closed form" : " numeric") +
                              fmt(": C1 = %.17g, C2 = %.17g", r.c1, r.c2));
                const XClassReport bad = verify_x_class(w, s + 1.0, s, 2.0, 2.0, 2.0, g.coarsest_level(), 0.05, closed);
                const bool witnessed = bad.witness1.k <= bad.witness1.j && bad.witness1.value > 1.0 && bad.profile1.size() > 1;
                o.require(!bad.holds1 && bad.growth1 > bad.tolerance && witnessed,
                          fmt("  alpha1 = s+1 rejected: growth %.4g, witness (k=%g, j=%g) value %.4g", bad.growth1,
                              bad.witness1.k, bad.witness1.j, bad.witness1.value));
            }
    return o;
}

// ---- 4. Chebyshev bound and median equivalence

Outcome criterion4() {
    Outcome o;
    for (const Grid& g : {kLine, kPlane})
        for (const auto& fam : kStableFamilies) {
            const std::string tag = std::string(fam.name) + fmt(" n=%g", g.dimension());
            const WeightSequence w = fam.make(g);
            Rng rng(404);
            double worst = 0.0;
            int checked = 0;
            for (int t = 0; t < 100; ++t) {
                const CoeffField l = random_field(g, rng);
                for (double q : {1.0, 2.0}) {
                    const double bound = std::pow(4.0, 1.0 / q) * f_inf_norm(l, w, q);
                    for (int k = g.coarsest_level(); k <= g.k_max(); ++k)
                        for (const DyadicCube& P : cubes_at_level(g, k)) {
                            worst = std::max(worst, m_p(l, w, q, P) / bound);
                            ++checked;
                        }
                }
            }
            o.require(worst <= 1.0, tag + fmt(": max m_P / (4^{1/q} ||l||) = %.6g over %g cubes", worst, checked));

            for (const bool lower : {true, false})
                refinement(o, tag + (lower ? " ||l|| / sup m" : " sup m / ||l||"),
                           [&](const Grid& gg) {
                               const WeightSequence ww = fam.make(gg);
                               Rng r(405);
                               double c = 0.0;
                               for (int t = 0; t < 100; ++t) {
                                   const CoeffField l = random_field(gg, r);
                                   const GridFunction m = m_fun(l, ww, 2.0);
                                   const double sup = *std::max_element(m.values().begin(), m.values().end());
                                   const double norm = f_inf_norm(l, ww, 2.0);
                                   c = std::max(c, lower ? norm / sup : sup / norm);
                               }
                               return c;
                           },
                           g);
        }
    return o;
}

// ---- 5. restricted norms

Outcome criterion5() {
    Outcome o;
    for (const Grid& g : {kLine, kPlane})
        for (const auto& fam : kStableFamilies)
            for (double eps : {0.5, 0.75}) {
                const std::string tag = std::string(fam.name) + fmt(" n=%g eps=%g", g.dimension(), eps);
                // Deep enough that E_Q is a proper subset for both eps.
                const int depth = g.dimension() == 1 ? 3 : 2;
                const WeightSequence w = fam.make(g);
                Rng rng(505);
                double worst = 0.0;
                for (int t = 0; t < 100; ++t) {
                    const CoeffField l = random_field(g, rng);
                    const RestrictionSets e = RestrictionSets::random(g, g.k_min(), g.k_max(), eps, depth, rng.next());
                    worst = std::max(worst, restricted_norm(l, w, 2.0, e) / f_inf_norm(l, w, 2.0));
                }
                o.require(worst <= 1.0, tag + fmt(": max restricted / full = %.6g", worst));
                refinement(o, tag + " full / restricted",
                           [&](const Grid& gg) {
                               const WeightSequence ww = fam.make(gg);
                               Rng r(506);
                               double c = 0.0;
                               for (int t = 0; t < 100; ++t) {
                                   const CoeffField l = random_field(gg, r);
                                   const RestrictionSets e =
                                       RestrictionSets::random(gg, gg.k_min(), gg.k_max(), eps, depth, r.next());
                                   c = std::max(c, f_inf_norm(l, ww, 2.0) / restricted_norm(l, ww, 2.0, e));
                               }
                               return c;
                           },
                           g);
            }
    return o;
}

// ---- 6. lambda*

Outcome criterion6() {
    Outcome o;
    for (const Grid& g : {kLine, kPlane})
        for (const auto& fam : kStableFamilies)
            for (int extra : {1, 2}) {
                const double d = 2.0 * g.dimension() + extra;
                const std::string tag = std::string(fam.name) + fmt(" n=%g d=%g", g.dimension(), d);
                const WeightSequence w = fam.make(g);
                Rng rng(606);
                Index bad = 0;
                double low = kInfinity;
                for (int t = 0; t < 50; ++t) {
                    const CoeffField l = random_field(g, rng);
                    const CoeffField star = lambda_star(l, 2.0, d);
                    for (int k = l.k_min(); k <= l.k_max(); ++k) {
                        const auto a = l.level(k), b = star.level(k);
                        for (std::size_t i = 0; i < a.size(); ++i) bad += b[i].real() < std::abs(a[i]);
                    }
                    const auto [ns, nl] = lambda_star_equivalence(l, w, 2.0, d, 0);
                    low = std::min(low, ns / nl);
                }
                o.require(bad == 0, tag + fmt(": %g entries below |lambda|", static_cast<double>(bad)));
                o.require(low >= 1.0, tag + fmt(": min ||lambda*|| / ||lambda|| = %.6g", low));
                refinement(o, tag + " upper ratio",
                           [&](const Grid& gg) {
                               const WeightSequence ww = fam.make(gg);
                               Rng r(607);
                               double c = 0.0;
                               for (int t = 0; t < 50; ++t) {
                                   const auto [ns, nl] = lambda_star_equivalence(random_field(gg, r), ww, 2.0, d, 0);
                                   c = std::max(c, ns / nl);
                               }
                               return c;
                           },
                           g);
            }
    return o;
}

// ---- 7. duality

Outcome criterion7() {
    Outcome o;
    for (const Grid& g : {kLine, kPlane}) {
        const std::string dim = fmt("n=%g", g.dimension());
        for (const auto& fam : kFamilies) {
            const WeightSequence w = fam.make(g);
            for (const auto& [p, q] : std::vector<std::pair<double, double>>{{1.0, 2.0}, {2.0, 2.0}, {1.5, 3.0}}) {
                Rng rng(707);
                double worst = kInfinity, worst_rel = kInfinity;
                for (int t = 0; t < 200; ++t) {
                    const CoeffField s = random_field(g, rng);
                    const CoeffField l = random_field(g, rng);
                    const DualityReport r = p == 1.0 ? hoelder_check_1q(s, l, w, q) : hoelder_check_pq(s, l, w, p, q);
                    worst = std::min(worst, r.slack);
                    worst_rel = std::min(worst_rel, r.slack / (r.factor * r.lhs_norm * r.rhs_norm));
                }
                o.require(worst >= -1e-10, std::string(fam.name) + " " + dim +
                                               fmt(" (p,q)=(%g,%g): min slack %.4g, min relative slack %.4g", p, q,
                                                   worst, worst_rel));
            }
        }
        for (const auto& fam : kStableFamilies) {
            const std::string tag = std::string(fam.name) + " " + dim;
            const WeightSequence w = fam.make(g);
            Rng rng(708);
            double worst = 0.0;
            for (int t = 0; t < 100; ++t)
                worst = std::max(worst, std::abs(constraint_norm(extremal_sequence(random_field(g, rng), w, 2.0), w, 2.0) - 1.0));
            o.require(worst <= 1e-9, tag + fmt(": max |constraint - 1| = %.3g", worst));

            refinement(o, tag + " extremal lower constant",
                       [&](const Grid& gg) {
                           const WeightSequence ww = fam.make(gg);
                           Rng r(709);
                           double c = kInfinity;
                           for (int t = 0; t < 50; ++t) {
                               const ConjugateNormReport rep = conjugate_norm(random_field(gg, r), ww, 2.0);
                               c = std::min(c, rep.extremal_value / rep.plain_norm);
                           }
                           return c;
                       },
                       g);

            Rng kr(710);
            double claim = 0.0;
            for (int t = 0; t < 50; ++t) {
                const CoeffField kappa = random_field(g, kr);
                const int k = g.coarsest_level() + static_cast<int>(kr.below(g.k_max() - g.coarsest_level() + 1));
                const DyadicCube P = g.cube_at(k, static_cast<Index>(kr.below(g.cube_count(k))));
                claim = std::max(claim, d_p_claim(kappa, w, 2.0, P));
            }
            o.require(claim <= 1.0 + 1e-12, tag + fmt(": max D_P claim %.6g (band 1)", claim));
        }
    }
    return o;
}

// ---- 8. phi-transform

Outcome criterion8() {
    Outcome o;
    for (const Grid& g : {Grid(1, 2, 6), Grid(1, 3, 8), Grid(2, 2, 4), Grid(2, 3, 5)}) {
        const FilterInvariants inv = filter_invariants(build_filter_pair(g));
        o.require(inv.max_outside <= 1e-14 && std::abs(inv.min_plateau - 1.0) <= 1e-14 && inv.max_identity_dev <= 1e-12,
                  fmt("filters n=%g L=%g J=%g: outside %.3g", g.dimension(), g.domain_exponent(), g.finest_level(),
                      inv.max_outside) +
                      fmt(", plateau min %.17g, identity dev %.3g", inv.min_plateau, inv.max_identity_dev));
    }
    for (const Grid& g : {Grid(1, 2, 6, -1, 4), Grid(2, 2, 4, -1, 2)}) {
        const FilterPair fp = build_filter_pair(g);
        Rng rng(808);
        double worst = 0.0;
        for (int t = 0; t < 50; ++t) {
            const BandSignal sig = random_band_signal(g, g.k_min(), g.k_max(), rng);
            worst = std::max(worst, roundtrip_residual(sig.values, fp, g.k_min(), g.k_max()));
        }
        o.require(worst <= 1e-9, fmt("roundtrip n=%g: max residual %.3g over 50 signals", g.dimension(), worst));

        for (const auto& fam : kStableFamilies) {
            const auto ratios = [&](const Grid& gg) {
                const FilterPair f = build_filter_pair(gg);
                const WeightSequence w = fam.make(gg);
                Rng r(809);
                double lo = kInfinity, hi = 0.0;
                for (int t = 0; t < 50; ++t) {
                    const BandSignal sig = random_band_signal(gg, gg.k_min(), gg.k_max(), r);
                    const auto [seq, fun] = transfer_check(sig.values, f, w, 2.0, 2.0);
                    lo = std::min(lo, seq / fun);
                    hi = std::max(hi, seq / fun);
                }
                return std::pair{lo, hi};
            };
            const Grid fine(g.dimension(), g.domain_exponent(), g.finest_level() + 1, g.k_min(), g.k_max());
            const auto [lo, hi] = ratios(g);
            const auto [lo1, hi1] = ratios(fine);
            // Band fixed from the J measurement, widened by the refinement tolerance.
            const double band_lo = lo * (1.0 - kRefinement), band_hi = hi * (1.0 + kRefinement);
            o.require(lo > 0.0 && std::isfinite(hi) && lo1 >= band_lo && hi1 <= band_hi,
                      std::string(fam.name) + fmt(" n=%g transfer ratios [%.6g, %.6g] at J", g.dimension(), lo, hi) +
                          fmt(", [%.6g, %.6g] at J+1", lo1, hi1));
        }
    }
    return o;
}

// ---- 9. maximal operator

Outcome criterion9() {
    Outcome o;
    for (const Grid& g : {kLine, kPlane}) {
        const std::string dim = fmt("n=%g", g.dimension());
        const MaximalConfig cfg = MaximalConfig::full(g);
        Rng rng(909);
        Index dominated = 0, monotone = 0, scaled = 0;
        for (int t = 0; t < 20; ++t) {
            const GridFunction f = piecewise_random(g, g.finest_level(), rng);
            GridFunction h = piecewise_random(g, g.finest_level(), rng);
            for (Index c = 0; c < h.size(); ++c) h[c] += f[c];
            const GridFunction mf = maximal(f, cfg), mh = maximal(h, cfg);
            for (Index c = 0; c < f.size(); ++c) {
                dominated += mf[c] < f[c];
                monotone += mf[c] > mh[c];
            }
            for (double s : {0.125, 4.0}) {
                GridFunction fs = f;
                for (double& v : fs.values()) v *= s;
                const GridFunction ms = maximal(fs, cfg);
                for (Index c = 0; c < f.size(); ++c) scaled += ms[c] != s * mf[c];
            }
        }
        o.require(dominated == 0 && monotone == 0 && scaled == 0,
                  dim + fmt(": violations domination %g, monotonicity %g, scaling %g", static_cast<double>(dominated),
                            static_cast<double>(monotone), static_cast<double>(scaled)));

        for (std::uint64_t seed : {17u, 29u}) {
            const auto weight = [seed](const Grid& gg) { return random_step_weight(gg, 0, 4.0, seed); };
            const std::string tag = dim + fmt(" A_p fixture seed %g", static_cast<double>(seed));
            const int base = g.finest_level();
            refinement(o, tag + " scalar ratio",
                       [&](const Grid& gg) {
                           Rng r(910);
                           const GridFunction t = weight(gg);
                           double c = 0.0;
                           for (int i = 0; i < 20; ++i) {
                               const auto v = scalar_maximal_ratio(piecewise_random(gg, base, r), t, 2.0, MaximalConfig::full(gg));
                               if (v) c = std::max(c, *v);
                           }
                           return c;
                       },
                       g);
            refinement(o, tag + " Fefferman-Stein ratio",
                       [&](const Grid& gg) {
                           Rng r(911);
                           const WeightSequence w = WeightSequence::exp2_times(weight(gg), 0.5);
                           double c = 0.0;
                           for (int i = 0; i < 20; ++i) {
                               std::vector<GridFunction> fs;
                               for (int k = w.k_min(); k <= w.k_max(); ++k) fs.push_back(piecewise_random(gg, base, r));
                               const FSRatioReport rep = fs_ratio(fs, w, 2.0, 2.0, MaximalConfig::full(gg));
                               if (rep.ratio) c = std::max(c, *rep.ratio);
                           }
                           return c;
                       },
                       g);
        }

        double decay = 0.0;
        for (double s : {-0.5, 0.5, 1.0}) {
            const WeightSequence w = WeightSequence::exp2(g, s);
            Rng r(912);
            for (int i = 0; i < 20; ++i) {
                const GridFunction f = piecewise_random(g, g.finest_level(), r);
                for (int j = w.k_min(); j <= w.k_max(); ++j) {
                    const auto ref = shifted_maximal_ratio(f, w, j, j, 2.0, cfg);
                    if (!ref) continue;
                    for (int k = w.k_min(); k <= j; ++k)
                        decay = std::max(decay, rel_dev(*shifted_maximal_ratio(f, w, k, j, 2.0, cfg) / *ref,
                                                        std::exp2(s * (k - j))));
                }
            }
        }
        o.require(decay <= 1e-12, dim + fmt(": shifted ratio vs 2^{s(k-j)}, max rel dev %.3g", decay));
    }
    return o;
}

// ---- 10. fast routes against direct loops

WeightSequence random_weights(const Grid& g, Rng& rng) {
    std::vector<GridFunction> levels;
    for (int k = g.k_min(); k <= g.k_max(); ++k) {
        GridFunction t(g);
        for (double& v : t.values()) v = rng.log_uniform(0.1, 10.0);
        levels.push_back(std::move(t));
    }
    return WeightSequence(g, g.k_min(), std::move(levels));
}

Outcome criterion10() {
    Outcome o;
    std::map<std::string, double> worst;
    const auto note = [&](const std::string& op, double a, double b) { worst[op] = std::max(worst[op], rel_dev(a, b)); };
    Rng rng(1010);
    for (int t = 0; t < 20; ++t) {
        const Grid g = t % 2 ? Grid(2, 1, 3 + t % 4 / 2, -1, 1) : Grid(1, 2, 5 + t % 4 / 2, -2, 2);
        const WeightSequence w = random_weights(g, rng);
        const CoeffField l = random_field(g, rng);
        const CoeffField s = random_field(g, rng);
        const GridFunction& t0 = w.at(g.k_min());

        for (int k = g.coarsest_level(); k <= g.finest_level(); ++k)
            for (const DyadicCube& q : cubes_at_level(g, k)) {
                for (double p : {1.0, 2.5, kInfinity}) note("cube_mean_p", cube_mean_p(t0, q, p), oracle::mean_p(t0, q, p));
                for (double p : {1.0, 1.5, 3.0}) note("ap_cube_value", ap_cube_value(t0, p, q), oracle::ap_cube(t0, p, q));
            }
        for (const auto& [p, q] : std::vector<std::pair<double, double>>{{1.0, 2.0}, {2.0, 2.0}, {1.5, kInfinity}, {3.0, 1.0}})
            note("f_pq_norm", f_pq_norm(l, w, p, q), oracle::f_pq(l, w, p, q));
        note("f_pq_norm_star", f_pq_norm_star(l, w, 2.0, 2.0, 0.5), oracle::f_pq_star(l, w, 2.0, 2.0, 0.5));
        for (double q : {1.0, 2.0, 3.0}) {
            note("f_inf_norm", f_inf_norm(l, w, q), oracle::f_inf(l, w, q));
            note("f_inf_norm_cubeavg", f_inf_norm_cubeavg(l, w, q), oracle::f_inf_cubeavg(l, w, q));
        }
        const CoeffField star = lambda_star(l, 2.0, 2.0 * g.dimension() + 1), ostar = oracle::lambda_star(l, 2.0, 2.0 * g.dimension() + 1);
        for (int k = l.k_min(); k <= l.k_max(); ++k)
            for (std::size_t i = 0; i < star.level(k).size(); ++i)
                note("lambda_star", star.level(k)[i].real(), ostar.level(k)[i].real());
        for (int k = g.coarsest_level(); k <= g.k_max(); ++k)
            if (g.cells_per_cube(k) >= 4)
                for (const DyadicCube& P : cubes_at_level(g, k)) note("m_p", m_p(l, w, 2.0, P), oracle::m_p(l, w, 2.0, P));
        const GridFunction mf = m_fun(l, w, 2.0), omf = oracle::m_fun(l, w, 2.0);
        for (Index c = 0; c < mf.size(); ++c) note("m_fun", mf[c], omf[c]);
        const RestrictionSets e = RestrictionSets::random(g, g.k_min(), g.k_max(), 0.5, 1, rng.next());
        note("restricted_norm", restricted_norm(l, w, 2.0, e), oracle::restricted(l, w, 2.0, e));
        note("restricted_norm_linf", restricted_norm_linf(l, w, 2.0, e), oracle::restricted_linf(l, w, 2.0, e));

        GridFunction f(g);
        for (double& v : f.values()) v = rng.normal();
        const GridFunction mx = maximal(f), omx = oracle::maximal(f, g.coarsest_level(), g.finest_level());
        for (Index c = 0; c < mx.size(); ++c) note("maximal", mx[c], omx[c]);
        for (double p : {1.0, 2.0, 3.5, kInfinity}) note("weighted_lp_norm", weighted_lp_norm(f, t0, p), oracle::lp(f, t0, p));
        std::vector<GridFunction> fs;
        for (int k = 0; k < 3; ++k) fs.push_back(piecewise_random(g, g.finest_level(), rng));
        for (double q : {1.0, 2.0, kInfinity}) note("lp_lq_norm", lp_lq_norm(fs, 2.0, q), oracle::lp_lq(fs, 2.0, q));
        const Complex pr = pairing(s, l), opr = oracle::pairing(s, l);
        note("pairing", std::abs(pr - opr) + std::abs(opr), std::abs(opr));
        note("conjugate_functional", conjugate_functional(l, s), oracle::conjugate_functional(l, s));

        ComplexGridFunction z(g);
        for (Complex& v : z.values()) v = rng.complex_normal();
        const auto fast = dft(z), slow = oracle::dft(z);
        double scale = 0.0, err = 0.0;
        for (std::size_t i = 0; i < fast.size(); ++i) {
            scale = std::max(scale, std::abs(slow[i]));
            err = std::max(err, std::abs(fast[i] - slow[i]));
        }
        worst["dft"] = std::max(worst["dft"], err / scale);
    }
    for (const auto& [op, dev] : worst) o.require(dev <= 1e-12, op + fmt(": max rel dev %.3g", dev));
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
        {"exact identity f_inf = cube-averaged f_inf", criterion1},
        {"Muckenhoupt duality identity", criterion2},
        {"class constants of 2^{ks} and rejection of alpha1 = s + 1", criterion3},
        {"Chebyshev bound and median equivalence", criterion4},
        {"restricted norms", criterion5},
        {"lambda* domination and equivalence", criterion6},
        {"duality: Hoelder, extremal sequence, D_P claim", criterion7},
        {"phi-transform: filters, roundtrip, transfer", criterion8},
        {"maximal operator", criterion9},
        {"oracle equivalence", criterion10},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
        std::printf("%s criterion %zu: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
