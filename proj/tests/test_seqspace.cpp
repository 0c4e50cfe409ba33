#include <doctest.h>

#include "oracles.hpp"
#include "tlw/seqspace.hpp"

using namespace tlw;

namespace {

WeightSequence ones(const Grid& g) { return WeightSequence::exp2(g, 0.0); }

// Level-dependent weights with strong oscillation inside every cube.
WeightSequence oscillating(const Grid& g, Rng& rng) {
    std::vector<GridFunction> levels;
    for (int k = g.k_min(); k <= g.k_max(); ++k) {
        GridFunction t(g);
        for (double& v : t.values()) v = rng.log_uniform(0.01, 100.0);
        levels.push_back(t);
    }
    return WeightSequence(g, g.k_min(), levels);
}

std::vector<WeightSequence> families(const Grid& g, Rng& rng) {
    return {WeightSequence::exp2(g, 0.7), WeightSequence::power(g, -0.2, 0.5), oscillating(g, rng)};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_SUITE("seqspace") {

TEST_CASE("single-coefficient f_pq norms") {
    const Grid g(1, 1, 4, -1, 2);
    const CoeffField unit = CoeffField::atom(g, -1, 2, DyadicCube{0, {0, 0}});
    for (double p : {0.5, 1.0, 2.0})
        for (double q : {0.5, 2.0, kInfinity}) CHECK(f_pq_norm(unit, ones(g), p, q) == doctest::Approx(1.0).epsilon(1e-15));
    for (const Grid& gg : {Grid(1, 1, 4, -1, 3), Grid(2, 1, 3, -1, 2)}) {
        const int n = gg.dimension();
        for (double s : {-0.5, 0.0, 1.0})
            for (int k = -1; k <= gg.k_max(); ++k)
                for (double p : {1.0, 2.0, 3.0}) {
                    const CoeffField a = CoeffField::atom(gg, gg.k_min(), gg.k_max(), DyadicCube{k, {k < 0 ? 0 : 1, 0}});
                    const double want = std::exp2(k * (n / 2.0 + s - n / p));
                    CHECK(f_pq_norm(a, WeightSequence::exp2(gg, s), p, 2.0) == doctest::Approx(want).epsilon(1e-14));
                }
    }
}

TEST_CASE("f_pq norms match the oracle") {
    Rng rng(31);
    for (const Grid& g : {Grid(1, 1, 4, -1, 2), Grid(2, 1, 2, -1, 1)}) {
        for (const WeightSequence& w : families(g, rng)) {
            const CoeffField l = CoeffField::random(g, g.k_min(), g.k_max(), rng);
            for (double p : {0.7, 1.0, 2.0, 3.0})
                for (double q : {0.5, 1.0, 2.0, kInfinity})
                    CHECK(rel(f_pq_norm(l, w, p, q), oracle::f_pq(l, w, p, q)) <= 1e-12);
            for (double delta : {0.5, 1.0})
                for (double p : {1.0, 2.0})
                    CHECK(rel(f_pq_norm_star(l, w, p, 2.0, delta), oracle::f_pq_star(l, w, p, 2.0, delta)) <= 1e-12);
        }
    }
}

TEST_CASE("star norm equals the plain norm for level-constant weights and delta = 1") {
    Rng rng(32);
    const Grid g(1, 1, 4, -1, 2);
    std::vector<GridFunction> levels;
    for (int k = -1; k <= 2; ++k) levels.emplace_back(g, rng.log_uniform(0.1, 10.0));
    const WeightSequence w(g, -1, levels);
    for (int t = 0; t < 10; ++t) {
        const CoeffField l = CoeffField::random(g, -1, 2, rng);
        for (double p : {1.0, 2.0, 4.0})
            for (double q : {1.0, 3.0}) CHECK(rel(f_pq_norm_star(l, w, p, q, 1.0), f_pq_norm(l, w, p, q)) <= 1e-13);
    }
    CHECK_THROWS_AS(f_pq_norm_star(CoeffField(g), w, 2.0, 2.0, 0.0), RangeError);
    CHECK_THROWS_AS(f_pq_norm_star(CoeffField(g), w, 2.0, 2.0, 1.5), RangeError);
}

TEST_CASE("f_inf norms: unit atom, oracle, homogeneity") {
    Rng rng(33);
    const Grid g(1, 1, 4, 0, 2);
    CHECK(f_inf_norm(CoeffField::atom(g, 0, 2, DyadicCube{0, {0, 0}}), ones(g), 1.0) == 1.0);
    const SupNorm sn = f_inf_norm_detail(CoeffField::atom(g, 0, 2, DyadicCube{0, {1, 0}}), ones(g), 2.0);
    CHECK(sn.value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sn.argmax == DyadicCube{0, {1, 0}});
    for (const Grid& gg : {Grid(1, 2, 3, -1, 2), Grid(2, 1, 2, 0, 1)})
        for (const WeightSequence& w : families(gg, rng)) {
            const CoeffField l = CoeffField::random(gg, gg.k_min(), gg.k_max(), rng);
            for (double q : {0.5, 1.0, 2.0, 3.0}) {
                CHECK(rel(f_inf_norm(l, w, q), oracle::f_inf(l, w, q)) <= 1e-12);
                CHECK(rel(f_inf_norm_cubeavg(l, w, q), oracle::f_inf_cubeavg(l, w, q)) <= 1e-12);
                const Complex c(-1.5, 2.0);
                CHECK(rel(f_inf_norm(c * l, w, q), std::abs(c) * f_inf_norm(l, w, q)) <= 1e-13);
            }
        }
    CHECK_THROWS_AS(f_inf_norm(CoeffField(g), ones(g), kInfinity), RangeError);
    CHECK_THROWS_AS(f_inf_norm(CoeffField(g, 0, 1), ones(g), 2.0), ShapeError);
}

TEST_CASE("cube-averaged form is an identity") {
    Rng rng(34);
    for (int t = 0; t < 30; ++t) {
        const Grid g = t % 2 ? Grid(2, 1, 3, -1, 2) : Grid(1, 2, 5, -2, 3);
        const WeightSequence w = oscillating(g, rng);
        const CoeffField l = CoeffField::random(g, g.k_min(), g.k_max(), rng);
        const double q = rng.uniform(0.5, 4.0);
        CHECK(rel(f_inf_norm_cubeavg(l, w, q), f_inf_norm(l, w, q)) <= 1e-12);
    }
    const Grid g(1, 1, 3, 0, 2);
    const CoeffField a = CoeffField::atom(g, 0, 2, DyadicCube{1, {2, 0}}, Complex(0.0, 3.0));
    const WeightSequence w = oscillating(g, rng);
    CHECK(rel(f_inf_norm_cubeavg(a, w, 2.0), f_inf_norm(a, w, 2.0)) <= 1e-13);
}

TEST_CASE("lambda star") {
    const Grid g(1, 2, 4, 0, 1);
    CoeffField two(g, 0, 1);
    two(DyadicCube{1, {1, 0}}) = 1.0;
    two(DyadicCube{1, {3, 0}}) = 1.0;
    const CoeffField s = lambda_star(two, 1.0, 3.0);
    CHECK(std::abs(s(DyadicCube{1, {1, 0}})) == doctest::Approx(1.0 + 1.0 / 27.0).epsilon(1e-15));
    CHECK(std::abs(s(DyadicCube{1, {3, 0}})) == doctest::Approx(1.0 + 1.0 / 27.0).epsilon(1e-15));

    const CoeffField one = CoeffField::atom(g, 0, 1, DyadicCube{1, {2, 0}}, Complex(0.0, -2.0));
    for (double r : {0.5, 1.0, 2.0, kInfinity}) {
        const CoeffField st = lambda_star(one, r, 3.5);
        for (Index m = 0; m < g.cube_count(1); ++m) {
            const double want = std::isinf(r) ? 2.0 : 2.0 / std::pow(1.0 + std::abs(double(m - 2)), 3.5 / r);
            CHECK(std::abs(st.level(1)[m]) == doctest::Approx(want).epsilon(1e-14));
        }
    }

    Rng rng(35);
    for (const Grid& gg : {Grid(1, 2, 3, -1, 2), Grid(2, 1, 2, -1, 1)}) {
        const CoeffField l = CoeffField::random(gg, gg.k_min(), gg.k_max(), rng);
        const double d = 2.0 * gg.dimension() + 1.0;
        for (double r : {0.5, 1.0, 2.0}) {
            const CoeffField st = lambda_star(l, r, d), o = oracle::lambda_star(l, r, d);
            for (int k = gg.k_min(); k <= gg.k_max(); ++k)
                for (std::size_t m = 0; m < st.level(k).size(); ++m) {
                    CHECK(std::abs(st.level(k)[m]) == doctest::Approx(std::abs(o.level(k)[m])).epsilon(1e-12));
                    CHECK(std::abs(st.level(k)[m]) >= std::abs(l.level(k)[m]));
                }
        }
    }
    CHECK_THROWS_AS(lambda_star(one, 0.0, 3.0), RangeError);
    CHECK_THROWS_AS(lambda_star(one, 1.0, 2.0), PreconditionError);
}

TEST_CASE("lambda star norm equivalence") {
    Rng rng(36);
    const Grid g(1, 2, 4, -1, 2);
    const WeightSequence w = WeightSequence::exp2(g, 0.3);
    const auto [z0, z1] = lambda_star_equivalence(CoeffField(g), w, 2.0, 3.0, 0);
    CHECK(z0 == 0.0);
    CHECK(z1 == 0.0);
    for (int t = 0; t < 20; ++t) {
        const CoeffField l = CoeffField::random(g, 0, 2, rng);
        const auto [a, b] = lambda_star_equivalence(l, w, 2.0, 3.0, 1);
        CHECK(a >= b);
        CHECK(b == doctest::Approx(f_inf_norm(l, w.shifted(1, 0, 2), 2.0)).epsilon(1e-15));
    }
    CHECK_THROWS_AS(lambda_star_equivalence(CoeffField(g, 0, 2), w, 2.0, 3.0, 2), RangeError);
}

TEST_CASE("G_P: unit atom, monotone in P, matches the oracle") {
    const Grid g(1, 1, 4, 0, 2);
    const GridFunction gp = g_p(CoeffField::atom(g, 0, 2, DyadicCube{0, {0, 0}}), ones(g), 2.0, DyadicCube{0, {0, 0}});
    for (Index c = 0; c < g.cell_count(); ++c) CHECK(gp[c] == (c < 16 ? 1.0 : 0.0));

    Rng rng(37);
    const WeightSequence w = WeightSequence::power(g, 0.2, 0.5);
    const CoeffField l = CoeffField::random(g, 0, 2, rng);
    for (int k = -1; k <= 2; ++k)
        for (const DyadicCube& P : cubes_at_level(g, k)) {
            const GridFunction v = g_p(l, w, 1.5, P);
            const auto o = oracle::g_p_values(l, w, 1.5, P);
            std::size_t i = 0;
            for (Index c = 0; c < g.cell_count(); ++c) {
                if (oracle::in_cube(g, c, P))
                    CHECK(v[c] == doctest::Approx(o[i++]).epsilon(1e-13));
                else
                    CHECK(v[c] == 0.0);
            }
            if (k < 2) {
                const DyadicCube child{k + 1, {2 * P.index[0] + 1, 0}};
                const GridFunction vc = g_p(l, w, 1.5, child);
                for_each_cell(g, child, [&](Index c) { CHECK(v[c] >= vc[c]); });
            }
        }
}

TEST_CASE("median functional") {
    const Grid g(1, 0, 3, 3, 3);
    const double vals[] = {4, 3, 2, 1, 1, 1, 1, 1};
    CoeffField l(g, 3, 3);
    for (Index c = 0; c < 8; ++c) l.level(3)[c] = vals[c] * std::exp2(-1.5);
    CHECK(m_p(l, ones(g), 1.0, DyadicCube{0, {0, 0}}) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(oracle::median_threshold({4, 3, 2, 1, 1, 1, 1, 1}) == 3.0);

    const Grid h(1, 1, 4, 0, 2);
    CHECK(m_p(CoeffField::atom(h, 0, 2, DyadicCube{0, {0, 0}}), ones(h), 2.0, DyadicCube{0, {0, 0}}) == 1.0);
    CHECK_THROWS_AS(m_p(CoeffField(h), ones(h), 2.0, DyadicCube{3, {0, 0}}), ResolutionError);
    CHECK_THROWS_AS(m_fun(CoeffField(h, 0, 3), WeightSequence::exp2(h.with_levels(0, 3), 0.0), 2.0),
                    ResolutionError);
}

TEST_CASE("median functional: oracle and the Chebyshev bound") {
    Rng rng(38);
    for (int t = 0; t < 20; ++t) {
        const Grid g = t % 2 ? Grid(2, 1, 3, -1, 2) : Grid(1, 1, 4, -1, 2);
        const WeightSequence w = families(g, rng)[t % 3];
        const CoeffField l = CoeffField::random(g, g.k_min(), g.k_max(), rng);
        const double q = rng.uniform(0.5, 3.0);
        const double bound = std::pow(4.0, 1.0 / q) * f_inf_norm(l, w, q);
        for (int k = g.coarsest_level(); k <= g.k_max(); ++k)
            for (const DyadicCube& P : cubes_at_level(g, k)) {
                const double m = m_p(l, w, q, P);
                CHECK(m == doctest::Approx(oracle::m_p(l, w, q, P)).epsilon(1e-13));
                CHECK(m <= bound);
            }
        if (t < 6) {
            const GridFunction mf = m_fun(l, w, q), o = oracle::m_fun(l, w, q);
            double sup = 0.0;
            for (Index c = 0; c < g.cell_count(); ++c) {
                CHECK(mf[c] == doctest::Approx(o[c]).epsilon(1e-13));
                sup = std::max(sup, mf[c]);
            }
            CHECK(sup <= bound);
        }
    }
}

TEST_CASE("m_fun on trivial fields and its L_p norm") {
    Rng rng(39);
    const Grid g(1, 1, 4, 0, 2);
    const GridFunction zero = m_fun(CoeffField(g), ones(g), 2.0);
    for (double v : zero.values()) CHECK(v == 0.0);
    CHECK(m_fun_p_norm(CoeffField(g), ones(g), 2.0, 2.0) == 0.0);
    const GridFunction mf = m_fun(CoeffField::atom(g, 0, 2, DyadicCube{0, {0, 0}}), ones(g), 2.0);
    for (Index c = 0; c < 16; ++c) CHECK(mf[c] == 1.0);
    const CoeffField l = CoeffField::random(g, 0, 2, rng);
    const WeightSequence w = WeightSequence::exp2(g, 0.5);
    CHECK(rel(m_fun_p_norm(2.0 * l, w, 1.5, 2.0), 2.0 * m_fun_p_norm(l, w, 1.5, 2.0)) <= 1e-14);
    CHECK_THROWS_AS(m_fun_p_norm(l, w, kInfinity, 2.0), RangeError);
}

TEST_CASE("restricted norms") {
    Rng rng(40);
    const Grid g(1, 1, 5, -1, 2);
    const WeightSequence w = WeightSequence::power(g, 0.3, 0.5);
    const CoeffField l = CoeffField::random(g, -1, 2, rng);
    const RestrictionSets full = RestrictionSets::full(g, -1, 2);
    for (double q : {1.0, 2.0}) CHECK(restricted_norm(l, w, q, full) == f_inf_norm(l, w, q));

    CHECK_THROWS_AS(RestrictionSets::lower_left_quarter(g, -1, 2, 0.5), PreconditionError);
    const RestrictionSets quarter = RestrictionSets::lower_left_quarter(g, -1, 2, 0.2);
    CHECK(quarter.min_fraction() == 0.25);

    for (double eps : {0.5, 0.75}) {
        for (int t = 0; t < 10; ++t) {
            const RestrictionSets e = RestrictionSets::random(g, -1, 2, eps, 2, rng.next());
            CHECK(e.min_fraction() > eps);
            const CoeffField lt = CoeffField::random(g, -1, 2, rng);
            for (double q : {1.0, 2.0}) {
                const double r = restricted_norm(lt, w, q, e);
                CHECK(r <= f_inf_norm(lt, w, q));
                CHECK(rel(r, oracle::restricted(lt, w, q, e)) <= 1e-12);
                CHECK(rel(restricted_norm_linf(lt, w, q, e), oracle::restricted_linf(lt, w, q, e)) <= 1e-12);
            }
        }
    }
    CHECK_THROWS_AS(RestrictionSets::random(g, -1, 4, 0.5, 2, 1), ResolutionError);
    CHECK_THROWS_AS(restricted_norm(CoeffField(g, 0, 2), w.slice(0, 2), 2.0, full), ShapeError);
}

TEST_CASE("restriction sets from m_fun cover more than three quarters") {
    Rng rng(41);
    const Grid g(1, 1, 5, -1, 2);
    const WeightSequence w = WeightSequence::exp2(g, -0.4);
    for (int t = 0; t < 5; ++t) {
        const RestrictionSets e = RestrictionSets::from_m_fun(CoeffField::random(g, -1, 2, rng), w, 2.0);
        CHECK(e.min_fraction() > 0.75);
        CHECK(e.eps() == 0.75);
    }
}

TEST_CASE("random fields do not depend on J") {
    Rng a(42), b(42);
    const CoeffField x = CoeffField::random(Grid(1, 1, 4, -1, 2), -1, 2, a);
    const CoeffField y = CoeffField::random(Grid(1, 1, 6, -1, 2), -1, 2, b);
    for (int k = -1; k <= 2; ++k)
        for (std::size_t m = 0; m < x.level(k).size(); ++m) CHECK(x.level(k)[m] == y.level(k)[m]);
}

TEST_CASE("coefficient field arithmetic and shape errors") {
    const Grid g(2, 1, 2, -1, 1);
    Rng rng(43);
    const CoeffField a = CoeffField::random(g, -1, 1, rng), b = CoeffField::random(g, -1, 1, rng);
    const CoeffField c = a + Complex(2.0) * b;
    for (int k = -1; k <= 1; ++k)
        for (std::size_t m = 0; m < c.level(k).size(); ++m) CHECK(c.level(k)[m] == a.level(k)[m] + 2.0 * b.level(k)[m]);
    CHECK(a.size() == 1 + 4 + 16);
    CHECK_THROWS_AS(a.level(2), RangeError);
    CHECK_THROWS_AS(CoeffField(g, 0, 1) + a, ShapeError);
    CHECK_THROWS_AS(require_matching_levels(a, WeightSequence::exp2(g.with_levels(0, 1), 0.0)), ShapeError);
}

}
