#include "chx/experiments.hpp"
#include "chx/grid.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace chx;

namespace {

constexpr double pi2 = two_pi;

// embed a field's spectrum into a finer grid of the same period
Field refine(const Field& f, int n_big) {
    const TorusGrid big(f.grid.d, n_big);
    std::vector<cplx> coeffs(big.modes(), cplx(0.0, 0.0));
    std::array<int, 4> m{};
    for (std::size_t i = 0; i < f.grid.modes(); ++i) {
        unflatten_mode(f.grid, i, m);
        coeffs[flatten_mode(big, m)] = f.coeffs[i];
    }
    return field_from_coeffs(big, std::move(coeffs));
}

// restrict a finer-grid field back to the coarse band
Field restrict_band(const Field& f, const TorusGrid& coarse) {
    std::vector<cplx> coeffs(coarse.modes());
    std::array<int, 4> m{};
    for (std::size_t i = 0; i < coarse.modes(); ++i) {
        unflatten_mode(coarse, i, m);
        coeffs[i] = f.coeff(m);
    }
    return field_from_coeffs(coarse, std::move(coeffs));
}

double rel_gap(const Field& a, const Field& b) {
    return max_abs(sub(a, b)) / std::max(1e-300, max_abs(b));
}

Field cos_mode(const TorusGrid& g, int k) {
    std::vector<double> v(g.points());
    const std::size_t stride = g.points() / static_cast<std::size_t>(g.n);  // first axis
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = static_cast<double>(i / stride) / g.n;
        v[i] = std::cos(pi2 * k * x);
    }
    return field_from_values(g, std::move(v));
}

}  // namespace

TEST_SUITE("torus") {

TEST_CASE("transform basics") {
    const TorusGrid g(1, 64);
    SUBCASE("constant field") {
        Field f = constant_field(g, 2.5);
        CHECK(f.coeff({0, 0, 0, 0}) == cplx(2.5, 0.0));
        double off = 0.0;
        for (std::size_t i = 0; i < f.coeffs.size(); ++i)
            if (i != flatten_mode(g, {0, 0, 0, 0})) off = std::max(off, std::abs(f.coeffs[i]));
        CHECK(off <= 1e-14);
    }
    SUBCASE("cosine has the two symmetric coefficients") {
        Field f = cos_mode(g, 1);
        CHECK(std::abs(f.coeff({1, 0, 0, 0}) - cplx(0.5, 0.0)) <= 1e-13);
        CHECK(std::abs(f.coeff({-1, 0, 0, 0}) - cplx(0.5, 0.0)) <= 1e-13);
    }
    SUBCASE("coeff(0) only reconstructs a constant") {
        std::vector<cplx> c(g.modes(), cplx(0.0, 0.0));
        c[flatten_mode(g, {0, 0, 0, 0})] = 3.0;
        Field f = field_from_coeffs(g, std::move(c));
        CHECK(max_abs(sub(f, constant_field(g, 3.0))) <= 1e-14);
    }
}

TEST_CASE("Parseval by direct summation") {
    for (int d : {1, 2}) {
        const TorusGrid g(d, 32);
        Field f = random_field(g, 11, static_cast<std::uint64_t>(d), 0.8);
        double space = 0.0;
        for (double v : f.values) space += v * v;
        space /= static_cast<double>(g.points());
        double freq = 0.0;
        for (const cplx& c : f.coeffs) freq += std::norm(c);
        CHECK(space == doctest::Approx(freq).epsilon(1e-12));
    }
}

TEST_CASE("round trip on 100 random fields") {
    const TorusGrid g(1, 64);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        Field f = random_field(g, 5, static_cast<std::uint64_t>(i), 1.0);
        Field back = field_from_values(g, std::vector<double>(f.values));
        double dev = 0.0;
        for (std::size_t k = 0; k < f.coeffs.size(); ++k)
            dev = std::max(dev, std::abs(back.coeffs[k] - f.coeffs[k]));
        worst = std::max(worst, dev / max_abs(f));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("input validation") {
    const TorusGrid g(1, 16);
    std::vector<double> bad(g.points(), 0.0);
    bad[3] = std::nan("");
    CHECK_THROWS_AS((void)field_from_values(g, std::move(bad)), std::invalid_argument);

    std::vector<cplx> c(g.modes(), cplx(0.0, 0.0));
    c[flatten_mode(g, {1, 0, 0, 0})] = cplx(1.0, 1.0);  // no conjugate partner
    CHECK_THROWS((void)field_from_coeffs(g, std::move(c)));

    CHECK_THROWS_AS(TorusGrid(1, 24), std::invalid_argument);
    CHECK_THROWS_AS(TorusGrid(5, 16), std::invalid_argument);
}

TEST_CASE("derivatives") {
    const TorusGrid g(1, 16);
    SUBCASE("zero multi-index is the identity") {
        Field f = random_field(g, 3, 0, 1.0);
        CHECK(rel_gap(derivative(f, MultiIndex{}), f) <= 1e-14);
    }
    SUBCASE("second derivative of a cosine") {
        Field f = cos_mode(g, 1);
        Field dd = derivative(f, MultiIndex{2});
        CHECK(rel_gap(dd, scale(f, -pi2 * pi2)) <= 1e-12);
    }
    SUBCASE("spectral derivative matches refined finite differences") {
        Field f = random_field(g, 4, 1, 2.0);
        Field df = derivative(f, MultiIndex{1});
        const int nref = 1024;
        Field fr = refine(f, nref);
        const double h = 1.0 / nref;
        double worst = 0.0;
        const int ratio = nref / g.n;
        for (int i = 0; i < g.n; ++i) {
            const int j = i * ratio;
            auto at = [&](int k) { return fr.values[static_cast<std::size_t>((k % nref + nref) % nref)]; };
            const double fd = (-at(j + 2) + 8.0 * at(j + 1) - 8.0 * at(j - 1) + at(j - 2)) / (12.0 * h);
            worst = std::max(worst, std::fabs(fd - df.values[static_cast<std::size_t>(i)]));
        }
        CHECK(worst / max_abs(df) <= 1e-6);
    }
    SUBCASE("composition is exact in coefficients") {
        Field f = random_field(g, 6, 2, 1.0);
        Field a = derivative(derivative(f, MultiIndex{1}), MultiIndex{2});
        Field b = derivative(f, MultiIndex{3});
        double dev = 0.0;
        for (std::size_t k = 0; k < a.coeffs.size(); ++k)
            dev = std::max(dev, std::abs(a.coeffs[k] - b.coeffs[k]));
        CHECK(dev / max_abs(b) <= 1e-12);
    }
}

TEST_CASE("laplacian and bilaplacian") {
    const TorusGrid g(2, 16);
    Field f = random_field(g, 7, 0, 1.5);
    SUBCASE("constants are annihilated") {
        Field c = constant_field(g, 4.0);
        CHECK(max_abs(laplacian(c)) <= 1e-12);
        CHECK(max_abs(bilaplacian(c)) <= 1e-12);
    }
    SUBCASE("laplacian of a cosine") {
        const TorusGrid g1(1, 16);
        Field h = cos_mode(g1, 1);
        CHECK(rel_gap(laplacian(h), scale(h, -pi2 * pi2)) <= 1e-12);
    }
    SUBCASE("composition equals the direct multiplier") {
        CHECK(rel_gap(laplacian(laplacian(f)), bilaplacian(f)) <= 1e-12);
    }
}

TEST_CASE("dealiased products") {
    const TorusGrid g(1, 32);
    Field f = random_field(g, 8, 0, 0.7);
    Field h = random_field(g, 8, 1, 1.2);
    SUBCASE("multiplication by one") {
        CHECK(rel_gap(product_dealiased(f, constant_field(g, 1.0)), f) <= 1e-13);
    }
    SUBCASE("cosine squared") {
        Field c = cos_mode(g, 1);
        Field sq = product_dealiased(c, c);
        Field expected = add(constant_field(g, 0.5), scale(cos_mode(g, 2), 0.5));
        CHECK(rel_gap(sq, expected) <= 1e-12);
    }
    SUBCASE("matches the 4x refined-grid projection") {
        const int nref = 4 * g.n;
        Field pr = product_dealiased(f, h);
        std::vector<double> dense(refine(f, nref).values);
        const Field hr = refine(h, nref);
        for (std::size_t i = 0; i < dense.size(); ++i) dense[i] *= hr.values[i];
        Field oracle = restrict_band(field_from_values(TorusGrid(1, nref), std::move(dense)), g);
        CHECK(rel_gap(pr, oracle) <= 1e-10);
    }
    SUBCASE("cube matches the refined-grid projection") {
        const int nref = 4 * g.n;
        Field cu = cube_dealiased(f);
        std::vector<double> dense(refine(f, nref).values);
        for (double& v : dense) v = v * v * v;
        Field oracle = restrict_band(field_from_values(TorusGrid(1, nref), std::move(dense)), g);
        CHECK(rel_gap(cu, oracle) <= 1e-10);
    }
    SUBCASE("bilinear and commutative") {
        Field fh = product_dealiased(f, h);
        CHECK(rel_gap(product_dealiased(h, f), fh) <= 1e-13);
        Field s = product_dealiased(add(f, h), h);
        CHECK(rel_gap(s, add(fh, product_dealiased(h, h))) <= 1e-12);
    }
    SUBCASE("grid mismatch") {
        CHECK_THROWS(product_dealiased(f, constant_field(TorusGrid(1, 16), 1.0)));
    }
}

TEST_CASE("mean value and linear ops stay consistent") {
    const TorusGrid g(1, 32);
    Field f = random_field(g, 9, 0, 1.0);
    Field h = random_field(g, 9, 1, 1.0);
    CHECK(mean_value(f) == doctest::Approx(f.coeff({0, 0, 0, 0}).real()));
    Field s = add(scale(f, 2.0), h);
    for (std::size_t i = 0; i < s.values.size(); ++i)
        CHECK(s.values[i] == doctest::Approx(2.0 * f.values[i] + h.values[i]).epsilon(1e-12));
    Field back = field_from_values(g, std::vector<double>(s.values));
    double dev = 0.0;
    for (std::size_t k = 0; k < s.coeffs.size(); ++k)
        dev = std::max(dev, std::abs(back.coeffs[k] - s.coeffs[k]));
    CHECK(dev <= 1e-12 * std::max(1.0, max_abs(s)));
}

}  // TEST_SUITE
