#include "chx/experiments.hpp"
#include "chx/littlewood_paley.hpp"

#include <doctest.h>

#include <cmath>

using namespace chx;

TEST_SUITE("littlewood_paley") {

TEST_CASE("partition profiles") {
    const DyadicPartition p = make_partition();
    SUBCASE("supports") {
        CHECK(p.rho_minus1(0.0) == doctest::Approx(1.0));
        CHECK(p.rho_minus1(0.74) == doctest::Approx(1.0));
        CHECK(p.rho_minus1(4.0 / 3.0) == 0.0);
        CHECK(p.rho0(0.74) == 0.0);
        CHECK(p.rho0(8.0 / 3.0) == 0.0);
        CHECK(p.rho0(1.0) > 0.0);
    }
    SUBCASE("identity forces values at 0 and 2") {
        double s = p.rho_minus1(2.0);
        CHECK(s == 0.0);
        CHECK(p.rho0(2.0) + p.rho0(1.0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(p.rho(0, 0.0) == 0.0);
        CHECK(p.rho(3, 0.0) == 0.0);
    }
    SUBCASE("summation identity over all grid frequencies") {
        const TorusGrid g(1, 256);
        const int jmax = block_jmax(g);
        double worst = 0.0;
        for (int m = -g.band; m <= g.band; ++m) {
            double s = p.rho_minus1(std::abs(m));
            for (int q = 0; q <= jmax; ++q) s += p.rho(q, std::abs(m));
            worst = std::max(worst, std::fabs(s - 1.0));
        }
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("blocks") {
    const DyadicPartition p = make_partition();
    const TorusGrid g(1, 64);
    SUBCASE("constants live in block -1 only") {
        Field c = constant_field(g, 2.0);
        CHECK(max_abs(sub(block(p, c, -1), c)) <= 1e-13);
        for (int q = 0; q <= block_jmax(g); ++q) CHECK(max_abs(block(p, c, q)) <= 1e-13);
    }
    SUBCASE("frequency 4 touches exactly the blocks whose profile is positive there") {
        std::vector<cplx> coeffs(g.modes(), cplx(0.0, 0.0));
        coeffs[flatten_mode(g, {4, 0, 0, 0})] = 0.5;
        coeffs[flatten_mode(g, {-4, 0, 0, 0})] = 0.5;
        Field f = field_from_coeffs(g, std::move(coeffs));
        for (int q = -1; q <= block_jmax(g); ++q) {
            const double w = (q == -1) ? p.rho_minus1(4.0) : p.rho(q, 4.0);
            const double norm = max_abs(block(p, f, q));
            if (w > 1e-14) CHECK(norm == doctest::Approx(w).epsilon(1e-10));
            else CHECK(norm <= 1e-13);
        }
        CHECK(p.rho(1, 4.0) > 0.0);
        CHECK(p.rho(2, 4.0) > 0.0);
        CHECK(p.rho(0, 4.0) == 0.0);
        CHECK(p.rho(3, 4.0) == 0.0);
    }
    SUBCASE("blocks reconstruct random fields") {
        Field f = random_field(g, 21, 0, 0.9);
        BlockSet bs = decompose(p, f);
        Field sum = zero_field(g);
        for (const Field& b : bs.blocks) sum = add(sum, b);
        CHECK(max_abs(sub(sum, f)) / max_abs(f) <= 1e-10);
    }
}

TEST_CASE("Besov norms") {
    const DyadicPartition p = make_partition();
    const TorusGrid g(1, 64);
    SUBCASE("constants and zero") {
        for (double a : {-0.7, 0.0, 1.3}) {
            CHECK(besov_norm(p, constant_field(g, -3.0), a) ==
                  doctest::Approx(std::exp2(-a) * 3.0).epsilon(1e-12));
        }
        CHECK(besov_norm(p, zero_field(g), 1.0) == 0.0);
    }
    SUBCASE("single frequency at alpha = 0 equals the best block") {
        std::vector<cplx> coeffs(g.modes(), cplx(0.0, 0.0));
        coeffs[flatten_mode(g, {4, 0, 0, 0})] = 0.5;
        coeffs[flatten_mode(g, {-4, 0, 0, 0})] = 0.5;
        Field f = field_from_coeffs(g, std::move(coeffs));
        const double expected = std::max(p.rho(1, 4.0), p.rho(2, 4.0));
        CHECK(besov_norm(p, f, 0.0) == doctest::Approx(expected).epsilon(1e-10));
    }
    SUBCASE("homogeneity is exact") {
        Field f = random_field(g, 22, 0, 1.0);
        CHECK(besov_norm(p, scale(f, -2.5), 0.7) == doctest::Approx(2.5 * besov_norm(p, f, 0.7)));
    }
    SUBCASE("per-block monotonicity of the weights") {
        Field f = random_field(g, 23, 0, 1.0);
        BesovReport lo = besov_sup_norm(p, f, 0.3), hi = besov_sup_norm(p, f, 1.1);
        for (std::size_t j = 1; j < lo.weighted.size(); ++j)
            CHECK(lo.weighted[j] <= hi.weighted[j] * (1.0 + 1e-12));
    }
    SUBCASE("B^alpha_{r,gamma} basics") {
        CHECK(besov_brg_norm(p, zero_field(g), 1.0, 2.0, 3.0) == 0.0);
        CHECK(besov_brg_norm(p, constant_field(g, 2.0), 0.5, 2.0, 4.0) ==
              doctest::Approx(std::exp2(-0.5) * 2.0).epsilon(1e-12));
        CHECK_THROWS(besov_brg_norm(p, constant_field(g, 1.0), 0.5, 0.5, 2.0));
    }
}

TEST_CASE("regularity slope") {
    const DyadicPartition p = make_partition();
    SUBCASE("deterministic |2 pi m|^-2 spectrum") {
        // phase-aligned coefficients: block sup norms scale like 2^{-j}, so
        // the fitted regularity is 1, not the 3/2 a random-phase field with
        // the same magnitudes would show
        const TorusGrid g(1, 512);
        std::vector<cplx> coeffs(g.modes(), cplx(0.0, 0.0));
        std::array<int, 4> m{};
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            unflatten_mode(g, i, m);
            if (m[0] != 0) coeffs[i] = 1.0 / sq_freq(g, m);
        }
        Field f = field_from_coeffs(g, std::move(coeffs));
        const double slope = regularity_slope(p, {f}, 2, 6);
        CHECK(slope == doctest::Approx(1.0).epsilon(0.15));
    }
    SUBCASE("white-in-space ensemble") {
        const TorusGrid g(1, 256);
        std::vector<Field> fields;
        for (int i = 0; i < 100; ++i) fields.push_back(random_field(g, 31, static_cast<std::uint64_t>(i), 0.0));
        const double slope = regularity_slope(p, fields, 2, 6);
        CHECK(std::fabs(slope - (-0.5)) <= 0.2);
    }
    SUBCASE("degenerate input") {
        const TorusGrid g(1, 64);
        CHECK_THROWS(regularity_slope(p, {constant_field(g, 1.0)}, 1, 4));
    }
}

TEST_CASE("Bernstein ratio") {
    const TorusGrid g(1, 64);
    std::vector<cplx> coeffs(g.modes(), cplx(0.0, 0.0));
    coeffs[flatten_mode(g, {1, 0, 0, 0})] = 0.5;
    coeffs[flatten_mode(g, {-1, 0, 0, 0})] = 0.5;
    Field f = field_from_coeffs(g, std::move(coeffs));
    SUBCASE("first derivative of a unit cosine") {
        const double r = bernstein_ratio(f, MultiIndex{1}, 64.0, 1.0);
        CHECK(r > 0.0);
        // ||d cos|| = 2 pi, beta^{d/q+1} ~ beta, ||f||_{L^64} ~ just under 1
        CHECK(r == doctest::Approx(two_pi).epsilon(0.2));
    }
    SUBCASE("zero derivative at large integrability stays near one") {
        const double r = bernstein_ratio(f, MultiIndex{}, 256.0, 1.0);
        CHECK(r >= 0.9);
        CHECK(r <= 1.3);
    }
    SUBCASE("support violation is rejected") {
        Field w = random_field(g, 41, 0, 0.5);
        CHECK_THROWS(bernstein_ratio(w, MultiIndex{1}, 2.0, 2.0));
    }
}

}  // TEST_SUITE
