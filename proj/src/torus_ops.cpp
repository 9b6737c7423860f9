#include "chx/grid.hpp"
#include "chx/kernels.hpp"
#include "fft_detail.hpp"

#include <cmath>

namespace chx {

Field derivative(const Field& f, const MultiIndex& mu) {
    if (mu.order() == 0) return f;
    std::vector<cplx> coeffs(f.coeffs.size());
    std::array<int, 4> m{};
    for (std::size_t idx = 0; idx < coeffs.size(); ++idx) {
        unflatten_mode(f.grid, idx, m);
        cplx factor(1.0, 0.0);
        for (int i = 0; i < f.grid.d; ++i) {
            const cplx w(0.0, two_pi * m[static_cast<std::size_t>(i)]);
            for (int k = 0; k < mu.mu[static_cast<std::size_t>(i)]; ++k) factor *= w;
        }
        coeffs[idx] = factor * f.coeffs[idx];
    }
    return field_from_coeffs(f.grid, std::move(coeffs));
}

namespace {

Field apply_power_multiplier(const Field& f, int power, double sign) {
    std::vector<double> mult(f.coeffs.size());
    std::array<int, 4> m{};
    for (std::size_t idx = 0; idx < mult.size(); ++idx) {
        unflatten_mode(f.grid, idx, m);
        const double s = sq_freq(f.grid, m);
        mult[idx] = sign * ((power == 1) ? s : s * s);
    }
    std::vector<cplx> coeffs = f.coeffs;
    kernels::apply_real_multiplier(coeffs, mult);
    return field_from_coeffs(f.grid, std::move(coeffs));
}

}  // namespace

Field laplacian(const Field& f) { return apply_power_multiplier(f, 1, -1.0); }
Field bilaplacian(const Field& f) { return apply_power_multiplier(f, 2, +1.0); }

Field product_dealiased(const Field& f, const Field& g) {
    if (!(f.grid == g.grid)) throw std::invalid_argument("product_dealiased: grid mismatch");
    const int npad = 2 * f.grid.n;
    std::vector<double> fv = detail::samples_of_spectrum(f.grid, npad, f.coeffs);
    std::vector<double> gv = detail::samples_of_spectrum(g.grid, npad, g.coeffs);
    std::vector<double> pv;
    kernels::pointwise_mul(pv, fv, gv);
    return field_from_coeffs(f.grid, detail::spectrum_of_samples(f.grid, npad, pv));
}

Field cube_dealiased(const Field& f) {
    const int npad = 2 * f.grid.n;
    std::vector<double> fv = detail::samples_of_spectrum(f.grid, npad, f.coeffs);
    std::vector<double> pv;
    kernels::cubic_poly(pv, fv, 1.0, 0.0, 0.0, 0.0);
    return field_from_coeffs(f.grid, detail::spectrum_of_samples(f.grid, npad, pv));
}

}  // namespace chx
