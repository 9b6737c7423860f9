#include "chx/grid.hpp"
#include "chx/kernels.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace chx {

namespace {

// FFTW plan cache.  Plans are created with FFTW_UNALIGNED so the new-array
// execute interface is safe on std::vector storage; creation is serialized,
// execution is thread-safe.
std::mutex g_plan_mutex;
std::map<std::tuple<int, int, int>, fftw_plan> g_plans;

fftw_plan get_plan(int d, int n, int sign) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto key = std::make_tuple(d, n, sign);
    auto it = g_plans.find(key);
    if (it != g_plans.end()) return it->second;
    std::vector<int> dims(static_cast<std::size_t>(d), n);
    std::vector<fftw_complex> buf(static_cast<std::size_t>(std::pow(n, d)));
    fftw_plan p = fftw_plan_dft(d, dims.data(), buf.data(), buf.data(), sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    g_plans.emplace(key, p);
    return p;
}

void run_fft(int d, int n, int sign, std::vector<cplx>& data) {
    fftw_plan p = get_plan(d, n, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data.data()),
                     reinterpret_cast<fftw_complex*>(data.data()));
}

}  // namespace

double sq_freq(const TorusGrid& g, const std::array<int, 4>& m) {
    double s = 0.0;
    for (int i = 0; i < g.d; ++i) {
        const double w = two_pi * m[static_cast<std::size_t>(i)];
        s += w * w;
    }
    return s;
}

void check_hermitian(const TorusGrid& grid, const std::vector<cplx>& coeffs, double tol) {
    double scale = 1.0;
    for (const cplx& c : coeffs) scale = std::max(scale, std::abs(c));
    tol *= scale;
    std::array<int, 4> m{}, neg{};
    for (std::size_t idx = 0; idx < coeffs.size(); ++idx) {
        unflatten_mode(grid, idx, m);
        for (int i = 0; i < grid.d; ++i) neg[static_cast<std::size_t>(i)] = -m[static_cast<std::size_t>(i)];
        const cplx diff = coeffs[idx] - std::conj(coeffs[flatten_mode(grid, neg)]);
        if (std::abs(diff) > tol)
            throw std::invalid_argument("coefficients violate Hermitian symmetry");
    }
}

namespace detail {

// spectral grid index (0..n-1 per axis) for a retained mode, sign-wrapped
std::size_t grid_index_of_mode(const TorusGrid& g, int n_fft, const std::array<int, 4>& m) {
    std::size_t idx = 0;
    for (int i = 0; i < g.d; ++i) {
        int k = m[static_cast<std::size_t>(i)];
        if (k < 0) k += n_fft;
        idx = idx * static_cast<std::size_t>(n_fft) + static_cast<std::size_t>(k);
    }
    return idx;
}

// forward FFT of real samples on an n_fft grid, gathered onto the retained
// band of `grid` (the Nyquist mode and anything beyond the band is dropped).
std::vector<cplx> spectrum_of_samples(const TorusGrid& grid, int n_fft,
                                      const std::vector<double>& samples) {
    std::vector<cplx> buf(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) buf[i] = samples[i];
    run_fft(grid.d, n_fft, FFTW_FORWARD, buf);
    const double norm = 1.0 / static_cast<double>(samples.size());
    std::vector<cplx> coeffs(grid.modes());
    std::array<int, 4> m{}, neg{};
    for (std::size_t idx = 0; idx < coeffs.size(); ++idx) {
        unflatten_mode(grid, idx, m);
        coeffs[idx] = buf[grid_index_of_mode(grid, n_fft, m)] * norm;
    }
    // symmetrize so coeff(-m) == conj(coeff(m)) holds exactly
    for (std::size_t idx = 0; idx < coeffs.size(); ++idx) {
        unflatten_mode(grid, idx, m);
        for (int i = 0; i < grid.d; ++i) neg[static_cast<std::size_t>(i)] = -m[static_cast<std::size_t>(i)];
        const std::size_t nidx = flatten_mode(grid, neg);
        if (nidx < idx) continue;
        const cplx avg = 0.5 * (coeffs[idx] + std::conj(coeffs[nidx]));
        coeffs[idx] = avg;
        coeffs[nidx] = std::conj(avg);
    }
    return coeffs;
}

// inverse: scatter band coefficients onto an n_fft spectral grid and transform
std::vector<double> samples_of_spectrum(const TorusGrid& grid, int n_fft,
                                        const std::vector<cplx>& coeffs) {
    std::size_t total = 1;
    for (int i = 0; i < grid.d; ++i) total *= static_cast<std::size_t>(n_fft);
    std::vector<cplx> buf(total, cplx(0.0, 0.0));
    std::array<int, 4> m{};
    for (std::size_t idx = 0; idx < coeffs.size(); ++idx) {
        unflatten_mode(grid, idx, m);
        buf[grid_index_of_mode(grid, n_fft, m)] = coeffs[idx];
    }
    run_fft(grid.d, n_fft, FFTW_BACKWARD, buf);
    std::vector<double> out(total);
    for (std::size_t i = 0; i < total; ++i) out[i] = buf[i].real();
    return out;
}

}  // namespace detail

Field field_from_values(const TorusGrid& grid, std::vector<double> values) {
    if (values.size() != grid.points()) throw std::invalid_argument("field_from_values: size mismatch");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("field_from_values: non-finite sample");
    Field f;
    f.grid = grid;
    f.coeffs = detail::spectrum_of_samples(grid, grid.n, values);
    f.values = std::move(values);
    return f;
}

Field field_from_coeffs(const TorusGrid& grid, std::vector<cplx> coeffs) {
    if (coeffs.size() != grid.modes()) throw std::invalid_argument("field_from_coeffs: size mismatch");
    check_hermitian(grid, coeffs);
    Field f;
    f.grid = grid;
    f.values = detail::samples_of_spectrum(grid, grid.n, coeffs);
    f.coeffs = std::move(coeffs);
    return f;
}

Field zero_field(const TorusGrid& grid) {
    Field f;
    f.grid = grid;
    f.values.assign(grid.points(), 0.0);
    f.coeffs.assign(grid.modes(), cplx(0.0, 0.0));
    return f;
}

Field constant_field(const TorusGrid& grid, double c) {
    Field f;
    f.grid = grid;
    f.values.assign(grid.points(), c);
    f.coeffs.assign(grid.modes(), cplx(0.0, 0.0));
    f.coeffs[flatten_mode(grid, {0, 0, 0, 0})] = c;
    return f;
}

Field add(const Field& a, const Field& b) {
    Field r = a;
    add_inplace(r, b, 1.0);
    return r;
}

Field sub(const Field& a, const Field& b) {
    Field r = a;
    add_inplace(r, b, -1.0);
    return r;
}

Field scale(const Field& a, double s) {
    Field r = a;
    for (double& v : r.values) v *= s;
    for (cplx& c : r.coeffs) c *= s;
    return r;
}

void add_inplace(Field& a, const Field& b, double s) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("field add: grid mismatch");
    for (std::size_t i = 0; i < a.values.size(); ++i) a.values[i] += s * b.values[i];
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) a.coeffs[i] += s * b.coeffs[i];
}

double max_abs(const Field& f) { return kernels::max_abs(f.values); }

double mean_value(const Field& f) { return f.coeff({0, 0, 0, 0}).real(); }

}  // namespace chx
