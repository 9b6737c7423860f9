#include "chx/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>

namespace chx::kernels {

namespace {
std::atomic<Mode> g_mode{[] {
    const char* env = std::getenv("CHX_SERIAL");
    return (env && env[0] == '1') ? Mode::serial : Mode::parallel;
}()};
}

Mode default_mode() { return g_mode.load(); }
void set_default_mode(Mode m) { g_mode.store(m); }

void apply_real_multiplier(std::vector<std::complex<double>>& a,
                           const std::vector<double>& mult, Mode mode) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.size());
    if (mode == Mode::parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) a[i] *= mult[i];
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) a[i] *= mult[i];
    }
}

void decay_add(std::vector<std::complex<double>>& a,
               const std::vector<double>& decay,
               const std::vector<std::complex<double>>& add, Mode mode) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.size());
    if (mode == Mode::parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) a[i] = decay[i] * a[i] + add[i];
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) a[i] = decay[i] * a[i] + add[i];
    }
}

void cubic_poly(std::vector<double>& out, const std::vector<double>& u,
                double c3, double c2, double c1, double c0, Mode mode) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(u.size());
    out.resize(u.size());
    if (mode == Mode::parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const double x = u[i];
            out[i] = ((c3 * x + c2) * x + c1) * x + c0;
        }
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const double x = u[i];
            out[i] = ((c3 * x + c2) * x + c1) * x + c0;
        }
    }
}

void pointwise_mul(std::vector<double>& out, const std::vector<double>& a,
                   const std::vector<double>& b, Mode mode) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.size());
    out.resize(a.size());
    if (mode == Mode::parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
    }
}

double max_abs(const std::vector<double>& a, Mode mode) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.size());
    double m = 0.0;
    if (mode == Mode::parallel) {
#pragma omp parallel for schedule(static) reduction(max : m)
        for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i]));
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i]));
    }
    return m;
}

}  // namespace chx::kernels
