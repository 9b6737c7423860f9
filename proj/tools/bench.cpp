// Compares the serial reference kernels against the OpenMP versions on the
// hot loops: spectral multipliers, the Duhamel decay-add update, pointwise
// cubic evaluation, and reductions.
#include "chx/kernels.hpp"
#include "chx/rng.hpp"

#include <chrono>
#include <complex>
#include <cstdio>
#include <vector>

namespace {

using cplx = std::complex<double>;
namespace kn = chx::kernels;

double seconds(const std::chrono::steady_clock::time_point& a,
               const std::chrono::steady_clock::time_point& b) {
    return std::chrono::duration<double>(b - a).count();
}

template <typename F>
double time_loop(int reps, F&& body) {
    body();  // warm up
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) body();
    const auto t1 = std::chrono::steady_clock::now();
    return seconds(t0, t1) / reps;
}

}  // namespace

int main() {
    const std::size_t n = 1 << 22;
    const int reps = 20;
    std::vector<cplx> a(n), src(n);
    std::vector<double> mult(n), re(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = chx::CounterRng::uniform(chx::CounterRng::hash(1, i));
        a[i] = cplx(u, 1.0 - u);
        src[i] = cplx(1.0 - u, u);
        mult[i] = 0.5 + u;
        re[i] = 2.0 * u - 1.0;
    }

    struct Row {
        const char* name;
        double serial, parallel;
    };
    std::vector<Row> rows;

    {
        auto run = [&](kn::Mode m) {
            std::vector<cplx> w = a;
            return time_loop(reps, [&] { kn::apply_real_multiplier(w, mult, m); });
        };
        rows.push_back({"apply_real_multiplier", run(kn::Mode::serial), run(kn::Mode::parallel)});
    }
    {
        auto run = [&](kn::Mode m) {
            std::vector<cplx> w = a;
            return time_loop(reps, [&] { kn::decay_add(w, mult, src, m); });
        };
        rows.push_back({"decay_add", run(kn::Mode::serial), run(kn::Mode::parallel)});
    }
    {
        auto run = [&](kn::Mode m) {
            std::vector<double> w(n);
            return time_loop(reps, [&] { kn::cubic_poly(w, re, 1.0, -1.0, 0.5, -0.25, m); });
        };
        rows.push_back({"cubic_poly", run(kn::Mode::serial), run(kn::Mode::parallel)});
    }
    {
        auto run = [&](kn::Mode m) {
            std::vector<double> w(n);
            return time_loop(reps, [&] { kn::pointwise_mul(w, re, mult, m); });
        };
        rows.push_back({"pointwise_mul", run(kn::Mode::serial), run(kn::Mode::parallel)});
    }
    {
        volatile double sink = 0.0;
        auto run = [&](kn::Mode m) {
            return time_loop(reps, [&] { sink = kn::max_abs(re, m); });
        };
        rows.push_back({"max_abs", run(kn::Mode::serial), run(kn::Mode::parallel)});
        (void)sink;
    }

    std::printf("%-24s %12s %12s %8s\n", "kernel", "serial [ms]", "openmp [ms]", "speedup");
    for (const Row& r : rows)
        std::printf("%-24s %12.3f %12.3f %8.2f\n", r.name, 1e3 * r.serial, 1e3 * r.parallel,
                    r.serial / r.parallel);
    return 0;
}
