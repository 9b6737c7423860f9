#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace chx::kernels {

// The hot loops come in an OpenMP-parallel flavour and a serial reference
// flavour.  Both are elementwise, so the parallel results are bit-identical
// to the serial ones regardless of thread count.  Tests compare the two;
// the bench tool times them.

enum class Mode { serial, parallel };

// process-wide default, settable via CHX_SERIAL=1
Mode default_mode();
void set_default_mode(Mode m);

void apply_real_multiplier(std::vector<std::complex<double>>& a,
                           const std::vector<double>& mult,
                           Mode mode = default_mode());

// a[i] = decay[i]*a[i] + add[i]
void decay_add(std::vector<std::complex<double>>& a,
               const std::vector<double>& decay,
               const std::vector<std::complex<double>>& add,
               Mode mode = default_mode());

// out[i] = p(u[i]) for the cubic p(x) = c3 x^3 + c2 x^2 + c1 x + c0
void cubic_poly(std::vector<double>& out, const std::vector<double>& u,
                double c3, double c2, double c1, double c0,
                Mode mode = default_mode());

void pointwise_mul(std::vector<double>& out, const std::vector<double>& a,
                   const std::vector<double>& b, Mode mode = default_mode());

double max_abs(const std::vector<double>& a, Mode mode = default_mode());

}  // namespace chx::kernels
