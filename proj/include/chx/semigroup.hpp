#pragma once

#include "chx/littlewood_paley.hpp"

#include <vector>

namespace chx {

// biharmonic heat multiplier e^{-r |2 pi m|^4}
Field apply_semigroup(double r, const Field& f);

// phi1(z) = (1 - e^{-z}) / z, phi1(0) = 1; expm1 above 1e-4, Taylor below
double phi1(double z);

// Smooth even frequency cutoff: zeta = 1 on [0, 1/2], 0 beyond 1, built
// from the same bump step as the dyadic partition.
struct MollifierSymbol {
    double epsilon = 0.0;  // 0 means the raw grid cutoff (symbol identically 1 on the band)

    static double zeta(double t);
    double symbol(const TorusGrid& g, const std::array<int, 4>& m) const;
    std::vector<double> symbol_table(const TorusGrid& g) const;
};

Field mollify(const Field& f, const MollifierSymbol& sym);

// Mild integral int_0^r P_{r-q} g(q) dq for a piecewise-constant source
// sampled on a uniform grid with step dt; exact per mode for frozen
// sources via the phi1 quadrature.  Returns the series at the same times,
// out[k] ~ time k*dt (out[0] = 0).
std::vector<Field> duhamel_integrate(const std::vector<Field>& source, double dt);

// fit of -4 * slope of log ||P_r f||_beta vs log r over the given r values
double schauder_rate(const DyadicPartition& part, const Field& f, double beta,
                     const std::vector<double>& r_values);

}  // namespace chx
