#pragma once

#include "chx/grid.hpp"

#include <vector>

namespace chx {

// Dyadic partition of unity built from the standard smooth bump step
//   step(s) = B(s) / (B(s) + B(1-s)),  B(s) = e^{-1/s} for s > 0, else 0,
// via chi(t) = step((4/3 - t) / (4/3 - 3/4)):
//   rho_{-1}(t) = chi(t),  rho_0(t) = chi(t/2) - chi(t).
// rho_{-1} vanishes for t >= 4/3, rho_0 outside [3/4, 8/3], and the dyadic
// dilates telescope to 1.
struct DyadicPartition {
    static double smooth_step(double s);
    static double chi(double t);

    double rho_minus1(double t) const { return chi(t); }
    double rho0(double t) const { return chi(0.5 * t) - chi(t); }
    // rho_q for block index q >= -1 (q >= 0 means rho_0(2^{-q} t))
    double rho(int q, double t) const;
};

DyadicPartition make_partition();

// highest block index carrying mass on the grid
int block_jmax(const TorusGrid& g);

// Delta_q f: spectral multiplier rho_q(|m|)
Field block(const DyadicPartition& part, const Field& f, int q);

// all blocks Delta_{-1} f .. Delta_{jmax} f
struct BlockSet {
    std::vector<Field> blocks;  // blocks[0] is Delta_{-1}
    int jmax = -1;
    const Field& at(int q) const { return blocks[static_cast<std::size_t>(q + 1)]; }
};
BlockSet decompose(const DyadicPartition& part, const Field& f);

struct BesovReport {
    double alpha = 0.0;
    std::vector<double> block_norms;     // ||Delta_j f||_inf, j = -1..jmax
    std::vector<double> weighted;        // 2^{alpha j} ||Delta_j f||_inf
    double sup_value = 0.0;
};

BesovReport besov_sup_norm(const DyadicPartition& part, const Field& f, double alpha);
double besov_norm(const DyadicPartition& part, const Field& f, double alpha);

// || . ||_{B^alpha_{r,gamma}} with L^r by uniform grid quadrature
double besov_brg_norm(const DyadicPartition& part, const Field& f, double alpha,
                      double r, double gamma);

double lr_norm(const Field& f, double r);  // r >= 1, +inf allowed

// least-squares slope of log2 E||Delta_j f||_inf vs j over samples;
// returns -slope as the estimated regularity
double regularity_slope(const DyadicPartition& part, const std::vector<Field>& fields,
                        int jmin, int jmax);

// ||d^mu f||_inf / (beta^{d/q + |mu|} ||f||_{L^q}) for f spectrally
// supported in {|m| <= beta}
double bernstein_ratio(const Field& f, const MultiIndex& mu, double q, double beta);

}  // namespace chx
