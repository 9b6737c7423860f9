#pragma once

#include "chx/semigroup.hpp"

#include <cstdint>
#include <vector>

namespace chx {

// Per-mode state of the stochastic convolution driven by space-time white
// noise: each Fourier mode is an Ornstein-Uhlenbeck process with rate
// |2 pi m|^4, the zero mode a Brownian motion.  Updates are exact in
// distribution for any step size.
struct NoiseConfig {
    TorusGrid grid;
    double epsilon = 0.0;  // mollifier scale, 0 = raw grid cutoff
    std::uint64_t seed = 0;
    std::uint64_t trajectory = 0;
    double dt = 1e-4;  // default sampling step
};

struct OUState {
    TorusGrid grid;
    double t = 0.0;
    std::uint64_t step_count = 0;  // rng stream position
    std::vector<cplx> xhat;

    Field field() const { return field_from_coeffs(grid, xhat); }
};

OUState make_noise_state(const NoiseConfig& config);
void sample_step(OUState& state, double dt, const NoiseConfig& config);

struct PsiValue {
    double discrete = 0.0;   // sum over retained grid modes (matches the simulation)
    double continuum = 0.0;  // sum over |q| <= q_cut
    double tail_bound = 0.0; // bound on the neglected continuum tail
};
PsiValue psi(const NoiseConfig& config, double r, int q_cut = 256);

struct WickTriple {
    Field X;
    Field Y;  // X^2 - psi, pointwise on the grid
    Field G;  // X^3 - 3 X psi, pointwise on the grid
    double psi = 0.0;
};
WickTriple wick_powers(const OUState& state, const NoiseConfig& config);

// Coupled-path mollifier convergence: one raw driving path per trajectory,
// each epsilon level read off by a multiplier.  Reports per-level MC
// medians of sup_t || . ||_theta gaps against the finest level for X, Y, G.
struct MollifierConvergence {
    std::vector<double> epsilons;   // coarse..fine, excluding the reference
    double epsilon_ref = 0.0;
    std::vector<double> median_gap_x;
    std::vector<double> median_gap_y;
    std::vector<double> median_gap_g;
};
MollifierConvergence mollifier_convergence_stat(const NoiseConfig& base,
                                                const std::vector<double>& eps_ladder,
                                                double epsilon_ref, double horizon,
                                                int snapshots, double theta, int paths);

}  // namespace chx
