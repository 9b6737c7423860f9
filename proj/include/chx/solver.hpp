#pragma once

#include "chx/noise.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace chx {

// Windowed Picard iteration for the mild equations.  On each window the
// fixed-point map is iterated until the successive-iterate distance in the
// window sup-alpha norm falls below picard_tol; a window is accepted only
// if the observed contraction factor stays <= 1/2, otherwise it shrinks.
struct SolverConfig {
    double alpha = 1.0;
    double dt = 1e-5;
    double picard_tol = 1e-10;
    double blowup_threshold = 1e6;   // ||f||_alpha >= M counts as explosion
    int window_steps_init = 0;       // 0 = derive from the contraction-radius heuristic
    int max_picard_iters = 80;
    bool store_fields = true;
    enum class Guess { hold, propagate } initial_guess = Guess::hold;
};

enum class TrajStatus { completed, exploded, window_underflow };

struct Trajectory {
    std::vector<double> times;
    std::vector<Field> fields;           // empty when store_fields is off
    std::vector<double> alpha_norms;     // ||f(t_k)||_alpha
    std::vector<int> picard_iters;       // per accepted window
    std::vector<double> contraction;     // worst observed factor per accepted window
    std::vector<int> window_steps;       // length of each accepted window
    TrajStatus status = TrajStatus::completed;
    double explosion_time = -1.0;
    bool nonfinite_flagged = false;
};

// f(r) = P_r g + driver(r) + int_0^r P_{r-q} Delta(f^3 - f) dq, d <= 3.
// driver must be sampled at the solver steps (nsteps + 1 fields) or empty.
Trajectory solve_remainder_low_dim(const Field& g, const std::vector<Field>& driver,
                                   std::size_t nsteps, const SolverConfig& config,
                                   const std::function<void(std::size_t, const Field&)>& observer = {});

// remainder equation with Wick inputs:
// f(r) = P_r g + int_0^r P_{r-q} Delta(f^3 + 3 f^2 X + 3 f Y + G - f - X) dq
Trajectory solve_remainder_wick(const Field& g, const std::vector<Field>& X,
                                const std::vector<Field>& Y, const std::vector<Field>& G,
                                std::size_t nsteps, const SolverConfig& config,
                                const std::function<void(std::size_t, const Field&)>& observer = {});

// direct renormalized mollified equation:
// f(r) = P_r (zeta_eps * g) + X_eps(r)
//        + int_0^r P_{r-q} Delta(f^3 - 3 psi_eps(q) f - f) dq
// X_eps is the mollified convolution path at the solver steps, psi the
// discrete renormalization values at the same times.
Trajectory solve_direct_mollified(const Field& g, const std::vector<Field>& noise_path,
                                  const std::vector<double>& psi_values, double epsilon,
                                  std::size_t nsteps, const SolverConfig& config,
                                  const std::function<void(std::size_t, const Field&)>& observer = {});

struct WickInputBundle {
    Field g;
    std::vector<Field> X, Y, G;  // nsteps + 1 fields each
};

struct StabilityReport {
    double left = 0.0;        // ||f2 - f1||_{C_U C^alpha}
    double right = 0.0;       // closed-form bound at the supplied constant
    double sigma = 0.0;
    double gamma1 = 0.0, gamma2 = 0.0;
    double horizon = 0.0;
    double c = 0.0;
    double dist_g = 0.0, dist_x = 0.0, dist_y = 0.0, dist_g4 = 0.0;
    double norm_x2 = 0.0, norm_y2 = 0.0;
};

// runs both Wick trajectories on [0, U] and assembles the stability bound
// at the given constant c
StabilityReport stability_check(const WickInputBundle& in1, const WickInputBundle& in2,
                                std::size_t nsteps, const SolverConfig& config, double c);

// the closed-form right side re-evaluated at a different constant
double stability_bound(const StabilityReport& rep, double c);

// smallest c making left <= right (bisection; right is increasing in c)
double stability_fit_constant(const StabilityReport& rep);

struct DpdConvergence {
    std::vector<double> epsilons;
    double epsilon_ref = 0.0;
    std::vector<double> median_gap;   // per ladder level
    std::vector<int> exploded_paths;  // per ladder level (reference excluded)
    int paths = 0;
};

// final-theorem part 3 experiment: coupled noise across the ladder, direct
// solutions per level against h_ref + X_ref at the reference level
DpdConvergence dpd_convergence_experiment(const Field& g, const std::vector<double>& eps_ladder,
                                          double epsilon_ref, double horizon,
                                          const NoiseConfig& noise, const SolverConfig& config,
                                          int paths);

}  // namespace chx
