#include "chx/solver.hpp"
#include "chx/kernels.hpp"
#include "fft_detail.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chx {

namespace {

struct StepTables {
    std::vector<double> decay;  // e^{-dt |2 pi m|^4}
    std::vector<double> gain;   // phi1(dt |2 pi m|^4) dt
};

StepTables make_step_tables(const TorusGrid& g, double dt) {
    StepTables t;
    t.decay.resize(g.modes());
    t.gain.resize(g.modes());
    std::array<int, 4> m{};
    for (std::size_t idx = 0; idx < t.decay.size(); ++idx) {
        unflatten_mode(g, idx, m);
        const double s = sq_freq(g, m);
        const double z = dt * s * s;
        t.decay[idx] = std::exp(-z);
        t.gain[idx] = phi1(z) * dt;
    }
    return t;
}

bool finite_coeffs(const std::vector<cplx>& c) {
    for (const cplx& z : c)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

// window start heuristic from the contraction-radius bound, adapted later
// by the observed contraction
std::size_t initial_window(double gamma, double dt, std::size_t nsteps) {
    const double gamma2 = 0.5;
    const double theta = std::min(1.0, std::pow(2.0 * (1.0 + gamma * gamma), -1.0 / (1.0 - gamma2)));
    auto w = static_cast<std::size_t>(std::max(1.0, std::floor(theta / dt)));
    return std::min({w, nsteps, static_cast<std::size_t>(256)});
}

struct MildProblem {
    Field g;                              // propagated initial data
    const std::vector<Field>* additive;   // optional forcing added outside the fixed point
    std::function<Field(const Field&, std::size_t)> source;  // Delta(...) at a global step
};

Trajectory run_windowed_picard(const MildProblem& prob, std::size_t nsteps,
                               const SolverConfig& config,
                               const std::function<void(std::size_t, const Field&)>& observer) {
    if (config.dt <= 0.0 || config.picard_tol <= 0.0 || config.blowup_threshold <= 0.0)
        throw std::invalid_argument("solver: dt, picard_tol, blowup threshold must be positive");
    if (prob.additive && prob.additive->size() != nsteps + 1)
        throw std::invalid_argument("solver: additive series must have nsteps + 1 entries");

    const TorusGrid g = prob.g.grid;
    const DyadicPartition part = make_partition();
    const StepTables tab = make_step_tables(g, config.dt);

    Trajectory traj;
    Field f_cur = prob.g;
    if (prob.additive) f_cur = add(f_cur, prob.additive->front());
    traj.times.push_back(0.0);
    traj.alpha_norms.push_back(besov_norm(part, f_cur, config.alpha));
    if (config.store_fields) traj.fields.push_back(f_cur);
    if (observer) observer(0, f_cur);

    double gamma = 2.0 * traj.alpha_norms.front();
    if (prob.additive) {
        double a = 0.0;
        const std::size_t stride = std::max<std::size_t>(1, nsteps / 16);
        for (std::size_t k = 0; k < prob.additive->size(); k += stride)
            a = std::max(a, besov_norm(part, (*prob.additive)[k], config.alpha));
        gamma += 2.0 * a;
    }
    std::size_t window = config.window_steps_init > 0
                             ? static_cast<std::size_t>(config.window_steps_init)
                             : initial_window(gamma, config.dt, nsteps);

    std::size_t k0 = 0;
    while (k0 < nsteps) {
        const std::size_t w = std::min(window, nsteps - k0);

        Field a = f_cur;
        if (prob.additive) a = sub(a, (*prob.additive)[k0]);

        // initial guess
        std::vector<Field> phi(w + 1);
        phi[0] = f_cur;
        if (config.initial_guess == SolverConfig::Guess::hold) {
            for (std::size_t j = 1; j <= w; ++j) phi[j] = f_cur;
        } else {
            std::vector<cplx> pa = a.coeffs;
            for (std::size_t j = 1; j <= w; ++j) {
                for (std::size_t i = 0; i < pa.size(); ++i) pa[i] *= tab.decay[i];
                Field p = field_from_coeffs(g, pa);
                if (prob.additive) add_inplace(p, (*prob.additive)[k0 + j]);
                phi[j] = std::move(p);
            }
        }

        bool converged = false, bad = false;
        double prev_res = -1.0, worst_ratio = 0.0;
        int iters = 0;
        for (iters = 1; iters <= config.max_picard_iters; ++iters) {
            std::vector<cplx> pa = a.coeffs;
            std::vector<cplx> duh(g.modes(), cplx(0.0, 0.0));
            double res = 0.0;
            std::vector<Field> next(w + 1);
            next[0] = f_cur;
            for (std::size_t j = 1; j <= w; ++j) {
                std::vector<cplx> src = prob.source(phi[j - 1], k0 + j - 1).coeffs;
                kernels::apply_real_multiplier(src, tab.gain);
                kernels::decay_add(duh, tab.decay, src);
                for (std::size_t i = 0; i < pa.size(); ++i) pa[i] *= tab.decay[i];
                std::vector<cplx> u = duh;
                for (std::size_t i = 0; i < u.size(); ++i) u[i] += pa[i];
                if (!finite_coeffs(u)) { bad = true; break; }
                Field uf = field_from_coeffs(g, std::move(u));
                if (prob.additive) add_inplace(uf, (*prob.additive)[k0 + j]);
                res = std::max(res, besov_norm(part, sub(uf, phi[j]), config.alpha));
                next[j] = std::move(uf);
            }
            if (bad) break;
            phi = std::move(next);
            if (prev_res > std::max(config.picard_tol, 1e-14) && res > 0.0)
                worst_ratio = std::max(worst_ratio, res / prev_res);
            prev_res = res;
            if (res <= config.picard_tol) { converged = true; break; }
        }

        const bool accepted = converged && !bad && worst_ratio <= 0.5;
        if (!accepted) {
            if (bad || window == 1) {
                const double norm_now = traj.alpha_norms.back();
                if (bad || norm_now >= config.blowup_threshold) {
                    traj.status = TrajStatus::exploded;
                    traj.nonfinite_flagged = bad;
                } else {
                    traj.status = TrajStatus::window_underflow;
                }
                traj.explosion_time = traj.times.back();
                return traj;
            }
            window = std::max<std::size_t>(1, window / 2);
            continue;
        }

        traj.picard_iters.push_back(iters);
        traj.contraction.push_back(worst_ratio);
        traj.window_steps.push_back(static_cast<int>(w));
        for (std::size_t j = 1; j <= w; ++j) {
            const std::size_t k = k0 + j;
            traj.times.push_back(config.dt * static_cast<double>(k));
            traj.alpha_norms.push_back(besov_norm(part, phi[j], config.alpha));
            if (config.store_fields) traj.fields.push_back(phi[j]);
            if (observer) observer(k, phi[j]);
        }
        f_cur = phi[w];
        k0 += w;

        if (traj.alpha_norms.back() >= config.blowup_threshold) {
            traj.status = TrajStatus::exploded;
            traj.explosion_time = traj.times.back();
            return traj;
        }
        // adapt: quick convergence earns a wider window
        if (iters <= 6 && window < 256) window *= 2;
    }
    traj.status = TrajStatus::completed;
    return traj;
}

Field cubic_minus_linear_source(const Field& phi) {
    return laplacian(sub(cube_dealiased(phi), phi));
}

}  // namespace

Trajectory solve_remainder_low_dim(const Field& g, const std::vector<Field>& driver,
                                   std::size_t nsteps, const SolverConfig& config,
                                   const std::function<void(std::size_t, const Field&)>& observer) {
    if (g.grid.d > 3) throw std::invalid_argument("solve_remainder_low_dim: d <= 3");
    const double amax = 2.0 - 0.5 * g.grid.d;
    if (config.alpha <= 0.0 || config.alpha >= amax)
        throw std::invalid_argument("solve_remainder_low_dim: alpha outside ]0, 2 - d/2[");
    MildProblem prob;
    prob.g = g;
    prob.additive = driver.empty() ? nullptr : &driver;
    prob.source = [](const Field& phi, std::size_t) { return cubic_minus_linear_source(phi); };
    return run_windowed_picard(prob, nsteps, config, observer);
}

// The source Delta(h^3 + 3 h^2 X + 3 h Y + G - h - X) evaluates the whole
// cubic polynomial pointwise on the 2n-padded grid in one shot, so the
// discrete algebra matches the direct equation's nonlinearity exactly when
// Y and G are the pointwise Wick combinations of X.
Trajectory solve_remainder_wick(const Field& g, const std::vector<Field>& X,
                                const std::vector<Field>& Y, const std::vector<Field>& G,
                                std::size_t nsteps, const SolverConfig& config,
                                const std::function<void(std::size_t, const Field&)>& observer) {
    if (config.alpha <= 0.0 || config.alpha >= 2.0)
        throw std::invalid_argument("solve_remainder_wick: alpha outside ]0, 2[");
    if (X.size() != nsteps + 1 || Y.size() != nsteps + 1 || G.size() != nsteps + 1)
        throw std::invalid_argument("solve_remainder_wick: series must have nsteps + 1 entries");
    const TorusGrid grid = g.grid;
    const int npad = 2 * grid.n;
    MildProblem prob;
    prob.g = g;
    prob.additive = nullptr;
    prob.source = [&X, &Y, &G, grid, npad](const Field& h, std::size_t k) {
        std::vector<double> hp = detail::samples_of_spectrum(grid, npad, h.coeffs);
        std::vector<double> xp = detail::samples_of_spectrum(grid, npad, X[k].coeffs);
        std::vector<double> yp = detail::samples_of_spectrum(grid, npad, Y[k].coeffs);
        std::vector<double> gp = detail::samples_of_spectrum(grid, npad, G[k].coeffs);
        for (std::size_t i = 0; i < hp.size(); ++i) {
            const double h1 = hp[i];
            hp[i] = h1 * h1 * h1 + 3.0 * h1 * h1 * xp[i] + 3.0 * h1 * yp[i] + gp[i];
        }
        Field poly = field_from_coeffs(grid, detail::spectrum_of_samples(grid, npad, hp));
        add_inplace(poly, h, -1.0);
        add_inplace(poly, X[k], -1.0);
        return laplacian(poly);
    };
    return run_windowed_picard(prob, nsteps, config, observer);
}

Trajectory solve_direct_mollified(const Field& g, const std::vector<Field>& noise_path,
                                  const std::vector<double>& psi_values, double epsilon,
                                  std::size_t nsteps, const SolverConfig& config,
                                  const std::function<void(std::size_t, const Field&)>& observer) {
    if (noise_path.size() != nsteps + 1 || psi_values.size() != nsteps + 1)
        throw std::invalid_argument("solve_direct_mollified: series must have nsteps + 1 entries");
    MildProblem prob;
    prob.g = mollify(g, MollifierSymbol{epsilon});
    prob.additive = &noise_path;
    prob.source = [&psi_values](const Field& phi, std::size_t k) {
        Field cubic = cube_dealiased(phi);
        add_inplace(cubic, phi, -(3.0 * psi_values[k] + 1.0));
        return laplacian(cubic);
    };
    return run_windowed_picard(prob, nsteps, config, observer);
}

namespace {

double stability_right(const StabilityReport& r, double c) {
    const double mu = std::max(r.horizon, std::pow(r.horizon, 1.0 - r.gamma2));
    const double lead = r.dist_g + c * mu * ((r.sigma * r.sigma + 1.0) * r.dist_x +
                                             r.sigma * r.dist_y + r.dist_g4);
    const double expo = c * mu * (2.0 * r.sigma * r.sigma + 2.0 * r.sigma * r.norm_x2 +
                                  r.norm_y2 + 1.0);
    return lead * std::exp(expo);
}

}  // namespace

double stability_bound(const StabilityReport& rep, double c) { return stability_right(rep, c); }

StabilityReport stability_check(const WickInputBundle& in1, const WickInputBundle& in2,
                                std::size_t nsteps, const SolverConfig& config, double c) {
    SolverConfig cfg = config;
    cfg.store_fields = true;
    Trajectory t1 = solve_remainder_wick(in1.g, in1.X, in1.Y, in1.G, nsteps, cfg);
    Trajectory t2 = solve_remainder_wick(in2.g, in2.X, in2.Y, in2.G, nsteps, cfg);
    if (t1.status != TrajStatus::completed || t2.status != TrajStatus::completed)
        throw std::runtime_error("stability_check: explosion before the horizon");

    const DyadicPartition part = make_partition();
    StabilityReport rep;
    rep.c = c;
    rep.horizon = config.dt * static_cast<double>(nsteps);
    rep.gamma1 = 0.5 * std::min(config.alpha, 2.0 - config.alpha);
    rep.gamma2 = 0.25 * (2.0 + config.alpha + rep.gamma1);
    for (std::size_t k = 0; k < t1.fields.size(); ++k)
        rep.left = std::max(rep.left, besov_norm(part, sub(t2.fields[k], t1.fields[k]), config.alpha));
    for (double v : t1.alpha_norms) rep.sigma = std::max(rep.sigma, v);
    for (double v : t2.alpha_norms) rep.sigma = std::max(rep.sigma, v);
    rep.dist_g = besov_norm(part, sub(in2.g, in1.g), config.alpha);
    for (std::size_t k = 0; k <= nsteps; ++k) {
        rep.dist_x = std::max(rep.dist_x, besov_norm(part, sub(in2.X[k], in1.X[k]), -rep.gamma1));
        rep.dist_y = std::max(rep.dist_y, besov_norm(part, sub(in2.Y[k], in1.Y[k]), -rep.gamma1));
        rep.dist_g4 = std::max(rep.dist_g4, besov_norm(part, sub(in2.G[k], in1.G[k]), -rep.gamma1));
        rep.norm_x2 = std::max(rep.norm_x2, besov_norm(part, in2.X[k], -rep.gamma1));
        rep.norm_y2 = std::max(rep.norm_y2, besov_norm(part, in2.Y[k], -rep.gamma1));
    }
    rep.right = stability_right(rep, c);
    return rep;
}

double stability_fit_constant(const StabilityReport& rep) {
    if (rep.left <= rep.dist_g) return 0.0;
    double hi = 1.0;
    while (stability_right(rep, hi) < rep.left) {
        hi *= 2.0;
        if (hi > 1e12) throw std::runtime_error("stability_fit_constant: bound cannot reach left side");
    }
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (stability_right(rep, mid) < rep.left ? lo : hi) = mid;
    }
    return hi;
}

DpdConvergence dpd_convergence_experiment(const Field& g, const std::vector<double>& eps_ladder,
                                          double epsilon_ref, double horizon,
                                          const NoiseConfig& noise, const SolverConfig& config,
                                          int paths) {
    const TorusGrid grid = g.grid;
    const DyadicPartition part = make_partition();
    const std::size_t nsteps = static_cast<std::size_t>(std::llround(horizon / config.dt));
    const std::size_t nlev = eps_ladder.size();

    std::vector<std::vector<double>> tables;
    for (double e : eps_ladder) tables.push_back(MollifierSymbol{e}.symbol_table(grid));
    const std::vector<double> table_ref = MollifierSymbol{epsilon_ref}.symbol_table(grid);

    // discrete psi per level and step
    auto psi_series = [&](double eps) {
        NoiseConfig c = noise;
        c.epsilon = eps;
        std::vector<double> v(nsteps + 1);
        for (std::size_t k = 0; k <= nsteps; ++k) v[k] = psi(c, config.dt * static_cast<double>(k), 8).discrete;
        return v;
    };
    std::vector<std::vector<double>> psi_lvl;
    for (double e : eps_ladder) psi_lvl.push_back(psi_series(e));
    const std::vector<double> psi_ref = psi_series(epsilon_ref);

    std::vector<std::vector<double>> gaps(nlev, std::vector<double>(static_cast<std::size_t>(paths),
                                                                    std::nan("")));
    std::vector<std::vector<int>> exploded(nlev, std::vector<int>(static_cast<std::size_t>(paths), 0));

#pragma omp parallel for schedule(dynamic)
    for (int p = 0; p < paths; ++p) {
        NoiseConfig raw = noise;
        raw.epsilon = 0.0;
        raw.trajectory = noise.trajectory + static_cast<std::uint64_t>(p);
        OUState st = make_noise_state(raw);
        std::vector<std::vector<cplx>> raw_path(nsteps + 1);
        raw_path[0] = st.xhat;
        for (std::size_t k = 1; k <= nsteps; ++k) {
            sample_step(st, config.dt, raw);
            raw_path[k] = st.xhat;
        }

        auto level_path = [&](const std::vector<double>& table) {
            std::vector<Field> out(nsteps + 1);
            for (std::size_t k = 0; k <= nsteps; ++k) {
                std::vector<cplx> xh = raw_path[k];
                kernels::apply_real_multiplier(xh, table);
                out[k] = field_from_coeffs(grid, std::move(xh));
            }
            return out;
        };

        // reference target h_ref + X_ref
        std::vector<Field> Xr = level_path(table_ref);
        std::vector<Field> Yr(nsteps + 1), Gr(nsteps + 1);
        for (std::size_t k = 0; k <= nsteps; ++k) {
            std::vector<double> y(Xr[k].values.size()), gv(Xr[k].values.size());
            for (std::size_t i = 0; i < y.size(); ++i) {
                const double x = Xr[k].values[i];
                y[i] = x * x - psi_ref[k];
                gv[i] = x * x * x - 3.0 * x * psi_ref[k];
            }
            Yr[k] = field_from_values(grid, std::move(y));
            Gr[k] = field_from_values(grid, std::move(gv));
        }
        SolverConfig cfg = config;
        cfg.store_fields = false;
        std::vector<Field> target(nsteps + 1);
        Trajectory href = solve_remainder_wick(mollify(g, MollifierSymbol{epsilon_ref}), Xr, Yr, Gr,
                                               nsteps, cfg,
                                               [&](std::size_t k, const Field& h) {
                                                   target[k] = add(h, Xr[k]);
                                               });
        if (href.status != TrajStatus::completed) {
            for (std::size_t l = 0; l < nlev; ++l) exploded[l][static_cast<std::size_t>(p)] = 1;
            continue;
        }

        for (std::size_t l = 0; l < nlev; ++l) {
            std::vector<Field> Xl = level_path(tables[l]);
            double gap = 0.0;
            Trajectory tf = solve_direct_mollified(g, Xl, psi_lvl[l], eps_ladder[l], nsteps, cfg,
                                                   [&](std::size_t k, const Field& f) {
                                                       gap = std::max(gap, besov_norm(part, sub(f, target[k]),
                                                                                      config.alpha));
                                                   });
            if (tf.status != TrajStatus::completed)
                exploded[l][static_cast<std::size_t>(p)] = 1;
            else
                gaps[l][static_cast<std::size_t>(p)] = gap;
        }
    }

    DpdConvergence out;
    out.epsilons = eps_ladder;
    out.epsilon_ref = epsilon_ref;
    out.paths = paths;
    for (std::size_t l = 0; l < nlev; ++l) {
        std::vector<double> ok;
        int boom = 0;
        for (int p = 0; p < paths; ++p) {
            if (exploded[l][static_cast<std::size_t>(p)]) ++boom;
            else ok.push_back(gaps[l][static_cast<std::size_t>(p)]);
        }
        std::sort(ok.begin(), ok.end());
        out.median_gap.push_back(ok.empty() ? std::nan("")
                                            : (ok.size() % 2 ? ok[ok.size() / 2]
                                                             : 0.5 * (ok[ok.size() / 2 - 1] + ok[ok.size() / 2])));
        out.exploded_paths.push_back(boom);
    }
    return out;
}

}  // namespace chx
