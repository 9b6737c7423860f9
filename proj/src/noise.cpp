#include "chx/noise.hpp"
#include "chx/kernels.hpp"
#include "chx/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chx {

namespace {

// a mode owns the random draw for its Hermitian pair if its first nonzero
// component is positive
bool owns_pair(const TorusGrid& g, const std::array<int, 4>& m) {
    for (int i = 0; i < g.d; ++i) {
        const int v = m[static_cast<std::size_t>(i)];
        if (v > 0) return true;
        if (v < 0) return false;
    }
    return false;  // zero mode handled separately
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

OUState make_noise_state(const NoiseConfig& config) {
    OUState s;
    s.grid = config.grid;
    s.xhat.assign(config.grid.modes(), cplx(0.0, 0.0));
    return s;
}

void sample_step(OUState& state, double dt, const NoiseConfig& config) {
    if (dt <= 0.0) throw std::invalid_argument("sample_step: dt > 0");
    const TorusGrid& g = state.grid;
    MollifierSymbol sym{config.epsilon};
    const std::uint64_t step = state.step_count;
    const std::ptrdiff_t nmodes = static_cast<std::ptrdiff_t>(g.modes());

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t idx = 0; idx < nmodes; ++idx) {
        std::array<int, 4> m{};
        unflatten_mode(g, static_cast<std::size_t>(idx), m);
        if (!owns_pair(g, m)) continue;
        const double s2 = sq_freq(g, m);
        const double lam = s2 * s2;
        const double decay = std::exp(-dt * lam);
        const double var = -std::expm1(-2.0 * dt * lam) / (2.0 * lam);
        auto [z1, z2] = CounterRng::gaussian_pair(config.seed, config.trajectory, step,
                                                  static_cast<std::uint64_t>(idx));
        const double amp = std::sqrt(0.5 * var) * sym.symbol(g, m);
        const cplx eta(amp * z1, amp * z2);
        state.xhat[static_cast<std::size_t>(idx)] =
            decay * state.xhat[static_cast<std::size_t>(idx)] + eta;
        std::array<int, 4> neg{};
        for (int i = 0; i < g.d; ++i) neg[static_cast<std::size_t>(i)] = -m[static_cast<std::size_t>(i)];
        state.xhat[flatten_mode(g, neg)] = std::conj(state.xhat[static_cast<std::size_t>(idx)]);
    }

    // zero mode: Brownian motion
    const std::size_t zero = flatten_mode(g, {0, 0, 0, 0});
    auto [z1, z2] = CounterRng::gaussian_pair(config.seed, config.trajectory, step,
                                              static_cast<std::uint64_t>(zero));
    (void)z2;
    state.xhat[zero] += std::sqrt(dt) * z1;

    state.t += dt;
    state.step_count += 1;
}

PsiValue psi(const NoiseConfig& config, double r, int q_cut) {
    if (r < 0.0) throw std::invalid_argument("psi: r >= 0");
    PsiValue out;
    const TorusGrid& g = config.grid;
    MollifierSymbol sym{config.epsilon};

    // discrete: retained grid modes only
    double acc = 0.0;
    std::array<int, 4> m{};
    for (std::size_t idx = 0; idx < g.modes(); ++idx) {
        unflatten_mode(g, idx, m);
        const double s2 = sq_freq(g, m);
        if (s2 == 0.0) continue;
        const double lam = s2 * s2;
        const double z = sym.symbol(g, m);
        acc += z * z * (-std::expm1(-2.0 * r * lam)) / (2.0 * lam);
    }
    out.discrete = r + acc;

    // continuum: all integer modes with |q| <= R; zeta truncates at |q| < 1/eps
    int radius = q_cut;
    if (config.epsilon > 0.0)
        radius = std::min(radius, static_cast<int>(std::ceil(1.0 / config.epsilon)) + 1);
    double cacc = 0.0;
    std::array<int, 4> q{0, 0, 0, 0};
    const int d = g.d;
    auto term = [&](double norm2) {
        if (norm2 == 0.0) return 0.0;
        double t = two_pi * two_pi * norm2;
        const double lam = t * t;
        const double z = (config.epsilon > 0.0)
                             ? MollifierSymbol::zeta(config.epsilon * std::sqrt(norm2))
                             : 1.0;
        return z * z * (-std::expm1(-2.0 * r * lam)) / (2.0 * lam);
    };
    // plain nested loop over [-R, R]^d
    std::array<int, 4> lo{}, hi{};
    for (int i = 0; i < 4; ++i) { lo[static_cast<std::size_t>(i)] = (i < d) ? -radius : 0; hi[static_cast<std::size_t>(i)] = (i < d) ? radius : 0; }
    for (q[0] = lo[0]; q[0] <= hi[0]; ++q[0])
        for (q[1] = lo[1]; q[1] <= hi[1]; ++q[1])
            for (q[2] = lo[2]; q[2] <= hi[2]; ++q[2])
                for (q[3] = lo[3]; q[3] <= hi[3]; ++q[3]) {
                    double n2 = 0.0;
                    for (int i = 0; i < d; ++i) n2 += static_cast<double>(q[static_cast<std::size_t>(i)]) * q[static_cast<std::size_t>(i)];
                    cacc += term(n2);
                }
    out.continuum = r + cacc;

    // tail of the neglected modes (zero once zeta has cut off)
    if (config.epsilon > 0.0 && radius >= static_cast<int>(std::ceil(1.0 / config.epsilon))) {
        out.tail_bound = 0.0;
    } else {
        const double surf[5] = {0.0, 2.0, two_pi, 2.0 * two_pi, 19.739208802178716};
        const double c4 = std::pow(two_pi, 4.0);
        if (d < 4)
            out.tail_bound = surf[d] * std::pow(static_cast<double>(radius), d - 4) /
                             (2.0 * c4 * (4.0 - d));
        else
            out.tail_bound = surf[4] * std::log(2.0) / (2.0 * c4);  // per octave beyond R
    }
    return out;
}

WickTriple wick_powers(const OUState& state, const NoiseConfig& config) {
    WickTriple w;
    w.X = state.field();
    w.psi = psi(config, state.t).discrete;
    std::vector<double> y(w.X.values.size()), gv(w.X.values.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double x = w.X.values[i];
        y[i] = x * x - w.psi;
        gv[i] = x * x * x - 3.0 * x * w.psi;
    }
    w.Y = field_from_values(state.grid, std::move(y));
    w.G = field_from_values(state.grid, std::move(gv));
    return w;
}

MollifierConvergence mollifier_convergence_stat(const NoiseConfig& base,
                                                const std::vector<double>& eps_ladder,
                                                double epsilon_ref, double horizon,
                                                int snapshots, double theta, int paths) {
    for (std::size_t k = 1; k < eps_ladder.size(); ++k)
        if (eps_ladder[k] >= eps_ladder[k - 1])
            throw std::invalid_argument("mollifier_convergence_stat: ladder must decrease");

    const DyadicPartition part = make_partition();
    const TorusGrid& g = base.grid;
    const double dt = horizon / snapshots;
    const std::size_t nlev = eps_ladder.size();

    // all levels read the same raw path through their symbol tables
    std::vector<std::vector<double>> tables;
    for (double e : eps_ladder) tables.push_back(MollifierSymbol{e}.symbol_table(g));
    const std::vector<double> table_ref = MollifierSymbol{epsilon_ref}.symbol_table(g);

    // psi per level and snapshot
    std::vector<std::vector<double>> psi_lvl(nlev, std::vector<double>(static_cast<std::size_t>(snapshots)));
    std::vector<double> psi_ref(static_cast<std::size_t>(snapshots));
    for (int s = 0; s < snapshots; ++s) {
        const double t = dt * (s + 1);
        for (std::size_t k = 0; k < nlev; ++k) {
            NoiseConfig c = base;
            c.epsilon = eps_ladder[k];
            psi_lvl[k][static_cast<std::size_t>(s)] = psi(c, t).discrete;
        }
        NoiseConfig c = base;
        c.epsilon = epsilon_ref;
        psi_ref[static_cast<std::size_t>(s)] = psi(c, t).discrete;
    }

    std::vector<std::vector<double>> gx(nlev, std::vector<double>(static_cast<std::size_t>(paths), 0.0));
    std::vector<std::vector<double>> gy = gx, gg = gx;

    auto wick_fields = [&](const std::vector<cplx>& raw, const std::vector<double>& table,
                           double psival, Field& X, Field& Y, Field& G) {
        std::vector<cplx> xh = raw;
        kernels::apply_real_multiplier(xh, table);
        X = field_from_coeffs(g, std::move(xh));
        std::vector<double> y(X.values.size()), gv(X.values.size());
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double x = X.values[i];
            y[i] = x * x - psival;
            gv[i] = x * x * x - 3.0 * x * psival;
        }
        Y = field_from_values(g, std::move(y));
        G = field_from_values(g, std::move(gv));
    };

#pragma omp parallel for schedule(dynamic)
    for (int p = 0; p < paths; ++p) {
        NoiseConfig raw = base;
        raw.epsilon = 0.0;
        raw.trajectory = base.trajectory + static_cast<std::uint64_t>(p);
        OUState st = make_noise_state(raw);
        for (int s = 0; s < snapshots; ++s) {
            sample_step(st, dt, raw);
            Field Xr, Yr, Gr;
            wick_fields(st.xhat, table_ref, psi_ref[static_cast<std::size_t>(s)], Xr, Yr, Gr);
            for (std::size_t k = 0; k < nlev; ++k) {
                Field X, Y, G;
                wick_fields(st.xhat, tables[k], psi_lvl[k][static_cast<std::size_t>(s)], X, Y, G);
                auto& ax = gx[k][static_cast<std::size_t>(p)];
                auto& ay = gy[k][static_cast<std::size_t>(p)];
                auto& ag = gg[k][static_cast<std::size_t>(p)];
                ax = std::max(ax, besov_norm(part, sub(X, Xr), theta));
                ay = std::max(ay, besov_norm(part, sub(Y, Yr), theta));
                ag = std::max(ag, besov_norm(part, sub(G, Gr), theta));
            }
        }
    }

    MollifierConvergence out;
    out.epsilons = eps_ladder;
    out.epsilon_ref = epsilon_ref;
    for (std::size_t k = 0; k < nlev; ++k) {
        out.median_gap_x.push_back(median(gx[k]));
        out.median_gap_y.push_back(median(gy[k]));
        out.median_gap_g.push_back(median(gg[k]));
    }
    return out;
}

}  // namespace chx
