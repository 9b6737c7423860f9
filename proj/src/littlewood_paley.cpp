#include "chx/littlewood_paley.hpp"
#include "chx/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chx {

double DyadicPartition::smooth_step(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    const double b = std::exp(-1.0 / s);
    const double b1 = std::exp(-1.0 / (1.0 - s));
    return b / (b + b1);
}

double DyadicPartition::chi(double t) {
    constexpr double hi = 4.0 / 3.0;
    constexpr double lo = 3.0 / 4.0;
    return smooth_step((hi - t) / (hi - lo));
}

double DyadicPartition::rho(int q, double t) const {
    if (q < -1) throw std::invalid_argument("rho: q >= -1");
    if (q == -1) return rho_minus1(t);
    return rho0(std::ldexp(t, -q));
}

DyadicPartition make_partition() { return DyadicPartition{}; }

int block_jmax(const TorusGrid& g) {
    const double r = std::sqrt(static_cast<double>(g.d)) * g.band;
    return static_cast<int>(std::ceil(std::log2(r))) + 1;
}

namespace {

std::vector<double> block_multiplier(const DyadicPartition& part, const TorusGrid& g, int q) {
    std::vector<double> mult(g.modes());
    std::array<int, 4> m{};
    for (std::size_t idx = 0; idx < mult.size(); ++idx) {
        unflatten_mode(g, idx, m);
        double s = 0.0;
        for (int i = 0; i < g.d; ++i)
            s += static_cast<double>(m[static_cast<std::size_t>(i)]) * m[static_cast<std::size_t>(i)];
        mult[idx] = part.rho(q, std::sqrt(s));
    }
    return mult;
}

}  // namespace

Field block(const DyadicPartition& part, const Field& f, int q) {
    if (q < -1) throw std::invalid_argument("block: q >= -1");
    if (q > block_jmax(f.grid)) return zero_field(f.grid);
    std::vector<cplx> coeffs = f.coeffs;
    kernels::apply_real_multiplier(coeffs, block_multiplier(part, f.grid, q));
    return field_from_coeffs(f.grid, std::move(coeffs));
}

BlockSet decompose(const DyadicPartition& part, const Field& f) {
    BlockSet s;
    s.jmax = block_jmax(f.grid);
    s.blocks.reserve(static_cast<std::size_t>(s.jmax + 2));
    for (int q = -1; q <= s.jmax; ++q) s.blocks.push_back(block(part, f, q));
    return s;
}

BesovReport besov_sup_norm(const DyadicPartition& part, const Field& f, double alpha) {
    BesovReport rep;
    rep.alpha = alpha;
    const int jmax = block_jmax(f.grid);
    for (int j = -1; j <= jmax; ++j) {
        const double bn = max_abs(block(part, f, j));
        rep.block_norms.push_back(bn);
        rep.weighted.push_back(std::exp2(alpha * j) * bn);
    }
    rep.sup_value = *std::max_element(rep.weighted.begin(), rep.weighted.end());
    return rep;
}

double besov_norm(const DyadicPartition& part, const Field& f, double alpha) {
    return besov_sup_norm(part, f, alpha).sup_value;
}

double lr_norm(const Field& f, double r) {
    if (std::isinf(r)) return max_abs(f);
    if (r < 1.0) throw std::invalid_argument("lr_norm: r >= 1");
    double s = 0.0;
    for (double v : f.values) s += std::pow(std::fabs(v), r);
    return std::pow(s / static_cast<double>(f.values.size()), 1.0 / r);
}

double besov_brg_norm(const DyadicPartition& part, const Field& f, double alpha,
                      double r, double gamma) {
    if (r < 1.0 || gamma < 1.0) throw std::invalid_argument("besov_brg_norm: r, gamma >= 1");
    const int jmax = block_jmax(f.grid);
    double s = 0.0;
    for (int j = -1; j <= jmax; ++j) {
        const double bn = lr_norm(block(part, f, j), r);
        s += std::exp2(alpha * gamma * j) * std::pow(bn, gamma);
    }
    return std::pow(s, 1.0 / gamma);
}

double regularity_slope(const DyadicPartition& part, const std::vector<Field>& fields,
                        int jmin, int jmax) {
    if (fields.empty()) throw std::invalid_argument("regularity_slope: no fields");
    if (jmax > block_jmax(fields.front().grid)) throw std::invalid_argument("regularity_slope: jmax beyond available blocks");
    if (jmax - jmin + 1 < 3) throw std::invalid_argument("regularity_slope: need >= 3 blocks");
    // mean block norm over the sample before taking logs
    std::vector<double> mean(static_cast<std::size_t>(jmax - jmin + 1), 0.0);
    for (const Field& f : fields)
        for (int j = jmin; j <= jmax; ++j)
            mean[static_cast<std::size_t>(j - jmin)] += max_abs(block(part, f, j));
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int k = jmax - jmin + 1;
    for (int j = jmin; j <= jmax; ++j) {
        double m = mean[static_cast<std::size_t>(j - jmin)] / static_cast<double>(fields.size());
        if (m <= 0.0) throw std::invalid_argument("regularity_slope: degenerate block");
        const double x = j, y = std::log2(m);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    return -slope;
}

double bernstein_ratio(const Field& f, const MultiIndex& mu, double q, double beta) {
    // verify the spectral support assumption
    std::array<int, 4> m{};
    for (std::size_t idx = 0; idx < f.coeffs.size(); ++idx) {
        if (std::abs(f.coeffs[idx]) < 1e-14) continue;
        unflatten_mode(f.grid, idx, m);
        double s = 0.0;
        for (int i = 0; i < f.grid.d; ++i)
            s += static_cast<double>(m[static_cast<std::size_t>(i)]) * m[static_cast<std::size_t>(i)];
        if (std::sqrt(s) > beta + 1e-12)
            throw std::invalid_argument("bernstein_ratio: spectral support exceeds beta");
    }
    const double num = max_abs(derivative(f, mu));
    const double den = std::pow(beta, static_cast<double>(f.grid.d) / q + mu.order()) * lr_norm(f, q);
    return num / den;
}

}  // namespace chx
