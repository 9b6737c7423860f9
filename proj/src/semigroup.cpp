#include "chx/semigroup.hpp"
#include "chx/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace chx {

namespace {

std::vector<double> quartic_freqs(const TorusGrid& g) {
    std::vector<double> lam(g.modes());
    std::array<int, 4> m{};
    for (std::size_t idx = 0; idx < lam.size(); ++idx) {
        unflatten_mode(g, idx, m);
        const double s = sq_freq(g, m);
        lam[idx] = s * s;
    }
    return lam;
}

}  // namespace

Field apply_semigroup(double r, const Field& f) {
    if (r < 0.0) throw std::invalid_argument("apply_semigroup: r >= 0");
    if (r == 0.0) return f;
    std::vector<double> mult = quartic_freqs(f.grid);
    for (double& v : mult) v = std::exp(-r * v);
    std::vector<cplx> coeffs = f.coeffs;
    kernels::apply_real_multiplier(coeffs, mult);
    return field_from_coeffs(f.grid, std::move(coeffs));
}

double phi1(double z) {
    if (std::fabs(z) > 1e-4) return -std::expm1(-z) / z;
    return 1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0;
}

double MollifierSymbol::zeta(double t) {
    return DyadicPartition::smooth_step(2.0 * (1.0 - std::fabs(t)));
}

double MollifierSymbol::symbol(const TorusGrid& g, const std::array<int, 4>& m) const {
    if (epsilon == 0.0) return 1.0;
    return zeta(epsilon * std::sqrt(sq_freq(g, m)) / two_pi);
}

std::vector<double> MollifierSymbol::symbol_table(const TorusGrid& g) const {
    std::vector<double> t(g.modes());
    std::array<int, 4> m{};
    for (std::size_t idx = 0; idx < t.size(); ++idx) {
        unflatten_mode(g, idx, m);
        t[idx] = symbol(g, m);
    }
    return t;
}

Field mollify(const Field& f, const MollifierSymbol& sym) {
    if (sym.epsilon == 0.0) return f;
    std::vector<cplx> coeffs = f.coeffs;
    kernels::apply_real_multiplier(coeffs, sym.symbol_table(f.grid));
    return field_from_coeffs(f.grid, std::move(coeffs));
}

std::vector<Field> duhamel_integrate(const std::vector<Field>& source, double dt) {
    if (dt <= 0.0) throw std::invalid_argument("duhamel_integrate: dt > 0");
    if (source.empty()) return {};
    const TorusGrid& g = source.front().grid;
    for (const Field& f : source)
        if (!(f.grid == g)) throw std::invalid_argument("duhamel_integrate: grid mismatch");

    const std::vector<double> lam = quartic_freqs(g);
    std::vector<double> decay(lam.size()), gain(lam.size());
    for (std::size_t i = 0; i < lam.size(); ++i) {
        const double z = dt * lam[i];
        decay[i] = std::exp(-z);
        gain[i] = phi1(z) * dt;
    }

    std::vector<Field> out;
    out.reserve(source.size());
    out.push_back(zero_field(g));
    std::vector<cplx> state(g.modes(), cplx(0.0, 0.0));
    for (std::size_t k = 0; k + 1 < source.size(); ++k) {
        std::vector<cplx> add = source[k].coeffs;
        kernels::apply_real_multiplier(add, gain);
        kernels::decay_add(state, decay, add);
        out.push_back(field_from_coeffs(g, state));
    }
    return out;
}

double schauder_rate(const DyadicPartition& part, const Field& f, double beta,
                     const std::vector<double>& r_values) {
    if (beta <= 0.0 || beta >= 4.0) throw std::invalid_argument("schauder_rate: 0 < beta < 4");
    if (r_values.size() < 3) throw std::invalid_argument("schauder_rate: need >= 3 r values");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double r : r_values) {
        if (r <= 0.0 || r > 1.0) throw std::invalid_argument("schauder_rate: r in (0, 1]");
        const double x = std::log(r);
        const double y = std::log(besov_norm(part, apply_semigroup(r, f), beta));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double k = static_cast<double>(r_values.size());
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    return -slope * 4.0;
}

}  // namespace chx
