#include "chx/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace chx {

RateFit fit_rate(const std::vector<double>& x, const std::vector<double>& y, RateModel model) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_rate: size mismatch");
    if (x.size() < 3) throw std::invalid_argument("fit_rate: need >= 3 points");
    std::vector<double> u(x.size()), v(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (y[i] <= 0.0) throw std::invalid_argument("fit_rate: y must be positive");
        if (model == RateModel::power && x[i] <= 0.0)
            throw std::invalid_argument("fit_rate: x must be positive for the power model");
        u[i] = (model == RateModel::power) ? std::log(x[i]) : x[i];
        v[i] = std::log(y[i]);
    }
    const double k = static_cast<double>(x.size());
    double su = 0, sv = 0, suu = 0, suv = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        su += u[i]; sv += v[i]; suu += u[i] * u[i]; suv += u[i] * v[i];
    }
    RateFit fit;
    fit.exponent = (k * suv - su * sv) / (k * suu - su * su);
    const double intercept = (sv - fit.exponent * su) / k;
    fit.prefactor = std::exp(intercept);
    double ss_res = 0, ss_tot = 0;
    const double vbar = sv / k;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double e = v[i] - (intercept + fit.exponent * u[i]);
        ss_res += e * e;
        ss_tot += (v[i] - vbar) * (v[i] - vbar);
    }
    fit.r2 = (ss_tot == 0.0) ? 1.0 : 1.0 - ss_res / ss_tot;
    return fit;
}

namespace {

// (1 + |m|^4)^{-e/4} tabulated over the box [-radius, radius]^d
std::vector<double> weight_table(int d, int radius, double e) {
    const int w = 2 * radius + 1;
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(w);
    std::vector<double> t(total);
    std::array<int, 4> m{};
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        double n2 = 0.0;
        for (int i = d - 1; i >= 0; --i) {
            const int c = static_cast<int>(rem % static_cast<std::size_t>(w)) - radius;
            m[static_cast<std::size_t>(i)] = c;
            rem /= static_cast<std::size_t>(w);
            n2 += static_cast<double>(c) * c;
        }
        t[idx] = std::pow(1.0 + n2 * n2, -0.25 * e);
    }
    return t;
}

}  // namespace

Lemma2Report lemma2_check(int d, double alpha, double beta, int qmax) {
    if (d < 1 || d > 2) throw std::invalid_argument("lemma2_check: d in 1..2");
    if (!(std::max(alpha, beta) < d) || !(alpha + beta > d))
        throw std::invalid_argument("lemma2_check: need max(alpha,beta) < d < alpha+beta");
    if (qmax < 16) throw std::invalid_argument("lemma2_check: qmax >= 16");

    const int mrad = 4 * qmax;
    const int drad = mrad + qmax;  // range of q - m
    const std::vector<double> wb = weight_table(d, mrad, beta);
    const std::vector<double> wa = weight_table(d, drad, alpha);
    const int mw = 2 * mrad + 1;
    const int dw = 2 * drad + 1;
    const int qw = 2 * qmax + 1;

    Lemma2Report rep;
    rep.d = d; rep.alpha = alpha; rep.beta = beta; rep.qmax = qmax;
    const std::size_t nq = (d == 1) ? static_cast<std::size_t>(qw)
                                    : static_cast<std::size_t>(qw) * static_cast<std::size_t>(qw);
    rep.q_norm.resize(nq);
    rep.ratio.resize(nq);

    const std::ptrdiff_t nq_s = static_cast<std::ptrdiff_t>(nq);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t qi = 0; qi < nq_s; ++qi) {
        int q0, q1 = 0;
        if (d == 1) {
            q0 = static_cast<int>(qi) - qmax;
        } else {
            q0 = static_cast<int>(qi) / qw - qmax;
            q1 = static_cast<int>(qi) % qw - qmax;
        }
        double lhs = 0.0;
        if (d == 1) {
            for (int m0 = -mrad; m0 <= mrad; ++m0)
                lhs += wa[static_cast<std::size_t>(q0 - m0 + drad)] *
                       wb[static_cast<std::size_t>(m0 + mrad)];
        } else {
            for (int m0 = -mrad; m0 <= mrad; ++m0) {
                const double* wa_row = wa.data() +
                    static_cast<std::size_t>(q0 - m0 + drad) * static_cast<std::size_t>(dw);
                const double* wb_row = wb.data() +
                    static_cast<std::size_t>(m0 + mrad) * static_cast<std::size_t>(mw);
                double acc = 0.0;
                for (int m1 = -mrad; m1 <= mrad; ++m1)
                    acc += wa_row[q1 - m1 + drad] * wb_row[m1 + mrad];
                lhs += acc;
            }
        }
        const double n2 = static_cast<double>(q0) * q0 + static_cast<double>(q1) * q1;
        const double rhs = std::pow(1.0 + n2 * n2, 0.25 * (d - alpha - beta));
        rep.q_norm[static_cast<std::size_t>(qi)] = std::sqrt(n2);
        rep.ratio[static_cast<std::size_t>(qi)] = lhs / rhs;
    }

    for (double r : rep.ratio) rep.max_ratio = std::max(rep.max_ratio, r);

    // flatness of log ratio against log(1 + |q|); the fit is restricted to
    // |q| >= qmax/4 so the near-origin transient does not masquerade as a
    // growth trend
    double sx = 0, sy = 0, sxx = 0, sxy = 0, k = 0;
    for (std::size_t i = 0; i < nq; ++i) {
        if (rep.q_norm[i] < 0.25 * qmax) continue;
        const double x = std::log(1.0 + rep.q_norm[i]);
        const double y = std::log(rep.ratio[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y; k += 1.0;
    }
    rep.flatness_slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);

    // |m| > 4 qmax and |q| <= qmax gives |q-m| >= (3/4)|m|
    const double surf = (d == 1) ? 2.0 : 6.283185307179586;
    rep.tail_bound = surf * std::pow(4.0 / 3.0, alpha) *
                     std::pow(static_cast<double>(mrad), d - alpha - beta) / (alpha + beta - d);
    return rep;
}

}  // namespace chx
