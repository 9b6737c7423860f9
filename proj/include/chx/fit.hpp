#pragma once

#include <vector>

namespace chx {

enum class RateModel { power, exponential };

struct RateFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    double r2 = 0.0;
};

// least squares in log-log (power: y = a x^e) or semilog (exponential:
// y = a e^{e x}); needs >= 3 points with positive y (and positive x for
// the power model)
RateFit fit_rate(const std::vector<double>& x, const std::vector<double>& y, RateModel model);

// Empirical constant for the discrete convolution bound
//   sum_m (1+|q-m|^4)^{-alpha/4} (1+|m|^4)^{-beta/4}
//     <= c (1+|q|^4)^{(d-alpha-beta)/4}
// under max(alpha, beta) < d < alpha + beta.  The inner sum runs over
// |m| <= 4 qmax; the neglected tail is bounded and reported.
struct Lemma2Report {
    int d = 1;
    double alpha = 0.0, beta = 0.0;
    int qmax = 0;
    std::vector<double> q_norm;  // |q| per outer lattice point
    std::vector<double> ratio;   // LHS / RHS shape
    double max_ratio = 0.0;
    double flatness_slope = 0.0;  // log ratio vs log(1+|q|), |q| >= 2
    double tail_bound = 0.0;
};

Lemma2Report lemma2_check(int d, double alpha, double beta, int qmax);

}  // namespace chx
