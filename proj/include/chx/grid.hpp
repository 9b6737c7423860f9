#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace chx {

using cplx = std::complex<double>;

constexpr double two_pi = 6.283185307179586476925286766559;

// Uniform grid on the d-torus, n points per axis, n a power of two.
// Retained frequencies are |m_i| <= band with band = n/2 - 1 (the Nyquist
// mode is dropped so the frequency set is symmetric under m -> -m).
struct TorusGrid {
    int d = 1;
    int n = 4;
    int band = 1;

    TorusGrid() = default;
    TorusGrid(int d_, int n_) : d(d_), n(n_), band(n_ / 2 - 1) {
        if (d < 1 || d > 4) throw std::invalid_argument("TorusGrid: d must be in 1..4");
        if (n < 4 || (n & (n - 1)) != 0) throw std::invalid_argument("TorusGrid: n must be a power of two >= 4");
    }

    std::size_t points() const {
        std::size_t p = 1;
        for (int i = 0; i < d; ++i) p *= static_cast<std::size_t>(n);
        return p;
    }
    // number of retained modes per axis and in total
    int modes_per_axis() const { return 2 * band + 1; }
    std::size_t modes() const {
        std::size_t p = 1;
        for (int i = 0; i < d; ++i) p *= static_cast<std::size_t>(modes_per_axis());
        return p;
    }

    friend bool operator==(const TorusGrid& a, const TorusGrid& b) {
        return a.d == b.d && a.n == b.n;
    }
};

// Multi-index for partial derivatives, |mu| capped at 8.
struct MultiIndex {
    std::array<int, 4> mu{0, 0, 0, 0};

    MultiIndex() = default;
    MultiIndex(std::initializer_list<int> v) {
        int i = 0;
        for (int x : v) {
            if (i >= 4) throw std::invalid_argument("MultiIndex: at most 4 components");
            if (x < 0) throw std::invalid_argument("MultiIndex: components must be >= 0");
            mu[i++] = x;
        }
        if (order() > 8) throw std::invalid_argument("MultiIndex: |mu| <= 8");
    }
    int order() const { return mu[0] + mu[1] + mu[2] + mu[3]; }
};

// Iteration over the retained frequency box [-band, band]^d.
// idx is the flat row-major index (last axis fastest); m receives the mode.
inline void unflatten_mode(const TorusGrid& g, std::size_t idx, std::array<int, 4>& m) {
    const int w = g.modes_per_axis();
    for (int i = g.d - 1; i >= 0; --i) {
        m[static_cast<std::size_t>(i)] = static_cast<int>(idx % static_cast<std::size_t>(w)) - g.band;
        idx /= static_cast<std::size_t>(w);
    }
}

inline std::size_t flatten_mode(const TorusGrid& g, const std::array<int, 4>& m) {
    const int w = g.modes_per_axis();
    std::size_t idx = 0;
    for (int i = 0; i < g.d; ++i)
        idx = idx * static_cast<std::size_t>(w) + static_cast<std::size_t>(m[static_cast<std::size_t>(i)] + g.band);
    return idx;
}

// Real scalar field on a TorusGrid together with its band-limited spectral
// representation, f(x) = sum_m coeff(m) e^{2 pi i <m,x>}.  Both arrays are
// kept consistent by the constructors in field.cpp; treat instances as
// immutable values.
struct Field {
    TorusGrid grid;
    std::vector<double> values;  // n^d real samples, row-major, last axis fastest
    std::vector<cplx> coeffs;    // (2 band + 1)^d modes, row-major over [-band,band]^d

    Field() = default;

    const cplx& coeff(const std::array<int, 4>& m) const { return coeffs[flatten_mode(grid, m)]; }
};

// constructors (field.cpp)
Field field_from_values(const TorusGrid& grid, std::vector<double> values);
Field field_from_coeffs(const TorusGrid& grid, std::vector<cplx> coeffs);
Field zero_field(const TorusGrid& grid);
Field constant_field(const TorusGrid& grid, double c);

// spectral operations (torus_ops.cpp)
Field derivative(const Field& f, const MultiIndex& mu);
Field laplacian(const Field& f);
Field bilaplacian(const Field& f);
Field product_dealiased(const Field& f, const Field& g);
// Exact band projection of f^3: pointwise cube on the 2n-padded grid.  The
// aliased images of frequencies up to 3*band land outside the retained band,
// so the truncation introduces no error.
Field cube_dealiased(const Field& f);

// linear combinations act on samples and coefficients alike
Field add(const Field& a, const Field& b);
Field sub(const Field& a, const Field& b);
Field scale(const Field& a, double s);
void add_inplace(Field& a, const Field& b, double s = 1.0);

double max_abs(const Field& f);
double mean_value(const Field& f);

// |2 pi m|^2 for a retained mode
double sq_freq(const TorusGrid& g, const std::array<int, 4>& m);

void check_hermitian(const TorusGrid& grid, const std::vector<cplx>& coeffs, double tol = 1e-9);

}  // namespace chx
