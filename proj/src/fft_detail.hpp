#pragma once

#include "chx/grid.hpp"

namespace chx::detail {

std::size_t grid_index_of_mode(const TorusGrid& g, int n_fft, const std::array<int, 4>& m);
std::vector<cplx> spectrum_of_samples(const TorusGrid& grid, int n_fft,
                                      const std::vector<double>& samples);
std::vector<double> samples_of_spectrum(const TorusGrid& grid, int n_fft,
                                        const std::vector<cplx>& coeffs);

}  // namespace chx::detail
