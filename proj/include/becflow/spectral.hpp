#pragma once

#include <complex>
#include <span>
#include <vector>

#include "becflow/errors.hpp"
#include "becflow/fft.hpp"
#include "becflow/grid.hpp"

namespace becflow {

/// Fourier-space first derivative of a periodic field. Exact for band-limited
/// data. The Nyquist mode is dropped (an odd-order derivative has no
/// consistent real representation there).
inline std::vector<std::complex<double>> spectral_gradient(
    std::span<const std::complex<double>> field, const Grid& grid,
    const FourierTransform& fft) {
    if (field.size() != grid.num_points || fft.size() != grid.num_points)
        throw config_error("spectral_gradient: field length does not match grid");

    std::vector<std::complex<double>> out(field.begin(), field.end());
    fft.forward(out);
    const std::size_t n = grid.num_points;
    for (std::size_t i = 0; i < n; ++i)
        out[i] *= std::complex<double>(0.0, grid.wavenumbers[i]);
    out[n / 2] = 0.0;
    fft.inverse(out);
    return out;
}

inline std::vector<std::complex<double>> spectral_gradient(
    std::span<const std::complex<double>> field, const Grid& grid) {
    FourierTransform fft(grid.num_points);
    return spectral_gradient(field, grid, fft);
}

/// First derivative at a single grid point from an 8th-order centered
/// stencil. Cheap enough to evaluate every time step; accuracy is set by the
/// smoothness of the field over a few grid spacings.
inline std::complex<double> stencil_derivative(std::span<const std::complex<double>> field,
                                               const Grid& grid, std::size_t i) {
    static constexpr double c[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
    const std::size_t n = grid.num_points;
    std::complex<double> acc = 0.0;
    for (std::size_t m = 1; m <= 4; ++m) {
        const std::size_t ip = (i + m) % n;
        const std::size_t im = (i + n - m) % n;
        acc += c[m - 1] * (field[ip] - field[im]);
    }
    return acc / grid.dz;
}

} // namespace becflow
