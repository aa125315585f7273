// Classical radix-2 FFT used by the reference engine and the cross-engine
// tests. Forward kernel exp(-2 pi i j k / N); 2D transforms are unitary
// (1/sqrt(N) per axis) so propagation preserves the wave-field norm.
#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qms/walsh.hpp"

namespace qms {

inline void fft_1d_inplace(std::complex<double>* data, std::size_t n, bool inverse) {
    if (!is_power_of_two(n)) throw std::invalid_argument("fft length must be a power of two");
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle =
            (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen = std::polar(1.0, angle);
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w{1.0, 0.0};
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = data[i + k];
                const std::complex<double> t = w * data[i + k + len / 2];
                data[i + k] = u + t;
                data[i + k + len / 2] = u - t;
                w *= wlen;
            }
        }
    }
}

/// Unitary 2D FFT of an N x N row-major grid, in place.
inline void fft_2d_inplace(std::vector<std::complex<double>>& grid, std::size_t n_axis,
                           bool inverse) {
    if (grid.size() != n_axis * n_axis) {
        throw std::invalid_argument("fft_2d: grid size is not N*N");
    }
    for (std::size_t row = 0; row < n_axis; ++row) {
        fft_1d_inplace(grid.data() + row * n_axis, n_axis, inverse);
    }
    std::vector<std::complex<double>> column(n_axis);
    for (std::size_t col = 0; col < n_axis; ++col) {
        for (std::size_t row = 0; row < n_axis; ++row) column[row] = grid[row * n_axis + col];
        fft_1d_inplace(column.data(), n_axis, inverse);
        for (std::size_t row = 0; row < n_axis; ++row) grid[row * n_axis + col] = column[row];
    }
    const double scale = 1.0 / static_cast<double>(n_axis);
    for (auto& v : grid) v *= scale;
}

}  // namespace qms
