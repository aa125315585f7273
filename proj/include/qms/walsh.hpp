// Fast Walsh-Hadamard transform (Hadamard order) and its inverse expansion.
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "qms/bits.hpp"

namespace qms {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Unnormalized in-place Walsh-Hadamard butterfly. Applying it twice yields
/// the original values scaled by the length.
inline void fwht_inplace(std::span<double> values) {
    const std::size_t n = values.size();
    if (!is_power_of_two(n)) {
        throw std::invalid_argument("fwht: length must be a power of two");
    }
    for (std::size_t h = 1; h < n; h <<= 1) {
        for (std::size_t i = 0; i < n; i += 2 * h) {
            for (std::size_t j = i; j < i + h; ++j) {
                const double a = values[j];
                const double b = values[j + h];
                values[j] = a + b;
                values[j + h] = a - b;
            }
        }
    }
}

/// Walsh coefficients of a real function over 2^m points, with the largest
/// off-zero magnitude cached for relative truncation thresholds.
struct WalshSpectrum {
    std::vector<double> coefficients;
    double w_max = 0.0;  // max |W(u)| over u != 0

    static double compute_w_max(const std::vector<double>& coeff) {
        double m = 0.0;
        for (std::size_t u = 1; u < coeff.size(); ++u) {
            m = std::max(m, std::abs(coeff[u]));
        }
        return m;
    }
};

/// Forward transform, W(u) = (1/2^m) sum_x f(x) (-1)^popcount(u AND x).
inline WalshSpectrum fwht(std::vector<double> values) {
    fwht_inplace(values);
    const double scale = 1.0 / static_cast<double>(values.size());
    for (double& v : values) v *= scale;
    WalshSpectrum s;
    s.w_max = WalshSpectrum::compute_w_max(values);
    s.coefficients = std::move(values);
    return s;
}

/// Inverse (Walsh expansion): f(x) = sum_u W(u) T_u(x). Unnormalized butterfly.
inline std::vector<double> walsh_expand(const WalshSpectrum& spectrum) {
    std::vector<double> values = spectrum.coefficients;
    fwht_inplace(values);
    return values;
}

}  // namespace qms
