// Bit-level utilities shared by the transform, synthesis and simulation code:
// Gray codes, parities, Walsh function values and 2D <-> flat index packing.
#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace qms {

/// Maximum supported register width for bitmask arithmetic. Masks are held in
/// 64-bit integers; one bit of headroom keeps 1 << m well defined.
inline constexpr int kMaxQubits = 62;

inline void validate_qubit_count(int m) {
    if (m < 1 || m > kMaxQubits) {
        throw std::invalid_argument("qubit count " + std::to_string(m) +
                                    " outside supported range [1, " +
                                    std::to_string(kMaxQubits) + "]");
    }
}

/// Reflected binary (Gray) code of i. Consecutive outputs differ in one bit.
inline std::uint64_t gray_code(std::uint64_t i) { return i ^ (i >> 1); }

/// Inverse of gray_code: returns j such that gray_code(j) == g.
inline std::uint64_t gray_code_inverse(std::uint64_t g) {
    std::uint64_t j = g;
    for (int shift = 1; shift < 64; shift <<= 1) {
        j ^= j >> shift;
    }
    return j;
}

inline int hamming_distance(std::uint64_t a, std::uint64_t b) {
    return std::popcount(a ^ b);
}

/// Walsh function in Hadamard order: (-1)^popcount(u AND x), always +1 or -1.
inline int walsh_value(std::uint64_t u, std::uint64_t x) {
    return (std::popcount(u & x) & 1) ? -1 : +1;
}

/// Flatten a 2D grid point (x = column, y = row) to r = N*y + x.
inline std::size_t pack_index(std::size_t x, std::size_t y, std::size_t n_axis) {
    if (x >= n_axis || y >= n_axis) {
        throw std::out_of_range("pack_index: coordinates (" + std::to_string(x) +
                                ", " + std::to_string(y) + ") outside grid of size " +
                                std::to_string(n_axis));
    }
    return n_axis * y + x;
}

/// Inverse of pack_index: r -> (x, y) with x = r mod N, y = r div N.
inline std::pair<std::size_t, std::size_t> unpack_index(std::size_t r, std::size_t n_axis) {
    if (r >= n_axis * n_axis) {
        throw std::out_of_range("unpack_index: flat index " + std::to_string(r) +
                                " outside grid of size " + std::to_string(n_axis));
    }
    return {r % n_axis, r / n_axis};
}

/// Square grid dimensions: N = 2^n points per axis stored on m = 2n qubits.
struct GridIndex {
    int bits_per_axis = 0;
    std::size_t points_per_axis = 0;
    int qubit_count = 0;

    explicit GridIndex(int n) : bits_per_axis(n) {
        if (n < 1) throw std::invalid_argument("bits per axis must be >= 1");
        validate_qubit_count(2 * n);
        points_per_axis = std::size_t{1} << n;
        qubit_count = 2 * n;
    }
};

}  // namespace qms
