#pragma once

// Boolean encodings of the numbers a compiled program queries.
//
//   real in [-1, 1 - 2^-k]:  x = sum_{i=0..k} x_i 2^-i - 1     (k + 1 bits)
//   integer c in [0, n-1]:   c = sum_{i=0..w-1} c_i 2^i        (w = ceil(log2 n) bits)

#include "spanforge/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace spanforge {

struct FixedPointCode {
    std::size_t precision = 0;        ///< k
    std::vector<std::uint8_t> bits;   ///< x_0 .. x_k
};

struct IntegerCode {
    std::size_t width = 0;            ///< ceil(log2 n)
    std::vector<std::uint8_t> bits;   ///< c_0 .. c_{w-1}, least significant first
};

/// Nearest grid value to `x` clamped into [-1, 1 - 2^-k]; ties go down.
/// Throws MalformedInput if |x| > 1 or x is not finite.
FixedPointCode encode_real(double x, std::size_t k);
double decode_real(const FixedPointCode& code);

/// decode_real(encode_real(x, k)).
double quantize(double x, std::size_t k);
Matrix quantize(const Matrix& a, std::size_t k);

/// Smallest representable value and grid spacing at precision k.
inline double grid_min() { return -1.0; }
double grid_max(std::size_t k);
double grid_step(std::size_t k);

/// True if every entry of `a` is exactly a grid value at precision k.
bool on_grid(const Matrix& a, std::size_t k);

/// ceil(log2 n), with 0 for n <= 1.
std::size_t bit_width_for(std::size_t n);

/// Throws MalformedInput unless 0 <= c < n.
IntegerCode encode_int(std::size_t c, std::size_t n);
std::size_t decode_int(const IntegerCode& code);

}  // namespace spanforge
