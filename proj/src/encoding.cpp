#include "spanforge/encoding.hpp"

#include "spanforge/errors.hpp"

#include <cmath>
#include <string>

namespace spanforge {

double grid_step(std::size_t k) { return std::ldexp(1.0, -static_cast<int>(k)); }

double grid_max(std::size_t k) { return 1.0 - grid_step(k); }

FixedPointCode encode_real(double x, std::size_t k) {
    if (!std::isfinite(x) || std::abs(x) > 1.0)
        throw MalformedInput("real", "value " + std::to_string(x) + " outside [-1, 1]");
    if (k > 52) throw MalformedInput("precision", "at most 52 fractional bits");

    // Grid index N with x ~ N 2^-k - 1, N in [0, 2^(k+1) - 1].
    const double scaled = std::ldexp(x + 1.0, static_cast<int>(k));
    double index = std::ceil(scaled - 0.5);
    const double top = std::ldexp(1.0, static_cast<int>(k) + 1) - 1.0;
    if (index < 0.0) index = 0.0;
    if (index > top) index = top;
    const auto grid = static_cast<std::uint64_t>(index);

    FixedPointCode code;
    code.precision = k;
    code.bits.resize(k + 1);
    for (std::size_t i = 0; i <= k; ++i)
        code.bits[i] = static_cast<std::uint8_t>((grid >> (k - i)) & 1U);
    return code;
}

double decode_real(const FixedPointCode& code) {
    if (code.bits.size() != code.precision + 1)
        throw MalformedInput("bits", "fixed-point code needs precision + 1 bits");
    double value = -1.0;
    for (std::size_t i = 0; i < code.bits.size(); ++i)
        if (code.bits[i]) value += std::ldexp(1.0, -static_cast<int>(i));
    return value;
}

double quantize(double x, std::size_t k) { return decode_real(encode_real(x, k)); }

Matrix quantize(const Matrix& a, std::size_t k) {
    return a.unaryExpr([k](double v) { return quantize(v, k); });
}

bool on_grid(const Matrix& a, std::size_t k) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double v = a.data()[i];
        if (!std::isfinite(v) || std::abs(v) > 1.0 || quantize(v, k) != v) return false;
    }
    return true;
}

std::size_t bit_width_for(std::size_t n) {
    std::size_t width = 0;
    while ((std::size_t{1} << width) < n) ++width;
    return width;
}

IntegerCode encode_int(std::size_t c, std::size_t n) {
    if (c >= n)
        throw MalformedInput("integer", std::to_string(c) + " outside [0, " +
                                            std::to_string(n) + ")");
    IntegerCode code;
    code.width = bit_width_for(n);
    code.bits.resize(code.width);
    for (std::size_t i = 0; i < code.width; ++i)
        code.bits[i] = static_cast<std::uint8_t>((c >> i) & 1U);
    return code;
}

std::size_t decode_int(const IntegerCode& code) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < code.bits.size(); ++i)
        if (code.bits[i]) c |= std::size_t{1} << i;
    return c;
}

}  // namespace spanforge
