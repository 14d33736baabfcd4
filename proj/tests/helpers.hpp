#pragma once

#include "spanforge/linalg.hpp"
#include "spanforge/rng.hpp"
#include "spanforge/span_program.hpp"

#include <initializer_list>

namespace spanforge::test {

inline Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

inline Vector unit(std::size_t dim, std::size_t i) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(i)) = 1.0;
    return v;
}

inline Matrix cols(std::initializer_list<Vector> vs) {
    Matrix m(vs.begin()->size(), static_cast<Eigen::Index>(vs.size()));
    Eigen::Index j = 0;
    for (const auto& v : vs) m.col(j++) = v;
    return m;
}

inline Matrix gaussian(Eigen::Index r, Eigen::Index c, RngStream& rng) {
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rng.normal();
    return m;
}

/// Random low-level program with small integer entries, so that degenerate
/// and dependent configurations occur often.
inline LowLevelProgram random_program(std::size_t dim, std::size_t vars, RngStream& rng) {
    std::uniform_int_distribution<int> entry(-1, 1);
    std::uniform_int_distribution<int> count(0, 2);
    auto draw = [&] {
        Vector v(static_cast<Eigen::Index>(dim));
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = entry(rng.engine());
        return v;
    };
    Vector t = draw();
    while (t.isZero(0.0)) t = draw();
    const int nfree = count(rng.engine());
    Matrix free(static_cast<Eigen::Index>(dim), nfree);
    for (int c = 0; c < nfree; ++c) free.col(c) = draw();
    std::vector<LabeledVector> labeled;
    for (std::size_t j = 0; j < vars; ++j)
        for (std::uint8_t b = 0; b < 2; ++b)
            for (int c = count(rng.engine()); c > 0; --c) labeled.push_back({draw(), j, b});
    return LowLevelProgram(t, vars, free, labeled);
}

}  // namespace spanforge::test
