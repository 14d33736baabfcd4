#include "helpers.hpp"
#include "spanforge/compile.hpp"
#include "spanforge/fixtures.hpp"
#include "spanforge/witness_transfer.hpp"

#include <doctest.h>

using namespace spanforge;
using namespace spanforge::test;

namespace {

constexpr double kResidualTol = 1e-9;

struct TransferTally {
    std::size_t positive = 0;
    std::size_t negative = 0;
};

// Transfers the high-level witness on x and checks it against the optimal
// compiled witness and, for encoded inputs, the component bounds.
void check_transfer(const CompiledProgram& c, const Assignment& x, TransferTally& tally,
                    bool on_image = true) {
    const Matrix a = c.decode(x);
    const bool decision = evaluate_hl(c.source, a);
    REQUIRE(evaluate(c.program, x) == decision);
    if (decision) {
        const auto hl = positive_witness_hl(c.source, a);
        const auto t = transfer_positive_witness(c, x, hl);
        CHECK(t.residual <= kResidualTol);
        if (on_image)
            for (const auto& cost : t.costs) CHECK(cost.labeled_cost <= cost.bound * (1 + 1e-9) + 1e-12);
        CHECK(positive_witness(c.program, x).size <= t.size * (1 + 1e-9) + 1e-12);
        ++tally.positive;
    } else {
        const auto hl = negative_witness_hl(c.source, a);
        const auto t = transfer_negative_witness(c, x, hl);
        CHECK(t.residual <= kResidualTol);
        if (on_image)
            for (const auto& cost : t.costs) CHECK(cost.labeled_cost <= cost.bound * (1 + 1e-9) + 1e-12);
        CHECK(negative_witness(c.program, x).size <= t.size * (1 + 1e-9) + 1e-12);
        ++tally.negative;
    }
}

void check_family(const CompiledProgram& c, const std::vector<Matrix>& family) {
    TransferTally tally;
    for (const auto& a : family) check_transfer(c, c.encode(a), tally);
    CHECK(tally.positive > 0);
    CHECK(tally.negative > 0);
}

}  // namespace

TEST_SUITE("witness_transfer") {

TEST_CASE("dense transfer") {
    for (std::size_t s = 0; s < 6; ++s) {
        RngStream rng(60, s);
        const auto f = random_sparse_fixture(3, 2, 3, 0, 2, s % 2, 12, rng);
        check_family(compile_dense(f.program, 2), f.family);
    }
}

TEST_CASE("column-sparse transfer, including truncated trees") {
    for (std::size_t s = 0; s < 6; ++s) {
        RngStream rng(61, s);
        const std::size_t n = 3 + s % 3;
        const auto f = random_sparse_fixture(n, 3, 1 + s % 2, 0, 1, s % 2, 12, rng);
        check_family(compile_sparse_cols(f.program, f.k_nnz, 1), f.family);
    }
}

TEST_CASE("row and column sparse transfer") {
    for (std::size_t s = 0; s < 6; ++s) {
        RngStream rng(62, s);
        const std::size_t n = 2 + s % 3, m = 3;
        const auto f = random_sparse_fixture(n, m, 1 + s % 2, 2, 1, s % 2, 12, rng);
        check_family(compile_sparse(f.program, f.k_nnz, f.l_nnz, 1), f.family);
    }
}

TEST_CASE("transfer on assignments outside the encoder image") {
    RngStream rng(63);
    const HighLevelProgram p(gaussian(3, 1, rng), 2, gaussian(3, 1, rng));
    TransferTally cols_tally, sparse_tally;
    const auto cols = compile_sparse_cols(p, 2, 0);
    for (const auto& x : all_assignments(cols.program.num_vars())) check_transfer(cols, x, cols_tally, false);
    const auto sparse = compile_sparse(p, 1, 1, 0);
    for (const auto& x : all_assignments(sparse.program.num_vars())) check_transfer(sparse, x, sparse_tally, false);
    CHECK(cols_tally.positive > 0);
    CHECK(sparse_tally.negative > 0);
}

TEST_CASE("every component reports a cost") {
    RngStream rng(64);
    const auto f = random_sparse_fixture(3, 2, 2, 2, 1, 1, 4, rng);
    const auto c = compile_sparse(f.program, f.k_nnz, f.l_nnz, 1);
    const Assignment x = c.encode(f.family.front());
    const auto t = transfer_positive_witness(c, x, positive_witness_hl(c.source, f.family.front()));
    CHECK(t.costs.size() == c.components.size());
    double total = 0.0;
    for (const auto& cost : t.costs) total += cost.labeled_cost + cost.free_cost;
    CHECK(total == doctest::Approx(t.size).epsilon(1e-12));
}

}
