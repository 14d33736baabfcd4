#pragma once

// Seeded trial suite for the randomized rank program. Each trial draws a test
// matrix of prescribed rank (U diag(sigma) V^T, then scaled so the largest
// entry has absolute value 1) and a fresh rank program, and records the
// decision and the optimal witness size.

#include "spanforge/programs.hpp"

#include <cstdint>
#include <vector>

namespace spanforge {

struct RankTrialConfig {
    std::size_t n = 4;
    std::size_t m = 4;
    std::size_t r = 2;
    /// Promised bound on c_r. 0 means each positive instance uses its own
    /// measured c_r as L.
    double L = 0.0;
    std::size_t trials = 500;
    std::uint64_t master_seed = 1;
    double tolerance = kDefaultTolerance;
};

/// n x m matrix of the given rank with entries in [-1, 1] and max |a_ij| = 1.
Matrix sample_rank_matrix(std::size_t n, std::size_t m, std::size_t rank, RngStream& rng);

struct RankTrialRecord {
    bool positive_side = false;
    std::size_t rank = 0;
    double c_r = 0.0;
    bool decision = false;
    double size = 0.0;
    double bound = 0.0;
};

struct RankSideSummary {
    std::size_t trials = 0;
    std::size_t correct = 0;
    std::size_t within_bound = 0;
    double fraction = 0.0;      ///< within_bound / trials
    double max_size = 0.0;
    double median_size = 0.0;
};

struct RankTrialSummary {
    RankTrialConfig config;
    double constant = 0.0;             ///< C in C (n - r + 1) r L^2
    double negative_threshold = 0.0;
    RankSideSummary positive;          ///< rank exactly r
    RankSideSummary negative;          ///< rank r - 1 (empty when r = 0)
};

/// Positive trial i uses stream 2i of the master seed, negative trial i
/// stream 2i + 1.
RankTrialSummary run_rank_trials(const RankTrialConfig& config,
                                 std::vector<RankTrialRecord>* records = nullptr);

/// Required success frequency minus three standard errors at p = 5/6.
double rank_success_floor(std::size_t trials);

}  // namespace spanforge
