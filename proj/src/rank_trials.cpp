#include "spanforge/rank_trials.hpp"

#include "spanforge/calibration.hpp"
#include "spanforge/errors.hpp"
#include "spanforge/parallel.hpp"
#include "spanforge/randmat.hpp"
#include "spanforge/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spanforge {

namespace {

Matrix orthonormal_columns(std::size_t rows, std::size_t cols, RngStream& rng) {
    const Matrix g = sample_gaussian(rows, cols, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    return qr.householderQ() * Matrix::Identity(g.rows(), g.cols());
}

RankSideSummary summarize(const std::vector<RankTrialRecord>& recs, bool positive) {
    RankSideSummary s;
    std::vector<double> sizes;
    for (const auto& r : recs) {
        if (r.positive_side != positive) continue;
        ++s.trials;
        const bool correct = r.decision == positive;
        if (correct) ++s.correct;
        if (correct && r.size <= r.bound) ++s.within_bound;
        if (correct) sizes.push_back(r.size);
    }
    if (s.trials > 0)
        s.fraction = static_cast<double>(s.within_bound) / static_cast<double>(s.trials);
    if (!sizes.empty()) {
        s.max_size = *std::max_element(sizes.begin(), sizes.end());
        s.median_size = median(sizes);
    }
    return s;
}

}  // namespace

Matrix sample_rank_matrix(std::size_t n, std::size_t m, std::size_t rank, RngStream& rng) {
    if (rank > std::min(n, m)) throw MalformedInput("r", "rank exceeds min(n, m)");
    Matrix a = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    if (rank == 0) return a;
    const Matrix u = orthonormal_columns(n, rank, rng);
    const Matrix v = orthonormal_columns(m, rank, rng);
    Vector sigma(static_cast<Eigen::Index>(rank));
    for (Eigen::Index i = 0; i < sigma.size(); ++i) sigma(i) = 1.0 + rng.uniform();
    a = u * sigma.asDiagonal() * v.transpose();
    return a / a.cwiseAbs().maxCoeff();
}

double rank_success_floor(std::size_t trials) {
    constexpr double p = 5.0 / 6.0;
    return p - 3.0 * proportion_se(p, trials);
}

RankTrialSummary run_rank_trials(const RankTrialConfig& cfg,
                                 std::vector<RankTrialRecord>* records) {
    if (cfg.n == 0 || cfg.m == 0) throw MalformedInput("n", "dimensions must be positive");
    if (cfg.r > std::min(cfg.n, cfg.m)) throw MalformedInput("r", "must not exceed min(n, m)");
    if (cfg.L < 0.0) throw MalformedInput("L", "must be non-negative");
    if (!(cfg.tolerance > 0.0)) throw MalformedInput("tolerance", "must be positive");

    const double constant = calibration::kRankConstant;
    const double threshold = calibration::kRankNegativeThreshold;
    const bool has_negative = cfg.r > 0;
    std::vector<RankTrialRecord> recs(cfg.trials * (has_negative ? 2 : 1));

    parallel_for(recs.size(), [&](std::size_t k) {
        const bool positive = k % 2 == 0 || !has_negative;
        const std::size_t trial = has_negative ? k / 2 : k;
        RngStream rng(cfg.master_seed, has_negative ? k : 2 * trial);
        RankTrialRecord rec;
        rec.positive_side = positive;
        rec.rank = positive ? cfg.r : cfg.r - 1;
        Matrix a;
        std::size_t attempts = 0;
        for (;;) {
            a = sample_rank_matrix(cfg.n, cfg.m, rec.rank, rng);
            rec.c_r = spectral_stats(a, cfg.r).c_r;
            if (!positive || cfg.L == 0.0 || rec.c_r <= cfg.L) break;
            if (++attempts == 1000)
                throw MalformedInput("L", "no sampled matrix satisfies c_r <= L");
        }
        const auto sample = build_rank_program(cfg.n, cfg.m, cfg.r, rng);
        rec.decision = evaluate_hl(sample.program, a, cfg.tolerance);
        if (positive) {
            const double l = cfg.L > 0.0 ? cfg.L : rec.c_r;
            rec.bound = constant * static_cast<double>(cfg.n - cfg.r + 1) *
                        static_cast<double>(cfg.r) * l * l;
            rec.size = rec.decision ? positive_witness_hl(sample.program, a).size : kNoWitness;
        } else {
            rec.bound = threshold;
            rec.size = rec.decision ? kNoWitness : negative_witness_hl(sample.program, a).size;
        }
        recs[k] = rec;
    });

    RankTrialSummary out;
    out.config = cfg;
    out.constant = constant;
    out.negative_threshold = threshold;
    out.positive = summarize(recs, true);
    out.negative = summarize(recs, false);
    if (records) *records = std::move(recs);
    return out;
}

}  // namespace spanforge
