#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "segeval/record.hpp"

namespace segeval {

enum class CiMethod { ClopperPearson, WaldClipped };

const char* ci_method_name(CiMethod m);

/// Binomial confidence interval: 0 <= lower <= estimate <= upper <= 1 after
/// clipping.
struct CiResult {
    double estimate = 0.0;
    double lower = 0.0;
    double upper = 1.0;
    CiMethod method = CiMethod::ClopperPearson;
    std::int64_t n = 0;
    double alpha = 0.05;
};

/// Exact binomial CDF P(X <= k) for X ~ Binomial(n, p).
double binomial_cdf(std::int64_t k, std::int64_t n, double p);

/// Exact Clopper-Pearson interval, solved by bisection on the binomial tail
/// sums to 1e-10. lower = 0 when k = 0 and upper = 1 when k = n; the
/// all-success lower bound equals (alpha/2)^(1/n).
CiResult clopper_pearson(std::int64_t k, std::int64_t n, double alpha = 0.05);

/// Normal-approximation interval p_hat +/- z * sqrt(p_hat(1-p_hat)/n),
/// clipped to [0,1]. z for alpha = 0.05 is 1.959964.
CiResult wald_clipped(double p_hat, std::int64_t n, double alpha = 0.05);

/// Upper quantile of the standard normal, Phi^-1(q).
double normal_quantile(double q);

/// p-value from a 95% CI: SE = (upper - lower) / (2 * 1.96),
/// z = |estimate| / SE, p = exp(-0.717 z - 0.416 z^2) capped at 1.
/// Throws InvalidArgument on a degenerate interval (upper == lower).
double p_from_ci(double estimate, double lower, double upper);

/// Difference-of-estimates test between two groups' CIs.
struct ModelComparison {
    double z = 0.0;
    double p = 1.0;
    bool significant = false; // p < 0.05
};

/// SEs are recovered from the interval widths, SE_diff combines them in
/// quadrature, and p comes from the same CI transform applied to the
/// difference. Requires both CIs built over the same case set (equal n).
ModelComparison compare_models(const CiResult& a, const CiResult& b);

/// Group-level aggregation of per-case records. Records carrying any
/// metric error are excluded and counted; means are arithmetic over the
/// rest. The Dice CI is attached by both methods; Clopper-Pearson needs a
/// success count, so it uses round(mean * n) and flags the coercion.
struct GroupSummary {
    std::int64_t n = 0;            // records included
    std::int64_t excluded = 0;     // records dropped for carrying errors
    double mean_iou = 0.0;
    double mean_dice = 0.0;
    double mean_msssim = 0.0;
    double mean_mlcd = 0.0;
    double mean_ahs = 0.0;
    double mean_ahs_norm = 0.0;
    double mean_hd95 = 0.0;
    double mean_assd = 0.0;
    CiResult dice_wald;
    CiResult dice_clopper_pearson;
    std::int64_t cp_success_count = 0; // the coerced k
    bool cp_coerced = true;
};

/// Throws InvalidArgument when no error-free records remain.
GroupSummary aggregate(const std::vector<EvalRecord>& records, double alpha = 0.05);

} // namespace segeval
