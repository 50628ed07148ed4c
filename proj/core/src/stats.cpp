#include "segeval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace segeval {

const char* ci_method_name(CiMethod m) {
    return m == CiMethod::ClopperPearson ? "clopper_pearson" : "wald_clipped";
}

double binomial_cdf(std::int64_t k, std::int64_t n, double p) {
    if (k < 0) return 0.0;
    if (k >= n) return 1.0;
    if (p <= 0.0) return 1.0;
    if (p >= 1.0) return 0.0;
    double sum = 0.0;
    const double log_p = std::log(p), log_q = std::log1p(-p);
    for (std::int64_t i = 0; i <= k; ++i) {
        const double log_choose = std::lgamma(static_cast<double>(n) + 1.0) -
                                  std::lgamma(static_cast<double>(i) + 1.0) -
                                  std::lgamma(static_cast<double>(n - i) + 1.0);
        sum += std::exp(log_choose + i * log_p + (n - i) * log_q);
    }
    return std::min(sum, 1.0);
}

namespace {

void check_binomial_args(std::int64_t k, std::int64_t n, double alpha) {
    if (n < 1) throw InvalidArgument("binomial CI: n must be >= 1");
    if (k < 0 || k > n) throw InvalidArgument("binomial CI: k outside [0, n]");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InvalidArgument("binomial CI: alpha outside (0,1)");
}

// Root of fn on (0,1) by bisection; fn must be monotone.
template <typename Fn>
double bisect_unit(Fn fn, bool increasing) {
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 80 && hi - lo > 1e-10; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double v = fn(mid);
        if ((v < 0.0) == increasing)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

CiResult clopper_pearson(std::int64_t k, std::int64_t n, double alpha) {
    check_binomial_args(k, n, alpha);
    const double half = alpha / 2.0;

    CiResult ci;
    ci.method = CiMethod::ClopperPearson;
    ci.n = n;
    ci.alpha = alpha;
    ci.estimate = static_cast<double>(k) / static_cast<double>(n);

    if (k == 0) {
        ci.lower = 0.0;
    } else {
        // Largest p with P(X >= k | p) = alpha/2; the tail is increasing in p.
        ci.lower = bisect_unit(
            [k, n, half](double p) { return (1.0 - binomial_cdf(k - 1, n, p)) - half; },
            true);
    }
    if (k == n) {
        ci.upper = 1.0;
    } else {
        // P(X <= k | p) = alpha/2; the tail is decreasing in p.
        ci.upper = bisect_unit(
            [k, n, half](double p) { return binomial_cdf(k, n, p) - half; }, false);
    }
    return ci;
}

double normal_quantile(double q) {
    if (!(q > 0.0 && q < 1.0))
        throw InvalidArgument("normal_quantile: q outside (0,1)");
    double lo = -40.0, hi = 40.0;
    for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double cdf = 0.5 * std::erfc(-mid / std::sqrt(2.0));
        if (cdf < q)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

CiResult wald_clipped(double p_hat, std::int64_t n, double alpha) {
    if (n < 1) throw InvalidArgument("wald_clipped: n must be >= 1");
    if (!(p_hat >= 0.0 && p_hat <= 1.0))
        throw InvalidArgument("wald_clipped: estimate outside [0,1]");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InvalidArgument("wald_clipped: alpha outside (0,1)");

    const double z = normal_quantile(1.0 - alpha / 2.0);
    const double se = std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));

    CiResult ci;
    ci.method = CiMethod::WaldClipped;
    ci.n = n;
    ci.alpha = alpha;
    ci.estimate = p_hat;
    ci.lower = std::max(0.0, p_hat - z * se);
    ci.upper = std::min(1.0, p_hat + z * se);
    return ci;
}

double p_from_ci(double estimate, double lower, double upper) {
    if (!(upper > lower))
        throw InvalidArgument("p_from_ci: degenerate interval (upper <= lower)");
    const double se = (upper - lower) / (2.0 * 1.96);
    const double z = std::abs(estimate) / se;
    const double p = std::exp(-0.717 * z - 0.416 * z * z);
    return std::min(p, 1.0);
}

ModelComparison compare_models(const CiResult& a, const CiResult& b) {
    if (a.n != b.n)
        throw InvalidArgument("compare_models: mismatched case sets (n differs)");

    const double se_a = (a.upper - a.lower) / (2.0 * 1.96);
    const double se_b = (b.upper - b.lower) / (2.0 * 1.96);
    const double diff = a.estimate - b.estimate;

    ModelComparison out;
    if (se_a == 0.0 && se_b == 0.0) {
        // Two zero-width intervals: identical estimates agree, anything
        // else is an unbounded z.
        out.z = diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        out.p = diff == 0.0 ? 1.0 : 0.0;
        out.significant = diff != 0.0;
        return out;
    }
    const double se_diff = std::sqrt(se_a * se_a + se_b * se_b);
    out.z = diff / se_diff;
    const double az = std::abs(out.z);
    out.p = std::min(1.0, std::exp(-0.717 * az - 0.416 * az * az));
    out.significant = out.p < 0.05;
    return out;
}

GroupSummary aggregate(const std::vector<EvalRecord>& records, double alpha) {
    if (records.empty()) throw InvalidArgument("aggregate: empty group");

    GroupSummary g;
    for (const EvalRecord& r : records) {
        if (!r.errors.empty() || !r.complete()) {
            ++g.excluded;
            continue;
        }
        ++g.n;
        g.mean_iou += *r.iou;
        g.mean_dice += *r.dice;
        g.mean_msssim += *r.msssim;
        g.mean_mlcd += *r.mlcd;
        g.mean_ahs += *r.ahs;
        g.mean_ahs_norm += *r.ahs_norm;
        g.mean_hd95 += *r.hd95;
        g.mean_assd += *r.assd;
    }
    if (g.n == 0) throw InvalidArgument("aggregate: no error-free records");

    const double n = static_cast<double>(g.n);
    g.mean_iou /= n;
    g.mean_dice /= n;
    g.mean_msssim /= n;
    g.mean_mlcd /= n;
    g.mean_ahs /= n;
    g.mean_ahs_norm /= n;
    g.mean_hd95 /= n;
    g.mean_assd /= n;

    g.dice_wald = wald_clipped(g.mean_dice, g.n, alpha);
    g.cp_success_count = std::llround(g.mean_dice * n);
    g.dice_clopper_pearson = clopper_pearson(g.cp_success_count, g.n, alpha);
    g.dice_clopper_pearson.estimate = g.mean_dice;
    g.cp_coerced = true;
    return g;
}

} // namespace segeval
