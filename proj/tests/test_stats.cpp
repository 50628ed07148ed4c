#include <doctest.h>

#include <cmath>

#include "segeval/stats.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace segeval;

namespace {

// Independent bisection on the exact tail sums, built on the pmf oracle.
double oracle_cp_lower(std::int64_t k, std::int64_t n, double alpha) {
    if (k == 0) return 0.0;
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
        const double mid = 0.5 * (lo + hi);
        double tail = 0.0; // P(X >= k)
        for (std::int64_t i = k; i <= n; ++i) tail += testing::binomial_pmf(i, n, mid);
        if (tail < alpha / 2)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double oracle_cp_upper(std::int64_t k, std::int64_t n, double alpha) {
    if (k == n) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
        const double mid = 0.5 * (lo + hi);
        double tail = 0.0; // P(X <= k)
        for (std::int64_t i = 0; i <= k; ++i) tail += testing::binomial_pmf(i, n, mid);
        if (tail > alpha / 2)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

EvalRecord record_with_dice(double dice_value) {
    EvalRecord r;
    r.iou = dice_value / (2.0 - dice_value);
    r.dice = dice_value;
    r.msssim = 0.9;
    r.mlcd = 1.0;
    r.ahs = 2.0;
    r.ahs_norm = 2.0 / 64;
    r.hd95 = 3.0;
    r.assd = 4.0;
    return r;
}

} // namespace

TEST_SUITE("stats") {

TEST_CASE("binomial_cdf matches the pmf oracle") {
    for (std::int64_t n : {1, 5, 12}) {
        for (double p : {0.05, 0.3, 0.73}) {
            for (std::int64_t k = 0; k <= n; ++k) {
                double sum = 0.0;
                for (std::int64_t i = 0; i <= k; ++i)
                    sum += testing::binomial_pmf(i, n, p);
                CHECK(binomial_cdf(k, n, p) == doctest::Approx(sum).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("clopper_pearson: boundary conventions") {
    const CiResult zero = clopper_pearson(0, 7, 0.05);
    CHECK(zero.lower == 0.0);
    CHECK(zero.upper == doctest::Approx(1.0 - std::pow(0.025, 1.0 / 7)).epsilon(1e-8));

    // All-success case: upper pins to 1, lower has the closed form
    // (alpha/2)^(1/n).
    const CiResult full = clopper_pearson(11, 11, 0.05);
    CHECK(full.upper == 1.0);
    CHECK(full.lower == doctest::Approx(std::pow(0.025, 1.0 / 11)).epsilon(1e-9));
    CHECK(full.lower == doctest::Approx(0.7151).epsilon(1e-4));
}

TEST_CASE("clopper_pearson: k=8, n=10 against the independent bisection oracle") {
    const CiResult ci = clopper_pearson(8, 10, 0.05);
    CHECK(ci.lower == doctest::Approx(oracle_cp_lower(8, 10, 0.05)).epsilon(1e-8));
    CHECK(ci.upper == doctest::Approx(oracle_cp_upper(8, 10, 0.05)).epsilon(1e-8));
    CHECK(ci.lower <= ci.estimate);
    CHECK(ci.estimate <= ci.upper);
}

TEST_CASE("clopper_pearson: mirror symmetry in k -> n-k") {
    for (std::int64_t n : {5, 11, 24}) {
        for (std::int64_t k = 0; k <= n; ++k) {
            const CiResult a = clopper_pearson(k, n, 0.05);
            const CiResult b = clopper_pearson(n - k, n, 0.05);
            CHECK(a.lower == doctest::Approx(1.0 - b.upper).epsilon(1e-9));
            CHECK(a.upper == doctest::Approx(1.0 - b.lower).epsilon(1e-9));
        }
    }
}

TEST_CASE("clopper_pearson: exact coverage at small n") {
    for (std::int64_t n = 1; n <= 12; ++n) {
        std::vector<CiResult> intervals;
        for (std::int64_t k = 0; k <= n; ++k)
            intervals.push_back(clopper_pearson(k, n, 0.05));
        for (int pi = 1; pi <= 19; ++pi) {
            const double p = pi / 20.0;
            double coverage = 0.0;
            for (std::int64_t k = 0; k <= n; ++k)
                if (intervals[static_cast<size_t>(k)].lower <= p &&
                    p <= intervals[static_cast<size_t>(k)].upper)
                    coverage += testing::binomial_pmf(k, n, p);
            CHECK(coverage >= 0.95 - 1e-9);
        }
    }
}

TEST_CASE("clopper_pearson: interval brackets the point estimate") {
    for (std::int64_t n = 1; n <= 30; ++n) {
        for (std::int64_t k = 0; k <= n; ++k) {
            const CiResult ci = clopper_pearson(k, n, 0.05);
            const double p_hat = static_cast<double>(k) / static_cast<double>(n);
            CHECK(ci.lower <= p_hat);
            CHECK(p_hat <= ci.upper);
            CHECK(ci.lower >= 0.0);
            CHECK(ci.upper <= 1.0);
        }
    }
}

TEST_CASE("clopper_pearson: invalid arguments") {
    CHECK_THROWS_AS(clopper_pearson(-1, 5, 0.05), InvalidArgument);
    CHECK_THROWS_AS(clopper_pearson(6, 5, 0.05), InvalidArgument);
    CHECK_THROWS_AS(clopper_pearson(2, 0, 0.05), InvalidArgument);
    CHECK_THROWS_AS(clopper_pearson(2, 5, 0.0), InvalidArgument);
}

TEST_CASE("normal_quantile: the 97.5% point is 1.959964") {
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959964).epsilon(1e-6));
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("wald_clipped reproduces the reference CI table") {
    struct Row {
        double dice;
        std::int64_t n;
        double lower, upper;
    };
    // Dice (CI) cells with the group test-set sizes (11, 17, 11).
    const Row rows[] = {
        {0.9268, 11, 0.7728, 1.0}, {0.9476, 17, 0.8416, 1.0},
        {0.7366, 11, 0.4762, 0.9970}, {0.8924, 11, 0.7092, 1.0},
        {0.4589, 11, 0.1644, 0.7534}, {0.9767, 11, 0.8875, 1.0},
        {0.9793, 11, 0.8951, 1.0},    {0.9375, 11, 0.7944, 1.0},
        {0.9600, 17, 0.8668, 1.0},    {0.9669, 11, 0.8611, 1.0},
        {0.6353, 11, 0.3508, 0.9198}, {0.9535, 17, 0.8534, 1.0},
    };
    for (const Row& r : rows) {
        const CiResult ci = wald_clipped(r.dice, r.n);
        CHECK(ci.lower == doctest::Approx(r.lower).epsilon(1e-3));
        CHECK(ci.upper == doctest::Approx(r.upper).epsilon(1e-3));
    }
}

TEST_CASE("wald_clipped: degenerate and invalid inputs") {
    const CiResult ci = wald_clipped(1.0, 9);
    CHECK(ci.lower == 1.0);
    CHECK(ci.upper == 1.0);
    CHECK_THROWS_AS(wald_clipped(1.2, 9), InvalidArgument);
    CHECK_THROWS_AS(wald_clipped(0.5, 0), InvalidArgument);
}

TEST_CASE("p_from_ci: anchor value, monotonicity, and tail cross-check") {
    // estimate 0.1 over CI (0, 0.2): z = 1.96 exactly, and the transform
    // gives exp(-0.717*1.96 - 0.416*1.96^2).
    const double p = p_from_ci(0.1, 0.0, 0.2);
    CHECK(p == doctest::Approx(std::exp(-0.717 * 1.96 - 0.416 * 1.96 * 1.96))
                   .epsilon(1e-12));
    CHECK(p == doctest::Approx(0.0496).epsilon(2e-3));

    CHECK(p_from_ci(0.0, -0.1, 0.1) == 1.0);
    CHECK_THROWS_AS(p_from_ci(0.1, 0.2, 0.2), InvalidArgument);

    double prev = 2.0;
    for (double z = 0.0; z <= 5.0; z += 0.25) {
        // Build a CI whose width encodes SE = 1 so estimate == z.
        const double value = z == 0.0 ? 1.0 : p_from_ci(z, z - 1.96, z + 1.96);
        CHECK(value < prev + 1e-15);
        prev = value;
    }

    // The approximation tracks the true two-sided normal tail.
    for (double z : {1.5, 1.96, 2.5, 2.94, 3.5}) {
        const double approx = p_from_ci(z, z - 1.96, z + 1.96);
        const double exact = testing::normal_two_sided_p(z);
        CHECK(std::abs(approx - exact) / exact < 0.20);
    }
}

TEST_CASE("compare_models: identity, separation, and a reference contrast") {
    const CiResult a = wald_clipped(0.82, 11);
    const ModelComparison same = compare_models(a, a);
    CHECK(same.z == 0.0);
    CHECK(same.p == 1.0);
    CHECK_FALSE(same.significant);

    // Non-overlapping intervals are always significant.
    testing::Rng rng(0);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double ea = 0.6 + 0.4 * unit(rng);
        const double eb = 0.4 * unit(rng);
        const CiResult ca = wald_clipped(ea, 9 + static_cast<int>(unit(rng) * 20));
        const CiResult cb = wald_clipped(eb, ca.n);
        if (ca.lower <= cb.upper) continue; // overlapping draw, skip
        const ModelComparison cmp = compare_models(ca, cb);
        CHECK(cmp.significant);
    }

    // A strong model against a weak one on an 11-image group.
    const ModelComparison contrast =
        compare_models(wald_clipped(0.9268, 11), wald_clipped(0.4589, 11));
    CHECK(contrast.significant);
    CHECK(contrast.p < 0.05);

    CHECK_THROWS_AS(compare_models(wald_clipped(0.9, 11), wald_clipped(0.8, 17)),
                    InvalidArgument);
}

TEST_CASE("aggregate: means, CI attachment, and error exclusion") {
    const std::vector<EvalRecord> one = {record_with_dice(0.85)};
    const GroupSummary single = aggregate(one);
    CHECK(single.n == 1);
    CHECK(single.mean_dice == 0.85);
    CHECK(single.mean_hd95 == 3.0);

    const GroupSummary pair =
        aggregate({record_with_dice(0.8), record_with_dice(1.0)});
    CHECK(pair.mean_dice == doctest::Approx(0.9).epsilon(1e-12));

    // Eleven records averaging 0.9268 land on the reference Wald CI.
    std::vector<EvalRecord> eleven;
    for (int i = 0; i < 11; ++i)
        eleven.push_back(record_with_dice(0.9268 + 0.01 * (i - 5)));
    const GroupSummary group = aggregate(eleven);
    CHECK(group.mean_dice == doctest::Approx(0.9268).epsilon(1e-9));
    CHECK(group.dice_wald.lower == doctest::Approx(0.7728).epsilon(1e-3));
    CHECK(group.dice_wald.upper == 1.0);
    CHECK(group.cp_success_count == std::llround(0.9268 * 11));
    CHECK(group.cp_coerced);

    EvalRecord broken = record_with_dice(0.5);
    broken.errors["mlcd"] = "empty prediction contour";
    const GroupSummary mixed = aggregate({record_with_dice(0.9), broken});
    CHECK(mixed.n == 1);
    CHECK(mixed.excluded == 1);
    CHECK(mixed.mean_dice == 0.9);

    CHECK_THROWS_AS(aggregate({}), InvalidArgument);
    CHECK_THROWS_AS(aggregate({broken}), InvalidArgument);
}

} // TEST_SUITE
