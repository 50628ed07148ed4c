#include <doctest.h>

#include <cmath>

#include "segeval/boundary.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace segeval;

namespace {

const BoundaryConfig kMorph{ContourExtractor::Morph, 0.5, 0.1, 0.3};

BinaryMask single_pixel(int w, int h, int r, int c) {
    BinaryMask m(w, h);
    m.at(r, c) = 1;
    return m;
}

} // namespace

TEST_SUITE("boundary") {

TEST_CASE("boundary_pair: identical masks sit on each other's zeros") {
    const BinaryMask m = testing::filled_rect(32, 32, 8, 8, 23, 23);
    for (ContourExtractor e : {ContourExtractor::Morph, ContourExtractor::Canny}) {
        BoundaryConfig cfg;
        cfg.extractor = e;
        const BoundaryPair bp = boundary_pair(m, m, cfg);
        CHECK(bp.gt_contour.points == bp.pred_contour.points);
        for (const auto& p : bp.pred_contour.points) CHECK(bp.gt_distance_map.at(p) == 0.0);
        for (const auto& p : bp.gt_contour.points) CHECK(bp.pred_distance_map.at(p) == 0.0);
    }
}

TEST_CASE("boundary_pair: empty masks raise the named errors") {
    const BinaryMask blob = testing::filled_rect(16, 16, 4, 4, 11, 11);
    const BinaryMask empty(16, 16);
    CHECK_THROWS_WITH_AS(boundary_pair(blob, empty, kMorph),
                         "empty prediction contour", EmptyContourError);
    CHECK_THROWS_WITH_AS(boundary_pair(empty, blob, kMorph), "empty GT contour",
                         EmptyContourError);
    CHECK_THROWS_AS(boundary_pair(blob, BinaryMask(16, 17)), InvalidArgument);
}

TEST_CASE("boundary_pair: nested squares match the brute-force maps") {
    const BinaryMask outer = testing::filled_rect(40, 40, 5, 5, 34, 34);
    const BinaryMask inner = testing::filled_rect(40, 40, 12, 12, 27, 27);
    const BoundaryPair bp = boundary_pair(outer, inner, kMorph);

    const auto gt_oracle = testing::brute_force_distance_map(bp.gt_contour.points, 40, 40);
    const auto pred_oracle =
        testing::brute_force_distance_map(bp.pred_contour.points, 40, 40);
    for (size_t i = 0; i < gt_oracle.size(); ++i) {
        CHECK(bp.gt_distance_map.data[i] == doctest::Approx(gt_oracle[i]).epsilon(1e-12));
        CHECK(bp.pred_distance_map.data[i] ==
              doctest::Approx(pred_oracle[i]).epsilon(1e-12));
    }
}

TEST_CASE("mlcd: zero on identical contours") {
    const BinaryMask m = testing::filled_rect(24, 24, 6, 6, 17, 17);
    CHECK(mlcd(boundary_pair(m, m, kMorph)) == 0.0);
}

TEST_CASE("mlcd: translated square agrees with the brute-force mean") {
    const BinaryMask gt = testing::filled_rect(64, 64, 20, 20, 39, 39);
    const BinaryMask pred = testing::filled_rect(64, 64, 20, 23, 39, 42);
    const BoundaryPair bp = boundary_pair(gt, pred, kMorph);
    const double expected =
        testing::brute_force_mlcd(bp.gt_contour.points, bp.pred_contour.points);
    CHECK(mlcd(bp) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(mlcd(bp) > 0.0);
}

TEST_CASE("mlcd: a single predicted pixel reads one map value") {
    const BinaryMask gt = single_pixel(32, 32, 10, 10);
    const BinaryMask pred = single_pixel(32, 32, 13, 14);
    CHECK(mlcd(boundary_pair(gt, pred, kMorph)) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("mlcd: asymmetric by construction") {
    const BinaryMask ring = testing::filled_rect(48, 48, 10, 10, 37, 37);
    const BinaryMask pixel = single_pixel(48, 48, 24, 44);
    const double forward = mlcd(boundary_pair(ring, pixel, kMorph));
    const double reverse = mlcd(boundary_pair(pixel, ring, kMorph));
    CHECK(std::abs(forward - reverse) > 0.5);
}

TEST_CASE("directed_hausdorff: containment and a single 3-4-5 pair") {
    const BinaryMask big = testing::filled_rect(32, 32, 5, 5, 26, 26);
    const BoundaryPair self = boundary_pair(big, big, kMorph);
    CHECK(directed_hausdorff(self.gt_contour, self.pred_contour,
                             self.pred_distance_map) == 0.0);

    const BinaryMask a = single_pixel(16, 16, 0, 0);
    const BinaryMask b = single_pixel(16, 16, 3, 4);
    const BoundaryPair bp = boundary_pair(a, b, kMorph);
    CHECK(directed_hausdorff(bp.gt_contour, bp.pred_contour, bp.pred_distance_map) ==
          doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("percentile: hand-evaluated linear interpolation") {
    // 20 values, nineteen 0s and one 10: rank 0.95*19 = 18.05 interpolates
    // between sorted[18] = 0 and sorted[19] = 10.
    std::vector<double> values(19, 0.0);
    values.push_back(10.0);
    CHECK(percentile(values, 0.95) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(percentile(values, 0.95, PercentileMethod::Lower) == 0.0);
    CHECK(percentile(values, 0.95, PercentileMethod::Nearest) == 0.0);
    CHECK(percentile({3.0}, 0.95) == 3.0);
    CHECK_THROWS_AS(percentile({}, 0.95), InvalidArgument);
}

TEST_CASE("hd95: zero on identical contours, bounded by the full Hausdorff") {
    const BinaryMask m = testing::filled_rect(24, 24, 4, 4, 19, 19);
    CHECK(hd95(boundary_pair(m, m, kMorph)) == 0.0);

    for (int seed = 0; seed < 10; ++seed) {
        testing::Rng rng(static_cast<std::uint64_t>(seed) + 77);
        const BinaryMask a = testing::random_blob_mask(48, 48, rng);
        const BinaryMask b = testing::random_blob_mask(48, 48, rng);
        const BoundaryPair bp = boundary_pair(a, b, kMorph);
        CHECK(hd95(bp) <= hausdorff(bp) + 1e-12);
    }
}

TEST_CASE("assd: two-point and parallel-segment arithmetic") {
    const BoundaryPair two =
        boundary_pair(single_pixel(16, 16, 0, 0), single_pixel(16, 16, 0, 4), kMorph);
    CHECK(assd(two) == doctest::Approx(4.0).epsilon(1e-12)); // (4 + 4) / (1 + 1)

    // Equal-length vertical segments 4 columns apart: every nearest
    // neighbor is the horizontal projection.
    const BinaryMask s1 = testing::filled_rect(32, 32, 8, 10, 22, 10);
    const BinaryMask s2 = testing::filled_rect(32, 32, 8, 14, 22, 14);
    CHECK(assd(boundary_pair(s1, s2, kMorph)) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("assd and hd95 symmetric, all three match brute force on random blobs") {
    for (int seed = 0; seed < 20; ++seed) {
        testing::Rng rng(static_cast<std::uint64_t>(seed) + 900);
        const BinaryMask a = testing::random_blob_mask(64, 64, rng);
        const BinaryMask b = testing::random_blob_mask(64, 64, rng);
        const BoundaryPair ab = boundary_pair(a, b, kMorph);
        const BoundaryPair ba = boundary_pair(b, a, kMorph);

        CHECK(assd(ab) == doctest::Approx(assd(ba)).epsilon(1e-12));
        CHECK(hd95(ab) == doctest::Approx(hd95(ba)).epsilon(1e-12));

        const auto& ga = ab.gt_contour.points;
        const auto& pb = ab.pred_contour.points;
        CHECK(mlcd(ab) == doctest::Approx(testing::brute_force_mlcd(ga, pb)).epsilon(1e-9));
        CHECK(hd95(ab) ==
              doctest::Approx(testing::brute_force_hd95(ga, pb, 0.95)).epsilon(1e-9));
        CHECK(assd(ab) == doctest::Approx(testing::brute_force_assd(ga, pb)).epsilon(1e-9));
        CHECK(hausdorff(ab) ==
              doctest::Approx(std::max(testing::brute_force_directed_hausdorff(ga, pb),
                                       testing::brute_force_directed_hausdorff(pb, ga)))
                  .epsilon(1e-9));
    }
}

TEST_CASE("translation equivariance away from borders") {
    testing::Rng rng(31);
    const BinaryMask gt = testing::random_blob_mask(96, 96, rng, 20);
    const BinaryMask pred = testing::random_blob_mask(96, 96, rng, 20);
    const BinaryMask gt_t = testing::translated(gt, 5, 7);
    const BinaryMask pred_t = testing::translated(pred, 5, 7);

    for (ContourExtractor e : {ContourExtractor::Morph, ContourExtractor::Canny}) {
        BoundaryConfig cfg;
        cfg.extractor = e;
        const BoundaryPair bp = boundary_pair(gt, pred, cfg);
        const BoundaryPair bt = boundary_pair(gt_t, pred_t, cfg);
        CHECK(mlcd(bt) == doctest::Approx(mlcd(bp)).epsilon(1e-9));
        CHECK(hd95(bt) == doctest::Approx(hd95(bp)).epsilon(1e-9));
        CHECK(assd(bt) == doctest::Approx(assd(bp)).epsilon(1e-9));
    }
}

} // TEST_SUITE
