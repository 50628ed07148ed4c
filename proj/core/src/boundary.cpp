#include "segeval/boundary.hpp"

#include <algorithm>
#include <cmath>

namespace segeval {

const char* contour_extractor_name(ContourExtractor e) {
    return e == ContourExtractor::Canny ? "canny" : "morph";
}

BoundaryPair boundary_pair(const BinaryMask& gt, const BinaryMask& pred,
                           const BoundaryConfig& cfg) {
    if (gt.width != pred.width || gt.height != pred.height)
        throw InvalidArgument("boundary_pair: dimension mismatch");

    auto extract = [&cfg](const BinaryMask& m) {
        return cfg.extractor == ContourExtractor::Canny
                   ? canny_contour(m, cfg.canny_sigma, cfg.canny_low, cfg.canny_high)
                   : morph_boundary(m);
    };

    BoundaryPair bp;
    bp.gt_contour = extract(gt);
    if (bp.gt_contour.empty())
        throw EmptyContourError(EmptyContourError::Side::GroundTruth);
    bp.pred_contour = extract(pred);
    if (bp.pred_contour.empty())
        throw EmptyContourError(EmptyContourError::Side::Prediction);

    bp.gt_distance_map = distance_transform(bp.gt_contour, gt.width, gt.height);
    bp.pred_distance_map = distance_transform(bp.pred_contour, pred.width, pred.height);
    return bp;
}

double mlcd(const BoundaryPair& bp) {
    double sum = 0.0;
    for (const auto& p : bp.pred_contour.points) sum += bp.gt_distance_map.at(p);
    return sum / static_cast<double>(bp.pred_contour.size());
}

double directed_hausdorff(const ContourSet& a, const ContourSet& b,
                          const DistanceMap& map_b) {
    if (a.empty() || b.empty())
        throw InvalidArgument("directed_hausdorff: empty point set");
    double worst = 0.0;
    for (const auto& p : a.points) worst = std::max(worst, map_b.at(p));
    return worst;
}

double hausdorff(const BoundaryPair& bp) {
    return std::max(
        directed_hausdorff(bp.gt_contour, bp.pred_contour, bp.pred_distance_map),
        directed_hausdorff(bp.pred_contour, bp.gt_contour, bp.gt_distance_map));
}

double percentile(std::vector<double> values, double q, PercentileMethod method) {
    if (values.empty()) throw InvalidArgument("percentile: empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("percentile: q outside [0,1]");
    std::sort(values.begin(), values.end());
    const double rank = q * static_cast<double>(values.size() - 1);
    switch (method) {
        case PercentileMethod::Lower:
            return values[static_cast<size_t>(std::floor(rank))];
        case PercentileMethod::Nearest:
            return values[static_cast<size_t>(std::lround(rank))];
        case PercentileMethod::Linear:
        default: {
            const size_t lo = static_cast<size_t>(std::floor(rank));
            const double frac = rank - static_cast<double>(lo);
            if (lo + 1 >= values.size()) return values.back();
            return values[lo] + frac * (values[lo + 1] - values[lo]);
        }
    }
}

namespace {

std::vector<double> surface_distances(const ContourSet& from, const DistanceMap& to_map) {
    std::vector<double> d;
    d.reserve(from.size());
    for (const auto& p : from.points) d.push_back(to_map.at(p));
    return d;
}

} // namespace

double hd95(const BoundaryPair& bp, double q, PercentileMethod method) {
    const double fwd = percentile(surface_distances(bp.gt_contour, bp.pred_distance_map), q, method);
    const double bwd = percentile(surface_distances(bp.pred_contour, bp.gt_distance_map), q, method);
    return std::max(fwd, bwd);
}

double assd(const BoundaryPair& bp) {
    double sum = 0.0;
    for (const auto& p : bp.gt_contour.points) sum += bp.pred_distance_map.at(p);
    for (const auto& p : bp.pred_contour.points) sum += bp.gt_distance_map.at(p);
    return sum / static_cast<double>(bp.gt_contour.size() + bp.pred_contour.size());
}

} // namespace segeval
