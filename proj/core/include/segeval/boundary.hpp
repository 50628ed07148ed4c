#pragma once

#include <vector>

#include "segeval/imgproc.hpp"
#include "segeval/raster.hpp"

namespace segeval {

enum class ContourExtractor { Canny, Morph };

const char* contour_extractor_name(ContourExtractor e);

/// Parameters for contour extraction when building a BoundaryPair.
struct BoundaryConfig {
    ContourExtractor extractor = ContourExtractor::Canny;
    double canny_sigma = 0.5;
    double canny_low = 0.1;
    double canny_high = 0.3;
};

/// Contours of a GT/prediction mask pair plus the exact Euclidean distance
/// map built from each contour (zero exactly on its own contour pixels).
struct BoundaryPair {
    ContourSet gt_contour;
    ContourSet pred_contour;
    DistanceMap gt_distance_map;
    DistanceMap pred_distance_map;
};

/// Extract both contours and build both distance maps. Throws
/// EmptyContourError naming the side whose contour came out empty.
BoundaryPair boundary_pair(const BinaryMask& gt, const BinaryMask& pred,
                           const BoundaryConfig& cfg = {});

/// Mean, over predicted-contour pixels, of the GT-contour distance map.
/// Asymmetric by construction: the ground truth builds the map, the
/// prediction supplies the contour.
double mlcd(const BoundaryPair& bp);

/// max over a in A of the distance to B, read from B's distance map.
double directed_hausdorff(const ContourSet& a, const ContourSet& b,
                          const DistanceMap& map_b);

/// Full Hausdorff distance: max of the two directed distances.
double hausdorff(const BoundaryPair& bp);

enum class PercentileMethod { Linear, Lower, Nearest };

/// Percentile of a sample at quantile q in [0,1]. Linear interpolates
/// between order statistics at rank q*(n-1) (0-indexed); Lower takes
/// floor(rank); Nearest rounds the rank.
double percentile(std::vector<double> values, double q,
                  PercentileMethod method = PercentileMethod::Linear);

/// Robust Hausdorff: per direction, the qth percentile of per-point nearest
/// distances; the result is the max of the two directions.
double hd95(const BoundaryPair& bp, double q = 0.95,
            PercentileMethod method = PercentileMethod::Linear);

/// Average symmetric surface distance: both directional nearest-distance
/// sums divided by the total contour point count |S1| + |S2|.
double assd(const BoundaryPair& bp);

} // namespace segeval
