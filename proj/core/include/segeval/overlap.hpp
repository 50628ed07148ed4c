#pragma once

#include <cstdint>

#include "segeval/raster.hpp"

namespace segeval {

/// Per-pixel agreement counts between a ground-truth and a predicted mask.
struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;

    std::int64_t total() const { return tp + fp + fn + tn; }
};

/// tp = both foreground, fp = prediction only, fn = ground truth only,
/// tn = both background. Throws InvalidArgument on a dimension mismatch.
ConfusionCounts confusion(const BinaryMask& gt, const BinaryMask& pred);

/// Overlap ratio with an empty-vs-empty flag: when tp+fp+fn == 0 both masks
/// are empty and the metric is defined as 1.0 with `empty_pair` set.
struct OverlapScore {
    double value = 0.0;
    bool empty_pair = false;
};

/// TP / (TP + FP + FN).
OverlapScore iou(const ConfusionCounts& c);

/// 2TP / (2TP + FP + FN).
OverlapScore dice(const ConfusionCounts& c);

} // namespace segeval
