#include "segeval/overlap.hpp"

namespace segeval {

ConfusionCounts confusion(const BinaryMask& gt, const BinaryMask& pred) {
    if (gt.width != pred.width || gt.height != pred.height)
        throw InvalidArgument("confusion: dimension mismatch");
    ConfusionCounts c;
    for (size_t i = 0; i < gt.data.size(); ++i) {
        const bool g = gt.data[i] != 0, p = pred.data[i] != 0;
        if (g && p)
            ++c.tp;
        else if (!g && p)
            ++c.fp;
        else if (g && !p)
            ++c.fn;
        else
            ++c.tn;
    }
    return c;
}

OverlapScore iou(const ConfusionCounts& c) {
    const std::int64_t denom = c.tp + c.fp + c.fn;
    if (denom == 0) return {1.0, true}; // both masks empty: perfect agreement on absence
    return {static_cast<double>(c.tp) / static_cast<double>(denom), false};
}

OverlapScore dice(const ConfusionCounts& c) {
    const std::int64_t denom = 2 * c.tp + c.fp + c.fn;
    if (denom == 0) return {1.0, true};
    return {2.0 * static_cast<double>(c.tp) / static_cast<double>(denom), false};
}

} // namespace segeval
