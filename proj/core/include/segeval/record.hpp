#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "segeval/overlap.hpp"

namespace segeval {

/// Per-case, per-model metric results. Each metric is either present or
/// accounted for by a named error under its key in `errors`; a batch never
/// aborts on a single bad case.
struct EvalRecord {
    std::string case_id;
    std::string model_id;
    std::string group;
    std::string split;

    std::optional<double> iou;
    std::optional<double> dice;
    std::optional<double> msssim;
    std::optional<double> mlcd;
    std::optional<double> ahs;      // mean Hamming distance in [0,64]
    std::optional<double> ahs_norm; // ahs / 64
    std::optional<double> hd95;
    std::optional<double> assd;

    std::optional<ConfusionCounts> counts;

    bool empty_mask_warning = false;    // empty-vs-empty overlap pair
    std::int64_t structure_clamps = 0;  // negative SSIM structure terms clamped
    std::string extractor;              // contour backend used

    std::map<std::string, std::string> errors; // metric name -> named error

    bool complete() const {
        return iou && dice && msssim && mlcd && ahs && hd95 && assd;
    }
};

} // namespace segeval
