#pragma once

#include <map>
#include <string>
#include <vector>

#include "segeval/raster.hpp"

namespace segeval {

enum class BitwiseOp { And, Or };

const char* bitwise_op_name(BitwiseOp op);

/// One model's predictions keyed by case id. Keys iterate in sorted order,
/// which fixes the output order of every combination step.
struct PredictionSet {
    std::string model_id;
    std::map<std::string, BinaryMask> masks;
};

/// Per-case, per-pixel AND/OR across the sets. Requires at least one set,
/// identical case-id key sets, and matching dimensions per case; alignment
/// failures are reported exhaustively in the error message. The output
/// model id records the constituents and the op.
PredictionSet bitwise_combine(const std::vector<PredictionSet>& sets, BitwiseOp op);

/// Combine two previously combined sets; delegates to bitwise_combine and
/// labels the two-stage composition.
PredictionSet ensemble_of_ensembles(const PredictionSet& e2,
                                    const PredictionSet& e3, BitwiseOp op);

/// Model ids ordered by descending mean Dice; ties break lexicographically
/// by id. Throws InvalidArgument on an empty list or a non-finite score.
std::vector<std::string> rank_models(
    const std::vector<std::pair<std::string, double>>& mean_dice);

} // namespace segeval
