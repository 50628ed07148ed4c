#include "segeval/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace segeval {

const char* bitwise_op_name(BitwiseOp op) {
    return op == BitwiseOp::And ? "and" : "or";
}

PredictionSet bitwise_combine(const std::vector<PredictionSet>& sets, BitwiseOp op) {
    if (sets.empty()) throw InvalidArgument("bitwise_combine: no prediction sets");

    // Verify alignment exhaustively before combining anything.
    const PredictionSet& first = sets.front();
    std::ostringstream problems;
    for (size_t s = 1; s < sets.size(); ++s) {
        for (const auto& [case_id, mask] : first.masks)
            if (!sets[s].masks.count(case_id))
                problems << "case '" << case_id << "' missing from model '"
                         << sets[s].model_id << "'\n";
        for (const auto& [case_id, mask] : sets[s].masks)
            if (!first.masks.count(case_id))
                problems << "case '" << case_id << "' missing from model '"
                         << first.model_id << "'\n";
    }
    for (const auto& [case_id, mask] : first.masks) {
        for (size_t s = 1; s < sets.size(); ++s) {
            auto it = sets[s].masks.find(case_id);
            if (it == sets[s].masks.end()) continue;
            if (it->second.width != mask.width || it->second.height != mask.height)
                problems << "case '" << case_id << "' dimension mismatch between '"
                         << first.model_id << "' and '" << sets[s].model_id << "'\n";
        }
    }
    const std::string report = problems.str();
    if (!report.empty())
        throw InvalidArgument("bitwise_combine: misaligned prediction sets:\n" + report);

    PredictionSet out;
    {
        std::ostringstream label;
        label << bitwise_op_name(op) << "(";
        for (size_t s = 0; s < sets.size(); ++s)
            label << (s ? "," : "") << sets[s].model_id;
        label << ")";
        out.model_id = label.str();
    }

    for (const auto& [case_id, first_mask] : first.masks) {
        BinaryMask combined = first_mask;
        for (size_t s = 1; s < sets.size(); ++s) {
            const BinaryMask& m = sets[s].masks.at(case_id);
            if (op == BitwiseOp::And) {
                for (size_t i = 0; i < combined.data.size(); ++i)
                    combined.data[i] = combined.data[i] & m.data[i];
            } else {
                for (size_t i = 0; i < combined.data.size(); ++i)
                    combined.data[i] = combined.data[i] | m.data[i];
            }
        }
        out.masks.emplace(case_id, std::move(combined));
    }
    return out;
}

PredictionSet ensemble_of_ensembles(const PredictionSet& e2, const PredictionSet& e3,
                                    BitwiseOp op) {
    PredictionSet out = bitwise_combine({e2, e3}, op);
    out.model_id = std::string("stacked2x(") + bitwise_op_name(op) + ":" + e2.model_id +
                   "+" + e3.model_id + ")";
    return out;
}

std::vector<std::string> rank_models(
    const std::vector<std::pair<std::string, double>>& mean_dice) {
    if (mean_dice.empty()) throw InvalidArgument("rank_models: empty model list");
    for (const auto& [id, score] : mean_dice)
        if (!std::isfinite(score))
            throw InvalidArgument("rank_models: non-finite score for model '" + id + "'");

    std::vector<std::pair<std::string, double>> sorted = mean_dice;
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<std::string> ids;
    ids.reserve(sorted.size());
    for (auto& [id, score] : sorted) ids.push_back(std::move(id));
    return ids;
}

} // namespace segeval
