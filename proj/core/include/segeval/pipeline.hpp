#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "segeval/cohort.hpp"
#include "segeval/config.hpp"
#include "segeval/ensemble.hpp"
#include "segeval/record.hpp"
#include "segeval/stats.hpp"

namespace segeval {

/// Evaluate one GT/prediction mask pair under the given config. Per-metric
/// failures land in record.errors; the function itself does not throw for
/// metric-level problems.
EvalRecord evaluate_pair(const BinaryMask& gt, const BinaryMask& pred,
                         const EvalConfig& cfg);

/// One model's aggregate row within a group report.
struct ModelGroupStats {
    std::string model_id;
    GroupSummary summary;
};

struct PairwiseComparison {
    std::string model_a;
    std::string model_b;
    ModelComparison result;
};

/// Tables-style group report: per-model means with Dice CIs by both
/// methods, a Dice ranking, and the pairwise significance matrix.
struct GroupReport {
    std::string group;
    std::vector<ModelGroupStats> models;
    std::vector<std::string> ranking;
    std::vector<PairwiseComparison> comparisons;
    // Pooled-count overlap metrics per model, present under --pooled.
    std::vector<std::pair<std::string, double>> pooled_iou;
    std::vector<std::pair<std::string, double>> pooled_dice;
};

struct EvaluateOptions {
    std::filesystem::path manifest;
    std::vector<std::string> model_ids; // empty = all manifest models
    std::filesystem::path config;       // empty = defaults
    std::filesystem::path output_dir;
    std::optional<Split> split_filter;  // evaluate one split only
    bool pooled = false;
    int threads = 0;                    // 0 = hardware concurrency
};

struct EvaluateOutput {
    std::vector<EvalRecord> records;
    std::vector<GroupReport> reports;
};

/// Full evaluation pass: load manifest, evaluate every (case, model) pair
/// concurrently, aggregate per (group, model), and write records.csv,
/// records.json, groups.json, groups.txt, and run_metadata.json into the
/// output directory. Row order is (group, model, case id); repeated runs
/// over identical inputs produce byte-identical reports (timestamps live
/// only in run_metadata.json).
EvaluateOutput run_evaluate(const EvaluateOptions& opts);

struct EnsembleOptions {
    std::vector<std::filesystem::path> model_dirs;
    BitwiseOp op = BitwiseOp::And;
    std::filesystem::path output_dir;
    double binarize_threshold = 0.5;
};

/// Load each directory as a PredictionSet (case id = filename stem),
/// combine, and write one PNG per case plus provenance.json.
PredictionSet run_ensemble(const EnsembleOptions& opts);

struct QualitymapOptions {
    std::filesystem::path gt_path;
    std::filesystem::path pred_path;
    std::filesystem::path output_dir;
    std::filesystem::path config; // empty = defaults
};

/// Write one Jet-colormapped PNG per scale plus qualitymap.json with the
/// per-scale means and the final MS-SSIM.
SsimResult run_qualitymap(const QualitymapOptions& opts);

struct SplitOptions {
    std::filesystem::path cases_csv;
    SplitRatios ratios;
    std::uint64_t seed = 0;
    std::filesystem::path output_manifest;
};

CohortManifest run_split(const SplitOptions& opts);

/// Library-level entry points of the CLI subcommands, returning the
/// documented exit codes: 0 success, 1 I/O failure, 2 config error.
int cmd_evaluate(const EvaluateOptions& opts);
int cmd_ensemble(const EnsembleOptions& opts);
int cmd_qualitymap(const QualitymapOptions& opts);
int cmd_split(const SplitOptions& opts);

} // namespace segeval
