// segeval: batch evaluation of segmentation masks against ground truth.
//
// Subcommands:
//   evaluate    per-case metrics + per-group reports from a cohort manifest
//   ensemble    bitwise AND/OR combination of per-model mask directories
//   qualitymap  per-scale MS-SSIM quality maps for one GT/prediction pair
//   split       patient-level train/val/test manifest from a cases CSV

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "segeval/pipeline.hpp"
#include "segeval/version.hpp"

namespace {

segeval::BitwiseOp parse_op(const std::string& s) {
    if (s == "and") return segeval::BitwiseOp::And;
    if (s == "or") return segeval::BitwiseOp::Or;
    throw CLI::ValidationError("--op must be 'and' or 'or'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"segmentation evaluation toolkit"};
    app.set_version_flag("--version", segeval::kVersion);
    app.require_subcommand(1);

    segeval::EvaluateOptions eval_opts;
    std::string eval_split;
    auto* evaluate = app.add_subcommand("evaluate", "evaluate a cohort manifest");
    evaluate->add_option("manifest", eval_opts.manifest, "manifest CSV")->required();
    evaluate->add_option("-o,--output", eval_opts.output_dir, "output directory")
        ->required();
    evaluate->add_option("-m,--model", eval_opts.model_ids,
                         "model id(s) to evaluate (default: all manifest models)");
    evaluate->add_option("-c,--config", eval_opts.config,
                         "config file (or set SEGEVAL_CONFIG)");
    evaluate->add_option("--split", eval_split, "restrict to one split")
        ->check(CLI::IsMember({"train", "val", "test"}));
    evaluate->add_flag("--pooled", eval_opts.pooled,
                       "additionally report pooled-count IoU/Dice per group");
    evaluate->add_option("-j,--threads", eval_opts.threads,
                         "worker threads (default: hardware concurrency)");

    segeval::EnsembleOptions ens_opts;
    std::string ens_op = "and";
    auto* ensemble = app.add_subcommand("ensemble", "combine prediction directories");
    ensemble->add_option("dirs", ens_opts.model_dirs, "one mask directory per model")
        ->required();
    ensemble->add_option("--op", ens_op, "bitwise op: and | or")
        ->check(CLI::IsMember({"and", "or"}));
    ensemble->add_option("-o,--output", ens_opts.output_dir, "output directory")
        ->required();
    ensemble->add_option("--threshold", ens_opts.binarize_threshold,
                         "mask binarization threshold");

    segeval::QualitymapOptions qm_opts;
    auto* qualitymap = app.add_subcommand("qualitymap", "per-scale quality maps");
    qualitymap->add_option("gt", qm_opts.gt_path, "ground-truth image")->required();
    qualitymap->add_option("pred", qm_opts.pred_path, "predicted image")->required();
    qualitymap->add_option("-o,--output", qm_opts.output_dir, "output directory")
        ->required();
    qualitymap->add_option("-c,--config", qm_opts.config,
                           "config file (or set SEGEVAL_CONFIG)");

    segeval::SplitOptions split_opts;
    auto* split = app.add_subcommand("split", "patient-level cohort split");
    split->add_option("cases", split_opts.cases_csv, "cases CSV")->required();
    split->add_option("-o,--output", split_opts.output_manifest, "output manifest CSV")
        ->required();
    split->add_option("--train", split_opts.ratios.train, "train ratio");
    split->add_option("--val", split_opts.ratios.val, "validation ratio");
    split->add_option("--test", split_opts.ratios.test, "test ratio");
    split->add_option("--seed", split_opts.seed, "shuffle seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2; // usage problems are config errors
    }

    if (evaluate->parsed()) {
        if (!eval_split.empty())
            eval_opts.split_filter = segeval::split_from_name(eval_split);
        return segeval::cmd_evaluate(eval_opts);
    }
    if (ensemble->parsed()) {
        ens_opts.op = parse_op(ens_op);
        return segeval::cmd_ensemble(ens_opts);
    }
    if (qualitymap->parsed()) return segeval::cmd_qualitymap(qm_opts);
    if (split->parsed()) return segeval::cmd_split(split_opts);
    return 2;
}
