#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "segeval/image_io.hpp"
#include "segeval/pipeline.hpp"
#include "support/synthetic.hpp"

using namespace segeval;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "segeval_test_pipeline" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// A tiny cohort on disk: `cases` GT blobs at 192x192 with two models,
// "good" (the GT itself) and "shift" (translated by two pixels).
fs::path make_cohort(const fs::path& dir, int cases) {
    fs::create_directories(dir / "gt");
    fs::create_directories(dir / "good");
    fs::create_directories(dir / "shift");

    std::ostringstream manifest;
    manifest << "case_id,patient_id,age_months,dataset,split,group,gt_path,good,shift\n";
    for (int i = 0; i < cases; ++i) {
        testing::Rng rng(static_cast<std::uint64_t>(i) + 7000);
        const BinaryMask gt = testing::random_blob_mask(192, 192, rng, 24);
        const std::string name = "case" + std::to_string(i) + ".png";
        write_png(gt, dir / "gt" / name);
        write_png(gt, dir / "good" / name);
        write_png(testing::translated(gt, 2, 2), dir / "shift" / name);
        const int age = 12 * (i + 1);
        manifest << "case" << i << ",p" << i << "," << age << ",synth,test,"
                 << age_group_name(assign_group(age)) << ",gt/" << name << ",good/"
                 << name << ",shift/" << name << "\n";
    }
    const fs::path mpath = dir / "manifest.csv";
    std::ofstream(mpath, std::ios::binary) << manifest.str();
    return mpath;
}

} // namespace

TEST_SUITE("pipeline") {

TEST_CASE("evaluate_pair: identity yields perfect scores everywhere") {
    testing::Rng rng(1);
    const BinaryMask gt = testing::random_blob_mask(192, 192, rng, 24);
    const EvalRecord r = evaluate_pair(gt, gt, EvalConfig{});
    REQUIRE(r.errors.empty());
    CHECK(*r.iou == 1.0);
    CHECK(*r.dice == 1.0);
    CHECK(*r.msssim == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(*r.mlcd == 0.0);
    CHECK(*r.ahs == 0.0);
    CHECK(*r.hd95 == 0.0);
    CHECK(*r.assd == 0.0);
    CHECK(r.extractor == "canny");
}

TEST_CASE("evaluate_pair: empty prediction degrades only the boundary metrics") {
    testing::Rng rng(2);
    const BinaryMask gt = testing::random_blob_mask(192, 192, rng, 24);
    const BinaryMask empty(192, 192);
    const EvalRecord r = evaluate_pair(gt, empty, EvalConfig{});
    CHECK(r.errors.at("mlcd") == "empty prediction contour");
    CHECK(r.errors.at("hd95") == "empty prediction contour");
    CHECK(r.errors.at("assd") == "empty prediction contour");
    CHECK(!r.mlcd);
    REQUIRE(r.iou);
    CHECK(*r.iou == 0.0);
    REQUIRE(r.msssim);
    REQUIRE(r.ahs);
    CHECK(!r.complete());
}

TEST_CASE("config: defaults, overrides, and errors") {
    const EvalConfig def = parse_config("");
    CHECK(def.binarize_threshold == 0.5);
    CHECK(def.boundary.extractor == ContourExtractor::Canny);
    CHECK(def.ssim.scales == 5);

    const EvalConfig cfg = parse_config(
        "# comment\n"
        "binarize.threshold = 0.4\n"
        "contour.extractor = morph\n"
        "ssim.scales = 3\n"
        "ssim.weights = 0.2, 0.3, 0.5\n"
        "percentile.method = nearest\n"
        "hd95.percentile = 0.9\n");
    CHECK(cfg.binarize_threshold == 0.4);
    CHECK(cfg.boundary.extractor == ContourExtractor::Morph);
    CHECK(cfg.ssim.scales == 3);
    CHECK(cfg.ssim.weights == std::vector<double>{0.2, 0.3, 0.5});
    CHECK(cfg.percentile_method == PercentileMethod::Nearest);

    // Scale count without weights falls back to uniform exponents.
    CHECK(parse_config("ssim.scales = 4\n").ssim.weights ==
          std::vector<double>(4, 0.25));

    CHECK_THROWS_WITH_AS(parse_config("nope = 1\n"), doctest::Contains("unknown key"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("binarize.threshold = x\n"),
                         doctest::Contains("line 1"), ConfigError);
    CHECK_THROWS_AS(parse_config("binarize.threshold = 1.5\n"), ConfigError);

    CHECK(config_fingerprint("") == "default");
    CHECK(config_fingerprint("a") != config_fingerprint("b"));
}

TEST_CASE("run_split: byte-identical across invocations, groups match ages") {
    const fs::path dir = fresh_dir("split");
    const fs::path cases = dir / "cases.csv";
    {
        std::ofstream out(cases, std::ios::binary);
        out << "case_id,patient_id,age_months,dataset,gt_path\n";
        const int ages[] = {3, 23, 24, 100, 132, 215, 216, 400, 30, 7};
        for (int i = 0; i < 10; ++i)
            out << "c" << i << ",p" << i << "," << ages[i] << ",synth,gt/c" << i
                << ".png\n";
    }

    SplitOptions opts;
    opts.cases_csv = cases;
    opts.seed = 13;
    opts.output_manifest = dir / "m1.csv";
    const CohortManifest m = run_split(opts);
    opts.output_manifest = dir / "m2.csv";
    run_split(opts);
    CHECK(slurp(dir / "m1.csv") == slurp(dir / "m2.csv"));

    // Hand tally of the roster: P1 {3,23,7}, P2 {24,100,30}, P3 {132,215},
    // adult {216,400}.
    std::map<AgeGroup, int> tally;
    for (AgeGroup g : m.groups) ++tally[g];
    CHECK(tally[AgeGroup::P1] == 3);
    CHECK(tally[AgeGroup::P2] == 3);
    CHECK(tally[AgeGroup::P3] == 2);
    CHECK(tally[AgeGroup::Adult] == 2);
}

TEST_CASE("run_ensemble: single directory copies, complement AND empties") {
    const fs::path dir = fresh_dir("ensemble");
    fs::create_directories(dir / "m0");
    fs::create_directories(dir / "m1");
    testing::Rng rng(5);
    for (int i = 0; i < 3; ++i) {
        const BinaryMask m = testing::random_blob_mask(48, 48, rng);
        const std::string name = "case" + std::to_string(i) + ".png";
        write_png(m, dir / "m0" / name);
        write_png(testing::complement(m), dir / "m1" / name);
    }

    EnsembleOptions single;
    single.model_dirs = {dir / "m0"};
    single.op = BitwiseOp::Or;
    single.output_dir = dir / "out_single";
    run_ensemble(single);
    for (int i = 0; i < 3; ++i) {
        const std::string name = "case" + std::to_string(i) + ".png";
        CHECK(slurp(dir / "m0" / name) == slurp(dir / "out_single" / name));
    }
    CHECK(fs::exists(dir / "out_single" / "provenance.json"));

    EnsembleOptions both;
    both.model_dirs = {dir / "m0", dir / "m1"};
    both.op = BitwiseOp::And;
    both.output_dir = dir / "out_and";
    const PredictionSet anded = run_ensemble(both);
    for (const auto& [id, mask] : anded.masks) CHECK(mask.foreground_count() == 0);
}

TEST_CASE("run_ensemble: matches the library combination on random sets") {
    const fs::path dir = fresh_dir("ensemble_rand");
    std::vector<PredictionSet> sets(3);
    for (int s = 0; s < 3; ++s) {
        sets[static_cast<size_t>(s)].model_id = "m" + std::to_string(s);
        fs::create_directories(dir / sets[static_cast<size_t>(s)].model_id);
        testing::Rng rng(static_cast<std::uint64_t>(s) + 60);
        for (int i = 0; i < 4; ++i) {
            const BinaryMask m = testing::random_blob_mask(40, 40, rng);
            sets[static_cast<size_t>(s)].masks.emplace("case" + std::to_string(i), m);
            write_png(m, dir / sets[static_cast<size_t>(s)].model_id /
                             ("case" + std::to_string(i) + ".png"));
        }
    }
    EnsembleOptions opts;
    opts.model_dirs = {dir / "m0", dir / "m1", dir / "m2"};
    opts.op = BitwiseOp::Or;
    opts.output_dir = dir / "out";
    run_ensemble(opts);

    const PredictionSet expected = bitwise_combine(sets, BitwiseOp::Or);
    for (const auto& [id, mask] : expected.masks)
        CHECK(load_mask(dir / "out" / (id + ".png")).data == mask.data);
}

TEST_CASE("run_evaluate: identity model scores perfectly, reports are complete") {
    const fs::path dir = fresh_dir("evaluate");
    const fs::path manifest = make_cohort(dir, 4);

    EvaluateOptions opts;
    opts.manifest = manifest;
    opts.output_dir = dir / "out";
    opts.threads = 2;
    const EvaluateOutput out = run_evaluate(opts);

    REQUIRE(out.records.size() == 8); // 4 cases x 2 models
    for (const EvalRecord& r : out.records) {
        if (r.model_id != "good") continue;
        CHECK(*r.iou == 1.0);
        CHECK(*r.dice == 1.0);
        CHECK(*r.msssim == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(*r.mlcd == 0.0);
    }
    // Rows are ordered by (group, model, case id).
    for (size_t i = 1; i < out.records.size(); ++i) {
        const auto key = [](const EvalRecord& r) {
            return std::tuple<std::string, std::string, std::string>(
                r.group == "P1" ? "0" : r.group == "P2" ? "1" : r.group == "P3" ? "2" : "3",
                r.model_id, r.case_id);
        };
        CHECK(key(out.records[i - 1]) <= key(out.records[i]));
    }

    for (const char* name :
         {"records.csv", "records.json", "groups.json", "groups.txt",
          "run_metadata.json"})
        CHECK(fs::exists(dir / "out" / name));

    // Group means recompute from the records.
    for (const GroupReport& g : out.reports) {
        for (const ModelGroupStats& m : g.models) {
            double sum = 0.0;
            int n = 0;
            for (const EvalRecord& r : out.records)
                if (r.group == g.group && r.model_id == m.model_id && r.errors.empty()) {
                    sum += *r.dice;
                    ++n;
                }
            REQUIRE(n == m.summary.n);
            CHECK(m.summary.mean_dice == doctest::Approx(sum / n).epsilon(1e-12));
        }
        CHECK(g.ranking.size() == g.models.size());
    }
}

TEST_CASE("run_evaluate: deterministic byte-identical reports") {
    const fs::path dir = fresh_dir("determinism");
    const fs::path manifest = make_cohort(dir, 3);

    EvaluateOptions opts;
    opts.manifest = manifest;
    opts.threads = 2;
    opts.output_dir = dir / "out1";
    run_evaluate(opts);
    opts.output_dir = dir / "out2";
    opts.threads = 1; // thread count must not leak into the reports
    run_evaluate(opts);

    for (const char* name : {"records.csv", "records.json", "groups.json", "groups.txt"})
        CHECK(slurp(dir / "out1" / name) == slurp(dir / "out2" / name));
}

TEST_CASE("run_evaluate: per-case failures are data, unresolvable files are fatal") {
    const fs::path dir = fresh_dir("degraded");
    const fs::path manifest = make_cohort(dir, 2);
    // Blank out one prediction: boundary metrics error, overlap survives.
    write_png(BinaryMask(192, 192), dir / "shift" / "case0.png");

    EvaluateOptions opts;
    opts.manifest = manifest;
    opts.output_dir = dir / "out";
    const EvaluateOutput out = run_evaluate(opts);
    bool found = false;
    for (const EvalRecord& r : out.records) {
        if (r.model_id == "shift" && r.case_id == "case0") {
            found = true;
            CHECK(r.errors.at("mlcd") == "empty prediction contour");
            REQUIRE(r.iou);
            CHECK(*r.iou == 0.0);
        }
    }
    CHECK(found);

    fs::remove(dir / "shift" / "case1.png");
    CHECK_THROWS_AS(run_evaluate(opts), IoError);
    CHECK(cmd_evaluate(opts) == 1);

    EvaluateOptions bad = opts;
    bad.model_ids = {"nonexistent"};
    CHECK(cmd_evaluate(bad) == 2);

    EvaluateOptions bad_config = opts;
    bad_config.config = dir / "missing.cfg";
    CHECK(cmd_evaluate(bad_config) == 2);
}

TEST_CASE("run_evaluate: pooled mode reports pooled-count overlap") {
    const fs::path dir = fresh_dir("pooled");
    const fs::path manifest = make_cohort(dir, 3);

    EvaluateOptions opts;
    opts.manifest = manifest;
    opts.output_dir = dir / "out";
    opts.pooled = true;
    const EvaluateOutput out = run_evaluate(opts);

    for (const GroupReport& g : out.reports) {
        REQUIRE(!g.pooled_iou.empty());
        for (size_t m = 0; m < g.pooled_iou.size(); ++m) {
            const std::string& model = g.pooled_iou[m].first;
            ConfusionCounts pooled;
            for (const EvalRecord& r : out.records) {
                if (r.group != g.group || r.model_id != model || !r.counts) continue;
                pooled.tp += r.counts->tp;
                pooled.fp += r.counts->fp;
                pooled.fn += r.counts->fn;
                pooled.tn += r.counts->tn;
            }
            CHECK(g.pooled_iou[m].second == iou(pooled).value);
            CHECK(g.pooled_dice[m].second == dice(pooled).value);
        }
    }
}

TEST_CASE("config resolution: explicit path beats SEGEVAL_CONFIG, env beats default") {
    const fs::path dir = fresh_dir("config_env");
    const fs::path manifest = make_cohort(dir, 1);
    std::ofstream(dir / "env.cfg") << "contour.extractor = morph\n";
    std::ofstream(dir / "explicit.cfg") << "contour.extractor = canny\n";

    setenv("SEGEVAL_CONFIG", (dir / "env.cfg").string().c_str(), 1);
    EvaluateOptions opts;
    opts.manifest = manifest;
    opts.output_dir = dir / "out_env";
    EvaluateOutput from_env = run_evaluate(opts);
    CHECK(from_env.records.at(0).extractor == "morph");

    opts.config = dir / "explicit.cfg";
    opts.output_dir = dir / "out_explicit";
    EvaluateOutput from_flag = run_evaluate(opts);
    CHECK(from_flag.records.at(0).extractor == "canny");
    unsetenv("SEGEVAL_CONFIG");
}

TEST_CASE("run_qualitymap: five maps with the halving schedule") {
    const fs::path dir = fresh_dir("qualitymap");
    testing::Rng rng(8);
    const BinaryMask gt = testing::random_blob_mask(224, 224, rng, 30);
    write_png(gt, dir / "gt.png");
    write_png(gt, dir / "pred.png");

    QualitymapOptions opts;
    opts.gt_path = dir / "gt.png";
    opts.pred_path = dir / "pred.png";
    opts.output_dir = dir / "out";
    const SsimResult r = run_qualitymap(opts);
    CHECK(r.msssim == doctest::Approx(1.0).epsilon(1e-9));

    const auto meta = nlohmann::json::parse(slurp(dir / "out" / "qualitymap.json"));
    REQUIRE(meta.at("scales").size() == 5);
    const int expected[5] = {224, 112, 56, 28, 14};
    for (int j = 0; j < 5; ++j) {
        CHECK(meta.at("scales")[j].at("width") == expected[j]);
        CHECK(fs::exists(dir / "out" / ("scale_" + std::to_string(j + 1) + ".png")));
    }

    // Too-small inputs fail with a usable suggestion.
    write_png(BinaryMask(64, 64, 1), dir / "small.png");
    QualitymapOptions small = opts;
    small.gt_path = dir / "small.png";
    small.pred_path = dir / "small.png";
    CHECK(cmd_qualitymap(small) == 1);
}

} // TEST_SUITE
