#include "segeval/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "segeval/boundary.hpp"
#include "segeval/csv.hpp"
#include "segeval/image_io.hpp"
#include "segeval/structural.hpp"
#include "segeval/version.hpp"

namespace segeval {

using ordered_json = nlohmann::ordered_json;

EvalRecord evaluate_pair(const BinaryMask& gt, const BinaryMask& pred,
                         const EvalConfig& cfg) {
    EvalRecord r;
    r.extractor = contour_extractor_name(cfg.boundary.extractor);

    try {
        const ConfusionCounts c = confusion(gt, pred);
        r.counts = c;
        const OverlapScore i = iou(c), d = dice(c);
        r.iou = i.value;
        r.dice = d.value;
        r.empty_mask_warning = i.empty_pair;
    } catch (const Error& e) {
        r.errors["iou"] = e.what();
        r.errors["dice"] = e.what();
    }

    try {
        const SsimResult s = msssim(to_gray(gt), to_gray(pred), cfg.ssim);
        r.msssim = s.msssim;
        r.structure_clamps = s.structure_clamps;
    } catch (const Error& e) {
        r.errors["msssim"] = e.what();
    }

    try {
        const HashScores h = ahs(gt, pred);
        r.ahs = h.ahs;
        r.ahs_norm = h.ahs_normalized;
    } catch (const Error& e) {
        r.errors["ahs"] = e.what();
    }

    try {
        const BoundaryPair bp = boundary_pair(gt, pred, cfg.boundary);
        r.mlcd = mlcd(bp);
        r.hd95 = hd95(bp, cfg.hd95_percentile, cfg.percentile_method);
        r.assd = assd(bp);
    } catch (const Error& e) {
        r.errors["mlcd"] = e.what();
        r.errors["hd95"] = e.what();
        r.errors["assd"] = e.what();
    }
    return r;
}

namespace {

EvalConfig resolve_config(const std::filesystem::path& explicit_path,
                          std::string* text_out) {
    std::filesystem::path path = explicit_path;
    if (path.empty()) {
        if (const char* env = std::getenv("SEGEVAL_CONFIG")) path = env;
    }
    if (path.empty()) {
        if (text_out) text_out->clear();
        return EvalConfig{};
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string() + ": unreadable config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (text_out) *text_out = ss.str();
    return parse_config(ss.str());
}

std::string opt_str(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string{};
}

std::string join_errors(const std::map<std::string, std::string>& errors) {
    std::string out;
    for (const auto& [metric, msg] : errors) {
        if (!out.empty()) out += ";";
        out += metric + ":" + msg;
    }
    return out;
}

ordered_json record_json(const EvalRecord& r) {
    ordered_json j;
    j["case_id"] = r.case_id;
    j["model_id"] = r.model_id;
    j["group"] = r.group;
    j["split"] = r.split;
    auto metric = [&j](const char* name, const std::optional<double>& v) {
        if (v)
            j[name] = *v;
        else
            j[name] = nullptr;
    };
    metric("iou", r.iou);
    metric("dice", r.dice);
    metric("msssim", r.msssim);
    metric("mlcd", r.mlcd);
    metric("ahs", r.ahs);
    metric("ahs_norm", r.ahs_norm);
    metric("hd95", r.hd95);
    metric("assd", r.assd);
    if (r.counts) {
        j["counts"] = {{"tp", r.counts->tp},
                       {"fp", r.counts->fp},
                       {"fn", r.counts->fn},
                       {"tn", r.counts->tn}};
    } else {
        j["counts"] = nullptr;
    }
    j["flags"] = {{"empty_mask_warning", r.empty_mask_warning},
                  {"structure_clamps", r.structure_clamps},
                  {"extractor", r.extractor}};
    j["errors"] = r.errors;
    return j;
}

ordered_json ci_json(const CiResult& ci) {
    return {{"estimate", ci.estimate}, {"lower", ci.lower},     {"upper", ci.upper},
            {"method", ci_method_name(ci.method)}, {"n", ci.n}, {"alpha", ci.alpha}};
}

int group_order(const std::string& g) {
    if (g == "P1") return 0;
    if (g == "P2") return 1;
    if (g == "P3") return 2;
    if (g == "adult") return 3;
    return 4;
}

std::string iso_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path.string() + ": cannot open for writing");
    out << text;
    if (!out) throw IoError(path.string() + ": write failed");
}

// Plain-text group tables mirroring the report column order.
std::string render_group_tables(const std::vector<GroupReport>& reports) {
    std::ostringstream out;
    for (const GroupReport& g : reports) {
        out << "== Group " << g.group << " ==\n";
        out << "model                            n  IoU     Dice (CI)                MS-SSIM MLCD     AHS      HD95     ASSD\n";
        for (const ModelGroupStats& m : g.models) {
            const GroupSummary& s = m.summary;
            std::ostringstream dice_ci;
            dice_ci << fixed4(s.mean_dice) << " (" << fixed4(s.dice_wald.lower) << ","
                    << fixed4(s.dice_wald.upper) << ")";
            char line[256];
            std::snprintf(line, sizeof(line),
                          "%-32s %-2lld %-7s %-24s %-7s %-8s %-8s %-8s %-8s\n",
                          m.model_id.c_str(), static_cast<long long>(s.n),
                          fixed4(s.mean_iou).c_str(), dice_ci.str().c_str(),
                          fixed4(s.mean_msssim).c_str(), fixed4(s.mean_mlcd).c_str(),
                          fixed4(s.mean_ahs).c_str(), fixed4(s.mean_hd95).c_str(),
                          fixed4(s.mean_assd).c_str());
            out << line;
        }
        out << "ranking (Dice):";
        for (size_t i = 0; i < g.ranking.size(); ++i)
            out << " " << (i + 1) << "." << g.ranking[i];
        out << "\n";
        for (const PairwiseComparison& c : g.comparisons) {
            out << "  " << c.model_a << " vs " << c.model_b << ": z="
                << fixed4(c.result.z) << " p=" << fixed4(c.result.p)
                << (c.result.significant ? " *" : "") << "\n";
        }
        out << "\n";
    }
    return out.str();
}

} // namespace

EvaluateOutput run_evaluate(const EvaluateOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();

    std::string config_text;
    EvalConfig cfg = resolve_config(opts.config, &config_text);
    CohortManifest manifest = read_manifest_csv(opts.manifest);

    std::vector<std::string> models = opts.model_ids;
    if (models.empty()) models = manifest.model_ids;
    if (models.empty())
        throw ConfigError("evaluate: manifest lists no model columns");
    {
        const std::set<std::string> known(manifest.model_ids.begin(),
                                          manifest.model_ids.end());
        for (const std::string& m : models)
            if (!known.count(m))
                throw ConfigError("evaluate: model '" + m + "' not in manifest");
    }

    struct WorkItem {
        size_t entry = 0;
        std::string model;
    };
    std::vector<WorkItem> items;
    std::ostringstream missing;
    for (size_t i = 0; i < manifest.entries.size(); ++i) {
        if (opts.split_filter && manifest.splits[i] != *opts.split_filter) continue;
        const CaseEntry& e = manifest.entries[i];
        if (!std::filesystem::exists(e.gt_path))
            missing << e.gt_path.string() << " (gt of case '" << e.case_id << "')\n";
        for (const std::string& m : models) {
            auto it = e.pred_paths.find(m);
            if (it == e.pred_paths.end()) continue; // no prediction column for this case
            if (!std::filesystem::exists(it->second))
                missing << it->second.string() << " (model '" << m << "', case '"
                        << e.case_id << "')\n";
            items.push_back({i, m});
        }
    }
    const std::string missing_report = missing.str();
    if (!missing_report.empty())
        throw IoError("evaluate: unresolvable mask files:\n" + missing_report);
    if (items.empty()) throw ConfigError("evaluate: nothing to evaluate");

    // Evaluate concurrently; slots keep the deterministic item order.
    std::vector<EvalRecord> records(items.size());
    std::atomic<size_t> cursor{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    int thread_count = opts.threads > 0
                           ? opts.threads
                           : static_cast<int>(std::thread::hardware_concurrency());
    thread_count = std::max(1, std::min<int>(thread_count, static_cast<int>(items.size())));

    auto worker = [&]() {
        for (;;) {
            const size_t i = cursor.fetch_add(1);
            if (i >= items.size()) return;
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (first_error) return;
            }
            const WorkItem& item = items[i];
            const CaseEntry& entry = manifest.entries[item.entry];
            try {
                BinaryMask gt = load_mask(entry.gt_path, cfg.binarize_threshold);
                BinaryMask pred =
                    load_mask(entry.pred_paths.at(item.model), cfg.binarize_threshold);
                if (cfg.preprocess_width > 0) {
                    gt = resize(gt, cfg.preprocess_width, cfg.preprocess_height);
                    pred = resize(pred, cfg.preprocess_width, cfg.preprocess_height);
                }
                EvalRecord r = evaluate_pair(gt, pred, cfg);
                r.case_id = entry.case_id;
                r.model_id = item.model;
                r.group = age_group_name(manifest.groups[item.entry]);
                r.split = split_name(manifest.splits[item.entry]);
                records[i] = std::move(r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(thread_count));
        for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    std::stable_sort(records.begin(), records.end(),
                     [](const EvalRecord& a, const EvalRecord& b) {
                         if (group_order(a.group) != group_order(b.group))
                             return group_order(a.group) < group_order(b.group);
                         if (a.model_id != b.model_id) return a.model_id < b.model_id;
                         return a.case_id < b.case_id;
                     });

    // Aggregate per (group, model).
    std::vector<GroupReport> reports;
    {
        std::vector<std::string> group_names; // records are group-sorted already
        for (const EvalRecord& r : records)
            if (group_names.empty() || group_names.back() != r.group)
                group_names.push_back(r.group);

        for (const std::string& gname : group_names) {
            GroupReport report;
            report.group = gname;
            std::vector<std::pair<std::string, double>> mean_dice;

            for (const std::string& m : models) {
                std::vector<EvalRecord> subset;
                for (const EvalRecord& r : records)
                    if (r.group == gname && r.model_id == m) subset.push_back(r);
                if (subset.empty()) continue;
                try {
                    ModelGroupStats stats;
                    stats.model_id = m;
                    stats.summary = aggregate(subset);
                    mean_dice.emplace_back(m, stats.summary.mean_dice);
                    report.models.push_back(std::move(stats));
                } catch (const InvalidArgument&) {
                    // Every record errored; the per-case CSV carries the reasons.
                }
                if (opts.pooled) {
                    ConfusionCounts pooled;
                    bool any = false;
                    for (const EvalRecord& r : subset) {
                        if (!r.counts) continue;
                        pooled.tp += r.counts->tp;
                        pooled.fp += r.counts->fp;
                        pooled.fn += r.counts->fn;
                        pooled.tn += r.counts->tn;
                        any = true;
                    }
                    if (any) {
                        report.pooled_iou.emplace_back(m, iou(pooled).value);
                        report.pooled_dice.emplace_back(m, dice(pooled).value);
                    }
                }
            }
            if (report.models.empty()) continue;
            report.ranking = rank_models(mean_dice);
            for (size_t a = 0; a < report.models.size(); ++a) {
                for (size_t b = a + 1; b < report.models.size(); ++b) {
                    const GroupSummary& sa = report.models[a].summary;
                    const GroupSummary& sb = report.models[b].summary;
                    if (sa.n != sb.n) continue; // unequal case sets, not comparable
                    PairwiseComparison pc;
                    pc.model_a = report.models[a].model_id;
                    pc.model_b = report.models[b].model_id;
                    pc.result = compare_models(sa.dice_wald, sb.dice_wald);
                    report.comparisons.push_back(std::move(pc));
                }
            }
            reports.push_back(std::move(report));
        }
    }

    // Emit reports.
    std::filesystem::create_directories(opts.output_dir);

    {
        std::ostringstream csv;
        csv << "case_id,model_id,group,split,iou,dice,msssim,mlcd,ahs,ahs_norm,hd95,"
               "assd,tp,fp,fn,tn,empty_mask_warning,structure_clamps,extractor,errors\n";
        for (const EvalRecord& r : records) {
            std::vector<std::string> row = {
                r.case_id,
                r.model_id,
                r.group,
                r.split,
                opt_str(r.iou),
                opt_str(r.dice),
                opt_str(r.msssim),
                opt_str(r.mlcd),
                opt_str(r.ahs),
                opt_str(r.ahs_norm),
                opt_str(r.hd95),
                opt_str(r.assd),
                r.counts ? std::to_string(r.counts->tp) : std::string{},
                r.counts ? std::to_string(r.counts->fp) : std::string{},
                r.counts ? std::to_string(r.counts->fn) : std::string{},
                r.counts ? std::to_string(r.counts->tn) : std::string{},
                r.empty_mask_warning ? "1" : "0",
                std::to_string(r.structure_clamps),
                r.extractor,
                join_errors(r.errors),
            };
            csv << csv_join(row) << "\n";
        }
        write_text_file(opts.output_dir / "records.csv", csv.str());
    }
    {
        ordered_json j = ordered_json::array();
        for (const EvalRecord& r : records) j.push_back(record_json(r));
        write_text_file(opts.output_dir / "records.json", j.dump(2) + "\n");
    }
    {
        ordered_json j = ordered_json::array();
        for (const GroupReport& g : reports) {
            ordered_json gj;
            gj["group"] = g.group;
            gj["models"] = ordered_json::array();
            for (const ModelGroupStats& m : g.models) {
                const GroupSummary& s = m.summary;
                ordered_json mj;
                mj["model_id"] = m.model_id;
                mj["n"] = s.n;
                mj["excluded"] = s.excluded;
                mj["mean"] = {{"iou", s.mean_iou},         {"dice", s.mean_dice},
                              {"msssim", s.mean_msssim},   {"mlcd", s.mean_mlcd},
                              {"ahs", s.mean_ahs},         {"ahs_norm", s.mean_ahs_norm},
                              {"hd95", s.mean_hd95},       {"assd", s.mean_assd}};
                mj["dice_ci_wald"] = ci_json(s.dice_wald);
                mj["dice_ci_clopper_pearson"] = ci_json(s.dice_clopper_pearson);
                mj["cp_success_count"] = s.cp_success_count;
                mj["cp_coerced"] = s.cp_coerced;
                gj["models"].push_back(std::move(mj));
            }
            gj["ranking"] = g.ranking;
            gj["comparisons"] = ordered_json::array();
            for (const PairwiseComparison& c : g.comparisons)
                gj["comparisons"].push_back({{"model_a", c.model_a},
                                             {"model_b", c.model_b},
                                             {"z", c.result.z},
                                             {"p", c.result.p},
                                             {"significant", c.result.significant}});
            if (!g.pooled_iou.empty()) {
                ordered_json pooled;
                for (size_t i = 0; i < g.pooled_iou.size(); ++i)
                    pooled[g.pooled_iou[i].first] = {{"iou", g.pooled_iou[i].second},
                                                     {"dice", g.pooled_dice[i].second}};
                gj["pooled"] = std::move(pooled);
            }
            j.push_back(std::move(gj));
        }
        write_text_file(opts.output_dir / "groups.json", j.dump(2) + "\n");
    }
    write_text_file(opts.output_dir / "groups.txt", render_group_tables(reports));

    {
        const auto wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - t0)
                                 .count();
        ordered_json meta;
        meta["tool_version"] = kVersion;
        meta["config_fingerprint"] = config_fingerprint(config_text);
        meta["threads"] = thread_count;
        meta["wall_ms"] = wall_ms;
        meta["timestamp"] = iso_utc_now();
        write_text_file(opts.output_dir / "run_metadata.json", meta.dump(2) + "\n");
    }

    return {std::move(records), std::move(reports)};
}

namespace {

PredictionSet load_prediction_dir(const std::filesystem::path& dir,
                                  double binarize_threshold) {
    if (!std::filesystem::is_directory(dir))
        throw IoError(dir.string() + ": not a directory");
    PredictionSet set;
    set.model_id = dir.filename().string();
    if (set.model_id.empty()) set.model_id = dir.parent_path().filename().string();

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = entry.path().extension().string();
        if (ext == ".png" || ext == ".pgm") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files)
        set.masks.emplace(f.stem().string(), load_mask(f, binarize_threshold));
    if (set.masks.empty()) throw IoError(dir.string() + ": no .png/.pgm mask files");
    return set;
}

} // namespace

PredictionSet run_ensemble(const EnsembleOptions& opts) {
    if (opts.model_dirs.empty())
        throw ConfigError("ensemble: at least one model directory required");

    std::vector<PredictionSet> sets;
    sets.reserve(opts.model_dirs.size());
    for (const auto& dir : opts.model_dirs)
        sets.push_back(load_prediction_dir(dir, opts.binarize_threshold));

    PredictionSet combined = bitwise_combine(sets, opts.op);

    std::filesystem::create_directories(opts.output_dir);
    for (const auto& [case_id, mask] : combined.masks)
        write_png(mask, opts.output_dir / (case_id + ".png"));

    ordered_json prov;
    prov["op"] = bitwise_op_name(opts.op);
    prov["models"] = ordered_json::array();
    for (const PredictionSet& s : sets) prov["models"].push_back(s.model_id);
    prov["label"] = combined.model_id;
    prov["cases"] = combined.masks.size();
    prov["tool_version"] = kVersion;
    prov["timestamp"] = iso_utc_now();
    write_text_file(opts.output_dir / "provenance.json", prov.dump(2) + "\n");

    return combined;
}

SsimResult run_qualitymap(const QualitymapOptions& opts) {
    EvalConfig cfg = resolve_config(opts.config, nullptr);
    const GrayImage gt = load_gray(opts.gt_path);
    const GrayImage pred = load_gray(opts.pred_path);

    const SsimResult result = msssim(gt, pred, cfg.ssim);

    std::filesystem::create_directories(opts.output_dir);
    ordered_json j;
    j["msssim"] = result.msssim;
    j["scales"] = ordered_json::array();
    for (size_t s = 0; s < result.maps.size(); ++s) {
        const std::string name = "scale_" + std::to_string(s + 1) + ".png";
        quality_map_png(result, static_cast<int>(s + 1), opts.output_dir / name);
        j["scales"].push_back({{"scale", s + 1},
                               {"mean_ssim", result.scale_ssim[s]},
                               {"component", result.scale_values[s]},
                               {"width", result.maps[s].width},
                               {"height", result.maps[s].height},
                               {"file", name}});
    }
    j["structure_clamps"] = result.structure_clamps;
    write_text_file(opts.output_dir / "qualitymap.json", j.dump(2) + "\n");
    return result;
}

CohortManifest run_split(const SplitOptions& opts) {
    std::vector<CaseEntry> cases = read_cases_csv(opts.cases_csv);
    CohortManifest manifest = split_cohort(cases, opts.ratios, opts.seed);

    // Manifest paths are stored relative to the manifest directory.
    const std::filesystem::path base =
        std::filesystem::absolute(opts.output_manifest).parent_path();
    for (CaseEntry& e : manifest.entries) {
        e.gt_path = std::filesystem::relative(std::filesystem::absolute(e.gt_path), base);
        for (auto& [model, p] : e.pred_paths)
            p = std::filesystem::relative(std::filesystem::absolute(p), base);
    }
    write_manifest_csv(manifest, opts.output_manifest);
    return manifest;
}

namespace {

template <typename Fn>
int run_command(Fn&& fn) {
    try {
        fn();
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace

int cmd_evaluate(const EvaluateOptions& opts) {
    return run_command([&] { run_evaluate(opts); });
}

int cmd_ensemble(const EnsembleOptions& opts) {
    return run_command([&] { run_ensemble(opts); });
}

int cmd_qualitymap(const QualitymapOptions& opts) {
    return run_command([&] { run_qualitymap(opts); });
}

int cmd_split(const SplitOptions& opts) {
    return run_command([&] { run_split(opts); });
}

} // namespace segeval
