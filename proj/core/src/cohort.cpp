#include "segeval/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <unordered_map>

#include "segeval/csv.hpp"

namespace segeval {

const char* age_group_name(AgeGroup g) {
    switch (g) {
        case AgeGroup::P1: return "P1";
        case AgeGroup::P2: return "P2";
        case AgeGroup::P3: return "P3";
        case AgeGroup::Adult: return "adult";
    }
    return "?";
}

AgeGroup age_group_from_name(const std::string& name) {
    if (name == "P1") return AgeGroup::P1;
    if (name == "P2") return AgeGroup::P2;
    if (name == "P3") return AgeGroup::P3;
    if (name == "adult") return AgeGroup::Adult;
    throw InvalidArgument("unknown age group '" + name + "'");
}

AgeGroup assign_group(int age_months) {
    if (age_months < 0) throw InvalidArgument("assign_group: negative age");
    if (age_months < 24) return AgeGroup::P1;   // [0, 24) months
    if (age_months < 132) return AgeGroup::P2;  // [24 months, 11 years)
    if (age_months < 216) return AgeGroup::P3;  // [11, 18) years
    return AgeGroup::Adult;
}

const char* split_name(Split s) {
    switch (s) {
        case Split::Train: return "train";
        case Split::Val: return "val";
        case Split::Test: return "test";
    }
    return "?";
}

Split split_from_name(const std::string& name) {
    if (name == "train") return Split::Train;
    if (name == "val") return Split::Val;
    if (name == "test") return Split::Test;
    throw InvalidArgument("unknown split '" + name + "'");
}

void CohortManifest::validate() const {
    if (splits.size() != entries.size() || groups.size() != entries.size())
        throw InvalidArgument("CohortManifest: parallel arrays out of sync");
    std::unordered_map<std::string, Split> patient_split;
    for (size_t i = 0; i < entries.size(); ++i) {
        const auto& [it, inserted] =
            patient_split.emplace(entries[i].patient_id, splits[i]);
        if (!inserted && it->second != splits[i])
            throw InvalidArgument("CohortManifest: patient '" + entries[i].patient_id +
                                  "' appears in more than one split");
    }
}

CohortManifest split_cohort(const std::vector<CaseEntry>& cases,
                            const SplitRatios& ratios, std::uint64_t seed) {
    const double sum = ratios.train + ratios.val + ratios.test;
    if (ratios.train < 0 || ratios.val < 0 || ratios.test < 0 ||
        std::abs(sum - 1.0) > 1e-9)
        throw InvalidArgument("split_cohort: ratios must be non-negative and sum to 1");
    if (cases.empty()) throw InvalidArgument("split_cohort: no cases");

    // Unique patients in first-appearance order.
    std::vector<std::string> patients;
    std::set<std::string> seen;
    for (const CaseEntry& c : cases) {
        if (c.patient_id.empty())
            throw InvalidArgument("split_cohort: empty patient id for case '" +
                                  c.case_id + "'");
        if (seen.insert(c.patient_id).second) patients.push_back(c.patient_id);
    }

    const double ratio_arr[3] = {ratios.train, ratios.val, ratios.test};
    int nonempty = 0;
    for (double r : ratio_arr)
        if (r > 0.0) ++nonempty;
    if (static_cast<int>(patients.size()) < nonempty)
        throw InvalidArgument("split_cohort: fewer patients than non-empty splits");

    // Largest-remainder apportionment on patient counts.
    const auto total = static_cast<std::int64_t>(patients.size());
    std::int64_t counts[3];
    double remainders[3];
    std::int64_t assigned = 0;
    for (int s = 0; s < 3; ++s) {
        const double quota = ratio_arr[s] * static_cast<double>(total);
        counts[s] = static_cast<std::int64_t>(std::floor(quota));
        remainders[s] = quota - static_cast<double>(counts[s]);
        assigned += counts[s];
    }
    while (assigned < total) {
        int best = 0;
        for (int s = 1; s < 3; ++s)
            if (remainders[s] > remainders[best]) best = s;
        ++counts[best];
        remainders[best] = -1.0;
        ++assigned;
    }
    // Every split with a positive ratio gets at least one patient.
    for (int s = 0; s < 3; ++s) {
        while (ratio_arr[s] > 0.0 && counts[s] == 0) {
            int donor = 0;
            for (int t = 1; t < 3; ++t)
                if (counts[t] > counts[donor]) donor = t;
            --counts[donor];
            ++counts[s];
        }
    }

    // Seeded Fisher-Yates; mt19937_64 is fully specified, so the shuffle is
    // reproducible across platforms.
    std::mt19937_64 rng(seed);
    for (size_t i = patients.size(); i > 1; --i) {
        const size_t j = static_cast<size_t>(rng() % i);
        std::swap(patients[i - 1], patients[j]);
    }

    std::unordered_map<std::string, Split> assignment;
    size_t cursor = 0;
    const Split order[3] = {Split::Train, Split::Val, Split::Test};
    for (int s = 0; s < 3; ++s)
        for (std::int64_t i = 0; i < counts[s]; ++i)
            assignment.emplace(patients[cursor++], order[s]);

    CohortManifest manifest;
    manifest.entries = cases;
    manifest.splits.reserve(cases.size());
    manifest.groups.reserve(cases.size());
    std::set<std::string> model_ids;
    for (const CaseEntry& c : cases) {
        manifest.splits.push_back(assignment.at(c.patient_id));
        manifest.groups.push_back(assign_group(c.age_months));
        for (const auto& [model, path] : c.pred_paths) model_ids.insert(model);
    }
    manifest.model_ids.assign(model_ids.begin(), model_ids.end());
    manifest.validate();
    return manifest;
}

namespace {

const char* kFixedColumns[] = {"case_id", "patient_id", "age_months",
                               "dataset", "split", "group", "gt_path"};
constexpr int kFixedCount = 7;

} // namespace

void write_manifest_csv(const CohortManifest& manifest,
                        const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary); // LF endings on every platform
    if (!out) throw IoError(path.string() + ": cannot open for writing");

    std::vector<std::string> header(kFixedColumns, kFixedColumns + kFixedCount);
    header.insert(header.end(), manifest.model_ids.begin(), manifest.model_ids.end());
    out << csv_join(header) << "\n";

    for (size_t i = 0; i < manifest.entries.size(); ++i) {
        const CaseEntry& e = manifest.entries[i];
        std::vector<std::string> row = {
            e.case_id,
            e.patient_id,
            std::to_string(e.age_months),
            e.dataset,
            split_name(manifest.splits[i]),
            age_group_name(manifest.groups[i]),
            e.gt_path.generic_string(),
        };
        for (const std::string& model : manifest.model_ids) {
            auto it = e.pred_paths.find(model);
            row.push_back(it == e.pred_paths.end() ? std::string{}
                                                   : it->second.generic_string());
        }
        out << csv_join(row) << "\n";
    }
    if (!out) throw IoError(path.string() + ": write failed");
}

namespace {

CaseEntry parse_case_row(const std::vector<std::string>& fields,
                         const std::vector<std::string>& model_ids, int fixed,
                         const std::filesystem::path& base, size_t line_no,
                         const std::filesystem::path& file) {
    auto bad = [&](const std::string& why) {
        throw ConfigError(file.string() + ":" + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() != static_cast<size_t>(fixed) + model_ids.size())
        bad("expected " + std::to_string(fixed + model_ids.size()) + " fields, got " +
            std::to_string(fields.size()));

    CaseEntry e;
    e.case_id = fields[0];
    e.patient_id = fields[1];
    try {
        e.age_months = std::stoi(fields[2]);
    } catch (const std::exception&) {
        bad("age_months is not an integer: '" + fields[2] + "'");
    }
    if (e.age_months < 0) bad("negative age_months");
    if (e.case_id.empty()) bad("empty case_id");
    if (e.patient_id.empty()) bad("empty patient_id");
    e.dataset = fields[3];

    const int gt_index = fixed - 1;
    if (fields[static_cast<size_t>(gt_index)].empty()) bad("empty gt_path");
    e.gt_path = base / fields[static_cast<size_t>(gt_index)];
    for (size_t m = 0; m < model_ids.size(); ++m) {
        const std::string& p = fields[static_cast<size_t>(fixed) + m];
        if (!p.empty()) e.pred_paths[model_ids[m]] = base / p;
    }
    return e;
}

} // namespace

CohortManifest read_manifest_csv(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) throw ConfigError(path.string() + ": empty manifest");
    const std::vector<std::string> header = csv_split(lines[0]);
    if (header.size() < kFixedCount)
        throw ConfigError(path.string() + ": manifest header too short");
    for (int i = 0; i < kFixedCount; ++i)
        if (header[static_cast<size_t>(i)] != kFixedColumns[i])
            throw ConfigError(path.string() + ": expected column '" +
                              kFixedColumns[i] + "', got '" + header[static_cast<size_t>(i)] + "'");

    CohortManifest manifest;
    manifest.model_ids.assign(header.begin() + kFixedCount, header.end());
    const std::filesystem::path base = path.parent_path();

    for (size_t i = 1; i < lines.size(); ++i) {
        const std::vector<std::string> fields = csv_split(lines[i]);
        if (fields.size() != kFixedCount + manifest.model_ids.size())
            throw ConfigError(path.string() + ":" + std::to_string(i + 1) +
                              ": wrong field count");
        // Drop the split/group columns (positions 4 and 5) to reuse the
        // cases-row parser, then read them separately.
        std::vector<std::string> case_fields(fields.begin(), fields.begin() + 4);
        case_fields.insert(case_fields.end(), fields.begin() + 6, fields.end());
        CaseEntry e = parse_case_row(case_fields, manifest.model_ids, 5, base, i + 1, path);
        manifest.entries.push_back(std::move(e));
        try {
            manifest.splits.push_back(split_from_name(fields[4]));
            manifest.groups.push_back(age_group_from_name(fields[5]));
        } catch (const InvalidArgument& ex) {
            throw ConfigError(path.string() + ":" + std::to_string(i + 1) + ": " + ex.what());
        }
    }
    manifest.validate();
    return manifest;
}

std::vector<CaseEntry> read_cases_csv(const std::filesystem::path& path,
                                      std::vector<std::string>* model_ids_out) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) throw ConfigError(path.string() + ": empty cases file");
    const std::vector<std::string> header = csv_split(lines[0]);
    const std::vector<std::string> expected = {"case_id", "patient_id", "age_months",
                                               "dataset", "gt_path"};
    if (header.size() < expected.size())
        throw ConfigError(path.string() + ": cases header too short");
    for (size_t i = 0; i < expected.size(); ++i)
        if (header[i] != expected[i])
            throw ConfigError(path.string() + ": expected column '" + expected[i] +
                              "', got '" + header[i] + "'");

    std::vector<std::string> model_ids(header.begin() + expected.size(), header.end());
    const std::filesystem::path base = path.parent_path();

    std::vector<CaseEntry> cases;
    for (size_t i = 1; i < lines.size(); ++i)
        cases.push_back(parse_case_row(csv_split(lines[i]), model_ids,
                                       static_cast<int>(expected.size()), base, i + 1, path));
    if (model_ids_out) *model_ids_out = std::move(model_ids);
    return cases;
}

} // namespace segeval
