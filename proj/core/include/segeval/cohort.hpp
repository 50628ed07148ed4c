#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "segeval/error.hpp"

namespace segeval {

/// Age groups by lung developmental stage: P1 = [0, 24) months,
/// P2 = [24 months, 11 years), P3 = [11, 18) years, adult = 18+.
enum class AgeGroup { P1, P2, P3, Adult };

const char* age_group_name(AgeGroup g);
AgeGroup age_group_from_name(const std::string& name);

/// Left-closed/right-open boundaries in months: [0,24) -> P1,
/// [24,132) -> P2, [132,216) -> P3, >= 216 -> adult. Negative age throws.
AgeGroup assign_group(int age_months);

enum class Split { Train, Val, Test };

const char* split_name(Split s);
Split split_from_name(const std::string& name);

/// One case: a GT mask plus optional per-model prediction paths. The
/// patient id is the atomicity unit for splitting.
struct CaseEntry {
    std::string case_id;
    std::string patient_id;
    int age_months = 0;
    std::string dataset;
    std::filesystem::path gt_path;
    std::map<std::string, std::filesystem::path> pred_paths; // model id -> path
};

/// Cohort bookkeeping: every entry carries exactly one split and one group,
/// and no patient id spans splits.
struct CohortManifest {
    std::vector<CaseEntry> entries;
    std::vector<Split> splits;     // parallel to entries
    std::vector<AgeGroup> groups;  // parallel to entries
    std::vector<std::string> model_ids; // column order for CSV round-trips

    void validate() const; // throws InvalidArgument on a broken invariant
};

struct SplitRatios {
    double train = 0.7;
    double val = 0.1;
    double test = 0.2;
};

/// Assign splits at the patient level: patients are shuffled by a seeded
/// Fisher-Yates (mt19937_64, platform-independent), apportioned by largest
/// remainder on patient counts, and every case of a patient lands in one
/// split. Deterministic in (entry order, seed). Ratios must be non-negative
/// and sum to 1; there must be at least as many patients as splits with a
/// positive ratio, and each such split receives at least one patient.
CohortManifest split_cohort(const std::vector<CaseEntry>& cases,
                            const SplitRatios& ratios, std::uint64_t seed);

/// Manifest CSV: header case_id,patient_id,age_months,dataset,split,group,
/// gt_path followed by one column per model id. UTF-8, LF line endings,
/// paths relative to the manifest's directory.
void write_manifest_csv(const CohortManifest& manifest,
                        const std::filesystem::path& path);
CohortManifest read_manifest_csv(const std::filesystem::path& path);

/// Cases CSV (the split command's input): the manifest schema without the
/// split and group columns. Malformed rows are reported with line numbers.
std::vector<CaseEntry> read_cases_csv(const std::filesystem::path& path,
                                      std::vector<std::string>* model_ids = nullptr);

} // namespace segeval
