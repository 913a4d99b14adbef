#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "esmg/dataset.hpp"
#include "esmg/metrics.hpp"
#include "esmg/sanity.hpp"

namespace esmg {

inline constexpr const char* kSuiteVersion = "esmgauntlet/1.0.0";
inline constexpr int kReportVersion = 1;

/// Everything needed to rerun byte-for-byte: identifiers, per-model
/// provenance and the full configuration in effect.
struct RunManifest {
  std::string run_id;
  std::string timestamp;
  std::string suite_version = kSuiteVersion;
  std::map<std::string, Provenance> models;
  std::map<std::string, std::string> config;
};

/// Evaluation output for one model, the unit collation merges.
struct ModelRun {
  std::string model_id;
  Provenance provenance;
  std::vector<CheckResult> checks;
  std::vector<MetricRecord> metrics;
};

struct CheckEntry {
  std::string model_id;
  CheckResult result;
};

struct Portrait {
  std::vector<std::string> models;   // rows
  std::vector<std::string> entries;  // columns, "variable|season|region"
  // values[m][e]; NaN marks absent cells (serialized as null).
  std::vector<std::vector<double>> values;
};

struct MetricDelta {
  std::string variable, season, region, metric_id, units;
  std::vector<double> delta;  // a - b, elementwise
};

struct CheckPair {
  std::string check_id;
  bool passed_a = false;
  bool passed_b = false;
};

struct PairwiseDelta {
  std::string model_a, model_b;
  std::vector<MetricDelta> metric_deltas;
  std::vector<CheckPair> check_pairs;
};

/// The full intercomparison product. By design there is no aggregate score
/// field anywhere in this structure or its serialization.
struct IntercomparisonReport {
  RunManifest manifest;
  std::vector<CheckEntry> checks;     // sorted by (model_id, check_id)
  std::vector<MetricRecord> metrics;  // sorted by (model_id, key)
  std::optional<Portrait> portrait;
  std::vector<PairwiseDelta> pairwise;
};

/// Joins per-model results on (variable, season, region, metric_id).
/// Identical duplicates collapse; conflicting duplicates raise a collation
/// error naming the key. Builds the portrait from "rmse" records shared by
/// at least two models. Missing cells stay absent.
IntercomparisonReport collate(const std::vector<ModelRun>& runs, RunManifest manifest);

/// Per-metric differences a - b over shared keys; checks paired as
/// (passed_a, passed_b).
PairwiseDelta pairwise_delta(const IntercomparisonReport& report, const std::string& model_a,
                             const std::string& model_b);

enum class ReportFormat { json, csv, markdown };
ReportFormat report_format_from_name(const std::string& name);

/// JSON is the normative schema (report_version 1) and is byte-deterministic
/// for a fixed report. Returns bytes written.
size_t emit(const IntercomparisonReport& report, ReportFormat format, std::ostream& out);
std::string emit_string(const IntercomparisonReport& report, ReportFormat format);

/// Inverse of the JSON emission.
IntercomparisonReport parse_report(const std::string& json_text);
IntercomparisonReport load_report(const std::string& path);

/// Splits a (possibly multi-model) report back into per-model runs so
/// reports can be re-collated.
std::vector<ModelRun> runs_from_report(const IntercomparisonReport& report);

}  // namespace esmg
