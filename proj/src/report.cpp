#include "esmg/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace esmg {

using json = nlohmann::json;

namespace {

json provenance_json(const Provenance& p) {
  return {{"model_id", p.model_id},
          {"model_version", p.model_version},
          {"description", p.description},
          {"code_url", p.code_url},
          {"training_data_description", p.training_data_description},
          {"content_hash", p.content_hash}};
}

Provenance provenance_from_json(const json& j) {
  Provenance p;
  p.model_id = j.value("model_id", "");
  p.model_version = j.value("model_version", "");
  p.description = j.value("description", "");
  p.code_url = j.value("code_url", "");
  p.training_data_description = j.value("training_data_description", "");
  p.content_hash = j.value("content_hash", "");
  return p;
}

json value_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) {
    require(!std::isnan(x), errc::invalid_argument, "NaN metric values cannot be serialized");
    a.push_back(x);
  }
  return a;
}

json check_json(const CheckResult& c) {
  json off = json::array();
  for (const auto& o : c.worst_offenders) {
    off.push_back({{"time", o.time},
                   {"level", o.level},
                   {"lat", o.lat},
                   {"lon", o.lon},
                   {"value", o.value}});
  }
  return {{"check_id", c.check_id}, {"passed", c.passed},   {"statistic", c.statistic},
          {"threshold", c.threshold}, {"notes", c.notes},   {"worst_offenders", off}};
}

CheckResult check_from_json(const json& j) {
  CheckResult c;
  c.check_id = j.at("check_id").get<std::string>();
  c.passed = j.at("passed").get<bool>();
  c.statistic = j.at("statistic").get<double>();
  c.threshold = j.at("threshold").get<double>();
  c.notes = j.value("notes", "");
  for (const auto& o : j.at("worst_offenders")) {
    c.worst_offenders.push_back({o.at("time").get<Eigen::Index>(),
                                 o.at("level").get<Eigen::Index>(),
                                 o.at("lat").get<Eigen::Index>(),
                                 o.at("lon").get<Eigen::Index>(), o.at("value").get<double>()});
  }
  return c;
}

std::string entry_key(const MetricRecord& r) {
  return r.variable + "|" + r.season + "|" + r.region;
}

}  // namespace

ReportFormat report_format_from_name(const std::string& name) {
  if (name == "json") return ReportFormat::json;
  if (name == "csv") return ReportFormat::csv;
  if (name == "markdown" || name == "md") return ReportFormat::markdown;
  raise(errc::config_error, "unknown report format '" + name + "'");
}

IntercomparisonReport collate(const std::vector<ModelRun>& runs, RunManifest manifest) {
  IntercomparisonReport rep;

  // Canonical order regardless of input order: sort by model then key.
  std::map<std::string, std::map<std::string, CheckResult>> checks;   // model -> id -> result
  std::map<std::string, std::map<std::string, MetricRecord>> metrics; // model -> key -> record
  for (const auto& run : runs) {
    require(!run.model_id.empty(), errc::collation_error, "run with empty model_id");
    manifest.models.emplace(run.model_id, run.provenance);
    for (const auto& c : run.checks) {
      auto [it, inserted] = checks[run.model_id].emplace(c.check_id, c);
      if (!inserted) {
        require(it->second.passed == c.passed && it->second.statistic == c.statistic,
                errc::collation_error,
                "conflicting duplicate check '" + c.check_id + "' for model " + run.model_id);
      }
    }
    for (const auto& m : run.metrics) {
      require(m.model_id.empty() || m.model_id == run.model_id, errc::collation_error,
              "metric record model_id disagrees with its run");
      MetricRecord rec = m;
      rec.model_id = run.model_id;
      auto [it, inserted] = metrics[run.model_id].emplace(rec.key(), rec);
      if (!inserted) {
        require(it->second.value == rec.value, errc::collation_error,
                "conflicting duplicate metric '" + rec.key() + "' for model " + run.model_id);
      }
    }
  }

  for (const auto& [model, by_id] : checks) {
    for (const auto& [id, result] : by_id) rep.checks.push_back({model, result});
  }
  for (const auto& [model, by_key] : metrics) {
    for (const auto& [key, rec] : by_key) rep.metrics.push_back(rec);
  }

  // Portrait over scalar "rmse" records present for >= 2 models.
  std::set<std::string> entry_set;
  std::vector<std::string> models;
  for (const auto& [model, by_key] : metrics) models.push_back(model);
  for (const auto& rec : rep.metrics) {
    if (rec.metric_id != "rmse" || rec.value.size() != 1) continue;
    int present = 0;
    for (const auto& model : models) {
      auto it = metrics[model].find(rec.key());
      if (it != metrics[model].end()) ++present;
    }
    if (present >= 2) entry_set.insert(entry_key(rec));
  }
  if (!entry_set.empty() && models.size() >= 2) {
    Portrait p;
    p.models = models;
    p.entries.assign(entry_set.begin(), entry_set.end());
    const auto nan = std::numeric_limits<double>::quiet_NaN();
    Eigen::MatrixXd raw(models.size(), p.entries.size());
    raw.setConstant(nan);
    for (size_t m = 0; m < models.size(); ++m) {
      for (size_t e = 0; e < p.entries.size(); ++e) {
        const std::string key = p.entries[e] + "|rmse";
        auto it = metrics[models[m]].find(key);
        if (it != metrics[models[m]].end()) raw(Eigen::Index(m), Eigen::Index(e)) = it->second.value[0];
      }
    }
    const Eigen::MatrixXd norm = portrait_normalize(raw);
    p.values.assign(models.size(), std::vector<double>(p.entries.size(), nan));
    for (size_t m = 0; m < models.size(); ++m) {
      for (size_t e = 0; e < p.entries.size(); ++e) {
        p.values[m][e] = norm(Eigen::Index(m), Eigen::Index(e));
      }
    }
    rep.portrait = std::move(p);
  }

  rep.manifest = std::move(manifest);
  return rep;
}

PairwiseDelta pairwise_delta(const IntercomparisonReport& report, const std::string& model_a,
                             const std::string& model_b) {
  bool seen_a = report.manifest.models.count(model_a) > 0;
  bool seen_b = report.manifest.models.count(model_b) > 0;
  for (const auto& m : report.metrics) {
    seen_a = seen_a || m.model_id == model_a;
    seen_b = seen_b || m.model_id == model_b;
  }
  require(seen_a, errc::invalid_argument, "unknown model '" + model_a + "'");
  require(seen_b, errc::invalid_argument, "unknown model '" + model_b + "'");

  PairwiseDelta out;
  out.model_a = model_a;
  out.model_b = model_b;

  std::map<std::string, const MetricRecord*> a_by_key, b_by_key;
  for (const auto& m : report.metrics) {
    if (m.model_id == model_a) a_by_key[m.key()] = &m;
    if (m.model_id == model_b) b_by_key[m.key()] = &m;
  }
  for (const auto& [key, ra] : a_by_key) {
    auto itb = b_by_key.find(key);
    if (itb == b_by_key.end()) continue;
    const MetricRecord* rb = itb->second;
    if (ra->value.size() != rb->value.size()) continue;
    MetricDelta d;
    d.variable = ra->variable;
    d.season = ra->season;
    d.region = ra->region;
    d.metric_id = ra->metric_id;
    d.units = ra->units;
    d.delta.resize(ra->value.size());
    for (size_t i = 0; i < d.delta.size(); ++i) d.delta[i] = ra->value[i] - rb->value[i];
    out.metric_deltas.push_back(std::move(d));
  }

  std::map<std::string, const CheckResult*> ca, cb;
  for (const auto& c : report.checks) {
    if (c.model_id == model_a) ca[c.result.check_id] = &c.result;
    if (c.model_id == model_b) cb[c.result.check_id] = &c.result;
  }
  for (const auto& [id, ra] : ca) {
    auto itb = cb.find(id);
    if (itb == cb.end()) continue;
    out.check_pairs.push_back({id, ra->passed, itb->second->passed});
  }
  return out;
}

namespace {

json report_json(const IntercomparisonReport& r) {
  json models;
  for (const auto& [id, prov] : r.manifest.models) models[id] = provenance_json(prov);
  json manifest = {{"run_id", r.manifest.run_id},
                   {"timestamp", r.manifest.timestamp},
                   {"suite_version", r.manifest.suite_version},
                   {"models", std::move(models)},
                   {"config", r.manifest.config}};

  json checks = json::array();
  for (const auto& c : r.checks) {
    json jc = check_json(c.result);
    jc["model_id"] = c.model_id;
    checks.push_back(std::move(jc));
  }

  json metrics = json::array();
  for (const auto& m : r.metrics) {
    metrics.push_back({{"model_id", m.model_id},
                       {"variable", m.variable},
                       {"season", m.season},
                       {"region", m.region},
                       {"metric_id", m.metric_id},
                       {"units", m.units},
                       {"value", value_json(m.value)}});
  }

  json portrait;
  if (r.portrait) {
    json rows = json::array();
    for (const auto& row : r.portrait->values) {
      json jr = json::array();
      for (double v : row) {
        if (std::isnan(v)) jr.push_back(nullptr);
        else jr.push_back(v);
      }
      rows.push_back(std::move(jr));
    }
    portrait = {{"models", r.portrait->models},
                {"entries", r.portrait->entries},
                {"values", std::move(rows)}};
  } else {
    portrait = nullptr;
  }

  json pairwise = json::array();
  for (const auto& p : r.pairwise) {
    json deltas = json::array();
    for (const auto& d : p.metric_deltas) {
      deltas.push_back({{"variable", d.variable},
                        {"season", d.season},
                        {"region", d.region},
                        {"metric_id", d.metric_id},
                        {"units", d.units},
                        {"delta", value_json(d.delta)}});
    }
    json checks_j = json::array();
    for (const auto& c : p.check_pairs) {
      checks_j.push_back(
          {{"check_id", c.check_id}, {"passed_a", c.passed_a}, {"passed_b", c.passed_b}});
    }
    pairwise.push_back({{"model_a", p.model_a},
                        {"model_b", p.model_b},
                        {"metric_deltas", std::move(deltas)},
                        {"check_pairs", std::move(checks_j)}});
  }

  return {{"report_version", kReportVersion},
          {"manifest", std::move(manifest)},
          {"checks", std::move(checks)},
          {"metrics", std::move(metrics)},
          {"portrait", std::move(portrait)},
          {"pairwise", std::move(pairwise)}};
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::string format_double(double v) {
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

std::string report_csv(const IntercomparisonReport& r) {
  std::ostringstream out;
  out << "model_id,variable,season,region,metric_id,units,value\n";
  for (const auto& m : r.metrics) {
    std::string val;
    for (size_t i = 0; i < m.value.size(); ++i) {
      if (i) val += ";";
      val += format_double(m.value[i]);
    }
    out << csv_escape(m.model_id) << ',' << csv_escape(m.variable) << ',' << csv_escape(m.season)
        << ',' << csv_escape(m.region) << ',' << csv_escape(m.metric_id) << ','
        << csv_escape(m.units) << ',' << csv_escape(val) << '\n';
  }
  return out.str();
}

std::string report_markdown(const IntercomparisonReport& r) {
  std::ostringstream out;
  out << "# Intercomparison report\n\n";
  out << "- run id: `" << r.manifest.run_id << "`\n";
  out << "- timestamp: " << r.manifest.timestamp << "\n";
  out << "- suite: " << r.manifest.suite_version << "\n\n";

  if (!r.checks.empty()) {
    out << "## Checks\n\n";
    out << "| model | check | verdict | statistic | threshold |\n";
    out << "|---|---|---|---|---|\n";
    for (const auto& c : r.checks) {
      out << "| " << c.model_id << " | " << c.result.check_id << " | "
          << (c.result.passed ? "pass" : "FAIL") << " | " << format_double(c.result.statistic)
          << " | " << format_double(c.result.threshold) << " |\n";
    }
    out << "\n";
  }

  if (r.portrait) {
    out << "## Portrait (median-normalized RMSE)\n\n";
    out << "| model |";
    for (const auto& e : r.portrait->entries) out << " " << e << " |";
    out << "\n|---|";
    for (size_t e = 0; e < r.portrait->entries.size(); ++e) out << "---|";
    out << "\n";
    for (size_t m = 0; m < r.portrait->models.size(); ++m) {
      out << "| " << r.portrait->models[m] << " |";
      for (double v : r.portrait->values[m]) {
        if (std::isnan(v)) {
          out << " - |";
        } else {
          std::ostringstream cell;
          cell << std::showpos << std::fixed << std::setprecision(3) << v;
          out << " " << cell.str() << " |";
        }
      }
      out << "\n";
    }
    out << "\n";
  }

  if (!r.metrics.empty()) {
    out << "## Metrics\n\n";
    out << "| model | variable | season | region | metric | value |\n";
    out << "|---|---|---|---|---|---|\n";
    for (const auto& m : r.metrics) {
      out << "| " << m.model_id << " | " << m.variable << " | " << m.season << " | " << m.region
          << " | " << m.metric_id << " | ";
      if (m.value.size() == 1) out << format_double(m.value[0]);
      else out << "(" << m.value.size() << " values)";
      out << " |\n";
    }
    out << "\n";
  }

  if (!r.pairwise.empty()) {
    out << "## Pairwise deltas\n\n";
    for (const auto& p : r.pairwise) {
      out << "### " << p.model_a << " - " << p.model_b << "\n\n";
      out << "| metric key | delta |\n|---|---|\n";
      for (const auto& d : p.metric_deltas) {
        out << "| " << d.variable << "|" << d.season << "|" << d.region << "|" << d.metric_id
            << " | ";
        if (d.delta.size() == 1) out << format_double(d.delta[0]);
        else out << "(" << d.delta.size() << " values)";
        out << " |\n";
      }
      for (const auto& c : p.check_pairs) {
        out << "| check:" << c.check_id << " | " << (c.passed_a ? "pass" : "FAIL") << " vs "
            << (c.passed_b ? "pass" : "FAIL") << " |\n";
      }
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace

std::string emit_string(const IntercomparisonReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::json: return report_json(report).dump();
    case ReportFormat::csv: return report_csv(report);
    case ReportFormat::markdown: return report_markdown(report);
  }
  raise(errc::invalid_argument, "unknown report format");
}

size_t emit(const IntercomparisonReport& report, ReportFormat format, std::ostream& out) {
  const std::string s = emit_string(report, format);
  out.write(s.data(), std::streamsize(s.size()));
  require(bool(out), errc::io_error, "failed to write report");
  return s.size();
}

IntercomparisonReport parse_report(const std::string& json_text) {
  json j = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  require(!j.is_discarded() && j.is_object(), errc::format_error, "report is not valid JSON");
  require(j.value("report_version", -1) == kReportVersion, errc::format_error,
          "unsupported report_version");

  IntercomparisonReport r;
  try {
    const json& man = j.at("manifest");
    r.manifest.run_id = man.value("run_id", "");
    r.manifest.timestamp = man.value("timestamp", "");
    r.manifest.suite_version = man.value("suite_version", "");
    for (auto& [id, pj] : man.at("models").items()) {
      r.manifest.models[id] = provenance_from_json(pj);
    }
    for (auto& [k, v] : man.at("config").items()) {
      r.manifest.config[k] = v.get<std::string>();
    }

    for (const auto& cj : j.at("checks")) {
      r.checks.push_back({cj.at("model_id").get<std::string>(), check_from_json(cj)});
    }
    for (const auto& mj : j.at("metrics")) {
      MetricRecord m;
      m.model_id = mj.at("model_id").get<std::string>();
      m.variable = mj.at("variable").get<std::string>();
      m.season = mj.at("season").get<std::string>();
      m.region = mj.at("region").get<std::string>();
      m.metric_id = mj.at("metric_id").get<std::string>();
      m.units = mj.value("units", "");
      m.value = mj.at("value").get<std::vector<double>>();
      r.metrics.push_back(std::move(m));
    }
    if (!j.at("portrait").is_null()) {
      Portrait p;
      const json& pj = j.at("portrait");
      p.models = pj.at("models").get<std::vector<std::string>>();
      p.entries = pj.at("entries").get<std::vector<std::string>>();
      for (const auto& row : pj.at("values")) {
        std::vector<double> vr;
        for (const auto& v : row) {
          vr.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
        }
        p.values.push_back(std::move(vr));
      }
      r.portrait = std::move(p);
    }
    for (const auto& pj : j.at("pairwise")) {
      PairwiseDelta p;
      p.model_a = pj.at("model_a").get<std::string>();
      p.model_b = pj.at("model_b").get<std::string>();
      for (const auto& dj : pj.at("metric_deltas")) {
        MetricDelta d;
        d.variable = dj.at("variable").get<std::string>();
        d.season = dj.at("season").get<std::string>();
        d.region = dj.at("region").get<std::string>();
        d.metric_id = dj.at("metric_id").get<std::string>();
        d.units = dj.value("units", "");
        d.delta = dj.at("delta").get<std::vector<double>>();
        p.metric_deltas.push_back(std::move(d));
      }
      for (const auto& cj : pj.at("check_pairs")) {
        p.check_pairs.push_back({cj.at("check_id").get<std::string>(),
                                 cj.at("passed_a").get<bool>(), cj.at("passed_b").get<bool>()});
      }
      r.pairwise.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    raise(errc::format_error, std::string("malformed report: ") + e.what());
  }
  return r;
}

IntercomparisonReport load_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(bool(in), errc::io_error, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_report(ss.str());
}

std::vector<ModelRun> runs_from_report(const IntercomparisonReport& report) {
  std::map<std::string, ModelRun> runs;
  auto ensure = [&](const std::string& id) -> ModelRun& {
    auto& r = runs[id];
    if (r.model_id.empty()) {
      r.model_id = id;
      auto it = report.manifest.models.find(id);
      if (it != report.manifest.models.end()) r.provenance = it->second;
    }
    return r;
  };
  for (const auto& [id, prov] : report.manifest.models) ensure(id);
  for (const auto& c : report.checks) ensure(c.model_id).checks.push_back(c.result);
  for (const auto& m : report.metrics) ensure(m.model_id).metrics.push_back(m);

  std::vector<ModelRun> out;
  for (auto& [id, run] : runs) out.push_back(std::move(run));
  return out;
}

}  // namespace esmg
