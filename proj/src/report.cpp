#include "fuzzysweep/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace fuzzysweep {

using nlohmann::json;

json json_number(std::optional<double> value) {
  if (!value || !std::isfinite(*value)) return nullptr;
  return *value;
}

json config_to_json(const AlgorithmConfig& cfg) {
  json out = {
      {"m", cfg.base.m},
      {"tol", cfg.base.tol},
      {"max_iter", cfg.base.max_iter},
  };
  if (cfg.algorithm == Algorithm::Gk || cfg.algorithm == Algorithm::FoaGk) {
    out["cov_reg"] = cfg.cov_regularization;
    out["rho"] = cfg.rho;
  }
  if (cfg.algorithm == Algorithm::FoaFcm || cfg.algorithm == Algorithm::FoaGk) {
    const auto& f = cfg.foa;
    out["foa"] = {{"epochs", f.epochs},       {"area_limit", f.area_limit},
                  {"life_time", f.life_time}, {"lsc", f.lsc},
                  {"gsc", f.gsc},             {"transfer_rate", f.transfer_rate},
                  {"local_step", f.local_step}};
  }
  return out;
}

json to_json(const IndexValue& value) {
  return {{"index", to_string(value.name)},
          {"value", json_number(value.value)},
          {"direction", to_string(value.direction)}};
}

json to_json(const CviReport& report) {
  json config = config_to_json(report.config.run);
  config["k_min"] = report.config.k_min;
  config["k_max"] = report.config.k_max;
  config["restarts"] = report.config.restarts;
  config["true_k"] = report.true_k ? json(*report.true_k) : json(nullptr);

  json per_k = json::array();
  for (const auto& e : report.per_k) {
    json indexes = json::array();
    for (const auto& v : e.indexes) indexes.push_back(to_json(v));
    json entry = {{"k", e.k},
                  {"objective", json_number(e.objective)},
                  {"indexes", indexes},
                  {"timing_ms", e.timing_ms}};
    if (!e.error.empty()) entry["error"] = e.error;
    per_k.push_back(std::move(entry));
  }

  json best_k = json::object();
  json detections = report.true_k ? json::object() : json(nullptr);
  for (std::size_t n = 0; n < kAllIndexes.size(); ++n) {
    const std::string name(to_string(kAllIndexes[n]));
    best_k[name] = report.best_k[n] ? json(*report.best_k[n]) : json(nullptr);
    if (report.true_k) detections[name] = to_string(report.detections[n]);
  }

  return {{"meta",
           {{"algorithm", to_string(report.algorithm)},
            {"dataset", report.dataset},
            {"seed", report.config.run.base.seed},
            {"config", config}}},
          {"per_k", per_k},
          {"best_k", best_k},
          {"detections", detections},
          {"timing_ms", report.timing_ms}};
}

json to_json(const Tally& tally) {
  json per_index = json::object();
  for (const auto& [name, counts] : tally.per_index) {
    per_index[std::string(to_string(name))] = {{"correct", counts.correct},
                                               {"near_correct", counts.near_correct}};
  }
  json per_algorithm = json::object();
  for (const auto& [algo, counts] : tally.per_algorithm) {
    per_algorithm[std::string(to_string(algo))] = {{"correct", counts.correct},
                                                   {"near_correct", counts.near_correct}};
  }
  return {{"per_index", per_index}, {"per_algorithm", per_algorithm}};
}

namespace {

std::string cell(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return "undefined";
  std::ostringstream s;
  s << std::setprecision(6) << *v;
  return s.str();
}

std::string cell(std::optional<int> v) { return v ? std::to_string(*v) : "-"; }

}  // namespace

std::string render_table(const CviReport& report) {
  std::ostringstream out;
  out << "algorithm: " << to_string(report.algorithm) << "  dataset: " << report.dataset
      << "  seed: " << report.config.run.base.seed << "\n\n";

  out << std::left << std::setw(4) << "k" << std::setw(14) << "J";
  for (IndexName n : kAllIndexes) {
    out << std::setw(14) << (std::string(to_string(n)) + " (" +
                             std::string(to_string(direction_of(n))) + ")");
  }
  out << "\n";
  for (const auto& e : report.per_k) {
    out << std::setw(4) << e.k << std::setw(14) << cell(e.objective);
    for (const auto& v : e.indexes) out << std::setw(14) << cell(v.value);
    out << "\n";
  }

  out << "\n" << std::setw(8) << "index" << std::setw(8) << "best k";
  if (report.true_k) out << "detection (true k = " << *report.true_k << ")";
  out << "\n";
  for (std::size_t n = 0; n < kAllIndexes.size(); ++n) {
    out << std::setw(8) << to_string(kAllIndexes[n]) << std::setw(8) << cell(report.best_k[n]);
    if (report.true_k) out << to_string(report.detections[n]);
    out << "\n";
  }
  return out.str();
}

std::string render_table(const Tally& tally) {
  std::ostringstream out;
  out << std::left << std::setw(12) << "algorithm" << std::setw(10) << "correct"
      << "near-correct\n";
  for (const auto& [algo, counts] : tally.per_algorithm) {
    out << std::setw(12) << to_string(algo) << std::setw(10) << counts.correct
        << counts.near_correct << "\n";
  }
  out << "\n" << std::setw(12) << "index" << std::setw(10) << "correct" << "near-correct\n";
  for (const auto& [name, counts] : tally.per_index) {
    out << std::setw(12) << to_string(name) << std::setw(10) << counts.correct
        << counts.near_correct << "\n";
  }
  return out.str();
}

void emit_text(const std::string& text, const std::optional<std::filesystem::path>& path,
               std::ostream& stdout_stream) {
  if (!path) {
    stdout_stream << text;
    return;
  }
  std::ofstream file(*path, std::ios::binary);
  if (!file) throw Error("cannot write '" + path->string() + "'");
  file << text;
  if (!file.flush()) throw Error("failed writing '" + path->string() + "'");
}

std::string format_sweep(std::span<const CviReport> reports, Format format) {
  const bool with_truth = !reports.empty() && reports.front().true_k.has_value();
  if (format == Format::Json) {
    json doc;
    if (reports.size() == 1) {
      doc = to_json(reports.front());
    } else {
      doc["reports"] = json::array();
      for (const auto& r : reports) doc["reports"].push_back(to_json(r));
    }
    if (with_truth) doc["tally"] = to_json(tally(reports));
    return doc.dump(2) + "\n";
  }
  std::string text;
  for (const auto& r : reports) text += render_table(r) + "\n";
  if (with_truth) text += render_table(tally(reports));
  return text;
}

}  // namespace fuzzysweep
