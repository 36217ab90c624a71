#pragma once

// JSON and CSV serialization of experiment reports.

#include <cstdio>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "acq/experiments.hpp"

#ifndef ACQ_GIT_DESCRIBE
#define ACQ_GIT_DESCRIBE "unknown"
#endif

namespace acq::experiments {

enum class Format { Json, Csv };

inline Format parse_format(std::string_view name) {
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  throw Error(ErrorCode::UnsupportedFormat, "unknown format '" + std::string(name) + "'");
}

constexpr std::string_view kCsvHeader = "model,n,replicates,mean_ratio,stderr,min,max,seed,seconds";

inline std::string git_describe() { return ACQ_GIT_DESCRIBE; }

inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline nlohmann::ordered_json model_json(const Model& m) {
  nlohmann::ordered_json j;
  switch (m.kind) {
    case ModelKind::Poisson:
      j["kind"] = "poisson";
      j["lambda"] = 1;
      break;
    case ModelKind::Multinomial:
      j["kind"] = "multinomial";
      j["chips"] = m.chips;
      break;
    case ModelKind::PoissonMultinomial:
      j["kind"] = "poisson-multinomial";
      j["lambda"] = 1;
      break;
    case ModelKind::UniformChips:
      j["kind"] = "uniform";
      j["t"] = m.chips;
      break;
  }
  return j;
}

inline Model model_from_json(const nlohmann::json& j) {
  std::string kind = j.at("kind");
  if (kind == "poisson") return {ModelKind::Poisson, 0};
  if (kind == "multinomial") return {ModelKind::Multinomial, j.at("chips").get<std::uint64_t>()};
  if (kind == "poisson-multinomial") return {ModelKind::PoissonMultinomial, 0};
  if (kind == "uniform") return {ModelKind::UniformChips, j.at("t").get<std::uint64_t>()};
  throw Error(ErrorCode::ParseError, "unknown model kind '" + kind + "'");
}

inline nlohmann::ordered_json to_json(const ExperimentReport& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = ExperimentReport::kSchemaVersion;
  j["model"] = model_json(r.model);
  j["n"] = r.n;
  j["replicates"] = r.replicates;
  j["mean_ratio"] = r.mean_ratio;
  j["stderr"] = r.std_error;
  j["min_ratio"] = r.min_ratio;
  j["max_ratio"] = r.max_ratio;
  j["seed"] = r.seed;
  j["seconds"] = r.seconds;
  j["git_describe"] = git_describe();
  j["flags"] = r.flags;
  return j;
}

inline ExperimentReport report_from_json(std::string_view text) {
  auto j = nlohmann::json::parse(text);
  if (j.at("schema_version").get<int>() != ExperimentReport::kSchemaVersion) {
    throw Error(ErrorCode::UnsupportedFormat, "unsupported schema_version");
  }
  ExperimentReport r;
  r.model = model_from_json(j.at("model"));
  r.n = j.at("n");
  r.replicates = j.at("replicates");
  r.mean_ratio = j.at("mean_ratio");
  r.std_error = j.at("stderr");
  r.min_ratio = j.at("min_ratio");
  r.max_ratio = j.at("max_ratio");
  r.seed = j.at("seed");
  r.seconds = j.at("seconds");
  r.flags = j.at("flags").get<std::map<std::string, std::string>>();
  return r;
}

/// Newline-terminated payload; CSV has the fixed header line followed by one row.
inline std::string emit_report(const ExperimentReport& r, Format format) {
  switch (format) {
    case Format::Json: return to_json(r).dump(2) + "\n";
    case Format::Csv: {
      std::string out(kCsvHeader);
      out += "\n" + r.model.to_string() + "," + std::to_string(r.n) + "," + std::to_string(r.replicates) + "," +
             format_double(r.mean_ratio) + "," + format_double(r.std_error) + "," + format_double(r.min_ratio) + "," +
             format_double(r.max_ratio) + "," + std::to_string(r.seed) + "," + format_double(r.seconds) + "\n";
      return out;
    }
  }
  throw Error(ErrorCode::UnsupportedFormat, "unknown format");
}

}  // namespace acq::experiments
