#pragma once

// Problem / certificate JSON files and CSV tables.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "banachrep/core/errors.hpp"
#include "banachrep/core/pnorm_space.hpp"
#include "banachrep/solver/min_norm.hpp"
#include "banachrep/solver/problem.hpp"

namespace banachrep::io {

using nlohmann::json;

/// Malformed or schema-violating input.  `field` names the offending entry.
class SchemaError : public Error {
public:
  SchemaError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

private:
  std::string field_;
};

class IoError : public Error {
public:
  using Error::Error;
};

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes to a sibling temporary file and renames it over the target.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", origin + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

namespace detail {

inline double number_at(const json& j, const std::string& field) {
  if (!j.is_number()) throw SchemaError(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError(field, "must be finite");
  return v;
}

inline Eigen::VectorXd vector_at(const json& j, const std::string& field) {
  if (!j.is_array()) throw SchemaError(field, "expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = number_at(j[i], field + "[" + std::to_string(i) + "]");
  return v;
}

inline json to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace detail

/// {"space": {"dim": int, "p": number, "weights": [number]?},
///  "functionals": [[number]], "targets": [number]}
inline InterpolationProblem<Real> problem_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("", "problem must be a JSON object");
  for (const char* key : {"space", "functionals", "targets"})
    if (!j.contains(key)) throw SchemaError(key, "missing");
  const json& sp = j["space"];
  if (!sp.is_object()) throw SchemaError("space", "expected an object");
  if (!sp.contains("dim")) throw SchemaError("space.dim", "missing");
  if (!sp.contains("p")) throw SchemaError("space.p", "missing");
  if (!sp["dim"].is_number_integer() || sp["dim"].get<long long>() <= 0)
    throw SchemaError("space.dim", "must be a positive integer");
  const auto dim = static_cast<Eigen::Index>(sp["dim"].get<long long>());
  const double p = detail::number_at(sp["p"], "space.p");
  if (!(p > 1.0)) throw SchemaError("space.p", "must satisfy 1 < p < inf");

  Eigen::VectorXd w = Eigen::VectorXd::Ones(dim);
  if (sp.contains("weights")) {
    w = detail::vector_at(sp["weights"], "space.weights");
    if (w.size() != dim) throw SchemaError("space.weights", "length must equal space.dim");
    for (Eigen::Index k = 0; k < dim; ++k)
      if (!(w[k] > 0.0)) throw SchemaError("space.weights", "entries must be strictly positive");
  }

  const json& fs = j["functionals"];
  if (!fs.is_array() || fs.empty()) throw SchemaError("functionals", "expected a non-empty array of rows");
  std::vector<Functional<Real>> rows;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const std::string name = "functionals[" + std::to_string(i) + "]";
    Eigen::VectorXd row = detail::vector_at(fs[i], name);
    if (row.size() != dim) throw SchemaError(name, "length must equal space.dim");
    if (row.cwiseAbs().maxCoeff() == 0.0) throw SchemaError(name, "functional must be nonzero");
    rows.emplace_back(std::move(row));
  }
  Eigen::VectorXd y = detail::vector_at(j["targets"], "targets");
  if (static_cast<std::size_t>(y.size()) != rows.size())
    throw SchemaError("targets", "length must equal the number of functionals");
  return InterpolationProblem<Real>(PNormSpace(p, std::move(w)), std::move(rows), std::move(y));
}

inline InterpolationProblem<Real> load_problem(const std::filesystem::path& path) {
  return problem_from_json(parse_json(read_text(path), path.string()));
}

inline json problem_to_json(const InterpolationProblem<Real>& problem) {
  json j;
  j["space"] = {{"dim", problem.space().dim()}, {"p", problem.space().p()},
                {"weights", detail::to_json(problem.space().weights())}};
  j["functionals"] = json::array();
  for (const auto& L : problem.functionals()) j["functionals"].push_back(detail::to_json(L.coords));
  j["targets"] = detail::to_json(problem.targets());
  return j;
}

struct CertificateMeta {
  int iterations = 0;
  double tol = 1e-9;
  int max_iter = 500;
  std::uint64_t seed = 0;
};

struct Certificate {
  RepresenterSolution<Real> solution;
  CertificateMeta meta;
};

inline json certificate_to_json(const InterpolationProblem<Real>& problem, const RepresenterSolution<Real>& sol,
                                const CertificateMeta& meta) {
  json j;
  j["f0"] = detail::to_json(sol.f0.coords);
  j["c"] = detail::to_json(sol.c);
  j["residuals"] = {{"feasibility", sol.feasibility_residual},
                    {"peaking", sol.peaking_residual},
                    {"norm_match", sol.norm_match_residual}};
  j["meta"] = {{"solver", sol.method},
               {"iterations", meta.iterations},
               {"tol", meta.tol},
               {"max_iter", meta.max_iter},
               {"seed", meta.seed},
               {"p", problem.space().p()},
               {"dim", problem.space().dim()},
               {"norm", norm(problem.space(), sol.f0)}};
  return j;
}

inline Certificate certificate_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("", "certificate must be a JSON object");
  for (const char* key : {"f0", "c", "residuals"})
    if (!j.contains(key)) throw SchemaError(key, "missing");
  Certificate cert;
  cert.solution.f0 = Element<Real>(detail::vector_at(j["f0"], "f0"));
  cert.solution.c = detail::vector_at(j["c"], "c");
  const json& r = j["residuals"];
  if (!r.is_object()) throw SchemaError("residuals", "expected an object");
  for (const char* key : {"feasibility", "peaking", "norm_match"})
    if (!r.contains(key)) throw SchemaError(std::string("residuals.") + key, "missing");
  cert.solution.feasibility_residual = detail::number_at(r["feasibility"], "residuals.feasibility");
  cert.solution.peaking_residual = detail::number_at(r["peaking"], "residuals.peaking");
  cert.solution.norm_match_residual = detail::number_at(r["norm_match"], "residuals.norm_match");
  if (j.contains("meta") && j["meta"].is_object()) {
    const json& m = j["meta"];
    if (m.contains("iterations")) cert.meta.iterations = m["iterations"].get<int>();
    if (m.contains("tol")) cert.meta.tol = m["tol"].get<double>();
    if (m.contains("max_iter")) cert.meta.max_iter = m["max_iter"].get<int>();
    if (m.contains("seed")) cert.meta.seed = m["seed"].get<std::uint64_t>();
  }
  cert.solution.iterations = cert.meta.iterations;
  return cert;
}

// ---------------------------------------------------------------------------
// CSV: header row, comma separated, '.' decimal point, LF line endings.

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  template <class... Ts>
  void add(const Ts&... cells) {
    std::vector<std::string> row;
    (row.push_back(cell(cells)), ...);
    if (row.size() != header_.size()) throw InvalidArgument("CSV row width does not match header");
    rows_.push_back(std::move(row));
  }

  std::string str() const {
    std::string out = join(header_);
    for (const auto& r : rows_) out += join(r);
    return out;
  }

  std::size_t size() const { return rows_.size(); }

private:
  static std::string cell(double v) { return format_double(v); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  template <class I>
    requires std::is_integral_v<I>
  static std::string cell(I v) {
    return std::to_string(v);
  }

  static std::string join(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) line += ',';
      line += cells[i];
    }
    line += '\n';
    return line;
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace banachrep::io
