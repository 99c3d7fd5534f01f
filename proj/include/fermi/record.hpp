#pragma once

// Result records: canonical JSON with the run's configuration embedded, flat
// CSV rows for plotting, machine-readable error objects, and an append-only
// JSON-lines file of finished sweep points used to resume interrupted runs.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>  // vendored nlohmann/json

#include "fermi/asymptotics.hpp"
#include "fermi/config.hpp"
#include "fermi/spectra.hpp"
#include "fermi/widom.hpp"

namespace fermi {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline json alpha_json(const RenyiOrder& a) {
  if (!a.is_finite()) return "inf";
  return a.value();
}

inline RenyiOrder alpha_from_json(const json& j) {
  if (j.is_string()) return RenyiOrder::parse(j.get<std::string>());
  return RenyiOrder(j.get<double>());
}

inline json row_json(const EntropyResult& r) {
  return {{"alpha", alpha_json(r.alpha)},
          {"L", r.L},
          {"n", r.provenance.n},
          {"S", r.S},
          {"clamp_count", r.clamp_count},
          {"max_violation", r.max_violation},
          {"wall_time_s", r.wall_time_s}};
}

inline EntropyResult row_from_json(const json& j) {
  EntropyResult r;
  r.alpha = alpha_from_json(j.at("alpha"));
  r.L = j.at("L").get<double>();
  r.provenance.n = j.at("n").get<std::size_t>();
  r.S = j.at("S").get<double>();
  r.clamp_count = j.at("clamp_count").get<std::size_t>();
  r.max_violation = j.at("max_violation").get<double>();
  r.wall_time_s = j.at("wall_time_s").get<double>();
  return r;
}

inline json provenance_json(const SpectrumSource& s) {
  return {{"gamma", s.gamma}, {"omega", s.omega}, {"rule", s.rule}};
}

inline json fit_json(const ScalingFit& f, const std::optional<TheoryComparison>& cmp) {
  json j = {{"dim", f.dim},
            {"a", f.a},
            {"b", f.b},
            {"stderr_a", f.stderr_a},
            {"stderr_b", f.stderr_b},
            {"L_min", f.L_min},
            {"L_max", f.L_max},
            {"points", f.points},
            {"residual_norm", f.residual_norm},
            {"condition_number", f.condition_number}};
  if (cmp) {
    j["theory"] = cmp->theory;
    j["rel_dev"] = cmp->rel_dev;
  }
  return j;
}

inline json j_json(const WidomCoefficient& c) {
  return {{"value", c.value}, {"method", to_string(c.method)}, {"error_estimate", c.error_estimate}};
}

/// Skeleton shared by every command: schema version, command name and the
/// configuration (original text verbatim plus canonical key/value form).
inline json new_record(Command cmd, const RunConfig& cfg, const std::string& config_text) {
  json canonical = json::object();
  for (const auto& [k, v] : canonical_entries(cfg)) canonical[k] = v;
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
  return {{"schema_version", kSchemaVersion},
          {"command", to_string(cmd)},
          {"config", {{"text", config_text}, {"canonical", canonical}, {"hash", hash}}}};
}

inline void sort_rows(std::vector<EntropyResult>& rows) { detail::sort_rows(rows); }

inline json rows_json(std::vector<EntropyResult> rows) {
  sort_rows(rows);
  json arr = json::array();
  for (const auto& r : rows) arr.push_back(row_json(r));
  return arr;
}

/// Error object written in place of a record when a command fails.
inline json error_record(const std::string& command, const std::string& kind, const std::string& message,
                         int exit_code) {
  return {{"schema_version", kSchemaVersion},
          {"command", command},
          {"error", {{"kind", kind}, {"message", message}, {"exit_code", exit_code}}}};
}

/// Structural problems of a record; empty when the record conforms to the
/// current schema version.
inline std::vector<std::string> validate_record(const json& rec) {
  std::vector<std::string> problems;
  if (!rec.is_object()) return {"record is not a JSON object"};
  if (!rec.contains("schema_version")) problems.push_back("missing schema_version");
  else if (rec["schema_version"] != kSchemaVersion) problems.push_back("unsupported schema_version");
  if (!rec.contains("command") || !rec["command"].is_string()) problems.push_back("missing command");
  if (rec.contains("error")) {
    const auto& e = rec["error"];
    for (const char* k : {"kind", "message", "exit_code"})
      if (!e.contains(k)) problems.push_back(std::string("error object lacks ") + k);
    return problems;
  }
  if (!rec.contains("config") || !rec["config"].contains("text") || !rec["config"].contains("canonical"))
    problems.push_back("missing config echo");
  if (rec.contains("rows")) {
    const auto& rows = rec["rows"];
    if (!rows.is_array()) {
      problems.push_back("rows is not an array");
    } else {
      std::optional<std::pair<double, double>> prev;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        bool complete = true;
        for (const char* k : {"alpha", "L", "n", "S", "clamp_count", "max_violation", "wall_time_s"}) {
          if (!r.contains(k)) {
            problems.push_back("row " + std::to_string(i) + " lacks " + k);
            complete = false;
          }
        }
        if (!complete) continue;
        const double a = alpha_from_json(r["alpha"]).value();
        const double L = r["L"].get<double>();
        if (prev && (a < prev->first || (a == prev->first && L <= prev->second)))
          problems.push_back("rows not sorted by (alpha, L) at row " + std::to_string(i));
        if (!(r["S"].get<double>() >= 0.0)) problems.push_back("negative entropy in row " + std::to_string(i));
        prev = {a, L};
      }
    }
  }
  if (rec.contains("fits")) {
    for (const auto& f : rec["fits"])
      for (const char* k : {"alpha", "a", "b", "stderr_a"})
        if (!f.contains(k)) problems.push_back(std::string("fit lacks ") + k);
  }
  if (rec.contains("J")) {
    for (const char* k : {"value", "method", "error_estimate"})
      if (!rec["J"].contains(k)) problems.push_back(std::string("J block lacks ") + k);
  }
  return problems;
}

/// Copy of a record with every wall-clock field zeroed, for comparisons.
inline json strip_timing(json rec) {
  if (rec.is_object()) {
    for (auto it = rec.begin(); it != rec.end(); ++it) {
      if (it.key() == "wall_time_s" || it.key() == "seconds") it.value() = 0.0;
      else it.value() = strip_timing(it.value());
    }
  } else if (rec.is_array()) {
    for (auto& v : rec) v = strip_timing(v);
  }
  return rec;
}

/// CSV columns: alpha,L,n,S,clamp_count,max_violation,wall_time_s,ln_L,S_per_area
/// where S_per_area = S / L^(d-1).
inline void write_csv(std::ostream& out, std::vector<EntropyResult> rows, int dim) {
  sort_rows(rows);
  out << "alpha,L,n,S,clamp_count,max_violation,wall_time_s,ln_L,S_per_area\n";
  for (const auto& r : rows) {
    out << r.alpha.to_string() << ',' << detail::fmt_double(r.L) << ',' << r.provenance.n << ','
        << detail::fmt_double(r.S) << ',' << r.clamp_count << ',' << detail::fmt_double(r.max_violation) << ','
        << detail::fmt_double(r.wall_time_s) << ',' << detail::fmt_double(std::log(r.L)) << ','
        << detail::fmt_double(r.S / std::pow(r.L, dim - 1)) << '\n';
  }
}

/// Append-only JSON-lines store of completed sweep points. The first line
/// holds the configuration hash; points recorded under another hash are
/// ignored.
class PartialStore {
 public:
  PartialStore(std::string path, std::uint64_t hash) : path_(std::move(path)), hash_(hash) {}

  const std::string& path() const { return path_; }

  /// Rows of previously completed points, keyed by L.
  std::map<double, std::vector<EntropyResult>> load() const {
    std::map<double, std::vector<EntropyResult>> done;
    std::ifstream in(path_);
    if (!in) return done;
    std::string line;
    if (!std::getline(in, line)) return done;
    try {
      const auto head = json::parse(line);
      if (head.value("config_hash", std::string()) != hex()) return done;
    } catch (const json::exception&) {
      return done;
    }
    while (std::getline(in, line)) {
      try {
        const auto j = json::parse(line);
        std::vector<EntropyResult> rows;
        for (const auto& r : j.at("rows")) rows.push_back(row_from_json(r));
        done[j.at("L").get<double>()] = std::move(rows);
      } catch (const json::exception&) {
        break;  // a torn final line from an interrupted write
      }
    }
    return done;
  }

  /// Starts a fresh file unless it already belongs to this configuration.
  void open() {
    std::ifstream in(path_);
    std::string line;
    bool keep = false;
    if (in && std::getline(in, line)) {
      try {
        keep = json::parse(line).value("config_hash", std::string()) == hex();
      } catch (const json::exception&) {
      }
    }
    in.close();
    if (!keep) {
      std::ofstream out(path_, std::ios::trunc);
      if (!out) throw ComputationError("cannot write partial results to " + path_);
      out << json{{"config_hash", hex()}}.dump() << '\n';
    }
  }

  void append(double L, const std::vector<EntropyResult>& rows) const {
    std::ofstream out(path_, std::ios::app);
    if (!out) throw ComputationError("cannot append partial results to " + path_);
    json arr = json::array();
    for (const auto& r : rows) arr.push_back(row_json(r));
    out << json{{"L", L}, {"rows", arr}}.dump() << '\n';
    out.flush();
  }

  void remove() const { std::remove(path_.c_str()); }

 private:
  std::string hex() const {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_));
    return buf;
  }

  std::string path_;
  std::uint64_t hash_;
};

}  // namespace fermi
