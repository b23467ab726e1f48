#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "irerm/record.hpp"
#include "irerm/solver_irerm.hpp"
#include "irerm/solver_storm.hpp"

namespace irerm::io {

inline std::string fmt_e12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline constexpr const char* kTraceHeader =
    "k,success,delta,theta,cost,fbar_dagger,fbar_star,fbar_p,gnorm,exact_f,"
    "exact_gradnorm,samples_charged";

using MetaMap = std::map<std::string, std::string>;

inline void append_meta(MetaMap& m, const IrermConfig& cfg) {
  m["eta1"] = fmt_g17(cfg.eta1);
  m["eta2"] = fmt_g17(cfg.eta2);
  m["theta0"] = fmt_g17(cfg.theta0);
  m["theta_min"] = fmt_g17(cfg.theta_min);
  m["r"] = fmt_g17(cfg.r);
  m["mu"] = fmt_g17(cfg.mu);
  m["gamma"] = fmt_g17(cfg.gamma);
  m["delta_max"] = fmt_g17(cfg.delta_max);
  m["delta0"] = fmt_g17(cfg.delta0);
  m["y0"] = fmt_g17(cfg.y0);
  m["sample_cap"] = std::to_string(cfg.sample_cap);
}

inline void append_meta(MetaMap& m, const StormConfig& cfg) {
  m["eta1"] = fmt_g17(cfg.eta1);
  m["eta2"] = fmt_g17(cfg.eta2);
  m["gamma"] = fmt_g17(cfg.gamma);
  m["delta_max"] = fmt_g17(cfg.delta_max);
  m["delta0"] = fmt_g17(cfg.delta0);
  m["sample_cap"] = std::to_string(cfg.sample_cap);
}

inline double meta_double(const MetaMap& m, const std::string& key) {
  const auto it = m.find(key);
  if (it == m.end()) throw std::runtime_error("trace metadata missing key: " + key);
  return std::stod(it->second);
}

inline std::uint64_t meta_u64(const MetaMap& m, const std::string& key) {
  const auto it = m.find(key);
  if (it == m.end()) throw std::runtime_error("trace metadata missing key: " + key);
  return std::stoull(it->second);
}

inline std::string meta_str(const MetaMap& m, const std::string& key) {
  const auto it = m.find(key);
  if (it == m.end()) throw std::runtime_error("trace metadata missing key: " + key);
  return it->second;
}

inline IrermConfig irerm_config_from_meta(const MetaMap& m) {
  IrermConfig cfg;
  cfg.eta1 = meta_double(m, "eta1");
  cfg.eta2 = meta_double(m, "eta2");
  cfg.theta0 = meta_double(m, "theta0");
  cfg.theta_min = meta_double(m, "theta_min");
  cfg.r = meta_double(m, "r");
  cfg.mu = meta_double(m, "mu");
  cfg.gamma = meta_double(m, "gamma");
  cfg.delta_max = meta_double(m, "delta_max");
  cfg.delta0 = meta_double(m, "delta0");
  cfg.y0 = meta_double(m, "y0");
  cfg.sample_cap = static_cast<std::int64_t>(meta_u64(m, "sample_cap"));
  cfg.variant = variant_from_string(meta_str(m, "variant"));
  cfg.kmax = static_cast<std::int64_t>(meta_u64(m, "kmax"));
  cfg.budget = meta_u64(m, "budget");
  return cfg;
}

inline StormConfig storm_config_from_meta(const MetaMap& m) {
  StormConfig cfg;
  cfg.eta1 = meta_double(m, "eta1");
  cfg.eta2 = meta_double(m, "eta2");
  cfg.gamma = meta_double(m, "gamma");
  cfg.delta_max = meta_double(m, "delta_max");
  cfg.delta0 = meta_double(m, "delta0");
  cfg.sample_cap = static_cast<std::int64_t>(meta_u64(m, "sample_cap"));
  cfg.variant = variant_from_string(meta_str(m, "variant"));
  cfg.kmax = static_cast<std::int64_t>(meta_u64(m, "kmax"));
  cfg.budget = meta_u64(m, "budget");
  return cfg;
}

inline MetaMap trace_meta(const RunTrace& trace) {
  MetaMap m;
  m["solver"] = trace.solver;
  m["variant"] = trace.variant;
  m["problem"] = trace.problem_id;
  m["n"] = std::to_string(trace.n);
  m["m"] = std::to_string(trace.m);
  m["run_index"] = std::to_string(trace.run_index);
  m["seed"] = std::to_string(trace.seed);
  m["sigma"] = fmt_g17(trace.sigma);
  m["budget"] = std::to_string(trace.budget);
  m["kmax"] = std::to_string(trace.kmax);
  m["termination"] = to_string(trace.reason);
  m["iterations"] = std::to_string(trace.records.size());
  m["final_cost"] = std::to_string(trace.final_state.cost);
  m["final_delta"] = fmt_g17(trace.final_state.delta);
  m["final_theta"] = fmt_g17(trace.final_state.theta);
  m["final_h"] = fmt_g17(h_value(trace.final_state.y));
  m["final_exact_f"] = fmt_g17(trace.final_exact_f);
  m["final_exact_gradnorm"] = fmt_g17(trace.final_exact_gradnorm);
  return m;
}

// One trace file per run: '#'-prefixed key=value metadata, the fixed column
// header, one row per iteration.
inline void write_trace_csv(std::ostream& os, const RunTrace& trace,
                            const MetaMap& extra_meta) {
  MetaMap meta = trace_meta(trace);
  for (const auto& [k, v] : extra_meta) meta[k] = v;
  for (const auto& [k, v] : meta) os << "# " << k << "=" << v << "\n";
  os << kTraceHeader << "\n";
  for (const auto& rec : trace.records) {
    os << rec.k << ',' << (rec.success ? 1 : 0) << ',' << fmt_e12(rec.delta) << ','
       << fmt_e12(rec.theta) << ',' << rec.cost_after << ','
       << fmt_e12(rec.fbar_dagger) << ',' << fmt_e12(rec.fbar_star) << ','
       << fmt_e12(rec.fbar_p) << ',' << fmt_e12(rec.gnorm) << ','
       << fmt_e12(rec.exact_f) << ',' << fmt_e12(rec.exact_gradnorm) << ','
       << rec.samples_charged << "\n";
  }
}

struct TraceRow {
  std::int64_t k = 0;
  bool success = false;
  double delta = 0.0, theta = 0.0;
  std::uint64_t cost = 0;
  double fbar_dagger = 0.0, fbar_star = 0.0, fbar_p = 0.0;
  double gnorm = 0.0, exact_f = 0.0, exact_gradnorm = 0.0;
  std::uint64_t samples_charged = 0;
};

struct TraceFile {
  MetaMap meta;
  std::vector<TraceRow> rows;
};

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find(sep, pos);
    out.push_back(line.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

inline TraceFile read_trace_csv(std::istream& is) {
  TraceFile tf;
  std::string line;
  bool seen_header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      if (!body.empty() && body[0] == ' ') body.erase(0, 1);
      const auto eq = body.find('=');
      if (eq != std::string::npos) tf.meta[body.substr(0, eq)] = body.substr(eq + 1);
      continue;
    }
    if (!seen_header) {
      if (line != kTraceHeader) throw std::runtime_error("unexpected trace header");
      seen_header = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 12) throw std::runtime_error("malformed trace row");
    TraceRow row;
    row.k = std::stoll(f[0]);
    row.success = f[1] == "1";
    row.delta = std::stod(f[2]);
    row.theta = std::stod(f[3]);
    row.cost = std::stoull(f[4]);
    row.fbar_dagger = std::stod(f[5]);
    row.fbar_star = std::stod(f[6]);
    row.fbar_p = std::stod(f[7]);
    row.gnorm = std::stod(f[8]);
    row.exact_f = std::stod(f[9]);
    row.exact_gradnorm = std::stod(f[10]);
    row.samples_charged = std::stoull(f[11]);
    tf.rows.push_back(row);
  }
  if (!seen_header) throw std::runtime_error("trace file has no header");
  return tf;
}

inline TraceFile read_trace_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open trace file: " + path);
  return read_trace_csv(is);
}

// Flat key=value config files; '#' starts a comment, blank lines ignored.
inline MetaMap read_kv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file: " + path);
  MetaMap m;
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' ||
                             line.back() == '\r'))
      line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    const auto eq = line.find('=', start);
    if (eq == std::string::npos)
      throw std::runtime_error("config line is not key=value: " + line);
    std::string key = line.substr(start, eq - start);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    std::size_t vstart = line.find_first_not_of(" \t", eq + 1);
    m[key] = vstart == std::string::npos ? "" : line.substr(vstart);
  }
  return m;
}

}  // namespace irerm::io
