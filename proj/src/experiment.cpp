// Copyright 2026 The relaysim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "relaysim/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "relaysim/errors.hpp"

#ifndef RELAYSIM_VERSION
#define RELAYSIM_VERSION "0.0.0"
#endif

namespace relaysim {
namespace {

using nlohmann::json;

const std::set<std::string> kTopKeys = {
    "relays", "antennas", "snr_db", "var_sr_db", "var_rd_db", "var_rr_db", "buffer_max", "seed",
    "schemes", "sweep", "slots", "pretraining_slots", "repetitions", "alpha_mode", "output"};
const std::set<std::string> kSweepKeys = {"axis", "points"};

std::string index_key(const std::string& key, std::size_t i) {
  return key + "[" + std::to_string(i) + "]";
}

double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(key, "must be finite");
  return x;
}

// Counts are integers; 2.0 is accepted, 2.5 is not.
std::int64_t integer(const json& v, const std::string& key, std::int64_t lo) {
  if (!v.is_number()) throw ConfigError(key, "expected an integer");
  const double x = v.get<double>();
  if (x != std::floor(x) || x < static_cast<double>(lo) || x > 1e12) {
    throw ConfigError(key, "expected an integer >= " + std::to_string(lo));
  }
  return v.is_number_unsigned() ? static_cast<std::int64_t>(v.get<std::uint64_t>())
                                : static_cast<std::int64_t>(x);
}

// Number, null or "inf".
double maybe_infinite(const json& v, const std::string& key) {
  if (v.is_null() || (v.is_string() && v.get<std::string>() == "inf")) return kInfiniteBuffer;
  if (!v.is_number()) throw ConfigError(key, "expected a number, null or \"inf\"");
  return v.get<double>();
}

json infinite_or_number(double x) { return std::isinf(x) ? json("inf") : json(x); }

std::vector<double> per_relay(const json* v, const std::string& key, int relays) {
  if (!v) return std::vector<double>(static_cast<std::size_t>(relays), 0.0);
  if (v->is_number()) return std::vector<double>(static_cast<std::size_t>(relays), number(*v, key));
  if (!v->is_array()) throw ConfigError(key, "expected a number or a list");
  if (v->size() != static_cast<std::size_t>(relays)) {
    throw ConfigError(key, "expected " + std::to_string(relays) + " values, got " +
                               std::to_string(v->size()));
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < v->size(); ++i) out.push_back(number((*v)[i], index_key(key, i)));
  return out;
}

std::vector<std::vector<std::optional<double>>> inter_relay(const json* v, int relays) {
  const auto k = static_cast<std::size_t>(relays);
  std::vector<std::vector<std::optional<double>>> out(k, std::vector<std::optional<double>>(k));
  const std::string key = "var_rr_db";
  if (!v || v->is_number()) {
    const double x = v ? number(*v, key) : 0.0;
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < k; ++i)
        if (i != j) out[j][i] = x;
    return out;
  }
  if (!v->is_array() || v->size() != k) {
    throw ConfigError(key, "expected a number or a " + std::to_string(k) + "x" + std::to_string(k) +
                               " list");
  }
  for (std::size_t j = 0; j < k; ++j) {
    const json& row = (*v)[j];
    const std::string row_key = index_key(key, j);
    if (!row.is_array() || row.size() != k) {
      throw ConfigError(row_key, "expected " + std::to_string(k) + " entries");
    }
    for (std::size_t i = 0; i < k; ++i) {
      const std::string cell = index_key(row_key, i);
      if (i == j) {
        if (!row[i].is_null()) throw ConfigError(cell, "diagonal must be null");
        continue;
      }
      out[j][i] = number(row[i], cell);
    }
  }
  return out;
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& prefix) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) throw ConfigError(prefix + key, "unknown key");
  }
}

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, const char* key) {
  const json* v = find(obj, key);
  if (!v) throw ConfigError(key, "missing required key");
  return *v;
}

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

}  // namespace

std::string version() { return RELAYSIM_VERSION; }

NetworkConfig ExperimentSpec::network() const {
  NetworkConfig c;
  c.relays = relays;
  c.antennas = antennas;
  c.rho_s = c.rho_r = db_to_linear(snr_db);
  for (double v : var_sr_db) c.var_sr.push_back(db_to_linear(v));
  for (double v : var_rd_db) c.var_rd.push_back(db_to_linear(v));
  const auto k = static_cast<std::size_t>(relays);
  c.var_rr.assign(k, std::vector<double>(k, 0.0));
  for (std::size_t j = 0; j < var_rr_db.size(); ++j)
    for (std::size_t i = 0; i < var_rr_db[j].size(); ++i)
      if (var_rr_db[j][i]) c.var_rr[j][i] = db_to_linear(*var_rr_db[j][i]);
  c.buffer_max = buffer_max;
  c.seed = seed;
  return c;
}

RunOptions ExperimentSpec::run_options(int threads) const {
  RunOptions o;
  o.alpha_mode = alpha_mode;
  o.slots = slots;
  o.pretraining_slots = pretraining_slots;
  o.repetitions = repetitions;
  o.threads = threads;
  return o;
}

ExperimentSpec parse_config_text(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("", "top level must be an object");
  reject_unknown(root, kTopKeys, "");

  ExperimentSpec s;
  s.relays = static_cast<int>(integer(require(root, "relays"), "relays", 2));
  s.antennas = static_cast<int>(integer(require(root, "antennas"), "antennas", 1));
  s.snr_db = number(require(root, "snr_db"), "snr_db");
  s.var_sr_db = per_relay(find(root, "var_sr_db"), "var_sr_db", s.relays);
  s.var_rd_db = per_relay(find(root, "var_rd_db"), "var_rd_db", s.relays);
  s.var_rr_db = inter_relay(find(root, "var_rr_db"), s.relays);
  if (const json* v = find(root, "buffer_max")) {
    s.buffer_max = maybe_infinite(*v, "buffer_max");
    if (!(s.buffer_max > 0.0)) throw ConfigError("buffer_max", "must be > 0");
  }
  if (const json* v = find(root, "seed")) {
    if (!v->is_number_unsigned()) {
      throw ConfigError("seed", "expected a non-negative integer");
    }
    s.seed = v->get<std::uint64_t>();
  }

  const json& schemes = require(root, "schemes");
  if (!schemes.is_array() || schemes.empty()) throw ConfigError("schemes", "expected a non-empty list");
  for (std::size_t i = 0; i < schemes.size(); ++i) {
    const std::string key = index_key("schemes", i);
    if (!schemes[i].is_string()) throw ConfigError(key, "expected a scheme name");
    try {
      s.schemes.push_back(parse_scheme(schemes[i].get<std::string>()));
    } catch (const ConfigError&) {
      throw ConfigError(key, "unknown scheme '" + schemes[i].get<std::string>() + "'");
    }
  }

  if (const json* sweep = find(root, "sweep")) {
    if (!sweep->is_object()) throw ConfigError("sweep", "expected an object");
    reject_unknown(*sweep, kSweepKeys, "sweep.");
    const json* axis = find(*sweep, "axis");
    if (!axis) throw ConfigError("sweep.axis", "missing required key");
    if (!axis->is_string()) throw ConfigError("sweep.axis", "expected a string");
    s.axis = parse_axis(axis->get<std::string>());
    const json* points = find(*sweep, "points");
    if (!points) throw ConfigError("sweep.points", "missing required key");
    if (!points->is_array() || points->empty()) {
      throw ConfigError("sweep.points", "expected a non-empty list");
    }
    for (std::size_t i = 0; i < points->size(); ++i) {
      const std::string key = index_key("sweep.points", i);
      s.points.push_back(s.axis == SweepAxis::kBufferSize ? maybe_infinite((*points)[i], key)
                                                          : number((*points)[i], key));
    }
  } else {
    s.points = {s.snr_db};
  }

  if (const json* v = find(root, "slots")) s.slots = static_cast<int>(integer(*v, "slots", 1));
  if (const json* v = find(root, "pretraining_slots")) {
    s.pretraining_slots = static_cast<int>(integer(*v, "pretraining_slots", 1));
  }
  if (const json* v = find(root, "repetitions")) {
    s.repetitions = static_cast<int>(integer(*v, "repetitions", 1));
  }
  if (const json* v = find(root, "alpha_mode")) {
    if (!v->is_string()) throw ConfigError("alpha_mode", "expected a string");
    s.alpha_mode = parse_alpha_mode(v->get<std::string>());
  }
  if (const json* v = find(root, "output")) {
    if (!v->is_string() || v->get<std::string>().empty()) {
      throw ConfigError("output", "expected a non-empty path");
    }
    s.output = v->get<std::string>();
  }

  // Whole-network checks, then every sweep point.
  const NetworkConfig base = s.network();
  base.validate();
  for (std::size_t p = 0; p < s.points.size(); ++p) {
    const std::string key = index_key("sweep.points", p);
    NetworkConfig at;
    try {
      at = apply_sweep_point(base, s.axis, s.points[p]);
      at.validate();
    } catch (const ConfigError& e) {
      const std::string what = e.what();
      const auto colon = what.find(": ");
      throw ConfigError(key, colon == std::string::npos ? what : what.substr(colon + 2));
    }
    for (std::size_t i = 0; i < s.schemes.size(); ++i) {
      if (at.antennas < min_antennas(s.schemes[i])) {
        throw ConfigError(index_key("schemes", i),
                          "'" + std::string(scheme_name(s.schemes[i])) + "' needs at least " +
                              std::to_string(min_antennas(s.schemes[i])) + " antennas");
      }
    }
  }
  return s;
}

ExperimentSpec parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path.string() + "'");
  std::stringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

std::string to_json(const ExperimentSpec& s) {
  json root = json::object();
  root["relays"] = s.relays;
  root["antennas"] = s.antennas;
  root["snr_db"] = s.snr_db;
  root["var_sr_db"] = s.var_sr_db;
  root["var_rd_db"] = s.var_rd_db;
  json rr = json::array();
  for (const auto& row : s.var_rr_db) {
    json r = json::array();
    for (const auto& v : row) r.push_back(v ? json(*v) : json(nullptr));
    rr.push_back(r);
  }
  root["var_rr_db"] = rr;
  root["buffer_max"] = infinite_or_number(s.buffer_max);
  root["seed"] = s.seed;
  json schemes = json::array();
  for (Scheme sc : s.schemes) schemes.push_back(std::string(scheme_name(sc)));
  root["schemes"] = schemes;
  json points = json::array();
  for (double p : s.points) points.push_back(infinite_or_number(p));
  root["sweep"] = {{"axis", std::string(axis_name(s.axis))}, {"points", points}};
  root["slots"] = s.slots;
  root["pretraining_slots"] = s.pretraining_slots;
  root["repetitions"] = s.repetitions;
  root["alpha_mode"] = std::string(alpha_mode_name(s.alpha_mode));
  root["output"] = s.output;
  return root.dump(2);
}

std::string run_id(const ExperimentSpec& spec) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_json(spec)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string results_csv(const ExperimentSpec& spec, const std::vector<SweepResult>& results) {
  // Standard errors are across repetitions of the same (scheme, point).
  struct Group {
    std::vector<double> rate_d, rate_s, delay;
  };
  std::map<std::pair<int, double>, Group> groups;
  for (const auto& r : results) {
    auto& g = groups[{static_cast<int>(r.scheme), r.point}];
    g.rate_d.push_back(r.metrics.avg_rate_d);
    g.rate_s.push_back(r.metrics.avg_rate_s);
    g.delay.push_back(r.metrics.avg_delay);
  }

  const std::string id = run_id(spec);
  std::ostringstream out;
  out << "run_id,scheme,axis,point,seed,slots,avg_rate_D,avg_rate_S,avg_delay,delay_applicable,"
         "avg_rate_D_stderr,avg_rate_S_stderr,avg_delay_stderr,alpha\n";
  for (const auto& r : results) {
    const auto& g = groups.at({static_cast<int>(r.scheme), r.point});
    std::string alpha;
    for (std::size_t k = 0; k < r.alpha.size(); ++k) {
      if (k) alpha += ';';
      alpha += format_number(r.alpha[k]);
    }
    out << id << ',' << scheme_name(r.scheme) << ',' << axis_name(spec.axis) << ','
        << format_number(r.point) << ',' << r.seed << ',' << r.metrics.slots << ','
        << format_number(r.metrics.avg_rate_d) << ',' << format_number(r.metrics.avg_rate_s) << ','
        << format_number(r.metrics.avg_delay) << ',' << (r.metrics.delay_applicable ? "true" : "false")
        << ',' << format_number(mean_stderr(g.rate_d).stderr_) << ','
        << format_number(mean_stderr(g.rate_s).stderr_) << ','
        << format_number(mean_stderr(g.delay).stderr_) << ',' << alpha << '\n';
  }
  return out.str();
}

void emit_results(const ExperimentSpec& spec, const std::vector<SweepResult>& results,
                  const std::filesystem::path& dir) {
  if (results.empty()) throw std::invalid_argument("emit_results: no results");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + dir.string() + "': " + ec.message());

  const auto write = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
  };
  write(dir / "results.csv", results_csv(spec, results));

  json seeds = json::array();
  for (int r = 0; r < spec.repetitions; ++r) seeds.push_back(spec.seed + static_cast<std::uint64_t>(r));
  json manifest = {
      {"run_id", run_id(spec)},
      {"version", version()},
      {"config", json::parse(to_json(spec))},
      {"seeds", seeds},
      {"rows", results.size()},
  };
  write(dir / "run-manifest.json", manifest.dump(2) + "\n");
}

}  // namespace relaysim
