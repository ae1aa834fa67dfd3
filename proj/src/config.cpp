// Copyright 2026 The dsrm Authors. All Rights Reserved.
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

#include "dsrm/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "dsrm/errors.hpp"

namespace dsrm {

std::string to_string(Topology t) {
  switch (t) {
    case Topology::kGeometric:
      return "geometric";
    case Topology::kPath:
      return "path";
    case Topology::kStar:
      return "star";
    case Topology::kComplete:
      return "complete";
  }
  return "unknown";
}

int ScenarioConfig::resolved_f() const {
  if (f_flows > 0) return f_flows;
  const bool routed =
      scenario == ScenarioKind::kDuna || (scenario == ScenarioKind::kDlasso && l_rows == 0);
  return routed ? n_agents * (n_agents - 1) : 60;
}

namespace {

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw ValidationError(field, what);
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

long long parse_integer(const std::string& v, int line) {
  const char* begin = v.c_str();
  char* end = nullptr;
  errno = 0;
  const long long x = std::strtoll(begin, &end, 10);
  if (v.empty() || end != begin + v.size() || errno == ERANGE) {
    throw ParseError(line, "expected an integer, got '" + v + "'");
  }
  return x;
}

int parse_int(const std::string& v, int line) {
  const long long x = parse_integer(v, line);
  if (x < -2147483647LL || x > 2147483647LL) throw ParseError(line, "integer out of range");
  return static_cast<int>(x);
}

double parse_double(const std::string& v, int line) {
  const char* begin = v.c_str();
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(begin, &end);
  if (v.empty() || end != begin + v.size() || errno == ERANGE || !std::isfinite(x)) {
    throw ParseError(line, "expected a finite real, got '" + v + "'");
  }
  return x;
}

Topology parse_topology(const std::string& v) {
  if (v == "geometric") return Topology::kGeometric;
  if (v == "path") return Topology::kPath;
  if (v == "star") return Topology::kStar;
  if (v == "complete") return Topology::kComplete;
  throw ValidationError("topology", "unknown topology '" + v + "'");
}

using Setter = std::function<void(ScenarioConfig&, const std::string&, int)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"scenario", [](ScenarioConfig& c, const std::string& v,
                      int) { c.scenario = parse_scenario_kind(v); }},
      {"topology", [](ScenarioConfig& c, const std::string& v,
                      int) { c.topology = parse_topology(v); }},
      {"n_agents", [](ScenarioConfig& c, const std::string& v,
                      int l) { c.n_agents = parse_int(v, l); }},
      {"t_cols", [](ScenarioConfig& c, const std::string& v, int l) { c.t_cols = parse_int(v, l); }},
      {"f_flows", [](ScenarioConfig& c, const std::string& v,
                     int l) { c.f_flows = parse_int(v, l); }},
      {"l_rows", [](ScenarioConfig& c, const std::string& v, int l) { c.l_rows = parse_int(v, l); }},
      {"rank_true", [](ScenarioConfig& c, const std::string& v,
                       int l) { c.rank_true = parse_int(v, l); }},
      {"rho", [](ScenarioConfig& c, const std::string& v, int l) { c.rho = parse_int(v, l); }},
      {"sigma", [](ScenarioConfig& c, const std::string& v,
                   int l) { c.sigma = parse_double(v, l); }},
      {"pi", [](ScenarioConfig& c, const std::string& v, int l) { c.pi = parse_double(v, l); }},
      {"p_obs", [](ScenarioConfig& c, const std::string& v,
                   int l) { c.p_obs = parse_double(v, l); }},
      {"comm_range", [](ScenarioConfig& c, const std::string& v,
                        int l) { c.comm_range = parse_double(v, l); }},
      {"lambda_star", [](ScenarioConfig& c, const std::string& v,
                         int l) { c.lambda_star = parse_double(v, l); }},
      {"lambda_1", [](ScenarioConfig& c, const std::string& v,
                      int l) { c.lambda_1 = parse_double(v, l); }},
      {"lambda_star_frac", [](ScenarioConfig& c, const std::string& v,
                              int l) { c.lambda_star_frac = parse_double(v, l); }},
      {"lambda_1_frac", [](ScenarioConfig& c, const std::string& v,
                           int l) { c.lambda_1_frac = parse_double(v, l); }},
      {"c", [](ScenarioConfig& c, const std::string& v, int l) { c.c = parse_double(v, l); }},
      {"mu", [](ScenarioConfig& c, const std::string& v, int l) { c.mu = parse_double(v, l); }},
      {"tol", [](ScenarioConfig& c, const std::string& v, int l) { c.tol = parse_double(v, l); }},
      {"max_rounds", [](ScenarioConfig& c, const std::string& v,
                        int l) { c.max_rounds = parse_int(v, l); }},
      {"seed", [](ScenarioConfig& c, const std::string& v, int l) {
         const long long s = parse_integer(v, l);
         if (s < 0) throw ParseError(l, "seed must be nonnegative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"out_path", [](ScenarioConfig& c, const std::string& v, int) { c.out_path = v; }},
      {"oracle_tol", [](ScenarioConfig& c, const std::string& v,
                        int l) { c.oracle_tol = parse_double(v, l); }},
      {"oracle_max_iter", [](ScenarioConfig& c, const std::string& v,
                             int l) { c.oracle_max_iter = parse_int(v, l); }},
      {"threads", [](ScenarioConfig& c, const std::string& v,
                     int l) { c.threads = parse_int(v, l); }},
      {"roc_thresholds", [](ScenarioConfig& c, const std::string& v,
                            int l) { c.roc_thresholds = parse_int(v, l); }},
      {"cert_slack", [](ScenarioConfig& c, const std::string& v,
                        int l) { c.cert_slack = parse_double(v, l); }},
  };
  return table;
}

}  // namespace

void ScenarioConfig::validate() const {
  require(n_agents >= 1, "n_agents", "must be >= 1");
  require(t_cols >= 1, "t_cols", "must be >= 1");
  require(f_flows >= 0, "f_flows", "must be >= 0");
  require(l_rows >= 0, "l_rows", "must be >= 0");
  require(rank_true >= 0, "rank_true", "must be >= 0");
  require(rho >= 1, "rho", "must be >= 1");
  require(sigma >= 0.0, "sigma", "must be >= 0");
  require(pi >= 0.0 && pi <= 1.0, "pi", "must lie in [0, 1]");
  require(p_obs > 0.0 && p_obs <= 1.0, "p_obs", "must lie in (0, 1]");
  require(comm_range > 0.0, "comm_range", "must be > 0");
  require(!lambda_star || *lambda_star > 0.0, "lambda_star", "must be > 0");
  require(!lambda_1 || *lambda_1 > 0.0, "lambda_1", "must be > 0");
  require(lambda_star_frac > 0.0, "lambda_star_frac", "must be > 0");
  require(lambda_1_frac > 0.0, "lambda_1_frac", "must be > 0");
  require(c > 0.0, "c", "must be > 0");
  require(mu > 0.0, "mu", "must be > 0");
  require(tol > 0.0, "tol", "must be > 0");
  require(max_rounds >= 1, "max_rounds", "must be >= 1");
  require(oracle_tol > 0.0, "oracle_tol", "must be > 0");
  require(oracle_max_iter >= 1, "oracle_max_iter", "must be >= 1");
  require(threads >= 1, "threads", "must be >= 1");
  require(roc_thresholds >= 2, "roc_thresholds", "must be >= 2");
  require(cert_slack >= 0.0, "cert_slack", "must be >= 0");

  const int f = resolved_f();
  const bool routed =
      scenario == ScenarioKind::kDuna || (scenario == ScenarioKind::kDlasso && l_rows == 0);
  if (routed) {
    require(n_agents >= 2, "n_agents", "routing needs at least two nodes");
    require(f == n_agents * (n_agents - 1), "f_flows", "routed scenarios carry N(N-1) OD flows");
  }
  int rows = f;  // rows of Y
  if (scenario == ScenarioKind::kDlasso && l_rows > 0) rows = l_rows;
  if (scenario != ScenarioKind::kDlasso) {
    require(rank_true <= std::min(f, t_cols), "rank_true", "exceeds min(F, T)");
  }
  if (scenario == ScenarioKind::kDrpca || scenario == ScenarioKind::kDmc ||
      (scenario == ScenarioKind::kDlasso && l_rows > 0)) {
    require(rows >= n_agents, "n_agents", "more agents than rows of Y");
  }
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ParseError(line, "missing key");
    if (value.empty()) throw ParseError(line, "missing value for '" + key + "'");
    const auto it = setters().find(key);
    if (it == setters().end()) throw ParseError(line, "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ParseError(line, "repeated key '" + key + "'");
    it->second(cfg, value, line);
  }
  if (!seen.count("scenario")) throw ValidationError("scenario", "missing");
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace dsrm
