#include "gblab/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gblab/errors.hpp"

namespace gblab::report {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Shortest exact decimal for a double, for the csv/text renderings.
std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = std::strtod(buf, nullptr);
  if (back == v) {
    for (int prec = 1; prec < 17; ++prec) {
      char probe[40];
      std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
      if (std::strtod(probe, nullptr) == v) return probe;
    }
  }
  return buf;
}

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

nlohmann::ordered_json report_json(const Report& r, bool include_timing) {
  nlohmann::ordered_json j;
  j["suite"] = r.suite;
  j["pass"] = r.pass();
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.config) cfg[k] = v;
  j["config"] = cfg;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const Check& c : r.checks) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["computed"] = c.computed;
    jc["expected"] = c.expected;
    jc["tolerance"] = c.tolerance;
    jc["pass"] = c.pass;
    checks.push_back(jc);
  }
  j["checks"] = checks;
  if (include_timing) {
    j["wall_seconds"] = r.wall_seconds;
    j["timestamp"] = iso_timestamp();
  }
  return j;
}

void render_csv(std::ostringstream& out, const Report& r) {
  for (const Check& c : r.checks) {
    out << r.suite << ',' << c.name << ',' << num(c.computed) << ','
        << num(c.expected) << ',' << num(c.tolerance) << ','
        << (c.pass ? "true" : "false") << '\n';
  }
}

void render_text(std::ostringstream& out, const Report& r, bool include_timing) {
  out << "suite " << r.suite;
  auto seed = r.config.find("seed");
  if (seed != r.config.end()) out << " (seed " << seed->second << ")";
  out << '\n';
  int passed = 0;
  for (const Check& c : r.checks) {
    out << (c.pass ? "  [PASS] " : "  [FAIL] ") << c.name
        << "  computed=" << num(c.computed) << " expected=" << num(c.expected)
        << " tol=" << num(c.tolerance) << '\n';
    passed += c.pass ? 1 : 0;
  }
  out << "  " << passed << "/" << r.checks.size() << " checks passed";
  if (include_timing) out << "  (" << num(r.wall_seconds) << " s)";
  out << '\n';
}

}  // namespace

Check make_check(const std::string& name, double computed, double expected,
                 double tolerance) {
  Check c{name, computed, expected, tolerance, false};
  c.pass = std::abs(computed - expected) <= tolerance;
  return c;
}

bool Report::pass() const {
  for (const Check& c : checks)
    if (!c.pass) return false;
  return true;
}

Format parse_format(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  if (s == "text") return Format::text;
  throw ConfigError("unknown report format '" + s + "' (expected json, csv or text)");
}

int RunConfig::resolution_for(const std::string& suite, int fallback) const {
  auto it = resolution.find(suite);
  if (it != resolution.end()) return it->second;
  it = resolution.find("*");
  if (it != resolution.end()) return it->second;
  return fallback;
}

double RunConfig::tolerance_for(const std::string& check, double fallback) const {
  auto it = tolerance.find(check);
  return it != tolerance.end() ? it->second : fallback;
}

unsigned long long parse_seed(const std::string& text) {
  std::string t = trim(text);
  if (t.empty()) throw ConfigError("empty seed value");
  try {
    size_t used = 0;
    unsigned long long v = std::stoull(t, &used, 0);  // base 0: decimal or 0x
    if (used != t.size()) throw ConfigError("trailing characters in seed '" + t + "'");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse seed '" + t + "'");
  }
}

long long parse_count(const std::string& text) {
  std::string t = trim(text);
  try {
    size_t used = 0;
    long long v = std::stoll(t, &used, 10);
    if (used != t.size() || v <= 0)
      throw ConfigError("expected a positive integer, got '" + t + "'");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("expected a positive integer, got '" + t + "'");
  }
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "seed") {
      cfg.seed = parse_seed(value);
    } else if (key == "samples") {
      cfg.samples = parse_count(value);
    } else if (key == "jobs") {
      cfg.jobs = static_cast<int>(parse_count(value));
    } else if (key == "format") {
      cfg.format = parse_format(value);
    } else if (key == "timestamp") {
      if (value == "true" || value == "on" || value == "1") cfg.timing = true;
      else if (value == "false" || value == "off" || value == "0") cfg.timing = false;
      else throw ConfigError("config line " + std::to_string(lineno) +
                             ": timestamp expects true/false");
    } else if (key == "resolution") {
      cfg.resolution["*"] = static_cast<int>(parse_count(value));
    } else if (key.rfind("resolution.", 0) == 0) {
      cfg.resolution[key.substr(11)] = static_cast<int>(parse_count(value));
    } else if (key.rfind("tolerance.", 0) == 0) {
      double tol = std::strtod(value.c_str(), nullptr);
      if (!(tol > 0))
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": tolerance must be positive");
      cfg.tolerance[key.substr(10)] = tol;
    } else {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" +
                        key + "'");
    }
  }
}

void apply_env(RunConfig& cfg) {
  if (const char* s = std::getenv("GBLAB_SEED")) cfg.seed = parse_seed(s);
}

std::string render(const Report& r, Format f, bool include_timing) {
  std::ostringstream out;
  switch (f) {
    case Format::json:
      out << report_json(r, include_timing).dump(2) << '\n';
      break;
    case Format::csv:
      out << "suite,check,computed,expected,tolerance,pass\n";
      render_csv(out, r);
      break;
    case Format::text:
      render_text(out, r, include_timing);
      break;
  }
  return out.str();
}

std::string render_all(const std::vector<Report>& rs, Format f, bool include_timing) {
  std::ostringstream out;
  switch (f) {
    case Format::json: {
      nlohmann::ordered_json j;
      bool all = true;
      for (const Report& r : rs) all = all && r.pass();
      j["pass"] = all;
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const Report& r : rs) arr.push_back(report_json(r, include_timing));
      j["reports"] = arr;
      out << j.dump(2) << '\n';
      break;
    }
    case Format::csv:
      out << "suite,check,computed,expected,tolerance,pass\n";
      for (const Report& r : rs) render_csv(out, r);
      break;
    case Format::text: {
      bool all = true;
      for (const Report& r : rs) {
        render_text(out, r, include_timing);
        all = all && r.pass();
      }
      out << (all ? "overall: PASS" : "overall: FAIL") << " (" << rs.size()
          << " suites)\n";
      break;
    }
  }
  return out.str();
}

}  // namespace gblab::report
