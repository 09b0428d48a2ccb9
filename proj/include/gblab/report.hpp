#pragma once
#include <map>
#include <string>
#include <vector>

// Check records, suite reports, rendering (json/csv/text), and the run
// configuration with its precedence chain: defaults < config file <
// environment < command line.
namespace gblab::report {

struct Check {
  std::string name;
  double computed = 0;
  double expected = 0;
  double tolerance = 0;
  bool pass = false;
};

// pass <=> |computed - expected| <= tolerance (so tolerance 0 demands bitwise
// agreement); NaN never passes.
Check make_check(const std::string& name, double computed, double expected,
                 double tolerance);

struct Report {
  std::string suite;
  std::vector<Check> checks;
  double wall_seconds = 0;
  std::map<std::string, std::string> config;  // echo of the effective settings

  bool pass() const;
};

enum class Format { json, csv, text };

// ConfigError on anything but "json", "csv", "text".
Format parse_format(const std::string& s);

struct RunConfig {
  unsigned long long seed = 0xC0FFEE;
  long long samples = 1'000'000;       // Monte Carlo sample count
  int jobs = 1;                        // concurrent suites in `verify all`
  bool timing = true;                  // false excludes wall time + timestamp
  Format format = Format::json;
  std::string out_path;                // empty = stdout
  std::map<std::string, int> resolution;        // per-suite grid override
  std::map<std::string, double> tolerance;      // per-check override

  // Override for `suite` if present, then the global "*" entry, then the
  // built-in fallback.
  int resolution_for(const std::string& suite, int fallback) const;
  double tolerance_for(const std::string& check, double fallback) const;
};

// Flat key=value text, '#' comments.  Keys: seed, samples, jobs, format,
// timestamp, resolution, resolution.<suite>, tolerance.<check>.  ConfigError
// on unknown keys or unparseable values; tolerances must be positive.
void load_config_file(RunConfig& cfg, const std::string& path);

// GBLAB_SEED (decimal or 0x-prefixed hex) overrides the config-file seed.
void apply_env(RunConfig& cfg);

// Numeric parsers shared with the CLI layer; ConfigError on garbage.
unsigned long long parse_seed(const std::string& text);
long long parse_count(const std::string& text);

std::string render(const Report& r, Format f, bool include_timing);
std::string render_all(const std::vector<Report>& rs, Format f, bool include_timing);

}  // namespace gblab::report
