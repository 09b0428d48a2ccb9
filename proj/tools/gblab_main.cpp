#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gblab/chains.hpp"
#include "gblab/errors.hpp"
#include "gblab/flatform.hpp"
#include "gblab/report.hpp"
#include "gblab/skew.hpp"
#include "gblab/suites.hpp"

namespace {

using gblab::report::Format;
using gblab::report::Report;
using gblab::report::RunConfig;

std::string shortest(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  for (int prec = 1; prec < 17; ++prec) {
    char probe[40];
    std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
    if (std::strtod(probe, nullptr) == v) return probe;
  }
  return buf;
}

nlohmann::json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gblab::ConfigError("cannot open input file '" + path + "'");
  return nlohmann::json::parse(in);  // parse_error carries the byte position
}

std::vector<std::vector<double>> parse_matrix(const nlohmann::json& j) {
  if (!j.is_array() || j.empty())
    throw gblab::ConfigError("expected a nonempty array-of-arrays matrix");
  std::vector<std::vector<double>> m;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != j.size())
      throw gblab::ConfigError("matrix rows must all have length " +
                               std::to_string(j.size()));
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) throw gblab::ConfigError("matrix entries must be numbers");
      r.push_back(v.get<double>());
    }
    m.push_back(std::move(r));
  }
  return m;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw gblab::ConfigError("cannot open output file '" + out_path + "'");
  out << text;
}

int emit_reports(const std::vector<Report>& reports, const RunConfig& cfg) {
  std::string text = reports.size() == 1
                         ? gblab::report::render(reports.front(), cfg.format, cfg.timing)
                         : gblab::report::render_all(reports, cfg.format, cfg.timing);
  emit(text, cfg.out_path);
  for (const Report& r : reports)
    if (!r.pass()) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification toolkit for curvature, boundary and chain identities"};
  app.require_subcommand(1);

  std::string config_path, seed_str, format_str, out_path;
  long long samples = 0;
  int jobs = 0, resolution = 0;
  bool no_timestamp = false;
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--seed", seed_str, "RNG seed, decimal or 0x-prefixed hex");
  app.add_option("--samples", samples, "Monte Carlo sample count");
  app.add_option("--jobs", jobs, "concurrent suites in `verify all`");
  app.add_option("--resolution", resolution, "grid resolution override (odd, >= 33)");
  app.add_option("--format", format_str, "report format: json, csv or text");
  app.add_option("--out", out_path, "write output to a file instead of stdout");
  app.add_flag("--no-timestamp", no_timestamp,
               "omit timestamp and wall time for byte-identical reruns");

  auto* verify = app.add_subcommand("verify", "run one verification suite (or `all`)");
  verify->fallthrough();
  std::string suite;
  std::vector<std::string> suite_choices = gblab::suites::suite_names();
  suite_choices.push_back("all");
  verify->add_option("suite", suite, "suite name")
      ->required()
      ->check(CLI::IsMember(suite_choices));

  auto* compute = app.add_subcommand("compute", "evaluate a single object");
  compute->require_subcommand(1);
  compute->fallthrough();
  std::string input_path, coframe_path;
  int cycle_n = 0;
  auto* c_pf = compute->add_subcommand("pfaffian", "Pfaffian of a skew matrix");
  c_pf->fallthrough();
  c_pf->add_option("--input", input_path, "JSON array-of-arrays matrix")->required();
  auto* c_diag =
      compute->add_subcommand("diagonalize", "rank-one split of a flat bilinear map");
  c_diag->fallthrough();
  c_diag->add_option("--input", input_path, "JSON 3D array h[lambda][i][j]")->required();
  auto* c_sa = compute->add_subcommand("solid-angle", "Monte Carlo cone fractions");
  c_sa->fallthrough();
  c_sa->add_option("--coframe", coframe_path, "JSON n x n coframe matrix")->required();
  auto* c_fc = compute->add_subcommand("fundamental-cycle",
                                       "product-complex cycle as JSON");
  c_fc->fallthrough();
  c_fc->add_option("--n", cycle_n, "ambient dimension (>= 2)")->required();

  auto* report_cmd = app.add_subcommand("report", "run every suite and emit a report");
  report_cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) gblab::report::load_config_file(cfg, config_path);
    gblab::report::apply_env(cfg);
    if (app.count("--seed")) cfg.seed = gblab::report::parse_seed(seed_str);
    if (app.count("--samples")) {
      if (samples <= 0) throw gblab::ConfigError("--samples must be positive");
      cfg.samples = samples;
    }
    if (app.count("--jobs")) {
      if (jobs <= 0) throw gblab::ConfigError("--jobs must be positive");
      cfg.jobs = jobs;
    }
    if (app.count("--resolution")) {
      if (resolution < 33 || resolution % 2 == 0)
        throw gblab::ConfigError("--resolution must be odd and at least 33");
      cfg.resolution["*"] = resolution;
    }
    if (app.count("--format")) cfg.format = gblab::report::parse_format(format_str);
    if (no_timestamp) cfg.timing = false;
    cfg.out_path = out_path;

    if (verify->parsed()) {
      std::vector<Report> reports;
      if (suite == "all")
        reports = gblab::suites::run_all(cfg);
      else
        reports.push_back(gblab::suites::run_suite(suite, cfg));
      return emit_reports(reports, cfg);
    }

    if (report_cmd->parsed()) return emit_reports(gblab::suites::run_all(cfg), cfg);

    if (c_pf->parsed()) {
      auto m = parse_matrix(parse_file(input_path));
      int dim = static_cast<int>(m.size());
      std::vector<double> entries;
      entries.reserve(static_cast<std::size_t>(dim) * dim);
      for (const auto& row : m) entries.insert(entries.end(), row.begin(), row.end());
      double pf = gblab::skew::pfaffian(gblab::skew::SkewMatrix(dim, entries));
      emit(shortest(pf) + "\n", cfg.out_path);
      return 0;
    }

    if (c_diag->parsed()) {
      auto beta = gblab::flatform::tensor_from_json(parse_file(input_path));
      auto d = gblab::flatform::diagonalize(beta);
      emit(gblab::flatform::diagonalization_to_json(d).dump(2) + "\n", cfg.out_path);
      return 0;
    }

    if (c_sa->parsed()) {
      auto coframe = parse_matrix(parse_file(coframe_path));
      gblab::chains::SolidAngleOptions opt;
      opt.seed = cfg.seed;
      opt.samples = static_cast<std::size_t>(cfg.samples);
      auto fractions = gblab::chains::solid_angle_fractions(coframe, opt);
      double sum = 0.0;
      for (double f : fractions) sum += f;
      nlohmann::ordered_json j;
      j["seed"] = std::to_string(cfg.seed);
      j["fractions"] = fractions;
      j["sum"] = sum;
      j["rhs"] = gblab::chains::hazzidakis_rhs(fractions);
      emit(j.dump(2) + "\n", cfg.out_path);
      return 0;
    }

    if (c_fc->parsed()) {
      auto z = gblab::chains::fundamental_cycle(cycle_n);
      emit(gblab::chains::double_chain_to_json(z, cycle_n).dump(2) + "\n", cfg.out_path);
      return 0;
    }

    std::cerr << "error: no command selected\n";
    return 2;
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";  // includes the byte position
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
