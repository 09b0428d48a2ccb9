#pragma once
#include <string>
#include <vector>

#include "gblab/report.hpp"

// The seven verification suites behind `verify`: each returns a Report of
// named checks with pinned tolerances.
namespace gblab::suites {

const std::vector<std::string>& suite_names();

// ConfigError on unknown names.
report::Report run_suite(const std::string& name, const report::RunConfig& cfg);

// Every suite in declaration order, at most cfg.jobs running concurrently;
// the merged vector is always ordered like suite_names().
std::vector<report::Report> run_all(const report::RunConfig& cfg);

}  // namespace gblab::suites
