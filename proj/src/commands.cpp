#include "warpstring/commands.hpp"

#include <fstream>
#include <iostream>
#include <stdexcept>

#include "warpstring/report.hpp"

namespace warpstring {

namespace {

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

int cmd_curvature(const RunConfig& cfg) {
  const WarpedMetric g = build_metric(cfg);
  const MembershipVerdict verdict = g.membership(cfg.window.grid_n);
  const std::vector<CurvatureSample> series = curvature_series(g, cfg.window.grid_n);
  if (cfg.out_format == "csv")
    write_output(cfg.out_path, curvature_series_csv(series));
  else
    write_output(cfg.out_path, curvature_report_json(cfg, verdict, series));
  return 0;
}

int cmd_census(const RunConfig& cfg) {
  const WarpedMetric g = build_metric(cfg);
  const CensusReport census = enumerate_strings(g, cfg.cls, cfg.census);
  if (cfg.out_format == "csv")
    write_output(cfg.out_path, census_csv(census));
  else
    write_output(cfg.out_path, census_report_json(cfg, census));
  return 0;
}

int cmd_family(const RunConfig& cfg) {
  if (!cfg.is_family)
    throw ConfigError("family command needs a 'profile_family' expression");
  if (cfg.family_samples.empty())
    throw ConfigError("family command needs a 'family' section with samples or count");

  ProfileExpr family = ProfileExpr::parse(cfg.profile_text);
  MetricPath path(std::move(family), cfg.fiber, cfg.window, cfg.family_samples);

  FamilyOptions opts;
  opts.census = cfg.census;
  opts.membership_grid_n = cfg.membership_grid_n;
  opts.uniform_k = cfg.uniform_k;
  const FamilyReport report = run_family(path, cfg.cls, opts);

  if (cfg.out_format == "csv") {
    write_output(cfg.out_path, family_series_csv(report));
  } else {
    write_output(cfg.out_path, family_report_json(cfg, report));
    // the plot-ready series rides along next to the structured report
    if (!cfg.out_path.empty())
      write_output(cfg.out_path + ".csv", family_series_csv(report));
  }
  return 0;
}

}  // namespace

WarpedMetric build_metric(const RunConfig& cfg) {
  if (cfg.is_family)
    throw ConfigError("this command needs a single 'profile', not a family");
  ProfileExpr f = ProfileExpr::parse(cfg.profile_text);
  return WarpedMetric(std::move(f), cfg.fiber, cfg.window);
}

int run_command(const std::string& command, const RunConfig& cfg, std::ostream& err) {
  try {
    if (command == "curvature") return cmd_curvature(cfg);
    if (command == "census") return cmd_census(cfg);
    if (command == "family") return cmd_family(cfg);
    err << "unknown command: " << command << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "profile expression error at offset " << e.offset << ": " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace warpstring
