#include "warpstring/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "warpstring/errors.hpp"

namespace warpstring {

namespace {

using nlohmann::json;

double require_positive(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const double v = j.at(key).get<double>();
  if (!(v > 0.0)) throw ConfigError(std::string(key) + " must be positive");
  return v;
}

int require_int(const json& j, const char* key, int fallback, int min_value) {
  if (!j.contains(key)) return fallback;
  const int v = j.at(key).get<int>();
  if (v < min_value)
    throw ConfigError(std::string(key) + " must be >= " + std::to_string(min_value));
  return v;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  RunConfig cfg;
  try {
    const bool has_profile = j.contains("profile");
    const bool has_family = j.contains("profile_family");
    if (has_profile == has_family)
      throw ConfigError("config needs exactly one of 'profile' or 'profile_family'");
    cfg.is_family = has_family;
    cfg.profile_text = j.at(has_family ? "profile_family" : "profile").get<std::string>();
    if (cfg.profile_text.empty()) throw ConfigError("profile expression is empty");

    if (j.contains("fiber")) {
      const json& f = j.at("fiber");
      const std::string kind = f.value("kind", "circle");
      const double length = require_positive(f, "length", 2.0 * M_PI);
      if (kind == "circle") {
        cfg.fiber = FiberModel::circle(length);
      } else if (kind == "abstract-geodesic") {
        const int m = require_int(f, "transverse_dimension", 1, 0);
        if (!f.contains("transverse_curvature"))
          throw ConfigError("abstract-geodesic fiber needs transverse_curvature");
        cfg.fiber = FiberModel::abstract_geodesic(
            length, m, f.at("transverse_curvature").get<double>());
      } else {
        throw ConfigError("fiber kind must be 'circle' or 'abstract-geodesic'");
      }
    }

    if (j.contains("class")) {
      cfg.cls.winding = j.at("class").value("winding", 1);
      if (cfg.cls.winding == 0) throw ConfigError("winding must be nonzero");
    }

    if (j.contains("window")) {
      const json& w = j.at("window");
      cfg.window.half_width = require_positive(w, "half_width", cfg.window.half_width);
      cfg.window.grid_n = require_int(w, "grid_n", cfg.window.grid_n, 2);
      if (w.contains("probe_radii")) {
        cfg.window.probe_radii = w.at("probe_radii").get<std::vector<double>>();
        for (std::size_t i = 0; i < cfg.window.probe_radii.size(); ++i) {
          if (!(cfg.window.probe_radii[i] > cfg.window.half_width))
            throw ConfigError("probe radii must exceed half_width");
          if (i > 0 && !(cfg.window.probe_radii[i] > cfg.window.probe_radii[i - 1]))
            throw ConfigError("probe radii must be strictly increasing");
        }
      }
    }

    if (j.contains("solver")) {
      const json& s = j.at("solver");
      cfg.census.n_points = require_int(s, "n_points", cfg.census.n_points, 8);
      cfg.census.starts = require_int(s, "starts", cfg.census.starts, 1);
      cfg.census.dedup_tol = require_positive(s, "dedup_tol", cfg.census.dedup_tol);
      cfg.census.solver.tol_grad = require_positive(s, "tol_grad", cfg.census.solver.tol_grad);
      cfg.census.solver.eps_len = require_positive(s, "eps_len", cfg.census.solver.eps_len);
      cfg.census.solver.max_iter = require_int(s, "max_iter", cfg.census.solver.max_iter, 1);
    }

    if (j.contains("family")) {
      const json& fam = j.at("family");
      if (fam.contains("samples") == fam.contains("count"))
        throw ConfigError("family needs exactly one of 'samples' or 'count'");
      if (fam.contains("samples")) {
        cfg.family_samples = fam.at("samples").get<std::vector<double>>();
      } else {
        const int count = fam.at("count").get<int>();
        if (count < 2) throw ConfigError("family count must be >= 2");
        cfg.family_samples.resize(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i)
          cfg.family_samples[static_cast<std::size_t>(i)] =
              static_cast<double>(i) / (count - 1);
      }
    }

    if (j.contains("output")) {
      const json& o = j.at("output");
      cfg.out_format = o.value("format", cfg.out_format);
      if (cfg.out_format != "json" && cfg.out_format != "csv")
        throw ConfigError("output format must be 'json' or 'csv'");
      cfg.out_path = o.value("path", cfg.out_path);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace warpstring
