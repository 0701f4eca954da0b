#include "warpstring/report.hpp"

#include <cstdio>

namespace warpstring {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string escape_json(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\r':
        out += "\\r";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

}  // namespace

void JsonWriter::separator() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (!has_item_.empty()) {
    if (has_item_.back()) out_ += ',';
    has_item_.back() = true;
  }
}

JsonWriter& JsonWriter::begin_object() {
  separator();
  out_ += '{';
  has_item_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += '}';
  has_item_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separator();
  out_ += '[';
  has_item_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += ']';
  has_item_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
  separator();
  out_ += '"';
  out_ += escape_json(k);
  out_ += "\":";
  pending_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  separator();
  out_ += format_double(v);
  return *this;
}

JsonWriter& JsonWriter::value(long long v) {
  separator();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  separator();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
  separator();
  out_ += '"';
  out_ += escape_json(v);
  out_ += '"';
  return *this;
}

JsonWriter& JsonWriter::null() {
  separator();
  out_ += "null";
  return *this;
}

namespace {

void write_config_echo(JsonWriter& w, const RunConfig& cfg) {
  w.key("config").begin_object();
  w.key(cfg.is_family ? "profile_family" : "profile").value(cfg.profile_text);
  w.key("fiber").begin_object();
  w.key("kind").value(cfg.fiber.kind == FiberModel::Kind::Circle ? "circle" : "abstract-geodesic");
  w.key("length").value(cfg.fiber.length);
  w.key("transverse_dimension").value(cfg.fiber.transverse_dimension);
  w.key("transverse_curvature").value(cfg.fiber.transverse_curvature);
  w.end_object();
  w.key("winding").value(cfg.cls.winding);
  w.key("window").begin_object();
  w.key("half_width").value(cfg.window.half_width);
  w.key("grid_n").value(cfg.window.grid_n);
  w.key("probe_radii").begin_array();
  for (double r : cfg.window.probe_radii) w.value(r);
  w.end_array();
  w.end_object();
  w.key("solver").begin_object();
  w.key("n_points").value(cfg.census.n_points);
  w.key("starts").value(cfg.census.starts);
  w.key("dedup_tol").value(cfg.census.dedup_tol);
  w.key("tol_grad").value(cfg.census.solver.tol_grad);
  w.key("eps_len").value(cfg.census.solver.eps_len);
  w.key("max_iter").value(cfg.census.solver.max_iter);
  w.end_object();
  if (cfg.is_family) {
    w.key("samples").begin_array();
    for (double s : cfg.family_samples) w.value(s);
    w.end_array();
  }
  w.end_object();
}

void write_membership(JsonWriter& w, const MembershipVerdict& v) {
  w.begin_object();
  w.key("nonpositive_everywhere").value(v.nonpositive_everywhere);
  w.key("ends_negative").value(v.ends_negative);
  w.key("witness");
  if (v.witness)
    w.value(*v.witness);
  else
    w.null();
  w.key("end_bound_T");
  if (v.end_bound_T)
    w.value(*v.end_bound_T);
  else
    w.null();
  w.end_object();
}

void write_rational(JsonWriter& w, const std::optional<Rational>& f) {
  if (f) {
    w.begin_object();
    w.key("num").value(static_cast<long long>(f->num));
    w.key("den").value(static_cast<long long>(f->den));
    w.end_object();
  } else {
    w.null();
  }
}

void write_string_full(JsonWriter& w, const GeodesicString& s) {
  w.begin_object();
  w.key("x0").value(s.base_x);
  w.key("length").value(s.length);
  w.key("morse_index").value(s.morse_index);
  w.key("nullity").value(s.nullity);
  w.key("multiplicity").value(s.multiplicity);
  w.key("transverse_index");
  if (s.transverse_index)
    w.value(*s.transverse_index);
  else
    w.null();
  w.key("nondegenerate").value(s.nondegenerate);
  w.key("circle").value(s.circle);
  w.end_object();
}

void write_census_result(JsonWriter& w, const CensusReport& census) {
  w.begin_object();
  w.key("regular").value(census.regular);
  w.key("F");
  write_rational(w, census.F);
  w.key("n_used").value(census.n_used);
  w.key("tolerances").begin_object();
  w.key("tol_grad").value(census.solver_used.tol_grad);
  w.key("switch_grad").value(census.solver_used.switch_grad);
  w.key("tol_zero").value(census.solver_used.tol_zero);
  w.key("eps_len").value(census.solver_used.eps_len);
  w.key("dedup_tol").value(census.dedup_tol_used);
  w.end_object();
  w.key("strings").begin_array();
  for (const GeodesicString& s : census.strings) write_string_full(w, s);
  w.end_array();
  w.key("starts").begin_array();
  for (const StartRecord& r : census.starts) {
    w.begin_object();
    w.key("kind").value(r.kind);
    w.key("start_x").value(r.start_x);
    w.key("status").value(to_string(r.status));
    w.key("iterations").value(r.iterations);
    w.key("final_length").value(r.final_length);
    w.key("final_grad").value(r.final_grad);
    w.key("final_min_x").value(r.final_min_x);
    w.key("monotone_length").value(r.monotone_length);
    w.end_object();
  }
  w.end_array();
  w.key("notes").begin_array();
  for (const std::string& n : census.notes) w.value(n);
  w.end_array();
  w.end_object();
}

}  // namespace

std::vector<CurvatureSample> curvature_series(const WarpedMetric& g, int grid_n) {
  std::vector<CurvatureSample> out;
  const Window& w = g.window();
  const bool fiber_planes = g.fiber().transverse_dimension >= 1;
  auto sample = [&](double x) {
    CurvatureSample s;
    s.x = x;
    s.k_base = g.base_curvature(x);
    if (fiber_planes) {
      s.has_fiber = true;
      s.k_fiber = g.fiber_plane_curvature(x);
    }
    out.push_back(s);
  };
  for (int i = 0; i < grid_n; ++i)
    sample(-w.half_width + 2.0 * w.half_width * i / (grid_n - 1));
  for (double r : w.probe_radii) {
    sample(-r);
    sample(r);
  }
  return out;
}

std::string curvature_report_json(const RunConfig& cfg, const MembershipVerdict& verdict,
                                  const std::vector<CurvatureSample>& series) {
  JsonWriter w;
  w.begin_object();
  w.key("schema_version").value(1);
  w.key("command").value("curvature");
  write_config_echo(w, cfg);
  w.key("result").begin_object();
  w.key("membership");
  write_membership(w, verdict);
  w.key("series").begin_array();
  for (const CurvatureSample& s : series) {
    w.begin_object();
    w.key("x").value(s.x);
    w.key("k_base").value(s.k_base);
    if (s.has_fiber) w.key("k_fiber").value(s.k_fiber);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  w.end_object();
  return w.str() + "\n";
}

std::string curvature_series_csv(const std::vector<CurvatureSample>& series) {
  const bool fiber = !series.empty() && series.front().has_fiber;
  std::string out = fiber ? "x,k_base,k_fiber\n" : "x,k_base\n";
  for (const CurvatureSample& s : series) {
    out += format_double(s.x);
    out += ',';
    out += format_double(s.k_base);
    if (fiber) {
      out += ',';
      out += format_double(s.k_fiber);
    }
    out += '\n';
  }
  return out;
}

std::string census_report_json(const RunConfig& cfg, const CensusReport& census) {
  JsonWriter w;
  w.begin_object();
  w.key("schema_version").value(1);
  w.key("command").value("census");
  write_config_echo(w, cfg);
  w.key("result");
  write_census_result(w, census);
  w.end_object();
  return w.str() + "\n";
}

std::string census_csv(const CensusReport& census) {
  std::string out = "x0,length,morse_index,nullity,multiplicity,transverse_index,nondegenerate\n";
  for (const GeodesicString& s : census.strings) {
    out += format_double(s.base_x);
    out += ',';
    out += format_double(s.length);
    out += ',';
    out += std::to_string(s.morse_index);
    out += ',';
    out += std::to_string(s.nullity);
    out += ',';
    out += std::to_string(s.multiplicity);
    out += ',';
    out += s.transverse_index ? std::to_string(*s.transverse_index) : std::string();
    out += ',';
    out += s.nondegenerate ? "1" : "0";
    out += '\n';
  }
  return out;
}

std::string family_report_json(const RunConfig& cfg, const FamilyReport& report) {
  JsonWriter w;
  w.begin_object();
  w.key("schema_version").value(1);
  w.key("command").value("family");
  write_config_echo(w, cfg);
  w.key("result").begin_object();
  w.key("samples").begin_array();
  for (const SampleRecord& r : report.records) {
    w.begin_object();
    w.key("s").value(r.s);
    w.key("constructed").value(r.constructed);
    if (!r.constructed) {
      w.key("construct_error").value(r.construct_error);
    } else {
      w.key("membership");
      write_membership(w, r.membership);
      w.key("regular").value(r.census.regular);
      w.key("F");
      write_rational(w, r.census.F);
      w.key("strings").begin_array();
      for (const GeodesicString& s : r.census.strings) write_string_full(w, s);
      w.end_array();
      w.key("escaped_starts").value([&] {
        long long c = 0;
        for (const StartRecord& sr : r.census.starts)
          if (sr.status == SolveStatus::Escaped) ++c;
        return c;
      }());
      w.key("dist_prev");
      if (r.has_distance)
        w.value(r.dist_prev);
      else
        w.null();
      w.key("diverging").value(r.diverging);
      w.key("continuation_escaped").value(r.continuation_escaped);
    }
    w.end_object();
  }
  w.end_array();
  w.key("events").begin_array();
  for (const FamilyEvent& e : report.events) {
    w.begin_object();
    w.key("s_lo").value(e.s_lo);
    w.key("s_hi").value(e.s_hi);
    w.key("kind").value(to_string(e.kind));
    w.key("detail").value(e.detail);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  w.end_object();
  return w.str() + "\n";
}

std::string family_series_csv(const FamilyReport& report) {
  std::string out = "s,F_num,F_den,x0,length,dist_prev,diverging,events\n";
  for (const SampleRecord& r : report.records) {
    out += format_double(r.s);
    out += ',';
    if (r.constructed && r.census.F) {
      out += std::to_string(r.census.F->num);
      out += ',';
      out += std::to_string(r.census.F->den);
    } else {
      out += ',';
    }
    out += ',';
    if (r.constructed && !r.census.strings.empty()) {
      out += format_double(r.census.strings.front().base_x);
      out += ',';
      out += format_double(r.census.strings.front().length);
    } else {
      out += ',';
    }
    out += ',';
    if (r.has_distance) out += format_double(r.dist_prev);
    out += ',';
    out += r.diverging ? "1" : "0";
    out += ',';
    bool first = true;
    for (const FamilyEvent& e : report.events) {
      if (e.s_hi == r.s) {
        if (!first) out += ';';
        out += to_string(e.kind);
        first = false;
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace warpstring
