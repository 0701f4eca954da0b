#pragma once

#include <string>
#include <vector>

#include "warpstring/census.hpp"
#include "warpstring/config.hpp"
#include "warpstring/family.hpp"

namespace warpstring {

/// Append-only JSON writer with fixed key order and %.17g float formatting,
/// so identical inputs serialize byte-identically.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& k);
  JsonWriter& value(double v);
  JsonWriter& value(long long v);
  JsonWriter& value(int v) { return value(static_cast<long long>(v)); }
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const char* v) { return value(std::string(v)); }
  JsonWriter& null();

  const std::string& str() const { return out_; }

 private:
  void separator();
  std::string out_;
  std::vector<bool> has_item_;
  bool pending_key_ = false;
};

std::string format_double(double v);

/// Point sample of the curvature series emitted by the curvature command.
struct CurvatureSample {
  double x;
  double k_base;
  bool has_fiber = false;
  double k_fiber = 0.0;
};

std::vector<CurvatureSample> curvature_series(const WarpedMetric& g, int grid_n);

std::string curvature_report_json(const RunConfig& cfg, const MembershipVerdict& verdict,
                                  const std::vector<CurvatureSample>& series);
std::string curvature_series_csv(const std::vector<CurvatureSample>& series);

std::string census_report_json(const RunConfig& cfg, const CensusReport& census);
std::string census_csv(const CensusReport& census);

std::string family_report_json(const RunConfig& cfg, const FamilyReport& report);
std::string family_series_csv(const FamilyReport& report);

}  // namespace warpstring
