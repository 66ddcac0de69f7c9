#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ccurv/ccurv.hpp"
#include "ccurv/constants.hpp"
#include "ccurv/ode.hpp"
#include "ccurv/verify.hpp"

namespace ccurv {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kToolVersion = "0.3.0";

/// %.9g; every human-facing number goes through this.
std::string fmt9(double x);

Json constants_json(const ConstantsTable& table, const ThresholdReport& thresholds,
                    const std::vector<PaperCheck>* paper_checks = nullptr);
std::string constants_text(const ConstantsTable& table, const ThresholdReport& thresholds,
                           const std::vector<PaperCheck>* paper_checks = nullptr);

Json thresholds_json(const ThresholdReport& thresholds);
std::string thresholds_text(const ThresholdReport& thresholds);

Json sample_json(const CCurvSample& s);

Json scan_json(const ScanReport& rep);
/// Header "r0,theta,phi,C,A2,ratio,method,flags"; flags joined with '|'.
void write_scan_csv(std::ostream& os, const ScanReport& rep);

Json bound_report_json(const BoundCheckReport& rep);
std::string bound_report_text(const BoundCheckReport& rep);
/// id,lhs,rhs,margin,pass,r0,theta,phi
void write_bound_csv(std::ostream& os, const BoundCheckReport& rep);

/// FNV-1a over the compact dump.
std::string json_digest(const Json& j);

struct RunManifest {
  std::string subcommand;
  std::string config_hash;  ///< empty when no field config was given
  ode::Tolerance tol = kBundleTolerance;
  Json grid = Json::object();
  double wall_seconds = 0.0;
  std::string result_digest;

  Json to_json() const;
};

}  // namespace ccurv
