#include "ccurv/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <tuple>

#include "ccurv/config.hpp"

namespace ccurv {

namespace {

Json probe_json(const ProbeConfig& p) { return Json{{"r0", p.r0}, {"theta", p.theta}, {"phi", p.phi}}; }

// JSON has no infinity; absent values become null
Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

void put_chosen(Json& j, std::string_view prefix, const ChosenValues& v) {
  const std::pair<const char*, double> items[] = {
      {"eta1", v.eta1},     {"delta1", v.delta1}, {"sigma1", v.sigma1}, {"eta2", v.eta2},
      {"delta2", v.delta2}, {"sigma2", v.sigma2}, {"eta3", v.eta3},     {"sigma3", v.sigma3},
      {"beta", v.beta},     {"gamma", v.gamma},   {"C", v.C},           {"eta", v.eta},
      {"sigma", v.sigma}};
  for (const auto& [name, value] : items) j[std::string(prefix) + "." + name] = value;
}

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

}  // namespace

std::string fmt9(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

Json thresholds_json(const ThresholdReport& th) {
  Json j;
  for (const Threshold& t : th.conditions) j["thresholds." + t.id] = t.value;
  put_chosen(j, "chosen", th.chosen);
  put_chosen(j, "raw", th.raw);
  j["eps_C2"] = th.eps_C2;
  j["beta.roots"] = Json::array({th.beta_roots[0], th.beta_roots[1]});
  j["binding"] = th.binding_near_conjugacy;
  return j;
}

Json constants_json(const ConstantsTable& table, const ThresholdReport& th,
                    const std::vector<PaperCheck>* paper_checks) {
  Json j;
  for (const ConstantEntry& e : table.entries()) {
    j[e.key] = e.value;
    if (e.provenance == Provenance::supremum_search) j[e.key + ".tau"] = e.tau;
  }
  j["C.1.printed"] = table.C1_printed;
  j["pinch"] = table.pinch();
  j.update(thresholds_json(th));
  if (paper_checks) {
    Json checks = Json::array();
    for (const PaperCheck& c : *paper_checks)
      checks.push_back({{"id", c.id},
                        {"computed", c.computed},
                        {"published", c.published},
                        {"tolerance", c.tolerance},
                        {"pass", c.pass}});
    j["paper_checks"] = std::move(checks);
  }
  return j;
}

std::string thresholds_text(const ThresholdReport& th) {
  std::ostringstream os;
  for (const Threshold& t : th.conditions)
    os << pad(t.id, 16) << pad(fmt9(t.value), 18) << t.parameter << '\n';
  os << '\n' << pad("value", 10) << pad("raw", 18) << "chosen\n";
  const std::tuple<const char*, double, double> rows[] = {
      {"eta1", th.raw.eta1, th.chosen.eta1},       {"delta1", th.raw.delta1, th.chosen.delta1},
      {"sigma1", th.raw.sigma1, th.chosen.sigma1}, {"eta2", th.raw.eta2, th.chosen.eta2},
      {"delta2", th.raw.delta2, th.chosen.delta2}, {"sigma2", th.raw.sigma2, th.chosen.sigma2},
      {"eta3", th.raw.eta3, th.chosen.eta3},       {"sigma3", th.raw.sigma3, th.chosen.sigma3},
      {"beta", th.raw.beta, th.chosen.beta},       {"gamma", th.raw.gamma, th.chosen.gamma},
      {"C", th.raw.C, th.chosen.C},                {"eta", th.raw.eta, th.chosen.eta},
      {"sigma", th.raw.sigma, th.chosen.sigma}};
  for (const auto& [name, raw, chosen] : rows)
    os << pad(name, 10) << pad(fmt9(raw), 18) << fmt9(chosen) << '\n';
  os << "eps*C2 <= " << fmt9(th.eps_C2) << "   binding near conjugacy: "
     << th.binding_near_conjugacy << '\n';
  return os.str();
}

std::string constants_text(const ConstantsTable& table, const ThresholdReport& th,
                           const std::vector<PaperCheck>* paper_checks) {
  std::ostringstream os;
  for (const ConstantEntry& e : table.entries()) {
    os << pad(e.key, 10) << pad(fmt9(e.value), 18) << pad(std::string(to_string(e.provenance)), 16);
    if (e.provenance == Provenance::supremum_search) os << "tau=" << fmt9(e.tau);
    os << '\n';
  }
  os << pad("C.1.printed", 12) << fmt9(table.C1_printed) << '\n';
  os << pad("pinch", 12) << fmt9(table.pinch()) << "\n\n";
  os << thresholds_text(th);
  if (paper_checks) {
    os << '\n';
    for (const PaperCheck& c : *paper_checks)
      os << (c.pass ? "PASS  " : "FAIL  ") << pad(c.id, 22) << pad(fmt9(c.computed), 18)
         << pad(fmt9(c.published), 18) << c.tolerance << '\n';
  }
  return os.str();
}

Json sample_json(const CCurvSample& s) {
  Json j = probe_json(s.probe);
  j["C"] = s.value;
  j["A2"] = s.a2;
  j["ratio"] = s.ratio ? Json(*s.ratio) : Json(nullptr);
  j["parts"] = {{"e1", s.parts.e1}, {"e2", s.parts.e2}, {"e3", s.parts.e3}};
  j["alt_a"] = s.alt_a;
  j["alt_b"] = s.alt_b;
  j["method"] = to_string(s.method);
  j["rank_one"] = s.rank_one;
  return j;
}

Json scan_json(const ScanReport& rep) {
  Json j;
  j["field"] = rep.field_id;
  j["grid"] = {{"nr", rep.grid.nr}, {"ntheta", rep.grid.ntheta}, {"nphi", rep.grid.nphi}};
  j["sigma"] = rep.sigma_used;
  j["epsilon"] = rep.epsilon_used;
  j["conj_margin"] = rep.conj_margin;
  j["ell0"] = finite_or_null(rep.ell0);
  j["exploratory"] = rep.exploratory;
  j["samples"] = rep.samples.size();
  j["min_ratio"] = finite_or_null(rep.min_ratio);
  j["argmin"] = probe_json(rep.argmin);
  j["rank_one_count"] = rep.rank_one_count;
  j["rank_one_max"] = rep.rank_one_max;
  Json viol = Json::array();
  for (const ProbeConfig& p : rep.violations) viol.push_back(probe_json(p));
  j["violations"] = std::move(viol);
  Json fail = Json::array();
  for (const ScanFailure& f : rep.failures) {
    Json e = probe_json(f.probe);
    e["message"] = f.message;
    fail.push_back(std::move(e));
  }
  j["failures"] = std::move(fail);
  j["clean"] = rep.clean();
  return j;
}

void write_scan_csv(std::ostream& os, const ScanReport& rep) {
  os << "r0,theta,phi,C,A2,ratio,method,flags\n";
  char buf[256];
  for (const CCurvSample& s : rep.samples) {
    std::string flags;
    auto add = [&](const char* f) {
      if (!flags.empty()) flags += '|';
      flags += f;
    };
    if (s.rank_one) add("rank1");
    const double target = rep.sigma_used * s.a2;
    if (s.value < target - violation_slack(target)) add("violation");
    if (rep.exploratory) add("exploratory");
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,", s.probe.r0, s.probe.theta,
                  s.probe.phi, s.value, s.a2);
    os << buf;
    if (s.ratio) {
      std::snprintf(buf, sizeof buf, "%.17g", *s.ratio);
      os << buf;
    }
    os << ',' << to_string(s.method) << ',' << flags << '\n';
  }
}

Json bound_report_json(const BoundCheckReport& rep) {
  Json j;
  j["epsilon"] = rep.epsilon;
  j["all_pass"] = rep.all_pass();
  Json checks = Json::array();
  for (const BoundCheck& c : rep.checks)
    checks.push_back({{"id", c.id},
                      {"lhs", c.lhs},
                      {"rhs", c.rhs},
                      {"margin", c.margin},
                      {"pass", c.pass},
                      {"worst", probe_json(c.worst)}});
  j["checks"] = std::move(checks);
  if (const BoundCheck* w = rep.worst()) j["worst"] = w->id;
  return j;
}

std::string bound_report_text(const BoundCheckReport& rep) {
  std::ostringstream os;
  for (const BoundCheck& c : rep.checks)
    os << (c.pass ? "PASS  " : "FAIL  ") << pad(c.id, 20) << pad(fmt9(c.lhs), 18) << "<= "
       << pad(fmt9(c.rhs), 18) << "margin " << fmt9(c.margin) << '\n';
  os << "epsilon " << fmt9(rep.epsilon) << ", " << rep.checks.size() << " checks, "
     << (rep.all_pass() ? "all pass" : "FAILURES") << '\n';
  return os.str();
}

void write_bound_csv(std::ostream& os, const BoundCheckReport& rep) {
  os << "id,lhs,rhs,margin,pass,r0,theta,phi\n";
  char buf[200];
  for (const BoundCheck& c : rep.checks) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d,%.17g,%.17g,%.17g", c.lhs, c.rhs,
                  c.margin, c.pass ? 1 : 0, c.worst.r0, c.worst.theta, c.worst.phi);
    os << c.id << ',' << buf << '\n';
  }
}

std::string json_digest(const Json& j) { return hex64(fnv1a(j.dump())); }

Json RunManifest::to_json() const {
  Json j;
  j["tool_version"] = kToolVersion;
  j["subcommand"] = subcommand;
  j["config_hash"] = config_hash.empty() ? Json(nullptr) : Json(config_hash);
  j["tolerances"] = {{"rel", tol.rel}, {"abs", tol.abs}};
  j["grid"] = grid;
  j["wall_seconds"] = wall_seconds;
  j["result_digest"] = result_digest;
  return j;
}

}  // namespace ccurv
