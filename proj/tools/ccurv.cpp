// ccurv: c-curvature of 2-D surfaces from a Gauss-curvature field.
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ccurv/ccurv.hpp"
#include "ccurv/config.hpp"
#include "ccurv/constants.hpp"
#include "ccurv/error.hpp"
#include "ccurv/jacobi.hpp"
#include "ccurv/report.hpp"
#include "ccurv/verify.hpp"

using namespace ccurv;

namespace {

constexpr double kPi = std::numbers::pi;

enum Exit : int { kOk = 0, kConfig = 2, kNumerical = 3, kViolation = 4 };

struct Common {
  std::string field_path;
  std::string out;
  std::string format = "text";
  double tol_rel = kBundleTolerance.rel;
  double tol_abs = kBundleTolerance.abs;
  std::uint64_t seed = 20240611;

  ode::Tolerance tol() const {
    if (!(tol_rel > 0.0) || !(tol_abs > 0.0)) throw ConfigError("tolerances must be positive");
    return {tol_rel, tol_abs};
  }
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct LoadedField {
  FieldConfig config;
  CurvatureField field;
  std::string hash;
};

LoadedField load(const Common& c) {
  if (c.field_path.empty()) throw ConfigError("--field is required");
  FieldConfig cfg = load_field_config(c.field_path);
  CurvatureField f = build_field(cfg);
  return {cfg, std::move(f), config_hash(cfg)};
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os || !(os << body)) throw Error(ErrorKind::io, "cannot write '" + path + "'");
}

// PREFIX.json, PREFIX.csv (when tabular), PREFIX.manifest.json
void write_outputs(const Common& c, const Json& result, const std::function<void(std::ostream&)>& csv,
                   RunManifest manifest, const Stopwatch& clock) {
  manifest.result_digest = json_digest(result);
  manifest.wall_seconds = clock.seconds();
  if (c.out.empty()) return;
  write_file(c.out + ".json", result.dump(2) + "\n");
  if (csv) {
    std::ostringstream os;
    csv(os);
    write_file(c.out + ".csv", os.str());
  }
  write_file(c.out + ".manifest.json", manifest.to_json().dump(2) + "\n");
}

void add_format(CLI::App* app, Common& c, std::vector<std::string> allowed) {
  app->add_option("--format", c.format, "Output format on stdout")
      ->check(CLI::IsMember(std::move(allowed)))
      ->capture_default_str();
}

void add_field(CLI::App* app, Common& c) {
  app->add_option("--field", c.field_path, "Field configuration file")
      ->required()
      ->check(CLI::ExistingFile);
}

void add_tol(CLI::App* app, Common& c) {
  app->add_option("--tol-rel", c.tol_rel, "Relative integration tolerance")->capture_default_str();
  app->add_option("--tol-abs", c.tol_abs, "Absolute integration tolerance")->capture_default_str();
}

void add_out(CLI::App* app, Common& c, const char* what) { app->add_option("--out", c.out, what); }

int verdict(bool ok) { return ok ? kOk : kViolation; }

void print_bound_report(const Common& c, const BoundCheckReport& rep) {
  if (c.format == "json")
    std::cout << bound_report_json(rep).dump(2) << '\n';
  else if (c.format == "csv")
    write_bound_csv(std::cout, rep);
  else
    std::cout << bound_report_text(rep);
}

int bound_command(const Common& c, const char* name, const BoundCheckReport& rep,
                  const std::string& hash, Json grid, const Stopwatch& clock) {
  print_bound_report(c, rep);
  RunManifest m;
  m.subcommand = name;
  m.config_hash = hash;
  m.grid = std::move(grid);
  write_outputs(
      c, bound_report_json(rep), [&](std::ostream& os) { write_bound_csv(os, rep); }, m, clock);
  return verdict(rep.all_pass());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"c-curvature of 2-D surfaces from a Gauss-curvature field", "ccurv"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  Common c;
  std::function<int()> run;

  // constants
  std::size_t grid = SupOptions{}.n_grid;
  bool check_paper = false;
  auto* constants = app.add_subcommand("constants", "Universal constants and smallness thresholds");
  constants->add_option("--grid", grid, "Grid points for the supremum searches")
      ->check(CLI::Range(std::size_t{100'000}, std::size_t{100'000'001}))
      ->capture_default_str();
  constants->add_flag("--check-paper", check_paper, "Compare against the published values");
  add_out(constants, c, "Write the table to PATH (JSON unless --format text)");
  add_format(constants, c, {"json", "text"});
  constants->callback([&] {
    run = [&]() -> int {
      const ConstantsTable table =
          grid == SupOptions{}.n_grid ? default_constants() : compute_constants({grid, 1e-10});
      const ThresholdReport th = smallness_thresholds(table);
      std::vector<PaperCheck> checks;
      if (check_paper) checks = check_against_paper(table, th);
      const auto* pc = check_paper ? &checks : nullptr;
      // a file gets JSON unless text was asked for explicitly
      const bool json = c.format == "json" || (!c.out.empty() && constants->count("--format") == 0);
      const std::string body =
          json ? constants_json(table, th, pc).dump(2) + "\n" : constants_text(table, th, pc);
      if (c.out.empty())
        std::cout << body;
      else
        write_file(c.out, body);
      bool ok = true;
      for (const PaperCheck& p : checks) ok = ok && p.pass;
      return verdict(ok);
    };
  });

  // thresholds
  auto* thresholds = app.add_subcommand("thresholds", "Smallness conditions and chosen values");
  add_out(thresholds, c, "Write the report to PATH");
  add_format(thresholds, c, {"json", "text"});
  thresholds->callback([&] {
    run = [&]() -> int {
      const ThresholdReport th = smallness_thresholds(default_constants());
      const std::string body =
          c.format == "json" ? thresholds_json(th).dump(2) + "\n" : thresholds_text(th);
      if (c.out.empty())
        std::cout << body;
      else
        write_file(c.out, body);
      return kOk;
    };
  });

  // eval
  ProbeConfig probe{1.0, kPi / 2, kPi / 2};
  bool oracle = false;
  auto* eval = app.add_subcommand("eval", "c-curvature at one probe");
  add_field(eval, c);
  eval->add_option("--r0", probe.r0, "Base velocity length")->capture_default_str();
  eval->add_option("--theta", probe.theta, "Angle of xi")->capture_default_str();
  eval->add_option("--phi", probe.phi, "Angle of nu")->capture_default_str();
  eval->add_flag("--oracle", oracle, "Also evaluate the finite-difference oracle");
  add_tol(eval, c);
  add_format(eval, c, {"json", "text"});
  eval->callback([&] {
    run = [&]() -> int {
      const LoadedField lf = load(c);
      const CCurvSample s = c_curvature(lf.field, probe, c.tol());
      Json j = sample_json(s);
      if (oracle) {
        const double fd = c_curvature_fd_oracle(lf.field, probe);
        j["oracle"] = fd;
        j["oracle_gap"] = std::abs(s.value - fd) / std::max(std::abs(s.value), 1e-300);
      }
      if (c.format == "json") {
        std::cout << j.dump(2) << '\n';
        return kOk;
      }
      std::cout << "C       " << fmt9(s.value) << '\n'
                << "A2      " << fmt9(s.a2) << '\n'
                << "ratio   " << (s.ratio ? fmt9(*s.ratio) : std::string("-")) << '\n'
                << "parts   " << fmt9(s.parts.e1) << ' ' << fmt9(s.parts.e2) << ' '
                << fmt9(s.parts.e3) << '\n'
                << "method  " << to_string(s.method) << '\n';
      if (s.rank_one) std::cout << "flags   rank1\n";
      if (oracle)
        std::cout << "oracle  " << fmt9(j["oracle"].get<double>()) << "  gap "
                  << fmt9(j["oracle_gap"].get<double>()) << '\n';
      return kOk;
    };
  });

  // scan
  ScanGrid scan_grid;
  double sigma = 3.21e-9, conj_margin = 1e-3;
  auto* scan = app.add_subcommand("scan", "Almost-positivity scan over (r0, theta, phi)");
  add_field(scan, c);
  scan->add_option("--nr", scan_grid.nr, "r0 nodes")->capture_default_str();
  scan->add_option("--nth", scan_grid.ntheta, "theta nodes")->capture_default_str();
  scan->add_option("--nph", scan_grid.nphi, "phi nodes")->capture_default_str();
  scan->add_option("--sigma", sigma, "Lower-bound factor on A2")->capture_default_str();
  scan->add_option("--conj-margin", conj_margin, "Relative distance kept from conjugacy")
      ->capture_default_str();
  add_tol(scan, c);
  add_out(scan, c, "Write PATH.csv, PATH.json and PATH.manifest.json");
  add_format(scan, c, {"json", "csv", "text"});
  scan->callback([&] {
    run = [&]() -> int {
      Stopwatch clock;
      const LoadedField lf = load(c);
      const ScanReport rep = scan_apcc(lf.field, scan_grid, sigma, conj_margin, std::nullopt, c.tol());
      const Json j = scan_json(rep);
      if (c.format == "json") {
        std::cout << j.dump(2) << '\n';
      } else if (c.format == "csv") {
        write_scan_csv(std::cout, rep);
      } else {
        std::cout << "field        " << rep.field_id << '\n'
                  << "samples      " << rep.samples.size() << '\n'
                  << "min ratio    " << fmt9(rep.min_ratio) << " at r0=" << fmt9(rep.argmin.r0)
                  << " theta=" << fmt9(rep.argmin.theta) << " phi=" << fmt9(rep.argmin.phi) << '\n'
                  << "violations   " << rep.violations.size() << '\n'
                  << "failures     " << rep.failures.size() << '\n'
                  << "rank1        " << rep.rank_one_count << " max |C| " << fmt9(rep.rank_one_max)
                  << '\n'
                  << "epsilon      " << fmt9(rep.epsilon_used)
                  << (rep.exploratory ? "  (exploratory: above the proven threshold)" : "") << '\n';
      }
      RunManifest m;
      m.subcommand = "scan";
      m.config_hash = lf.hash;
      m.tol = c.tol();
      m.grid = {{"nr", scan_grid.nr}, {"ntheta", scan_grid.ntheta}, {"nphi", scan_grid.nphi},
                {"sigma", sigma},     {"conj_margin", conj_margin}};
      write_outputs(c, j, [&](std::ostream& os) { write_scan_csv(os, rep); }, m, clock);
      if (!rep.failures.empty()) return kNumerical;
      return verdict(rep.clean());
    };
  });

  // conjugate
  auto* conjugate = app.add_subcommand("conjugate", "Conjugate distance l0 along the axis");
  add_field(conjugate, c);
  add_tol(conjugate, c);
  add_out(conjugate, c, "Write PATH.json and PATH.manifest.json");
  add_format(conjugate, c, {"json", "text"});
  conjugate->callback([&] {
    run = [&]() -> int {
      Stopwatch clock;
      const LoadedField lf = load(c);
      const double ell0 = conjugate_distance(lf.field, c.tol());
      const Json j{{"field", lf.field.describe()}, {"ell0", ell0}};
      std::cout << (c.format == "json" ? j.dump(2) : fmt9(ell0)) << '\n';
      RunManifest m;
      m.subcommand = "conjugate";
      m.config_hash = lf.hash;
      m.tol = c.tol();
      write_outputs(c, j, nullptr, m, clock);
      return kOk;
    };
  });

  // boundary
  auto* boundary = app.add_subcommand("boundary", "Curvature of the NoConj boundary at (0, l0)");
  add_field(boundary, c);
  add_out(boundary, c, "Write PATH.json and PATH.manifest.json");
  add_format(boundary, c, {"json", "text"});
  boundary->callback([&] {
    run = [&]() -> int {
      Stopwatch clock;
      const LoadedField lf = load(c);
      const BoundaryCurvature b = noconj_boundary_curvature(lf.field);
      const Json j{{"field", lf.field.describe()},
                   {"k", b.k},
                   {"ell0", b.ell0},
                   {"D1f1", b.d1},
                   {"D2f1", b.d2},
                   {"D11f1", b.d11},
                   {"D12f1", b.d12},
                   {"D22f1", b.d22}};
      std::cout << (c.format == "json" ? j.dump(2) : fmt9(b.k)) << '\n';
      RunManifest m;
      m.subcommand = "boundary";
      m.config_hash = lf.hash;
      write_outputs(c, j, nullptr, m, clock);
      return kOk;
    };
  });

  // verify
  auto* verify = app.add_subcommand("verify", "Bound and property suites");
  verify->require_subcommand(1);

  auto* lemma = verify->add_subcommand("lemma", "Perturbation bounds on the 3x3 (r0, phi) grid");
  add_field(lemma, c);
  add_out(lemma, c, "Write PATH.csv, PATH.json and PATH.manifest.json");
  add_format(lemma, c, {"json", "csv", "text"});
  lemma->callback([&] {
    run = [&]() -> int {
      Stopwatch clock;
      const LoadedField lf = load(c);
      const std::vector<double> r0s{0.5, 1.5, 2.5}, phis{0.0, kPi / 3, kPi / 2};
      const BoundCheckReport rep = verify_lemma_bounds(lf.field, r0s, phis);
      return bound_command(c, "verify lemma", rep, lf.hash, {{"r0", r0s}, {"phi", phis}}, clock);
    };
  });

  int n_probes = 20;
  auto* corollary = verify->add_subcommand("corollary", "Maclaurin residual against its bound");
  add_field(corollary, c);
  corollary->add_option("--probes", n_probes, "Number of random probes")
      ->check(CLI::Range(1, 100000))
      ->capture_default_str();
  corollary->add_option("--seed", c.seed, "Seed of the probe generator")->capture_default_str();
  add_out(corollary, c, "Write PATH.csv, PATH.json and PATH.manifest.json");
  add_format(corollary, c, {"json", "csv", "text"});
  corollary->callback([&] {
    run = [&]() -> int {
      Stopwatch clock;
      const LoadedField lf = load(c);
      std::mt19937_64 rng(c.seed);
      std::uniform_real_distribution<double> r0_dist(0.1, 2.8), angle(0.0, 2.0 * kPi);
      std::vector<ProbeConfig> probes(static_cast<std::size_t>(n_probes));
      for (ProbeConfig& p : probes) {
        p.r0 = r0_dist(rng);
        p.theta = angle(rng);
        p.phi = angle(rng);
      }
      const BoundCheckReport rep = verify_corollary(lf.field, probes);
      return bound_command(c, "verify corollary", rep, lf.hash,
                           {{"probes", n_probes}, {"seed", c.seed}}, clock);
    };
  });

  std::size_t h_grid = 10'001;
  auto* hfuncs = verify->add_subcommand("hfuncs", "Monotonicity and minorants of h1, h2, mu1");
  hfuncs->add_option("--grid", h_grid, "Grid points per range")
      ->check(CLI::Range(std::size_t{11}, std::size_t{10'000'001}))
      ->capture_default_str();
  add_out(hfuncs, c, "Write PATH.csv, PATH.json and PATH.manifest.json");
  add_format(hfuncs, c, {"json", "csv", "text"});
  hfuncs->callback([&] {
    run = [&]() -> int {
      Stopwatch clock;
      return bound_command(c, "verify hfuncs", hfunction_checks(h_grid), {}, {{"n", h_grid}},
                           clock);
    };
  });

  auto* sturm = verify->add_subcommand("sturm", "Sturm comparison and pinching near conjugacy");
  add_field(sturm, c);
  add_out(sturm, c, "Write PATH.csv, PATH.json and PATH.manifest.json");
  add_format(sturm, c, {"json", "csv", "text"});
  sturm->callback([&] {
    run = [&]() -> int {
      Stopwatch clock;
      const LoadedField lf = load(c);
      const double reach = std::min(conjugate_distance(lf.field), kPi);
      const std::vector<double> r0s{0.2 * reach, 0.5 * reach, 0.8 * reach};
      const BoundCheckReport rep = sturm_and_pinch_suite(lf.field, r0s);
      return bound_command(c, "verify sturm", rep, lf.hash, {{"r0", r0s}}, clock);
    };
  });

  std::optional<double> delta1, delta2;
  auto* mu1 = verify->add_subcommand("mu1", "Lower bounds on mu1 in both cases");
  mu1->add_option("--delta1", delta1, "delta1 (default: chosen value)");
  mu1->add_option("--delta2", delta2, "delta2 (default: chosen value)");
  add_out(mu1, c, "Write PATH.csv, PATH.json and PATH.manifest.json");
  add_format(mu1, c, {"json", "csv", "text"});
  mu1->callback([&] {
    run = [&]() -> int {
      Stopwatch clock;
      const ChosenValues& chosen = smallness_thresholds(default_constants()).chosen;
      const double d1 = delta1.value_or(chosen.delta1), d2 = delta2.value_or(chosen.delta2);
      if (!(d1 > 0.0 && d1 < 1.0 && d2 > 0.0 && d2 < 1.0))
        throw ConfigError("delta1 and delta2 must lie in (0, 1)");
      return bound_command(c, "verify mu1", mu1_minorant_check(d1, d2), {},
                           {{"delta1", d1}, {"delta2", d2}}, clock);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    return run();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::numerical ? kNumerical : kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
}
