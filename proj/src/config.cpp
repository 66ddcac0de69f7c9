#include "ccurv/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "ccurv/error.hpp"

namespace ccurv {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError("config: '" + std::string(key) + "' expects a number, got '" +
                      std::string(v) + "'");
  return out;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

FieldConfig parse_field_config(std::string_view text, const std::filesystem::path& base_dir) {
  FieldConfig cfg;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!seen.insert(std::string(key)).second)
      throw ConfigError("config: repeated key '" + std::string(key) + "'");

    if (key == "family") {
      cfg.family = parse_family(value);
    } else if (key == "kappa0") {
      cfg.kappa0 = parse_number(key, value);
    } else if (key == "amplitude") {
      cfg.amplitude = parse_number(key, value);
    } else if (key == "wave1") {
      cfg.params.wave1 = parse_number(key, value);
    } else if (key == "wave2") {
      cfg.params.wave2 = parse_number(key, value);
    } else if (key == "phase") {
      cfg.params.phase = parse_number(key, value);
    } else if (key == "phase2") {
      cfg.params.phase2 = parse_number(key, value);
    } else if (key == "table") {
      std::filesystem::path p{std::string(value)};
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      cfg.table_path = p.string();
    } else {
      throw ConfigError("config: unknown key '" + std::string(key) + "'");
    }
  }
  if (!seen.contains("family")) throw ConfigError("config: missing 'family'");
  if (cfg.family == Family::user_table) {
    if (cfg.table_path.empty()) throw ConfigError("config: user-table needs 'table'");
    cfg.params.table = load_curvature_table(cfg.table_path);
  } else if (!cfg.table_path.empty()) {
    throw ConfigError("config: 'table' only applies to user-table");
  }
  return cfg;
}

FieldConfig load_field_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open field config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_field_config(ss.str(), path.parent_path());
}

CurvatureTable load_curvature_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open curvature table '" + path.string() + "'");
  CurvatureTable t;
  if (!(in >> t.n1 >> t.n2 >> t.x1_min >> t.x1_max >> t.x2_min >> t.x2_max))
    throw ConfigError("curvature table: malformed header");
  if (t.n1 <= 0 || t.n2 <= 0) throw ConfigError("curvature table: sizes must be positive");
  t.values.resize(static_cast<std::size_t>(t.n1) * static_cast<std::size_t>(t.n2));
  for (double& v : t.values)
    if (!(in >> v)) throw ConfigError("curvature table: expected n1 * n2 values");
  double extra = 0.0;
  if (in >> extra) throw ConfigError("curvature table: trailing values");
  return t;
}

std::string canonical_text(const FieldConfig& cfg) {
  std::string out;
  out += "family=" + std::string(to_string(cfg.family)) + "\n";
  out += "kappa0=" + num(cfg.kappa0) + "\n";
  out += "amplitude=" + num(cfg.amplitude) + "\n";
  out += "wave1=" + num(cfg.params.wave1) + "\n";
  out += "wave2=" + num(cfg.params.wave2) + "\n";
  out += "phase=" + num(cfg.params.phase) + "\n";
  out += "phase2=" + num(cfg.params.phase2) + "\n";
  if (cfg.family == Family::user_table) {
    // content, not path, identifies the table
    const CurvatureTable& t = cfg.params.table;
    std::string body = std::to_string(t.n1) + " " + std::to_string(t.n2) + " " + num(t.x1_min) +
                       " " + num(t.x1_max) + " " + num(t.x2_min) + " " + num(t.x2_max);
    for (double v : t.values) body += " " + num(v);
    out += "table=" + hex64(fnv1a(body)) + "\n";
  }
  return out;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const FieldConfig& cfg) { return hex64(fnv1a(canonical_text(cfg))); }

CurvatureField build_field(const FieldConfig& cfg) {
  return make_field(cfg.family, cfg.kappa0, cfg.amplitude, cfg.params);
}

}  // namespace ccurv
