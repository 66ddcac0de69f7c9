#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "ccurv/field.hpp"

namespace ccurv {

/// Parsed field configuration file.
///
///   # comment
///   family=cosine-bump
///   kappa0=1
///   amplitude=1e-3
///   wave1=1
///   wave2=1
///   phase=0
///   phase2=0          (product-wave)
///   table=FILE        (user-table, relative to the config file)
struct FieldConfig {
  Family family = Family::constant;
  double kappa0 = 1.0;
  double amplitude = 0.0;
  FieldParams params;
  std::string table_path;
};

/// Throws ConfigError on unknown or repeated keys, bad numbers, or a missing
/// family. `base_dir` resolves relative table paths.
FieldConfig parse_field_config(std::string_view text, const std::filesystem::path& base_dir = {});
FieldConfig load_field_config(const std::filesystem::path& path);

/// Reads a table file: "n1 n2 x1_min x1_max x2_min x2_max" then n2 rows of n1 values.
CurvatureTable load_curvature_table(const std::filesystem::path& path);

/// Key order and number formatting fixed, so equal configs hash equally.
std::string canonical_text(const FieldConfig& cfg);

std::uint64_t fnv1a(std::string_view bytes);
/// 16 lowercase hex digits.
std::string hex64(std::uint64_t h);
std::string config_hash(const FieldConfig& cfg);

CurvatureField build_field(const FieldConfig& cfg);

}  // namespace ccurv
