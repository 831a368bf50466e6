#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "specflow/counting.hpp"
#include "specflow/matrix_sf.hpp"
#include "specflow/profiles.hpp"

namespace specflow {

using Json = nlohmann::ordered_json;

// Shortest round-trip-safe decimal form with 17 significant digits.
std::string fmt17(double x);

// Parses a JSON file; syntax errors become UsageError "path:line:col: ...".
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
// Creates dir if needed and probes it with a scratch file; UsageError when not writable.
void ensure_writable_dir(const std::string& dir);

Json profile_to_json(const ContactProfile& p);
ContactProfile profile_from_json(const Json& j);
ContactProfile load_profile(const std::string& path);

// "V=5,eps=0.01" for binding; "V=30,v=0.5,N=1,sign=1,eps=0.01" for Dehn.
ContactProfile binding_from_spec(const std::string& spec);
ContactProfile dehn_from_spec(const std::string& spec);

Json sigma_to_json(const SigmaData& sd);
SigmaData sigma_from_json(const Json& j);
SigmaData load_sigma(const std::string& path);

// {"dim": n, "matrices": [[[re, im], ...row-major...], ...], "s": [optional knots]}
HermitianPath path_from_json(const Json& j);
HermitianPath load_path(const std::string& path);

struct RGrid {
  double min = 20.0;
  double max = 160.0;
  int points = 4;
  bool geometric = true;
  std::vector<double> values() const;
};

struct ExperimentConfig {
  std::optional<Json> binding;  // inline object or {"path": ...}
  std::optional<Json> dehn;
  std::optional<Json> sigma;
  std::optional<std::string> sector;
  std::optional<RGrid> r_grid;
  std::optional<int> n_cells;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  std::optional<int> threads;
};

// Validates the schema (requires "version": 1); violations name the offending line.
ExperimentConfig load_config(const std::string& path);
ContactProfile profile_from_config_entry(const Json& entry, ProfileKind expected);

}  // namespace specflow
