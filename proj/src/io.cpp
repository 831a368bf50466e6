#include "specflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "specflow/errors.hpp"

namespace specflow {

namespace {

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::size_t line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  return pos == std::string::npos ? 1 : line_col(text, pos).first;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_text(const std::string& text, const std::string& path) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw UsageError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
}

double num(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw UsageError(where + ": missing field '" + key + "'");
  if (!j.at(key).is_number()) throw UsageError(where + ": field '" + key + "' must be a number");
  return j.at(key).get<double>();
}

std::vector<std::pair<std::string, double>> parse_kv(const std::string& spec) {
  std::vector<std::pair<std::string, double>> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("expected key=value in '" + item + "'");
    const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    try {
      std::size_t used = 0;
      const double d = std::stod(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
      out.emplace_back(key, d);
    } catch (const std::logic_error&) {
      throw UsageError("value for '" + key + "' is not a number: '" + val + "'");
    }
  }
  return out;
}

}  // namespace

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json read_json_file(const std::string& path) { return parse_text(read_text(path), path); }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

Json profile_to_json(const ContactProfile& p) {
  Json j;
  j["kind"] = to_string(p.kind);
  j["V"] = p.params.V;
  j["eps"] = p.params.eps;
  if (p.kind == ProfileKind::dehn_twist) {
    j["v"] = p.params.v;
    j["twist"] = {{"N", p.params.twist->N}, {"sign", p.params.twist->sign}};
  }
  Json table = Json::array();
  for (const auto& pc : p.pieces) table.push_back({{"label", pc.label}, {"lo", pc.lo}, {"hi", pc.hi}});
  j["junctions"] = table;
  return j;
}

ContactProfile profile_from_json(const Json& j) {
  if (!j.is_object()) throw UsageError("profile: expected a JSON object");
  if (!j.contains("kind") || !j.at("kind").is_string()) throw UsageError("profile: missing string field 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  const double V = num(j, "V", "profile");
  const double eps = j.contains("eps") ? num(j, "eps", "profile") : 0.01;
  ContactProfile p;
  if (kind == "binding") {
    p = build_binding_profile(V, eps);
  } else if (kind == "dehn_twist" || kind == "dehn") {
    const double v = num(j, "v", "profile");
    int N = 1, sign = 1;
    if (j.contains("twist")) {
      const Json& t = j.at("twist");
      N = static_cast<int>(num(t, "N", "profile.twist"));
      sign = static_cast<int>(num(t, "sign", "profile.twist"));
    }
    p = build_dehn_profile(V, v, make_twist(N, sign, eps), eps);
  } else {
    throw UsageError("profile: unknown kind '" + kind + "' (binding or dehn_twist)");
  }
  if (j.contains("junctions")) {
    const Json& t = j.at("junctions");
    if (!t.is_array() || t.size() != p.pieces.size())
      throw DataInconsistencyError("profile: junction table does not match the rebuilt profile");
    for (std::size_t i = 0; i < p.pieces.size(); ++i) {
      const double lo = num(t[i], "lo", "profile.junctions"), hi = num(t[i], "hi", "profile.junctions");
      if (std::abs(lo - p.pieces[i].lo) > 1e-12 || std::abs(hi - p.pieces[i].hi) > 1e-12)
        throw DataInconsistencyError("profile: junction " + std::to_string(i) + " differs from the rebuilt profile");
    }
  }
  return p;
}

ContactProfile load_profile(const std::string& path) { return profile_from_json(read_json_file(path)); }

ContactProfile binding_from_spec(const std::string& spec) {
  double V = 5.0, eps = 0.01;
  for (const auto& [k, v] : parse_kv(spec)) {
    if (k == "V")
      V = v;
    else if (k == "eps")
      eps = v;
    else
      throw UsageError("unknown binding parameter '" + k + "' (V, eps)");
  }
  return build_binding_profile(V, eps);
}

ContactProfile dehn_from_spec(const std::string& spec) {
  double V = 30.0, v = 0.5, eps = 0.01;
  int N = 1, sign = 1;
  for (const auto& [k, x] : parse_kv(spec)) {
    if (k == "V")
      V = x;
    else if (k == "v")
      v = x;
    else if (k == "eps")
      eps = x;
    else if (k == "N")
      N = static_cast<int>(x);
    else if (k == "sign")
      sign = static_cast<int>(x);
    else
      throw UsageError("unknown dehn parameter '" + k + "' (V, v, N, sign, eps)");
  }
  return build_dehn_profile(V, v, make_twist(N, sign, eps), eps);
}

Json sigma_to_json(const SigmaData& sd) {
  Json j;
  j["V"] = sd.V;
  j["area"] = sd.area;
  j["euler"] = sd.euler;
  Json cs = Json::array();
  for (const auto& c : sd.circles)
    cs.push_back({{"slope", c.slope},
                  {"offset", c.offset},
                  {"orientation", c.orientation},
                  {"kind", c.kind == CircleKind::binding ? "binding" : "dehn"}});
  j["circles"] = cs;
  return j;
}

SigmaData sigma_from_json(const Json& j) {
  if (!j.is_object()) throw UsageError("sigma: expected a JSON object");
  SigmaData sd;
  sd.V = num(j, "V", "sigma");
  sd.area = num(j, "area", "sigma");
  sd.euler = static_cast<long>(num(j, "euler", "sigma"));
  if (!j.contains("circles") || !j.at("circles").is_array()) throw UsageError("sigma: missing array 'circles'");
  for (const auto& c : j.at("circles")) {
    BoundaryCircle bc;
    bc.slope = num(c, "slope", "sigma.circles");
    bc.offset = c.contains("offset") ? num(c, "offset", "sigma.circles") : 0.0;
    bc.orientation = c.contains("orientation") ? static_cast<int>(num(c, "orientation", "sigma.circles")) : 1;
    if (bc.orientation != 1 && bc.orientation != -1) throw UsageError("sigma.circles: orientation must be +1 or -1");
    const std::string kind = c.value("kind", std::string("binding"));
    if (kind != "binding" && kind != "dehn") throw UsageError("sigma.circles: kind must be binding or dehn");
    bc.kind = kind == "binding" ? CircleKind::binding : CircleKind::dehn;
    sd.circles.push_back(bc);
  }
  return sd;
}

SigmaData load_sigma(const std::string& path) { return sigma_from_json(read_json_file(path)); }

HermitianPath path_from_json(const Json& j) {
  if (!j.is_object()) throw UsageError("path: expected a JSON object");
  const int dim = static_cast<int>(num(j, "dim", "path"));
  if (dim < 1) throw UsageError("path: dim must be positive");
  if (!j.contains("matrices") || !j.at("matrices").is_array()) throw UsageError("path: missing array 'matrices'");
  std::vector<HMatrix> mats;
  for (const auto& m : j.at("matrices")) {
    if (!m.is_array() || m.size() != static_cast<std::size_t>(dim) * dim)
      throw UsageError("path: each matrix needs dim*dim [re, im] entries in row-major order");
    HMatrix H(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) {
        const Json& e = m[static_cast<std::size_t>(r * dim + c)];
        if (e.is_number())
          H(r, c) = {e.get<double>(), 0.0};
        else if (e.is_array() && e.size() == 2)
          H(r, c) = {e[0].get<double>(), e[1].get<double>()};
        else
          throw UsageError("path: matrix entries must be numbers or [re, im] pairs");
      }
    if (hermiticity_defect(H) > 1e-12 * std::max(1.0, H.norm())) throw UsageError("path: a sampled matrix is not Hermitian");
    mats.push_back(H);
  }
  std::vector<double> s;
  if (j.contains("s")) s = j.at("s").get<std::vector<double>>();
  return sampled_path(std::move(mats), std::move(s));
}

void ensure_writable_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw UsageError("output directory " + dir + " cannot be created");
  const std::filesystem::path probe = std::filesystem::path(dir) / ".specflow_probe";
  {
    std::ofstream out(probe);
    if (!out) throw UsageError("output directory " + dir + " is not writable");
  }
  std::filesystem::remove(probe, ec);
}

HermitianPath load_path(const std::string& path) { return path_from_json(read_json_file(path)); }

std::vector<double> RGrid::values() const {
  std::vector<double> out;
  if (points == 1) return {min};
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    out.push_back(geometric ? min * std::pow(max / min, t) : min + (max - min) * t);
  }
  return out;
}

ExperimentConfig load_config(const std::string& path) {
  const std::string text = read_text(path);
  const Json j = parse_text(text, path);
  auto fail = [&](const std::string& key, const std::string& msg) -> UsageError {
    return UsageError(path + ":" + std::to_string(line_of_key(text, key)) + ": " + msg);
  };
  if (!j.is_object()) throw UsageError(path + ":1: config must be a JSON object");
  if (!j.contains("version")) throw UsageError(path + ":1: missing \"version\": 1");
  if (!j.at("version").is_number_integer() || j.at("version").get<int>() != 1)
    throw fail("version", "unsupported config version (expected 1)");

  static const char* known[] = {"version", "binding", "dehn", "sigma", "sector", "r_grid",
                                "solver", "seed", "output_dir", "threads"};
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw fail(key, "unknown config key '" + key + "'");
  }

  ExperimentConfig cfg;
  for (const char* k : {"binding", "dehn", "sigma"}) {
    if (!j.contains(k)) continue;
    const Json& e = j.at(k);
    if (!e.is_object() && !e.is_string()) throw fail(k, std::string("'") + k + "' must be an object or a file path");
    std::optional<Json>& slot = std::string(k) == "binding" ? cfg.binding : std::string(k) == "dehn" ? cfg.dehn : cfg.sigma;
    slot = e;
  }
  if (j.contains("sector")) {
    if (!j.at("sector").is_string()) throw fail("sector", "'sector' must be a string");
    try {
      sector_kind_from_string(j.at("sector").get<std::string>());
    } catch (const std::exception& e) {
      throw fail("sector", e.what());
    }
    cfg.sector = j.at("sector").get<std::string>();
  }
  if (j.contains("r_grid")) {
    const Json& g = j.at("r_grid");
    if (!g.is_object()) throw fail("r_grid", "'r_grid' must be an object");
    RGrid rg;
    for (const auto& [key, v] : g.items()) {
      if (key == "min" || key == "max") {
        if (!v.is_number()) throw fail(key, "r_grid." + key + " must be a number");
        (key == "min" ? rg.min : rg.max) = v.get<double>();
      } else if (key == "points") {
        if (!v.is_number_integer() || v.get<int>() < 1) throw fail(key, "r_grid.points must be a positive integer");
        rg.points = v.get<int>();
      } else if (key == "spacing") {
        const std::string s = v.is_string() ? v.get<std::string>() : "";
        if (s != "linear" && s != "geometric") throw fail(key, "r_grid.spacing must be linear or geometric");
        rg.geometric = s == "geometric";
      } else {
        throw fail(key, "unknown r_grid key '" + key + "'");
      }
    }
    if (rg.min < 10.0) throw fail("r_grid", "r_grid.min must be at least the validity floor 10");
    if (rg.max < rg.min) throw fail("r_grid", "r_grid.max must be >= r_grid.min");
    cfg.r_grid = rg;
  }
  if (j.contains("solver")) {
    const Json& s = j.at("solver");
    if (!s.is_object()) throw fail("solver", "'solver' must be an object");
    for (const auto& [key, v] : s.items()) {
      if (key == "n_cells") {
        if (!v.is_number_integer() || v.get<int>() < 200) throw fail(key, "solver.n_cells must be an integer >= 200");
        cfg.n_cells = v.get<int>();
      } else if (key == "tol") {
        if (!v.is_number() || !(v.get<double>() > 0.0)) throw fail(key, "solver.tol must be a positive number");
        cfg.tol = v.get<double>();
      } else {
        throw fail(key, "unknown solver key '" + key + "'");
      }
    }
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw fail("seed", "'seed' must be a non-negative integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("output_dir")) {
    if (!j.at("output_dir").is_string()) throw fail("output_dir", "'output_dir' must be a string");
    cfg.output_dir = j.at("output_dir").get<std::string>();
    try {
      ensure_writable_dir(*cfg.output_dir);
    } catch (const UsageError& e) {
      throw fail("output_dir", e.what());
    }
  }
  if (j.contains("threads")) {
    if (!j.at("threads").is_number_integer() || j.at("threads").get<int>() < 0)
      throw fail("threads", "'threads' must be a non-negative integer");
    cfg.threads = j.at("threads").get<int>();
  }
  return cfg;
}

ContactProfile profile_from_config_entry(const Json& entry, ProfileKind expected) {
  ContactProfile p;
  if (entry.is_string()) {
    p = load_profile(entry.get<std::string>());
  } else {
    Json e = entry;
    if (!e.contains("kind")) e["kind"] = to_string(expected);
    p = profile_from_json(e);
  }
  if (p.kind != expected) throw UsageError(std::string("config: expected a ") + to_string(expected) + " profile");
  return p;
}

}  // namespace specflow
