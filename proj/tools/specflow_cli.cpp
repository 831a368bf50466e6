#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "specflow/almost_eigen.hpp"
#include "specflow/counting.hpp"
#include "specflow/errors.hpp"
#include "specflow/io.hpp"
#include "specflow/matrix_sf.hpp"
#include "specflow/oscillator.hpp"
#include "specflow/profiles.hpp"
#include "specflow/radial_dirac.hpp"

using namespace specflow;

namespace {

// Rows of CSV cells; the same table is rendered as JSON under --json.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Json>> rows;

  std::string csv() const {
    std::ostringstream o;
    for (std::size_t i = 0; i < header.size(); ++i) o << (i ? "," : "") << header[i];
    o << "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        o << (i ? "," : "");
        const Json& c = r[i];
        if (c.is_number_float())
          o << fmt17(c.get<double>());
        else if (c.is_string())
          o << c.get<std::string>();
        else
          o << c.dump();
      }
      o << "\n";
    }
    return o.str();
  }

  Json json() const {
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json o;
      for (std::size_t i = 0; i < header.size(); ++i) o[header[i]] = r[i];
      arr.push_back(o);
    }
    return arr;
  }
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

struct Globals {
  std::string config_path;
  int threads = 0;
  ExperimentConfig cfg;
};

ContactProfile profile_arg(const std::string& arg, ProfileKind kind) {
  if (std::filesystem::exists(arg)) {
    ContactProfile p = load_profile(arg);
    if (p.kind != kind) throw UsageError(arg + ": expected a " + to_string(kind) + " profile");
    return p;
  }
  return kind == ProfileKind::binding ? binding_from_spec(arg) : dehn_from_spec(arg);
}

struct ProfileOpts {
  std::string binding, dehn, file;
  void add(CLI::App* sub) {
    sub->add_option("--binding", binding, "binding profile: key=value list (V, eps) or JSON file");
    sub->add_option("--dehn", dehn, "Dehn-twist profile: key=value list (V, v, N, sign, eps) or JSON file");
    sub->add_option("--profile", file, "profile JSON file");
  }
  ContactProfile resolve(const Globals& g) const {
    const int given = !binding.empty() + !dehn.empty() + !file.empty();
    if (given > 1) throw UsageError("give at most one of --binding, --dehn, --profile");
    if (!binding.empty()) return profile_arg(binding, ProfileKind::binding);
    if (!dehn.empty()) return profile_arg(dehn, ProfileKind::dehn_twist);
    if (!file.empty()) return load_profile(file);
    if (g.cfg.binding) return profile_from_config_entry(*g.cfg.binding, ProfileKind::binding);
    if (g.cfg.dehn) return profile_from_config_entry(*g.cfg.dehn, ProfileKind::dehn_twist);
    return build_binding_profile(5.0, 0.01);
  }
};

void emit(const Table& t, bool json, const std::string& out_path = "") {
  const std::string text = json ? dump(t.json()) : t.csv();
  if (out_path.empty())
    std::cout << text;
  else
    write_text_file(out_path, text);
}

int threads_of(const Globals& g) { return g.threads > 0 ? g.threads : g.cfg.threads.value_or(0); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral flow experiments for S1 x S1 symmetric contact forms", "specflow"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "experiment config (JSON, \"version\": 1)");
  app.add_option("--threads", g.threads, "worker threads (0: all cores; SPECFLOW_THREADS overrides)");

  // profile validate
  auto* profile = app.add_subcommand("profile", "profile construction and checks");
  profile->require_subcommand(1);
  auto* pvalidate = profile->add_subcommand("validate", "check the profile invariants");
  ProfileOpts pv_prof;
  bool pv_json = false;
  int pv_samples = 10000;
  std::string pv_save;
  pv_prof.add(pvalidate);
  pvalidate->add_option("--samples", pv_samples, "grid points for sampled checks");
  pvalidate->add_option("--save", pv_save, "also write the profile JSON here");
  pvalidate->add_flag("--json", pv_json, "emit JSON mirroring the CSV");

  // modes table
  auto* modes = app.add_subcommand("modes", "mode localization data");
  modes->require_subcommand(1);
  auto* mtable = modes->add_subcommand("table", "modes with gamma <= r");
  ProfileOpts mt_prof;
  double mt_r = 30.0;
  std::string mt_sector;
  bool mt_json = false, mt_taylor = false;
  mt_prof.add(mtable);
  mtable->add_option("--r", mt_r, "largest gamma");
  mtable->add_option("--sector", mt_sector, "all, binding or dehn");
  mtable->add_flag("--taylor", mt_taylor, "include Taylor coefficients of interior modes");
  mtable->add_flag("--json", mt_json, "emit JSON mirroring the CSV");

  // sf model / sf matrix
  auto* sf = app.add_subcommand("sf", "spectral flow");
  sf->require_subcommand(1);
  auto* sfmodel = sf->add_subcommand("model", "per-mode zero crossings of the radial Dirac operators");
  ProfileOpts sm_prof;
  double sm_r = 0.0;
  std::string sm_sector, sm_out;
  int sm_cells = 0;
  double sm_margin = kCrossingMargin;
  bool sm_json = false, sm_quiet = false;
  sm_prof.add(sfmodel);
  sfmodel->add_option("--r", sm_r, "spectral parameter r (>= 10)")->required();
  sfmodel->add_option("--sector", sm_sector, "all, binding or dehn");
  sfmodel->add_option("--n-cells", sm_cells, "grid cells per mode");
  sfmodel->add_option("--margin", sm_margin, "crossing bracket half-width around gamma");
  sfmodel->add_option("--out", sm_out, "write the table here instead of stdout");
  sfmodel->add_flag("--quiet", sm_quiet, "no progress on stderr");
  sfmodel->add_flag("--json", sm_json, "emit JSON mirroring the CSV");

  auto* sfmatrix = sf->add_subcommand("matrix", "spectral flow of a sampled Hermitian path");
  std::string sx_path;
  int sx_grid = kDefaultSfGrid;
  double sx_tol = kDefaultSfTol;
  bool sx_json = false;
  sfmatrix->add_option("--path-file", sx_path, "path JSON: {dim, matrices, s?}")->required();
  sfmatrix->add_option("--grid", sx_grid, "samples along the path");
  sfmatrix->add_option("--tol", sx_tol, "crossing tolerance");
  sfmatrix->add_flag("--json", sx_json, "emit JSON mirroring the CSV");

  // oscillator check
  auto* osc = app.add_subcommand("oscillator", "harmonic-oscillator checks");
  osc->require_subcommand(1);
  auto* ocheck = osc->add_subcommand("check", "Green bound, kernel annihilation and decay bound");
  std::vector<double> oc_gamma{10.0, 100.0, 1000.0};
  long oc_trials = 1000;
  std::uint64_t oc_seed = 0;
  bool oc_seed_given = false, oc_json = false;
  ocheck->add_option("--gamma", oc_gamma, "gamma values")->delimiter(',');
  ocheck->add_option("--trials", oc_trials, "random Green trials in total");
  ocheck->add_option("--seed", oc_seed, "seed")->each([&](const std::string&) { oc_seed_given = true; });
  ocheck->add_flag("--json", oc_json, "emit JSON mirroring the CSV");

  // asymptotics
  auto* asym = app.add_subcommand("asymptotics", "combined decomposition report");
  std::string as_b, as_d, as_s, as_out;
  double as_rmin = 20.0, as_rmax = 160.0;
  int as_points = 4;
  bool as_json = false;
  asym->add_option("--binding", as_b, "binding profile JSON file or key=value list");
  asym->add_option("--dehn", as_d, "Dehn-twist profile JSON file or key=value list");
  asym->add_option("--sigma", as_s, "page data JSON file");
  asym->add_option("--rmin", as_rmin, "smallest r");
  asym->add_option("--rmax", as_rmax, "largest r");
  asym->add_option("--points", as_points, "number of r values (geometric spacing)");
  asym->add_option("--out", as_out, "directory for report.csv and report.json");
  asym->add_flag("--json", as_json, "emit JSON mirroring the CSV");

  // index-sigma
  auto* isig = app.add_subcommand("index-sigma", "index of the page operators");
  std::string is_sigma;
  double is_V = 5.0, is_v = 0.5;
  long is_nmax = 100;
  bool is_json = false;
  isig->add_option("--sigma", is_sigma, "page data JSON file (default page when absent)");
  isig->add_option("--V", is_V, "V for the default page");
  isig->add_option("--v", is_v, "v for the default page");
  isig->add_option("--n-max", is_nmax, "largest n");
  isig->add_flag("--json", is_json, "emit JSON mirroring the CSV");

  // lemmas run
  auto* lem = app.add_subcommand("lemmas", "linear-algebra lemmas");
  lem->require_subcommand(1);
  auto* lrun = lem->add_subcommand("run", "randomized lemma suite");
  long lr_trials = 500;
  std::uint64_t lr_seed = 42;
  bool lr_seed_given = false, lr_json = false;
  long lr_coh = 100000;
  lrun->add_option("--trials", lr_trials, "random systems and coherence sets");
  lrun->add_option("--seed", lr_seed, "seed")->each([&](const std::string&) { lr_seed_given = true; });
  lrun->add_option("--coherence-trials", lr_coh, "random draws in the coherence search");
  lrun->add_flag("--json", lr_json, "emit JSON mirroring the CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  try {
    if (!g.config_path.empty()) g.cfg = load_config(g.config_path);

    if (*pvalidate) {
      const ContactProfile p = pv_prof.resolve(g);
      Table t{{"check", "ok", "detail"}, {}};
      bool all = true;
      for (const auto& c : validate_profile(p, pv_samples)) {
        t.rows.push_back({c.name, c.ok, c.detail});
        all = all && c.ok;
      }
      t.rows.push_back({"integral_delta", true, fmt17(integral_delta(p))});
      if (!pv_save.empty()) write_text_file(pv_save, dump(profile_to_json(p)));
      emit(t, pv_json);
      return all ? 0 : 1;
    }

    if (*mtable) {
      const ContactProfile p = mt_prof.resolve(g);
      const std::string sec = !mt_sector.empty() ? mt_sector : g.cfg.sector.value_or("all");
      const SectorSpec S = sector_for(p, sector_kind_from_string(sec));
      Table t{{"k", "m", "rho_star", "gamma", "pole"}, {}};
      if (mt_taylor) t.header.insert(t.header.end(), {"c1", "c2", "c3", "r1", "r2", "r3", "r4"});
      for (const auto& mp : enumerate_modes(p, mt_r, S)) {
        const bool pole = is_pole_mode(p, mp);
        std::vector<Json> row{mp.k, mp.m, mp.rho_star, mp.gamma, pole};
        if (mt_taylor) {
          const TaylorData td = pole ? pole_taylor(mp) : taylor_at(p, mp);
          for (double x : {td.c1, td.c2, td.c3, td.r1, td.r2, td.r3, td.r4}) row.push_back(x);
        }
        t.rows.push_back(row);
      }
      emit(t, mt_json);
      return 0;
    }

    if (*sfmodel) {
      const ContactProfile p = sm_prof.resolve(g);
      const std::string sec = !sm_sector.empty() ? sm_sector : g.cfg.sector.value_or("all");
      ModelSfOptions o;
      o.n_cells = sm_cells > 0 ? sm_cells : g.cfg.n_cells.value_or(kDefaultCells);
      o.margin = sm_margin;
      o.threads = threads_of(g);
      o.progress = !sm_quiet;
      const ModelSfResult res = model_sf(p, sm_r, sector_for(p, sector_kind_from_string(sec)), o);
      Table t{{"k", "m", "gamma", "r_star", "residual"}, {}};
      for (const auto& row : res.table) t.rows.push_back({row.k, row.m, row.gamma, row.r_star, row.residual});
      std::cerr << "crossings with r* <= " << fmt17(sm_r) << ": " << res.count << "\n";
      if (sm_json) {
        Json j{{"r", sm_r}, {"sector", sec}, {"count", res.count}, {"rows", t.json()}};
        const std::string text = dump(j);
        if (sm_out.empty())
          std::cout << text;
        else
          write_text_file(sm_out, text);
      } else {
        emit(t, false, sm_out);
      }
      return 0;
    }

    if (*sfmatrix) {
      const HermitianPath path = load_path(sx_path);
      const SfResult r = spectral_flow(path, sx_grid, sx_tol);
      Table t{{"s_star", "sign", "multiplicity", "lambda_prime"}, {}};
      for (const auto& c : r.crossings) t.rows.push_back({c.s_star, c.sign, c.multiplicity, c.lambda_prime});
      std::cerr << "spectral flow: " << r.flow << "\n";
      if (sx_json)
        std::cout << dump(Json{{"flow", r.flow}, {"crossings", t.json()}});
      else
        emit(t, false);
      return 0;
    }

    if (*ocheck) {
      const std::uint64_t seed = oc_seed_given ? oc_seed : g.cfg.seed.value_or(42);
      if (oc_gamma.empty() || oc_trials < 1) throw UsageError("need at least one gamma and one trial");
      Table t{{"check", "gamma", "value", "limit", "ok"}, {}};
      bool all = true;
      auto add = [&](const std::string& name, double gamma, double value, double limit) {
        const bool ok = value <= limit;
        all = all && ok;
        t.rows.push_back({name, gamma, value, limit, ok});
      };
      const long per = (oc_trials + static_cast<long>(oc_gamma.size()) - 1) / static_cast<long>(oc_gamma.size());
      for (std::size_t gi = 0; gi < oc_gamma.size(); ++gi) {
        const double gm = oc_gamma[gi];
        if (!(gm > 0.0)) throw UsageError("gamma must be positive");
        double worst = 0.0;
        for (long i = 0; i < per; ++i)
          worst = std::max(worst, green1d_random_trial(gm, seed + 1000003ULL * gi + static_cast<std::uint64_t>(i)).ratio);
        add("green_ratio_max", gm, worst, 1.0);
        add("annihilation_1d", gm, annihilation_residual_1d(gm), 1e-8);
        add("annihilation_2d_k0", gm, annihilation_residual_2d(gm, 0), 1e-8);
        add("annihilation_2d_k5", gm, annihilation_residual_2d(gm, 5), 1e-8);
      }
      double worst = 0.0;
      for (long k : {0L, 1L, 2L, 3L, 5L, 10L, 30L, 100L, 300L, 1000L})
        for (double mult : {1.0, 1.1, 1.5, 2.0, 4.0, 10.0, 30.0, 100.0, 300.0, 1000.0}) {
          const long m = static_cast<long>(std::ceil(311.5 * static_cast<double>(std::max(k, 1L)) * mult));
          for (int j = 0; j < 10; ++j) {
            const DecayResult d = decay_bound(k, m, 0.09 * std::pow(20.0, j / 9.0));
            worst = std::max(worst, d.value / d.bound);
          }
        }
      add("decay_value_over_bound", 0.0, worst, 1.0);
      emit(t, oc_json);
      return all ? 0 : 1;
    }

    if (*asym) {
      const ContactProfile b = !as_b.empty()   ? profile_arg(as_b, ProfileKind::binding)
                               : g.cfg.binding ? profile_from_config_entry(*g.cfg.binding, ProfileKind::binding)
                                               : build_binding_profile(30.0, 0.01);
      const ContactProfile d = !as_d.empty() ? profile_arg(as_d, ProfileKind::dehn_twist)
                               : g.cfg.dehn  ? profile_from_config_entry(*g.cfg.dehn, ProfileKind::dehn_twist)
                                             : build_dehn_profile(30.0, 0.5, make_twist(1, 1, 0.01), 0.01);
      SigmaData sd = default_sigma(b.params.V, d.params.v);
      if (!as_s.empty())
        sd = load_sigma(as_s);
      else if (g.cfg.sigma)
        sd = g.cfg.sigma->is_string() ? load_sigma(g.cfg.sigma->get<std::string>()) : sigma_from_json(*g.cfg.sigma);
      if (b.params.V != sd.V || d.params.V != sd.V)
        throw UsageError("binding, Dehn and page data must share one V");
      RGrid grid{as_rmin, as_rmax, as_points, true};
      if (g.cfg.r_grid && as_rmin == 20.0 && as_rmax == 160.0 && as_points == 4) grid = *g.cfg.r_grid;
      if (grid.min < kValidityFloor) throw UsageError("rmin must be at least 10");
      if (grid.max < grid.min || grid.points < 1) throw UsageError("bad r grid");
      const AsymptoticReport rep = asymptotic_report(b, d, sd, grid.values());
      Table t{{"r", "I_check", "I_tilde", "I_sigma_sum", "combined", "predicted", "remainder_over_r"}, {}};
      for (const auto& r : rep.rows)
        t.rows.push_back({r.r, r.I_check, r.I_tilde, r.I_sigma_sum, r.combined, r.predicted, r.remainder_over_r});
      Json j{{"integral_binding", rep.integral_binding},
             {"integral_dehn", rep.integral_dehn},
             {"a_wedge_da", rep.a_wedge_da},
             {"leading_coefficient", rep.leading_coefficient},
             {"trend_growth", rep.trend_growth},
             {"rows", t.json()}};
      const std::string dir = !as_out.empty() ? as_out : g.cfg.output_dir.value_or(".");
      ensure_writable_dir(dir);
      write_text_file((std::filesystem::path(dir) / "report.csv").string(), t.csv());
      write_text_file((std::filesystem::path(dir) / "report.json").string(), dump(j));
      std::cout << (as_json ? dump(j) : t.csv());
      return 0;
    }

    if (*isig) {
      const SigmaData sd = !is_sigma.empty() ? load_sigma(is_sigma)
                           : g.cfg.sigma     ? (g.cfg.sigma->is_string() ? load_sigma(g.cfg.sigma->get<std::string>())
                                                                         : sigma_from_json(*g.cfg.sigma))
                                             : default_sigma(is_V, is_v);
      if (is_nmax < 1) throw UsageError("--n-max must be positive");
      Table t{{"n", "raw", "index"}, {}};
      for (long n = 1; n <= is_nmax; ++n) t.rows.push_back({n, index_sigma_raw(sd, n), index_sigma(sd, n)});
      emit(t, is_json);
      return 0;
    }

    if (*lrun) {
      const std::uint64_t seed = lr_seed_given ? lr_seed : g.cfg.seed.value_or(42);
      const LemmaSuiteSummary s = run_lemma_suite(lr_trials, seed, threads_of(g), lr_coh);
      Table t{{"key", "value"}, {}};
      t.rows = {{"trials", s.trials},
                {"seed", s.seed},
                {"matchings_found", s.matchings_found},
                {"hypothesis_failures", s.hypothesis_failures},
                {"worst_gap_over_bound", s.worst_gap_ratio},
                {"welch_sets", s.welch_sets},
                {"welch_ok", s.welch_ok},
                {"welch_supercomplete", s.welch_supercomplete},
                {"welch_lower_bound_5_in_4", s.welch_lower},
                {"min_max_coherence_5_in_4", s.coherence.best},
                {"min_max_coherence_random_only", s.coherence.best_random}};
      if (lr_json) {
        Json j;
        for (const auto& r : t.rows) j[r[0].get<std::string>()] = r[1];
        std::cout << dump(j);
      } else {
        emit(t, false);
      }
      return s.matchings_found == s.trials && s.welch_ok == s.welch_sets ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
