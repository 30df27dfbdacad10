// qbm — command-line driver for the breathing-mode engines.
//
// Subcommands: twobody, hf, tf, classical, scan. Every run writes into its
// output directory: the effective config (JSON), the data files (CSV/JSON), a
// gnuplot script consuming them, and a manifest with the software version and
// wall clock. Exit codes: 0 success, 2 usage error, 3 numerical failure,
// 4 partial scan failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qbm/checkpoint.hpp"
#include "qbm/classical.hpp"
#include "qbm/hf1d.hpp"
#include "qbm/hf2d.hpp"
#include "qbm/model.hpp"
#include "qbm/scan.hpp"
#include "qbm/sumrules.hpp"
#include "qbm/tf.hpp"
#include "qbm/twobody.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qbm;

namespace {

// Grid syntax: "x" (single), "a:b:n" (linear inclusive), "log:a:b:n".
std::vector<double> parse_grid(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(tok);
  auto num = [](const std::string& t) {
    std::size_t pos = 0;
    double v = std::stod(t, &pos);
    if (pos != t.size()) throw CLI::ValidationError("grid", "bad number '" + t + "'");
    return v;
  };
  if (parts.size() == 1) return {num(parts[0])};
  bool log_scale = false;
  std::size_t base = 0;
  if (parts.size() == 4 && parts[0] == "log") {
    log_scale = true;
    base = 1;
  } else if (parts.size() != 3) {
    throw CLI::ValidationError("grid", "expected 'x', 'a:b:n' or 'log:a:b:n'");
  }
  const double a = num(parts[base]), b = num(parts[base + 1]);
  const int n = static_cast<int>(num(parts[base + 2]));
  if (n < 1) throw CLI::ValidationError("grid", "need at least one point");
  if (log_scale && (a <= 0 || b <= 0))
    throw CLI::ValidationError("grid", "log grid needs positive bounds");
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    v[i] = log_scale ? std::exp(std::log(a) + t * (std::log(b) - std::log(a)))
                     : a + t * (b - a);
  }
  return v;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

void write_json_file(const fs::path& path, const json& doc) { write_text(path, doc.dump(1) + "\n"); }

struct RunContext {
  fs::path outdir;
  std::string command_line;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  std::vector<std::string> outputs;

  explicit RunContext(const std::string& dir, int argc_like = 0) : outdir(dir) {
    (void)argc_like;
    fs::create_directories(outdir);
  }
  fs::path file(const std::string& name) {
    outputs.push_back(name);
    return outdir / name;
  }
  void finish(const json& effective_config) {
    write_json_file(file("config.json"), effective_config);
    json manifest;
    manifest["software"] = QBM_VERSION;
    manifest["command"] = command_line;
    manifest["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    manifest["outputs"] = outputs;
    write_json_file(outdir / "manifest.json", manifest);
  }
};

std::string quoted_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

// Frequencies of one ground state; sr fields absent when the moment set
// cannot support them (e.g. ideal system under the CM correction).
struct CellFreq {
  std::optional<double> sr31, sr1m1, sr31_star, sr1m1_star;
};

CellFreq frequencies(const GroundStateResult& gs, const SystemSpec& spec) {
  CellFreq f;
  MomentSet raw = moments_from_ground_state(gs, spec);
  f.sr31 = sr_ratio(raw, 3, 1);
  if (raw.m_minus1) f.sr1m1 = sr_ratio(raw, 1, -1);
  try {
    MomentSet corr = correct_moments(raw, spec.dimension);
    f.sr31_star = sr_ratio(corr, 3, 1);
    if (corr.m_minus1) f.sr1m1_star = sr_ratio(corr, 1, -1);
  } catch (const std::domain_error&) {
    // corrected moments undefined for this state; leave starred fields empty
  }
  return f;
}

void csv_opt(std::ostream& out, const std::optional<double>& v) {
  if (v) out << *v;
}

// ---------------------------------------------------------------- twobody --

int cmd_twobody(int d, int alpha, const std::string& lambda_grid, double kappa,
                const std::string& outdir, const std::string& cmdline) {
  RunContext ctx(outdir);
  ctx.command_line = cmdline;
  const auto lambdas = parse_grid(lambda_grid);

  std::ofstream csv(ctx.file("twobody.csv"));
  csv << "lambda,omega_exact,sr31,sr1m1,sr31_star,sr1m1_star\n";
  csv.precision(12);
  for (double l : lambdas) {
    SystemSpec spec = d == 1 ? SystemSpec::make_1d(2, l, alpha, kappa)
                             : SystemSpec::make_2d(2, l);
    spec.alpha = alpha;
    spec.validate();
    RelativeSpectrum rs = relative_spectrum(spec);
    const double omega = exact_breathing_frequency(rs);
    MomentSet raw = moments_from_relative_spectrum(rs, false);
    MomentSet corr = moments_from_relative_spectrum(rs, true);
    csv << l << ',' << omega << ',' << sr_ratio(raw, 3, 1) << ',' << sr_ratio(raw, 1, -1) << ','
        << sr_ratio(corr, 3, 1) << ',' << sr_ratio(corr, 1, -1) << '\n';
  }
  csv.close();

  write_text(ctx.file("plot.gp"),
             "set datafile separator ','\n"
             "set key autotitle columnhead\n"
             "set xlabel 'lambda'\nset ylabel 'omega / Omega'\n"
             "set terminal pngcairo size 900,600\nset output 'twobody.png'\n"
             "plot 'twobody.csv' using 1:2 with lines, '' using 1:3 with lines, "
             "'' using 1:4 with lines, '' using 1:5 with lines, '' using 1:6 with lines\n");

  json cfg = {{"subcommand", "twobody"}, {"d", d},       {"alpha", alpha},
              {"lambda", lambda_grid},   {"kappa", kappa}, {"output", outdir}};
  ctx.finish(cfg);
  return 0;
}

// --------------------------------------------------------------------- hf --

int cmd_hf(int d, int n, const std::string& lambda_grid, double kappa, int shells,
           bool sr1m1, const std::string& checkpoint_path, const std::string& outdir,
           const std::string& cmdline) {
  RunContext ctx(outdir);
  ctx.command_line = cmdline;
  const auto lambdas = parse_grid(lambda_grid);
  std::optional<CheckpointStore> store;
  if (!checkpoint_path.empty()) store.emplace(checkpoint_path);

  std::ofstream csv(ctx.file("hf.csv"));
  csv << "lambda,particles,E,T,V,W,r2,r2_dgamma,sr31_star,sr1m1_star\n";
  csv.precision(12);
  std::ofstream dens(ctx.file("density.csv"));
  dens << "lambda,r,n\n";
  dens.precision(12);

  for (double l : lambdas) {
    SystemSpec spec = d == 1 ? SystemSpec::make_1d(n, l, 1, kappa) : SystemSpec::make_2d(n, l);
    GroundStateResult gs;
    if (d == 1) {
      Hf1dOptions o;
      o.node_spacing = 0.0;
      o.gamma_derivative = sr1m1;
      if (store) {
        // A stored entry fixes the grid geometry: its basis signature encodes
        // (nb, halfwidth), and the matching grid makes the orbitals reusable.
        HfState1D sol;
        bool solved = false;
        double best_dl = 1e300;
        CheckpointKey best{};
        for (const auto& k : store->keys())
          if (k.dimension == 1 && k.particles == n && k.basis.rfind("fedvr1d:", 0) == 0) {
            const double dl = std::abs(std::log1p(k.lambda) - std::log1p(l));
            if (dl < best_dl) {
              best_dl = dl;
              best = k;
            }
          }
        if (best_dl < 1e300) {
          std::size_t nb = 0;
          double half = 0.0;
          if (std::sscanf(best.basis.c_str(), "fedvr1d:nb=%zu:half=%lf", &nb, &half) == 2) {
            auto prev = store->find(best);
            if (prev && prev->rows() == static_cast<long>(nb) && prev->cols() == n) {
              Hf1dOptions wo = o;
              wo.gamma_derivative = false;
              wo.box_halfwidth = half;
              wo.node_spacing = 2.0 * half / (nb + 1.0);
              sol = hf_solve_1d(spec, wo, &*prev);
              solved = true;
            }
          }
        }
        if (!solved) sol = hf_solve_1d(spec, o);
        std::ostringstream sig;
        sig << "fedvr1d:nb=" << sol.nodes.size() << ":half=" << sol.halfwidth;
        CheckpointKey key{1, n, l, spec.trap_scale, sig.str()};
        store->put(key, sol.orbitals);
        GroundStateResult g;
        g.engine = Engine::HartreeFock;
        g.energies = sol.breakdown;
        g.r2 = sol.r2;
        if (sr1m1) {
          Hf1dOptions wo = o;
          wo.gamma_derivative = false;
          wo.box_halfwidth = sol.halfwidth;
          wo.node_spacing = 2.0 * sol.halfwidth / (sol.nodes.size() + 1.0);
          auto r2_of = [&](double gamma) {
            SystemSpec s = spec;
            s.trap_scale = gamma;
            return hf_solve_1d(s, wo, &sol.orbitals).r2;
          };
          g.r2_dgamma = r2_gamma_derivative(r2_of).value;
        }
        gs = std::move(g);
      } else {
        gs = hf1d_ground_state(spec, o);
      }
    } else {
      Hf2dOptions o;
      o.shell_cutoff = shells;
      o.gamma_derivative = sr1m1;
      if (store && shells > 0) {
        std::ostringstream sig;
        sig << "fd:shells=" << shells;
        CheckpointKey key{2, n, l, spec.trap_scale, sig.str()};
        HfState2D warm;
        const HfState2D* warm_ptr = nullptr;
        if (auto prev = store->find_nearest(key)) {
          const int n_orb = static_cast<int>(prev->rows());
          if (prev->cols() == 2 * n_orb) {
            warm.density_up = prev->leftCols(n_orb);
            warm.density_down = prev->rightCols(n_orb);
            warm_ptr = &warm;
          }
        }
        Hf2dOptions so = o;
        so.gamma_derivative = false;
        HfState2D sol = hf_solve_2d(spec, so, warm_ptr);
        Eigen::MatrixXd both(sol.density_up.rows(), 2 * sol.density_up.cols());
        both << sol.density_up, sol.density_down;
        store->put(key, both);
        GroundStateResult g;
        g.engine = Engine::HartreeFock;
        g.energies = sol.breakdown;
        g.r2 = sol.r2;
        if (sr1m1) {
          auto r2_of = [&](double gamma) {
            SystemSpec s = spec;
            s.trap_scale = gamma;
            return hf_solve_2d(s, so, &sol).r2;
          };
          g.r2_dgamma = r2_gamma_derivative(r2_of).value;
        }
        gs = std::move(g);
      } else {
        gs = hf2d_ground_state(spec, o);
      }
    }
    CellFreq f = frequencies(gs, spec);
    csv << l << ',' << n << ',' << gs.energies.total << ',' << gs.energies.kinetic << ','
        << gs.energies.trap << ',' << gs.energies.interaction << ',' << gs.r2 << ',';
    if (gs.r2_dgamma) csv << *gs.r2_dgamma;
    csv << ',';
    csv_opt(csv, f.sr31_star);
    csv << ',';
    csv_opt(csv, f.sr1m1_star);
    csv << '\n';
    for (const auto& [r, nr] : gs.density) dens << l << ',' << r << ',' << nr << '\n';
  }
  csv.close();
  dens.close();
  if (store) store->save();

  write_text(ctx.file("plot.gp"),
             "set datafile separator ','\nset key autotitle columnhead\n"
             "set xlabel 'lambda'\nset ylabel 'omega / Omega'\n"
             "set terminal pngcairo size 900,600\nset output 'hf.png'\n"
             "plot 'hf.csv' using 1:9 with linespoints, '' using 1:10 with linespoints\n");

  json cfg = {{"subcommand", "hf"},  {"d", d},          {"n", n},
              {"lambda", lambda_grid}, {"kappa", kappa},  {"shells", shells},
              {"sr1m1", sr1m1},        {"checkpoint", checkpoint_path}, {"output", outdir}};
  ctx.finish(cfg);
  return 0;
}

// --------------------------------------------------------------------- tf --

int cmd_tf(int d, int n, const std::string& lambda_grid, double kappa, bool sr1m1,
           const std::string& outdir, const std::string& cmdline) {
  RunContext ctx(outdir);
  ctx.command_line = cmdline;
  const auto lambdas = parse_grid(lambda_grid);

  std::ofstream csv(ctx.file("tf.csv"));
  csv << "lambda,particles,gamma_tf,E,T,V,W,r2,sr31_star\n";
  csv.precision(12);
  std::ofstream dens(ctx.file("density.csv"));
  dens << "lambda,r,n\n";
  dens.precision(12);
  for (double l : lambdas) {
    SystemSpec spec = d == 1 ? SystemSpec::make_1d(n, l, 1, kappa) : SystemSpec::make_2d(n, l);
    GroundStateResult gs = d == 1 ? tf1d_ground_state(spec, {}, sr1m1)
                                  : tf2d_ground_state(spec, sr1m1);
    const double gamma_tf = d == 2 ? tf2d_minimize(n, l).gamma_shape : 1.0;
    CellFreq f = frequencies(gs, spec);
    csv << l << ',' << n << ',' << gamma_tf << ',' << gs.energies.total << ','
        << gs.energies.kinetic << ',' << gs.energies.trap << ',' << gs.energies.interaction << ','
        << gs.r2 << ',';
    csv_opt(csv, f.sr31_star);
    csv << '\n';
    for (const auto& [r, nr] : gs.density) dens << l << ',' << r << ',' << nr << '\n';
  }
  csv.close();
  dens.close();

  write_text(ctx.file("plot.gp"),
             "set datafile separator ','\nset key autotitle columnhead\n"
             "set xlabel 'r'\nset ylabel 'n(r)'\n"
             "set terminal pngcairo size 900,600\nset output 'tf.png'\n"
             "plot 'density.csv' using 2:3 with lines\n");

  json cfg = {{"subcommand", "tf"},    {"d", d},         {"n", n},
              {"lambda", lambda_grid}, {"kappa", kappa}, {"sr1m1", sr1m1},
              {"output", outdir}};
  ctx.finish(cfg);
  return 0;
}

// -------------------------------------------------------------- classical --

int cmd_classical(int n, const std::string& lambda_grid, int restarts,
                  unsigned long long seed, const std::string& outdir,
                  const std::string& cmdline) {
  RunContext ctx(outdir);
  ctx.command_line = cmdline;
  const auto lambdas = parse_grid(lambda_grid);

  std::ofstream csv(ctx.file("classical.csv"));
  csv << "lambda,particles,E,gradient_norm,restarts_used,metastable,omega_sr31\n";
  csv.precision(12);
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    ClassicalOptions o;
    o.n_restarts = restarts;
    o.seed = seed;
    ClassicalConfiguration cfg = minimize_classical(2, n, lambdas[i], o);
    csv << lambdas[i] << ',' << n << ',' << cfg.energy << ',' << cfg.gradient_norm << ','
        << cfg.restarts_used << ',' << (cfg.metastable ? 1 : 0) << ','
        << classical_breathing_check(cfg) << '\n';
    std::ostringstream name;
    name << "configuration_" << i << ".csv";
    dump_configuration(cfg, (ctx.file(name.str())).string());
  }
  csv.close();

  write_text(ctx.file("plot.gp"),
             "set datafile separator ','\nset key autotitle columnhead\n"
             "set size square\nset xlabel 'x'\nset ylabel 'y'\n"
             "set terminal pngcairo size 700,700\nset output 'classical.png'\n"
             "plot 'configuration_0.csv' using 2:3 with points pt 7 ps 1.5 notitle\n");

  json cfg = {{"subcommand", "classical"}, {"n", n},       {"lambda", lambda_grid},
              {"restarts", restarts},      {"seed", seed}, {"output", outdir}};
  ctx.finish(cfg);
  return 0;
}

// ------------------------------------------------------------------- scan --

std::vector<double> json_grid(const json& j) {
  if (j.is_array()) return j.get<std::vector<double>>();
  const double a = j.at("min").get<double>(), b = j.at("max").get<double>();
  const int n = j.at("points").get<int>();
  const bool log_scale = j.value("scale", "log") == "log";
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    v[i] = log_scale ? std::exp(std::log(a) + t * (std::log(b) - std::log(a)))
                     : a + t * (b - a);
  }
  return v;
}

int cmd_scan(const std::string& config_path, const std::string& outdir_flag, int threads,
             const std::string& cmdline) {
  json cfg;
  {
    std::ifstream in(config_path);
    if (!in) throw CLI::ValidationError("--config", "cannot open " + config_path);
    in >> cfg;
  }
  const std::string outdir = !outdir_flag.empty() ? outdir_flag : cfg.value("output", "scan_out");
  RunContext ctx(outdir);
  ctx.command_line = cmdline;
  const std::string mode = cfg.value("mode", "scan");

  if (mode == "lambda_tilde") {
    // Intermediate-coupling boundary curves; no engine work required.
    std::ofstream csv(ctx.file("lambda_tilde.csv"));
    csv << "dimension,particles,lambda_tilde\n";
    csv.precision(12);
    const auto dims = cfg.value("dimensions", std::vector<int>{1, 2});
    const int n_min = cfg.value("n_min", 2), n_max = cfg.value("n_max", 100);
    for (int d : dims)
      for (int n = n_min; n <= n_max; ++n) csv << d << ',' << n << ',' << lambda_tilde(d, n) << '\n';
    csv.close();
    write_text(ctx.file("plot.gp"),
               "set datafile separator ','\nset key autotitle columnhead\n"
               "set logscale y\nset xlabel 'N'\nset ylabel 'lambda-tilde'\n"
               "set terminal pngcairo size 900,600\nset output 'lambda_tilde.png'\n"
               "plot 'lambda_tilde.csv' using 2:($1==1?$3:1/0) with lines title '1D', "
               "'' using 2:($1==2?$3:1/0) with lines title '2D'\n");
    cfg["subcommand"] = "scan";
    cfg["output"] = outdir;
    ctx.finish(cfg);
    return 0;
  }

  ScanPlan plan;
  plan.dimension = cfg.at("dimension").get<int>();
  plan.lambdas = json_grid(cfg.at("lambda"));
  for (double v : json_grid(cfg.at("particles")))
    plan.particles.push_back(static_cast<int>(std::lround(v)));
  plan.particles.erase(std::unique(plan.particles.begin(), plan.particles.end()),
                       plan.particles.end());
  const std::string policy = cfg.value("policy", "stitched");
  plan.policy = policy == "hf"   ? EnginePolicy::HartreeFockOnly
                : policy == "tf" ? EnginePolicy::ThomasFermiOnly
                                 : EnginePolicy::Stitched;
  plan.stitch_boundary = cfg.value("stitch_boundary", 100);
  plan.sr1m1 = cfg.value("sr1m1", true);
  plan.seed = cfg.value("seed", 1234ULL);
  plan.threads = threads > 0 ? threads : cfg.value("threads", 0);

  ScanTable table = run_scan(plan);
  table.write_csv((ctx.file("scan.csv")).string());
  table.write_json((ctx.file("scan.json")).string());

  // Optional iso-contours plus power-law fits.
  json fits = json::array();
  if (cfg.contains("contours")) {
    std::ofstream ccsv(ctx.file("contours.csv"));
    ccsv << "field,value,lambda,particles\n";
    ccsv.precision(12);
    for (const auto& [field, values] : cfg.at("contours").items())
      for (double v : values) {
        auto pts = iso_contour(table, field, v);
        for (const auto& p : pts) ccsv << field << ',' << v << ',' << p.lambda << ',' << p.particles << '\n';
        if (pts.size() >= 5) {
          ContourFit f = fit_power_law(pts);
          fits.push_back({{"field", field},
                          {"value", v},
                          {"prefactor", f.prefactor},
                          {"exponent", f.exponent},
                          {"exponent_stderr", f.exponent_stderr},
                          {"residual", f.residual},
                          {"points", pts.size()}});
        }
      }
    ccsv.close();
    write_json_file(ctx.file("contour_fits.json"), fits);
  }
  if (cfg.value("lambda_tilde_overlay", false)) {
    std::ofstream lt(ctx.file("lambda_tilde.csv"));
    lt << "dimension,particles,lambda_tilde\n";
    lt.precision(12);
    for (int n : plan.particles) lt << plan.dimension << ',' << n << ',' << lambda_tilde(plan.dimension, n) << '\n';
  }

  write_text(ctx.file("plot.gp"),
             "set datafile separator ','\nset key autotitle columnhead\n"
             "set logscale xy\nset xlabel 'lambda'\nset ylabel 'N'\n"
             "set terminal pngcairo size 900,700\nset output 'scan.png'\n"
             "# frequency surface rendered as per-N curves; contour overlay dotted\n"
             "plot 'scan.csv' skip 2 using 1:2:5 with points palette pt 5 notitle" +
                 std::string(cfg.contains("contours")
                                 ? ", 'contours.csv' using 3:4 with linespoints dt 3 notitle\n"
                                 : "\n"));

  // Report failed cells explicitly; a partially failed scan exits 4.
  if (table.failed > 0) {
    std::fprintf(stderr, "scan: %d cell(s) failed:\n", table.failed);
    for (const auto& c : table.cells)
      if (!c.converged)
        std::fprintf(stderr, "  lambda=%g N=%d: %s\n", c.lambda, c.particles, c.error.c_str());
  }
  cfg["subcommand"] = "scan";
  cfg["output"] = outdir;
  ctx.finish(cfg);
  return table.failed > 0 ? 4 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"breathing-mode frequencies of harmonically trapped interacting fermions"};
  app.require_subcommand(1);
  const std::string cmdline = quoted_args(argc, argv);

  int d = 1, alpha = 1, n = 2, shells = 0, restarts = 0, threads = 0;
  double kappa = 0.1;
  unsigned long long seed = 1234;
  std::string lambda_grid = "1", outdir, config_path, checkpoint_path;
  bool no_sr1m1 = false;

  auto* tb = app.add_subcommand("twobody", "exact two-body spectrum and sum-rule estimators");
  tb->add_option("--d", d, "dimension (1 or 2)")->check(CLI::IsMember({1, 2}));
  tb->add_option("--alpha", alpha, "interaction exponent (1 Coulomb, 3 dipole)")
      ->check(CLI::IsMember({1, 3}));
  tb->add_option("--lambda", lambda_grid, "coupling grid: x | a:b:n | log:a:b:n");
  tb->add_option("--kappa", kappa, "1D regularization length");
  tb->add_option("--output", outdir, "output directory");

  auto* hf = app.add_subcommand("hf", "Hartree-Fock ground state and frequencies");
  hf->add_option("--d", d)->check(CLI::IsMember({1, 2}));
  hf->add_option("--n", n, "particle number")->check(CLI::PositiveNumber);
  hf->add_option("--lambda", lambda_grid);
  hf->add_option("--kappa", kappa);
  hf->add_option("--shells", shells, "2D basis shell cutoff (0 = automatic)");
  hf->add_flag("--no-sr1m1", no_sr1m1, "skip the gamma-derivative moment");
  hf->add_option("--checkpoint", checkpoint_path, "orbital warm-start store (JSON)");
  hf->add_option("--output", outdir);

  auto* tf = app.add_subcommand("tf", "Thomas-Fermi ground state and frequencies");
  tf->add_option("--d", d)->check(CLI::IsMember({1, 2}));
  tf->add_option("--n", n)->check(CLI::PositiveNumber);
  tf->add_option("--lambda", lambda_grid);
  tf->add_option("--kappa", kappa);
  tf->add_flag("--no-sr1m1", no_sr1m1);
  tf->add_option("--output", outdir);

  auto* cl = app.add_subcommand("classical", "classical Coulomb-cluster minimizer (2D)");
  cl->add_option("--n", n)->check(CLI::PositiveNumber);
  cl->add_option("--lambda", lambda_grid);
  cl->add_option("--restarts", restarts, "random restarts (0 = automatic)");
  cl->add_option("--seed", seed);
  cl->add_option("--output", outdir);

  auto* sc = app.add_subcommand("scan", "(lambda, N)-plane sweep from a JSON config");
  sc->add_option("--config", config_path, "scan config (JSON)")->required();
  sc->add_option("--output", outdir, "override the config's output directory");
  sc->add_option("--threads", threads, "worker count (0 = hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (tb->parsed())
      return cmd_twobody(d, alpha, lambda_grid, kappa,
                         outdir.empty() ? "twobody_out" : outdir, cmdline);
    if (hf->parsed())
      return cmd_hf(d, n, lambda_grid, kappa, shells, !no_sr1m1, checkpoint_path,
                    outdir.empty() ? "hf_out" : outdir, cmdline);
    if (tf->parsed())
      return cmd_tf(d, n, lambda_grid, kappa, !no_sr1m1,
                    outdir.empty() ? "tf_out" : outdir, cmdline);
    if (cl->parsed())
      return cmd_classical(n, lambda_grid, restarts, seed,
                           outdir.empty() ? "classical_out" : outdir, cmdline);
    if (sc->parsed()) return cmd_scan(config_path, outdir, threads, cmdline);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 2;
}
