#include <atomic>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "qbm/hf1d.hpp"
#include "qbm/hf2d.hpp"
#include "qbm/scan.hpp"
#include "qbm/sumrules.hpp"
#include "qbm/tf.hpp"

namespace qbm {

namespace {

Engine pick_engine(const ScanPlan& plan, int n) {
  switch (plan.policy) {
    case EnginePolicy::HartreeFockOnly:
      return Engine::HartreeFock;
    case EnginePolicy::ThomasFermiOnly:
      return Engine::ThomasFermi;
    case EnginePolicy::Stitched:
      return n <= plan.stitch_boundary ? Engine::HartreeFock : Engine::ThomasFermi;
  }
  throw std::logic_error("pick_engine: unknown policy");
}

void solve_cell(const ScanPlan& plan, ScanCell& cell) {
  SystemSpec spec = plan.dimension == 1 ? SystemSpec::make_1d(cell.particles, cell.lambda)
                                        : SystemSpec::make_2d(cell.particles, cell.lambda);
  GroundStateResult gs;
  if (cell.engine == Engine::HartreeFock) {
    if (plan.dimension == 1) {
      Hf1dOptions o;
      o.node_spacing = 0.0;  // automatic
      o.gamma_derivative = plan.sr1m1;
      gs = hf1d_ground_state(spec, o);
    } else {
      Hf2dOptions o;
      o.gamma_derivative = plan.sr1m1;
      gs = hf2d_ground_state(spec, o);
    }
  } else {
    // m_-1 on Thomas-Fermi cells is off by default (cost); sr*(3,1) suffices.
    gs = plan.dimension == 1 ? tf1d_ground_state(spec, {}, false)
                             : tf2d_ground_state(spec, false);
  }
  MomentSet ms = moments_from_ground_state(gs, spec);
  MomentSet corrected = correct_moments(ms, plan.dimension);
  cell.omega_sr31_star = sr_ratio(corrected, 3, 1);
  if (corrected.m_minus1) cell.omega_sr1m1_star = sr_ratio(corrected, 1, -1);
  cell.chi = localization_chi(plan.dimension, cell.particles, gs.energies);
  cell.energy = gs.energies.total;
  cell.converged = true;
}

}  // namespace

const ScanCell& ScanTable::at(std::size_t il, std::size_t in) const {
  if (il >= plan.lambdas.size() || in >= plan.particles.size())
    throw std::out_of_range("ScanTable::at");
  return cells[il * plan.particles.size() + in];
}

ScanTable run_scan(const ScanPlan& plan) {
  if (plan.lambdas.empty() || plan.particles.empty())
    throw std::invalid_argument("run_scan: empty grid");
  for (std::size_t i = 1; i < plan.lambdas.size(); ++i)
    if (plan.lambdas[i] <= plan.lambdas[i - 1])
      throw std::invalid_argument("run_scan: lambda grid must be strictly ascending");
  for (double l : plan.lambdas)
    if (l <= 0.0) throw std::invalid_argument("run_scan: lambda must be positive");
  for (std::size_t i = 1; i < plan.particles.size(); ++i)
    if (plan.particles[i] <= plan.particles[i - 1])
      throw std::invalid_argument("run_scan: N grid must be strictly ascending");
  for (int n : plan.particles)
    if (n < 2) throw std::invalid_argument("run_scan: N must be >= 2");

  ScanTable table;
  table.plan = plan;
  table.version = QBM_VERSION;
  const std::size_t nl = plan.lambdas.size(), nn = plan.particles.size();
  table.cells.resize(nl * nn);
  for (std::size_t il = 0; il < nl; ++il)
    for (std::size_t in = 0; in < nn; ++in) {
      ScanCell& c = table.cells[il * nn + in];
      c.lambda = plan.lambdas[il];
      c.particles = plan.particles[in];
      c.engine = pick_engine(plan, c.particles);
    }

  // Work-stealing over cell indices; results land in fixed positions, so the
  // table is deterministic regardless of scheduling.
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= table.cells.size()) return;
      ScanCell& c = table.cells[i];
      try {
        solve_cell(plan, c);
      } catch (const std::exception& e) {
        c.converged = false;
        c.error = e.what();
      }
    }
  };
  int n_threads = plan.threads > 0 ? plan.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min<int>(n_threads, static_cast<int>(table.cells.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& c : table.cells)
    if (!c.converged) ++table.failed;
  if (10 * table.failed > static_cast<int>(table.cells.size()))
    throw std::runtime_error("run_scan: more than 10% of cells failed");
  return table;
}

void ScanTable::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  out << "# qbm-scan csv v1, software " << version << "\n";
  out << "# dimension=" << plan.dimension << " policy="
      << (plan.policy == EnginePolicy::Stitched
              ? "stitched"
              : (plan.policy == EnginePolicy::HartreeFockOnly ? "hf" : "tf"))
      << " stitch_boundary=" << plan.stitch_boundary << " seed=" << plan.seed << "\n";
  out << "lambda,particles,engine,converged,omega_sr31_star,omega_sr1m1_star,chi,energy,error\n";
  out.precision(12);
  for (const auto& c : cells) {
    out << c.lambda << ',' << c.particles << ',' << engine_name(c.engine) << ','
        << (c.converged ? 1 : 0) << ',' << c.omega_sr31_star << ',';
    if (c.omega_sr1m1_star) out << *c.omega_sr1m1_star;
    out << ',' << c.chi << ',' << c.energy << ',' << c.error << '\n';
  }
}

void ScanTable::write_json(const std::string& path) const {
  nlohmann::json doc;
  doc["format"] = "qbm-scan";
  doc["version"] = 1;
  doc["software"] = version;
  doc["plan"] = {
      {"dimension", plan.dimension},
      {"lambdas", plan.lambdas},
      {"particles", plan.particles},
      {"policy", plan.policy == EnginePolicy::Stitched
                     ? "stitched"
                     : (plan.policy == EnginePolicy::HartreeFockOnly ? "hf" : "tf")},
      {"stitch_boundary", plan.stitch_boundary},
      {"sr1m1", plan.sr1m1},
      {"seed", plan.seed},
  };
  nlohmann::json list = nlohmann::json::array();
  for (const auto& c : cells) {
    nlohmann::json j = {
        {"lambda", c.lambda},       {"particles", c.particles},
        {"engine", engine_name(c.engine)}, {"converged", c.converged},
        {"omega_sr31_star", c.omega_sr31_star}, {"chi", c.chi},
        {"energy", c.energy},
    };
    if (c.omega_sr1m1_star) j["omega_sr1m1_star"] = *c.omega_sr1m1_star;
    if (!c.error.empty()) j["error"] = c.error;
    list.push_back(std::move(j));
  }
  doc["cells"] = std::move(list);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_json: cannot open " + path);
  out << doc.dump(1);
}

std::vector<ContourPoint> iso_contour(const ScanTable& table, const std::string& field,
                                      double value) {
  auto get = [&](const ScanCell& c) -> double {
    if (field == "omega") return c.omega_sr31_star;
    if (field == "chi") return c.chi;
    throw std::invalid_argument("iso_contour: unknown field " + field);
  };
  std::vector<ContourPoint> pts;
  const std::size_t nl = table.plan.lambdas.size(), nn = table.plan.particles.size();
  for (std::size_t in = 0; in < nn; ++in) {
    for (std::size_t il = 0; il + 1 < nl; ++il) {
      const ScanCell& a = table.at(il, in);
      const ScanCell& b = table.at(il + 1, in);
      if (!a.converged || !b.converged) continue;
      const double fa = get(a), fb = get(b);
      if ((fa - value) * (fb - value) > 0.0 || fa == fb) continue;
      const double t = (value - fa) / (fb - fa);
      const double ll = std::log(a.lambda) + t * (std::log(b.lambda) - std::log(a.lambda));
      pts.push_back({std::exp(ll), static_cast<double>(a.particles)});
      break;  // one crossing per N row (fields are monotone along lambda)
    }
  }
  return pts;
}

ContourFit fit_power_law(const std::vector<ContourPoint>& points) {
  if (points.size() < 5) throw std::invalid_argument("fit_power_law: need >= 5 points");
  const std::size_t n = points.size();
  double sx = 0, sy = 0;
  for (const auto& p : points) {
    if (p.lambda <= 0.0 || p.particles <= 0.0)
      throw std::invalid_argument("fit_power_law: points must be positive");
    sx += std::log(p.lambda);
    sy += std::log(p.particles);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& p : points) {
    const double dx = std::log(p.lambda) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(p.particles) - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("fit_power_law: degenerate points (single lambda)");
  ContourFit fit;
  fit.exponent = sxy / sxx;
  fit.prefactor = std::exp(my - fit.exponent * mx);
  double ssr = 0;
  for (const auto& p : points) {
    const double r = std::log(p.particles) -
                     (std::log(fit.prefactor) + fit.exponent * std::log(p.lambda));
    ssr += r * r;
  }
  fit.residual = std::sqrt(ssr / n);
  fit.exponent_stderr = n > 2 ? std::sqrt(ssr / (n - 2) / sxx) : 0.0;
  return fit;
}

}  // namespace qbm
