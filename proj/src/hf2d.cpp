#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "qbm/hf2d.hpp"
#include "qbm/linalg.hpp"
#include "qbm/sumrules.hpp"

namespace qbm {

namespace {

constexpr int kQuadOrder = 64;

// Generalized Gauss-Laguerre nodes/weights for weight t^alpha e^{-t} via the
// Golub-Welsch tridiagonal (diag 2i+alpha+1, offdiag sqrt(i(i+alpha))).
void gauss_laguerre(double alpha, std::vector<double>& nodes, std::vector<double>& weights) {
  Eigen::VectorXd diag(kQuadOrder), off(kQuadOrder - 1);
  for (int i = 0; i < kQuadOrder; ++i) diag(i) = 2.0 * i + alpha + 1.0;
  for (int i = 1; i < kQuadOrder; ++i) off(i - 1) = std::sqrt(i * (i + alpha));
  auto eig = sym_tridiag_eigen(diag, off);
  nodes.resize(kQuadOrder);
  weights.resize(kQuadOrder);
  const double mu0 = std::tgamma(alpha + 1.0);
  for (int i = 0; i < kQuadOrder; ++i) {
    nodes[i] = eig.values(i);
    const double v0 = eig.vectors(0, i);
    weights[i] = v0 * v0 * mu0;
  }
}

// Normalized radial factors sqrt(2 n!/(n+|m|)!) L_n^{|m|}(t) evaluated at the
// quadrature nodes, rows indexed by n. The t^{|m|} e^{-t} part of |R|^2 lives
// in the quadrature weight.
Eigen::MatrixXd laguerre_table(int n_max, int m_abs, const std::vector<double>& t) {
  const int nt = static_cast<int>(t.size());
  Eigen::MatrixXd l(n_max + 1, nt);
  for (int j = 0; j < nt; ++j) {
    double l0 = 1.0, l1 = 1.0 + m_abs - t[j];
    l(0, j) = l0;
    if (n_max >= 1) l(1, j) = l1;
    for (int n = 2; n <= n_max; ++n) {
      const double l2 = ((2.0 * n - 1.0 + m_abs - t[j]) * l1 - (n - 1.0 + m_abs) * l0) / n;
      l0 = l1;
      l1 = l2;
      l(n, j) = l2;
    }
  }
  std::vector<double> lfact(n_max + m_abs + 1, 0.0);
  for (std::size_t k = 1; k < lfact.size(); ++k) lfact[k] = lfact[k - 1] + std::log(k);
  for (int n = 0; n <= n_max; ++n)
    l.row(n) *= std::exp(0.5 * (std::log(2.0) + lfact[n] - lfact[n + m_abs]));
  return l;
}

}  // namespace

Hf2dBasis::Hf2dBasis(int shell_cutoff) : s_(shell_cutoff) {
  if (shell_cutoff < 1) throw std::invalid_argument("Hf2dBasis: shell_cutoff >= 1");
  for (int e = 0; e < shell_cutoff; ++e)
    for (int p = e; p >= 0; --p) labels_.push_back({p, e - p});
  const int n_orb = n_orbitals();

  // rho^2 in the ladder convention: diagonal p+q+1, offdiagonal
  // +sqrt((p+1)(q+1)) between (p,q) and (p+1,q+1).
  rho2_ = Eigen::MatrixXd::Zero(n_orb, n_orb);
  std::map<std::pair<int, int>, int> index;
  for (int i = 0; i < n_orb; ++i) index[{labels_[i].p, labels_[i].q}] = i;
  for (int i = 0; i < n_orb; ++i) {
    const auto& l = labels_[i];
    rho2_(i, i) = l.p + l.q + 1.0;
    auto it = index.find({l.p + 1, l.q + 1});
    if (it != index.end()) {
      rho2_(i, it->second) = std::sqrt((l.p + 1.0) * (l.q + 1.0));
      rho2_(it->second, i) = rho2_(i, it->second);
    }
  }

  // Pair-transform coefficients c[p1][p2][P] for one ladder species:
  // |p1 p2> = sum_P c(P) |P, p1+p2-P>_{CM,rel}.
  const int pmax = shell_cutoff - 1;
  std::vector<std::vector<std::vector<double>>> c(
      pmax + 1, std::vector<std::vector<double>>(pmax + 1));
  {
    std::vector<std::vector<double>> binom(2 * pmax + 1, std::vector<double>(2 * pmax + 1, 0.0));
    for (int n = 0; n <= 2 * pmax; ++n) {
      binom[n][0] = 1.0;
      for (int k = 1; k <= n; ++k)
        binom[n][k] = binom[n - 1][k - 1] + (k <= n - 1 ? binom[n - 1][k] : 0.0);
    }
    std::vector<double> lfact(4 * pmax + 2);
    lfact[0] = 0.0;
    for (std::size_t n = 1; n < lfact.size(); ++n) lfact[n] = lfact[n - 1] + std::log(n);
    for (int p1 = 0; p1 <= pmax; ++p1)
      for (int p2 = 0; p2 <= pmax; ++p2) {
        auto& row = c[p1][p2];
        row.assign(p1 + p2 + 1, 0.0);
        for (int P = 0; P <= p1 + p2; ++P) {
          double s = 0.0;
          for (int i = std::max(0, P - p2); i <= std::min(p1, P); ++i) {
            const int j = P - i;
            s += binom[p1][i] * binom[p2][j] * ((p2 - j) % 2 ? -1.0 : 1.0);
          }
          const double lognorm =
              0.5 * (lfact[P] + lfact[p1 + p2 - P] - lfact[p1] - lfact[p2]) -
              0.5 * (p1 + p2) * std::log(2.0);
          row[P] = s * std::exp(lognorm);
        }
      }
  }

  // Relative radial integrals <n'|1/rho|n> at fixed |m|, ladder convention
  // (the (-1)^{n+n'} phase maps the Laguerre convention onto ladder states).
  const int rel_n_max = pmax;          // min(P_B, Q_B) <= pmax
  const int rel_m_max = 2 * pmax;      // |P_B - Q_B| <= 2 pmax
  std::vector<Eigen::MatrixXd> i_rel(rel_m_max + 1);
  for (int m = 0; m <= rel_m_max; ++m) {
    std::vector<double> t, w;
    gauss_laguerre(m - 0.5, t, w);
    Eigen::MatrixXd l = laguerre_table(rel_n_max, m, t);
    Eigen::MatrixXd integ(rel_n_max + 1, rel_n_max + 1);
    for (int a = 0; a <= rel_n_max; ++a)
      for (int b = 0; b <= a; ++b) {
        double s = 0.0;
        for (int j = 0; j < kQuadOrder; ++j) s += w[j] * l(a, j) * l(b, j);
        const double sign = ((a + b) % 2) ? -1.0 : 1.0;
        integ(a, b) = integ(b, a) = 0.5 * sign * s;
      }
    i_rel[m] = std::move(integ);
  }

  // Assemble <ab| 1/|r1-r2| |cd> = (1/sqrt 2) <ab| 1/rho_rel |cd>, grouping
  // pairs by total angular momentum; the CM quanta must match exactly.
  struct PairAmp {
    int a, b;          // orbital indices
    int mp, mq;        // total + and - quanta
    std::vector<double> amp;  // (P, Q) amplitudes, Q-major: amp[P*(mq+1)+Q]
  };
  std::map<int, std::vector<PairAmp>> by_m;
  for (int a = 0; a < n_orb; ++a)
    for (int b = 0; b < n_orb; ++b) {
      const auto& la = labels_[a];
      const auto& lb = labels_[b];
      PairAmp pa;
      pa.a = a;
      pa.b = b;
      pa.mp = la.p + lb.p;
      pa.mq = la.q + lb.q;
      const auto& cp = c[la.p][lb.p];
      const auto& cq = c[la.q][lb.q];
      pa.amp.resize((pa.mp + 1) * (pa.mq + 1));
      for (int P = 0; P <= pa.mp; ++P)
        for (int Q = 0; Q <= pa.mq; ++Q) pa.amp[P * (pa.mq + 1) + Q] = cp[P] * cq[Q];
      by_m[la.m() + lb.m()].push_back(std::move(pa));
    }

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (const auto& [mtot, pairs] : by_m) {
    (void)mtot;
    for (const auto& bra : pairs)
      for (const auto& ket : pairs) {
        double v = 0.0;
        const int pmax_cm = std::min(bra.mp, ket.mp);
        const int qmax_cm = std::min(bra.mq, ket.mq);
        for (int P = 0; P <= pmax_cm; ++P)
          for (int Q = 0; Q <= qmax_cm; ++Q) {
            const double ab = bra.amp[P * (bra.mq + 1) + Q];
            if (ab == 0.0) continue;
            const double cd = ket.amp[P * (ket.mq + 1) + Q];
            if (cd == 0.0) continue;
            const int pb_bra = bra.mp - P, qb_bra = bra.mq - Q;
            const int pb_ket = ket.mp - P, qb_ket = ket.mq - Q;
            const int mrel = pb_ket - qb_ket;  // equals the bra value
            v += ab * cd *
                 i_rel[std::abs(mrel)](std::min(pb_bra, qb_bra), std::min(pb_ket, qb_ket));
          }
        v *= inv_sqrt2;
        if (std::abs(v) > 1e-14) entries_.push_back({bra.a, bra.b, ket.a, ket.b, v});
      }
  }
}

double Hf2dBasis::rho2(int a, int b) const { return rho2_(a, b); }

double Hf2dBasis::coulomb(int a, int b, int c, int d) const {
  for (const auto& e : entries_)
    if (e.a == a && e.b == b && e.c == c && e.d == d) return e.value;
  return 0.0;
}

std::shared_ptr<const Hf2dBasis> hf2d_basis(int shell_cutoff) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const Hf2dBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[shell_cutoff];
  if (!slot) slot = std::make_shared<Hf2dBasis>(shell_cutoff);
  return slot;
}

std::vector<SpinOccupation> hund_occupation(int N, const Hf2dBasis& basis) {
  std::vector<SpinOccupation> occ;
  occ.reserve(N);
  int remaining = N;
  for (int shell = 0; shell < basis.shell_cutoff() && remaining > 0; ++shell) {
    // orbitals of this shell sorted by m descending
    std::vector<int> orbs;
    for (int i = 0; i < basis.n_orbitals(); ++i)
      if (basis.labels()[i].shell() == shell) orbs.push_back(i);
    std::sort(orbs.begin(), orbs.end(), [&](int x, int y) {
      return basis.labels()[x].m() > basis.labels()[y].m();
    });
    for (int spin = 0; spin < 2 && remaining > 0; ++spin)
      for (int o : orbs) {
        if (remaining == 0) break;
        occ.push_back({o, spin});
        --remaining;
      }
  }
  if (remaining > 0)
    throw std::invalid_argument("hund_occupation: basis cutoff below particle number");
  return occ;
}

namespace {

int auto_cutoff(int N) {
  int shell = 0, cap = 0;
  while (cap < N) {
    ++shell;
    cap += 2 * shell;  // shell s holds s orbitals, two spins
  }
  // +7 keeps the last-shell energy change under 1e-4 E up to N ~ 30
  return shell + 7;
}

struct MBlocks {
  // orbital indices per angular momentum, sorted by radial quantum number
  std::map<int, std::vector<int>> blocks;
};

MBlocks make_blocks(const Hf2dBasis& basis) {
  MBlocks mb;
  for (int i = 0; i < basis.n_orbitals(); ++i) mb.blocks[basis.labels()[i].m()].push_back(i);
  for (auto& [m, v] : mb.blocks) {
    (void)m;
    std::sort(v.begin(), v.end(), [&](int x, int y) {
      return std::min(basis.labels()[x].p, basis.labels()[x].q) <
             std::min(basis.labels()[y].p, basis.labels()[y].q);
    });
  }
  return mb;
}

}  // namespace

HfState2D hf_solve_2d(const SystemSpec& spec, const Hf2dOptions& opts, const HfState2D* warm) {
  spec.validate();
  if (spec.dimension != 2 || spec.alpha != 1)
    throw std::invalid_argument("hf_solve_2d: 2D Coulomb only");
  const int n = spec.particles;
  const int cutoff = opts.shell_cutoff > 0 ? opts.shell_cutoff : auto_cutoff(n);
  auto basis = hf2d_basis(cutoff);
  const int n_orb = basis->n_orbitals();

  auto occupation = hund_occupation(n, *basis);
  std::map<std::pair<int, int>, int> n_occ;  // per (spin, m)
  for (const auto& so : occupation)
    ++n_occ[{so.spin, basis->labels()[so.orbital].m()}];

  Eigen::MatrixXd rho2(n_orb, n_orb);
  for (int a = 0; a < n_orb; ++a)
    for (int b = 0; b < n_orb; ++b) rho2(a, b) = basis->rho2(a, b);
  Eigen::MatrixXd t_mat = -0.5 * rho2;
  for (int a = 0; a < n_orb; ++a) t_mat(a, a) += basis->labels()[a].shell() + 1.0;
  const Eigen::MatrixXd h = t_mat + 0.5 * spec.trap_scale * rho2;

  Eigen::MatrixXd d_up = Eigen::MatrixXd::Zero(n_orb, n_orb);
  Eigen::MatrixXd d_down = d_up;
  if (warm) {
    d_up = warm->density_up;
    d_down = warm->density_down;
  } else {
    for (const auto& so : occupation)
      (so.spin == 0 ? d_up : d_down)(so.orbital, so.orbital) += 1.0;
  }

  const MBlocks mb = make_blocks(*basis);
  const auto& entries = basis->coulomb_entries();

  int iterations = 0;
  bool converged = spec.lambda == 0.0 && !warm;
  for (int it = 0; it < opts.max_iter && !converged; ++it) {
    ++iterations;
    Eigen::MatrixXd d_tot = d_up + d_down;
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n_orb, n_orb);
    Eigen::MatrixXd k_up = j, k_down = j;
    for (const auto& e : entries) {
      j(e.a, e.c) += e.value * d_tot(e.b, e.d);
      k_up(e.a, e.d) += e.value * d_up(e.b, e.c);
      k_down(e.a, e.d) += e.value * d_down(e.b, e.c);
    }

    Eigen::MatrixXd d_up_new = Eigen::MatrixXd::Zero(n_orb, n_orb);
    Eigen::MatrixXd d_down_new = d_up_new;
    for (int spin = 0; spin < 2; ++spin) {
      const Eigen::MatrixXd f = h + spec.lambda * (j - (spin == 0 ? k_up : k_down));
      Eigen::MatrixXd& d_new = spin == 0 ? d_up_new : d_down_new;
      for (const auto& [m, orbs] : mb.blocks) {
        auto it_occ = n_occ.find({spin, m});
        if (it_occ == n_occ.end() || it_occ->second == 0) continue;
        const int nb = static_cast<int>(orbs.size());
        Eigen::MatrixXd fb(nb, nb);
        for (int x = 0; x < nb; ++x)
          for (int y = 0; y < nb; ++y) fb(x, y) = f(orbs[x], orbs[y]);
        auto eig = sym_eigen(fb);
        for (int k = 0; k < it_occ->second; ++k)
          for (int x = 0; x < nb; ++x)
            for (int y = 0; y < nb; ++y)
              d_new(orbs[x], orbs[y]) += eig.vectors(x, k) * eig.vectors(y, k);
      }
    }
    const double delta = std::max((d_up_new - d_up).cwiseAbs().maxCoeff(),
                                  (d_down_new - d_down).cwiseAbs().maxCoeff());
    if (delta < opts.density_tol) {
      d_up = d_up_new;  // finish on the idempotent densities
      d_down = d_down_new;
      converged = true;
    } else {
      d_up += opts.mixing * (d_up_new - d_up);
      d_down += opts.mixing * (d_down_new - d_down);
    }
  }
  if (!converged) throw std::runtime_error("hf_solve_2d: SCF did not converge");

  const Eigen::MatrixXd d_tot = d_up + d_down;
  double hartree = 0.0, exch = 0.0;
  for (const auto& e : entries) {
    hartree += e.value * d_tot(e.a, e.c) * d_tot(e.b, e.d);
    exch += e.value * (d_up(e.a, e.d) * d_up(e.b, e.c) + d_down(e.a, e.d) * d_down(e.b, e.c));
  }
  HfState2D out;
  out.occupation = std::move(occupation);
  out.density_up = d_up;
  out.density_down = d_down;
  out.gamma = spec.trap_scale;
  out.iterations = iterations;
  out.shell_cutoff = cutoff;
  out.breakdown = EnergyBreakdown::from_parts(
      (d_tot.cwiseProduct(t_mat)).sum(), 0.5 * spec.trap_scale * (d_tot.cwiseProduct(rho2)).sum(),
      0.5 * spec.lambda * (hartree - exch));
  out.r2 = (d_tot.cwiseProduct(rho2)).sum();
  return out;
}

GroundStateResult hf2d_ground_state(const SystemSpec& spec, const Hf2dOptions& opts) {
  HfState2D sol = hf_solve_2d(spec, opts);
  if (opts.shell_cutoff == 0) {
    // Cutoff sanity: the energy gain from the last added shell must be small.
    Hf2dOptions o = opts;
    o.shell_cutoff = sol.shell_cutoff - 1;
    o.gamma_derivative = false;
    HfState2D smaller = hf_solve_2d(spec, o);
    if (std::abs(smaller.breakdown.total - sol.breakdown.total) >
        1e-4 * std::abs(sol.breakdown.total))
      throw std::runtime_error("hf2d_ground_state: basis cutoff not converged");
  }
  GroundStateResult gs;
  gs.engine = Engine::HartreeFock;
  gs.energies = sol.breakdown;
  gs.r2 = sol.r2;

  if (opts.gamma_derivative) {
    Hf2dOptions o = opts;
    o.shell_cutoff = sol.shell_cutoff;  // identical basis at every stencil point
    o.gamma_derivative = false;
    auto r2_of = [&](double gamma) {
      SystemSpec s = spec;
      s.trap_scale = gamma;
      return hf_solve_2d(s, o, &sol).r2;
    };
    gs.r2_dgamma = r2_gamma_derivative(r2_of).value;
  }
  return gs;
}

}  // namespace qbm
