#ifndef QBM_MODEL_HPP
#define QBM_MODEL_HPP

#include <optional>
#include <utility>
#include <vector>

// System specification and closed-form ground-state quantities for
// harmonically trapped charged fermions. Everything is expressed in trap
// units (hbar = m = Omega = 1): lengths in (1/(m Omega))^{1/2}, energies in
// hbar*Omega, frequencies in Omega.

namespace qbm {

enum class Engine { TwoBodyExact, HartreeFock, ThomasFermi, Classical };
enum class SpinPolicy { Polarized1D, Hund2D };

const char* engine_name(Engine e);

struct SystemSpec {
  int dimension = 1;   // d in {1, 2}
  int particles = 2;   // N >= 1
  int alpha = 1;       // interaction exponent: 1 (Coulomb) or 3 (dipole)
  double lambda = 0.0; // dimensionless coupling, >= 0
  double kappa = 0.1;  // 1D Coulomb regularization length; 0 in 2D
  double trap_scale = 1.0;  // gamma multiplier on the trap term
  SpinPolicy spin_policy = SpinPolicy::Polarized1D;

  // Throws std::invalid_argument on any violated invariant.
  void validate() const;

  static SystemSpec make_1d(int particles, double lambda, int alpha = 1,
                            double kappa = 0.1);
  static SystemSpec make_2d(int particles, double lambda);
};

struct EnergyBreakdown {
  double kinetic = 0.0;      // <T>
  double trap = 0.0;         // <V>
  double interaction = 0.0;  // <W>
  double total = 0.0;

  static EnergyBreakdown from_parts(double kinetic, double trap, double interaction);
};

struct GroundStateResult {
  EnergyBreakdown energies;
  double r2 = 0.0;  // <r^2> summed over particles
  std::optional<double> r2_dgamma;  // d<r^2>/dgamma at gamma=1, < 0
  Engine engine = Engine::HartreeFock;
  std::vector<std::pair<double, double>> density;  // (r, n(r)) samples
};

// Admissible range of omega_rel in units Omega: (sqrt(3), 2) for alpha=1,
// (2, sqrt(5)) for alpha=3.
std::pair<double, double> frequency_window(int alpha);

// |2<T> - 2<V> + alpha <W>| / max(E, 1).
double virial_residual(const EnergyBreakdown& e, int alpha);

// Ideal-gas cloud extension: N/sqrt(2) in 1D (spin-polarized),
// sqrt(2/3) N^{3/4} in 2D.
double sigma_ideal(int d, int N);

// chi = sigma_ideal / sqrt(2 <V>), in (0, 1] for repulsive interaction.
double localization_chi(int d, int N, const EnergyBreakdown& e);

// Ideal Fermi gas total energy: N^2/2 in 1D (spin-polarized),
// (2/3) N^{3/2} in 2D.
double ideal_energy(int d, int N);

// The constant K of the 2D strong-coupling energy estimate, evaluated from
// its closed form at first use.
double classical_energy_constant_2d();

// Strong-coupling total-energy estimate:
//   2D: K lambda^{2/3} N^{5/3}
//   1D: (3/10) (3 lambda N ln N)^{2/3} N        (requires N >= 2)
double classical_energy_estimate(int d, int N, double lambda);

// Coupling at which the ideal and classical energy estimates intersect:
//   2D: (2/(3K))^{3/2} N^{-1/4}
//   1D: (1/3) (5/3)^{3/2} sqrt(N)/ln N          (requires N >= 2)
double lambda_tilde(int d, int N);

}  // namespace qbm

#endif
