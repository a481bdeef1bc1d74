#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gptlab/compat.hpp"
#include "gptlab/parallel.hpp"

namespace gptlab {

/// Post-measurement state m_ab / <u, m_ab> of a joint, with its weight <u, m_ab>.
struct WitnessCandidate {
  std::size_t a = 0;
  std::size_t b = 0;
  double weight = 0;
  Vec<double> state;
};

/// Candidates for every cell with positive weight; each is checked to be a state.
std::vector<WitnessCandidate> witness_candidates(const Theory<double>& t, const JointMeasurement<double>& j);

struct Inequality {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
};

/// Slack granted to the ">=" side of every checked inequality.
inline constexpr double kInequalitySlack = 1e-9;

struct VerificationReport {
  std::string theorem;
  std::string theory;
  std::vector<double> eps;
  std::optional<WitnessCandidate> witness;
  std::vector<Inequality> inequalities;
  std::vector<std::string> scan;  // per-candidate dump, filled on failure
  bool proof_candidate_passes = true;
  bool pass = false;
};

/// Error-bar widths of the marginals bound the overall widths at eps1 + eps2 for some witness.
VerificationReport verify_thm1(const Theory<double>& t, const Measurement<double>& f, const Measurement<double>& g,
                               const JointMeasurement<double>& j, double eps1, double eps2);

/// D_W(M^F, F) >= (eps1 / 2) W_{eps1+eps2}(w^F), likewise for G, at some witness.
VerificationReport verify_cor1(const Theory<double>& t, const Measurement<double>& f, const Measurement<double>& g,
                               const JointMeasurement<double>& j, double eps1, double eps2);

/// D_inf(M^F, F) + D_inf(M^G, G) >= LE(w^F) + LE(w^G) at some witness, and >= min_le_sum.
VerificationReport verify_thm2(const Theory<double>& t, const Measurement<double>& f, const Measurement<double>& g,
                               const JointMeasurement<double>& j);

enum class EvenCheck { thm1, cor1, thm2 };

/// Raw even polygon inputs: moves everything to the psi-representation, checks that outcome
/// probabilities are unchanged, then delegates.
VerificationReport verify_thm3_even(const Theory<double>& raw, const Measurement<double>& f,
                                    const Measurement<double>& g, const JointMeasurement<double>& j, EvenCheck check,
                                    double eps1 = 0, double eps2 = 0);

/// W(approx, ideal; eps) <= (2 / eps) D_W(approx, ideal).
VerificationReport verify_propC(const Theory<double>& t, const Measurement<double>& approx,
                                const Measurement<double>& ideal, double eps);

/// Dirichlet mixture of coin-flip products of fuzzified F and G, the uniform joint, a classical
/// post-processing of a measurement drawn from `pool`, and the min_mur_linf optimal joint.
/// Valid by construction.
JointMeasurement<double> random_joint(const Theory<double>& t, const Measurement<double>& f,
                                      const Measurement<double>& g, const std::vector<Measurement<double>>& pool,
                                      std::mt19937_64& rng);

/// Post-processing of `ideal` with a Dirichlet-perturbed stochastic matrix, mixed with a
/// post-processing of a pool measurement.
Measurement<double> random_perturbation(const Measurement<double>& ideal, const std::vector<Measurement<double>>& pool,
                                        std::mt19937_64& rng);

/// Per-index RNG so parallel batteries stay reproducible.
std::mt19937_64 rng_for(std::uint64_t seed, std::uint64_t index);

struct BatteryResult {
  std::size_t runs = 0;
  std::size_t failures = 0;
  std::vector<VerificationReport> failed;  // first few failing reports
};

struct BatterySpec {
  std::size_t joints = 100;
  std::vector<double> eps_grid{0.1, 0.2, 0.3, 0.45};
  std::uint64_t seed = 1;
  std::size_t max_outcomes = 3;
};

/// Theorems 1, cor1 and 2 on random joints of random ideal pairs, one joint per parallel task.
/// `t` must be self-dual under its averaged product or a psi-represented polygon.
struct TheoremBattery {
  BatteryResult thm1, cor1, thm2;
};
TheoremBattery run_theorem_battery(const Theory<double>& t, const BatterySpec& spec, Exec exec = Exec::parallel);

/// verify_thm3_even for each check on random joints of ideal pairs of the raw polygon.
BatteryResult run_even_battery(const Theory<double>& raw, const BatterySpec& spec, Exec exec = Exec::parallel);

/// verify_propC over random perturbations of ideal measurements and the eps grid.
BatteryResult run_propC_battery(const Theory<double>& t, std::size_t samples, const std::vector<double>& eps_grid,
                                std::uint64_t seed, Exec exec = Exec::parallel);

}  // namespace gptlab
