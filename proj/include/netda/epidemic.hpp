#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "netda/graph.hpp"

namespace netda {

// Per-node SIR flags at one time step. A node is susceptible iff neither
// infected nor recovered; vaccination is an independent flag (a dose given
// to an infected/recovered node is consumed without effect).
struct EpidemicState {
  std::vector<std::uint8_t> infected;
  std::vector<std::uint8_t> vaccinated;
  std::vector<std::uint8_t> recovered;
  std::vector<std::int32_t> recovery_clock;  // >0 iff infected

  explicit EpidemicState(NodeId n = 0)
      : infected(static_cast<std::size_t>(n), 0),
        vaccinated(static_cast<std::size_t>(n), 0),
        recovered(static_cast<std::size_t>(n), 0),
        recovery_clock(static_cast<std::size_t>(n), 0) {}

  NodeId n() const { return static_cast<NodeId>(infected.size()); }
  int infected_count() const;
  int vaccinated_count() const;
  int recovered_count() const;
  int susceptible_count() const;

  // Throws contract_violation if the flag invariants are broken.
  void validate() const;
};

// Arc-wise infectious probability: (src, dst, weight) -> probability of
// transmission along that arc in one step.
using InfectionProbabilityFn =
    std::function<double(NodeId src, NodeId dst, double w)>;

// Constant probability for any nonzero-weight contact.
InfectionProbabilityFn constant_infection_probability(double p);

enum class CombineMode {
  matrix,         // clamped sum of per-arc probabilities
  complementary,  // 1 - prod(1 - p) over infected in-neighbours
};

struct SirParams {
  InfectionProbabilityFn infect_prob;
  int recovery_low = 55;
  int recovery_high = 65;
  double initial_infection_prob = 0.1;
  CombineMode combine_mode = CombineMode::matrix;

  void validate() const;
};

// Per-node randomness for one step. Supplied by the harness so that
// strategy arms can share infection randomness (common random numbers).
struct StepDraws {
  virtual ~StepDraws() = default;
  virtual double infection_uniform(NodeId v) const = 0;
  // Inclusive uniform draw over [lo, hi], consumed when v becomes infected.
  virtual int recovery_duration(NodeId v, int lo, int hi) const = 0;
};

// Key-hashed draws: infection uniforms keyed (root, run, step, node),
// recovery clocks keyed (root, run, node). A node is infected at most once
// per trajectory, so one clock per (run, node) is exactly one draw.
class HashedStepDraws final : public StepDraws {
 public:
  HashedStepDraws(std::uint64_t root, std::uint64_t run, std::uint64_t step)
      : root_(root), run_(run), step_(step) {}

  double infection_uniform(NodeId v) const override;
  int recovery_duration(NodeId v, int lo, int hi) const override;

 private:
  std::uint64_t root_, run_, step_;
};

// Infectious-probability vector I^p for the next transition, masked so
// recovered, vaccinated, and already-infected nodes cannot be (re)infected.
std::vector<double> infection_probabilities(const Graph& g,
                                            const EpidemicState& state,
                                            const SirParams& params);

// One SIR transition: sample new infections from I^p, age recovery clocks,
// move clock-expired nodes to recovered.
EpidemicState step(const Graph& g, const EpidemicState& state,
                   const SirParams& params, const StepDraws& draws);

// Each node independently infected with params.initial_infection_prob.
EpidemicState init_state(NodeId n, const SirParams& params,
                         const StepDraws& draws);

// Continuous SIR reference model.
struct OdeParams {
  double beta = 0.3;
  double gamma = 0.1;
  double population = 1000.0;
  double s0 = 990.0, i0 = 10.0, r0 = 0.0;
  double dt = 0.01;

  void validate() const;
};

struct OdeSample {
  double t, s, i, r;
};

// Classic fixed-step RK4 integration of the S/I/R rate equations.
std::vector<OdeSample> sir_ode_reference(const OdeParams& p, double t_end);

// Trajectory export: `step,infected,recovered,vaccinated,new_infections`.
struct TrajectoryPoint {
  int step;
  int infected, recovered, vaccinated, new_infections;
};
void write_trajectory_csv(std::ostream& out,
                          const std::vector<TrajectoryPoint>& traj);

}  // namespace netda
