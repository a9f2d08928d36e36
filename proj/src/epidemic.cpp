#include "netda/epidemic.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "netda/errors.hpp"
#include "netda/kernels.hpp"
#include "netda/rng.hpp"

namespace netda {

int EpidemicState::infected_count() const {
  int c = 0;
  for (auto f : infected) c += f;
  return c;
}
int EpidemicState::vaccinated_count() const {
  int c = 0;
  for (auto f : vaccinated) c += f;
  return c;
}
int EpidemicState::recovered_count() const {
  int c = 0;
  for (auto f : recovered) c += f;
  return c;
}
int EpidemicState::susceptible_count() const {
  return n() - infected_count() - recovered_count();
}

void EpidemicState::validate() const {
  const auto sz = infected.size();
  if (vaccinated.size() != sz || recovered.size() != sz ||
      recovery_clock.size() != sz)
    throw shape_error("epidemic state vectors disagree on length");
  for (std::size_t v = 0; v < sz; ++v) {
    if (infected[v] && recovered[v])
      throw contract_violation("node " + std::to_string(v) +
                               " both infected and recovered");
    if ((recovery_clock[v] > 0) != (infected[v] != 0))
      throw contract_violation("node " + std::to_string(v) +
                               " recovery clock inconsistent with infection");
  }
}

InfectionProbabilityFn constant_infection_probability(double p) {
  if (p < 0.0 || p > 1.0)
    throw config_error("infection probability must lie in [0,1]");
  return [p](NodeId, NodeId, double w) { return w != 0.0 ? p : 0.0; };
}

void SirParams::validate() const {
  if (!infect_prob) throw config_error("infection probability function unset");
  if (recovery_low < 1 || recovery_high < recovery_low)
    throw config_error("recovery bounds must satisfy 1 <= low <= high");
  if (initial_infection_prob < 0.0 || initial_infection_prob > 1.0)
    throw config_error("initial infection probability must lie in [0,1]");
}

double HashedStepDraws::infection_uniform(NodeId v) const {
  return hash_uniform01(mix_key(root_, tag("infection"), run_, step_,
                                static_cast<std::uint64_t>(v)));
}

int HashedStepDraws::recovery_duration(NodeId v, int lo, int hi) const {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  const auto key =
      mix_key(root_, tag("recovery"), run_, static_cast<std::uint64_t>(v));
  return lo + static_cast<int>(hash_bounded(key, span));
}

std::vector<double> infection_probabilities(const Graph& g,
                                            const EpidemicState& state,
                                            const SirParams& params) {
  params.validate();
  if (g.n() != state.n())
    throw shape_error("graph and state disagree on node count");
  const auto n = static_cast<std::size_t>(g.n());

  std::vector<double> p(n, 0.0);
  if (params.combine_mode == CombineMode::matrix) {
    for (NodeId j = 0; j < g.n(); ++j) {
      if (!state.infected[static_cast<std::size_t>(j)]) continue;
      for (const Arc& a : g.out(j))
        p[static_cast<std::size_t>(a.to)] += params.infect_prob(j, a.to, a.w);
    }
  } else {
    std::vector<double> survive(n, 1.0);
    for (NodeId j = 0; j < g.n(); ++j) {
      if (!state.infected[static_cast<std::size_t>(j)]) continue;
      for (const Arc& a : g.out(j))
        survive[static_cast<std::size_t>(a.to)] *=
            1.0 - params.infect_prob(j, a.to, a.w);
    }
    for (std::size_t v = 0; v < n; ++v) p[v] = 1.0 - survive[v];
  }
  kernels::sir_mask(p, state.infected.data(), state.vaccinated.data(),
                    state.recovered.data());
  return p;
}

EpidemicState step(const Graph& g, const EpidemicState& state,
                   const SirParams& params, const StepDraws& draws) {
  const std::vector<double> p = infection_probabilities(g, state, params);

  EpidemicState next = state;
  // Age the currently infected; expired clocks move to recovered.
  for (NodeId v = 0; v < state.n(); ++v) {
    const auto i = static_cast<std::size_t>(v);
    if (!state.infected[i]) continue;
    if (--next.recovery_clock[i] == 0) {
      next.infected[i] = 0;
      next.recovered[i] = 1;
    }
  }
  // New infections from the pre-transition probabilities.
  for (NodeId v = 0; v < state.n(); ++v) {
    const auto i = static_cast<std::size_t>(v);
    if (p[i] <= 0.0) continue;
    if (draws.infection_uniform(v) < p[i]) {
      next.infected[i] = 1;
      next.recovery_clock[i] =
          draws.recovery_duration(v, params.recovery_low, params.recovery_high);
    }
  }
  return next;
}

EpidemicState init_state(NodeId n, const SirParams& params,
                         const StepDraws& draws) {
  params.validate();
  if (n < 1) throw config_error("state needs at least one node");
  EpidemicState s(n);
  for (NodeId v = 0; v < n; ++v) {
    if (draws.infection_uniform(v) < params.initial_infection_prob) {
      const auto i = static_cast<std::size_t>(v);
      s.infected[i] = 1;
      s.recovery_clock[i] =
          draws.recovery_duration(v, params.recovery_low, params.recovery_high);
    }
  }
  return s;
}

void OdeParams::validate() const {
  if (dt <= 0.0) throw config_error("ODE step size must be positive");
  if (beta < 0.0 || gamma < 0.0 || population <= 0.0 || s0 < 0.0 || i0 < 0.0 ||
      r0 < 0.0)
    throw config_error("ODE parameters must be non-negative");
  if (std::abs(s0 + i0 + r0 - population) > 1e-9 * population)
    throw config_error("S0 + I0 + R0 must equal the population");
}

std::vector<OdeSample> sir_ode_reference(const OdeParams& p, double t_end) {
  p.validate();
  struct Deriv {
    double ds, di, dr;
  };
  auto f = [&](double s, double i) -> Deriv {
    const double flow = p.beta * i * s / p.population;
    return {-flow, flow - p.gamma * i, p.gamma * i};
  };

  std::vector<OdeSample> traj;
  double s = p.s0, i = p.i0, r = p.r0, t = 0.0;
  traj.push_back({t, s, i, r});
  const auto steps = static_cast<long long>(std::ceil(t_end / p.dt - 1e-12));
  for (long long k = 0; k < steps; ++k) {
    const double h = p.dt;
    const Deriv k1 = f(s, i);
    const Deriv k2 = f(s + 0.5 * h * k1.ds, i + 0.5 * h * k1.di);
    const Deriv k3 = f(s + 0.5 * h * k2.ds, i + 0.5 * h * k2.di);
    const Deriv k4 = f(s + h * k3.ds, i + h * k3.di);
    s += h / 6.0 * (k1.ds + 2.0 * k2.ds + 2.0 * k3.ds + k4.ds);
    i += h / 6.0 * (k1.di + 2.0 * k2.di + 2.0 * k3.di + k4.di);
    r += h / 6.0 * (k1.dr + 2.0 * k2.dr + 2.0 * k3.dr + k4.dr);
    t = static_cast<double>(k + 1) * p.dt;
    if (!std::isfinite(s) || !std::isfinite(i) || !std::isfinite(r))
      throw numeric_error("SIR ODE integration produced non-finite values");
    traj.push_back({t, s, i, r});
  }
  return traj;
}

void write_trajectory_csv(std::ostream& out,
                          const std::vector<TrajectoryPoint>& traj) {
  out << "step,infected,recovered,vaccinated,new_infections\n";
  for (const TrajectoryPoint& p : traj)
    out << p.step << ',' << p.infected << ',' << p.recovered << ','
        << p.vaccinated << ',' << p.new_infections << '\n';
}

}  // namespace netda
