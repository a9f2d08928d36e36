#include "netda/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <thread>

#include "netda/assimilation.hpp"
#include "netda/errors.hpp"
#include "netda/graph_measures.hpp"
#include "netda/io.hpp"
#include "netda/kernels.hpp"
#include "netda/rng.hpp"
#include "netda/strategies.hpp"

namespace netda::harness {

namespace {

constexpr std::uint64_t kInitStep = ~0ULL;

// Deterministic worker pool: run indices are claimed from a counter and
// every run writes only to its own result slot, so aggregation order never
// depends on scheduling.
void parallel_runs(int runs, int jobs, const std::function<void(int)>& body) {
  jobs = std::max(1, std::min(jobs, runs));
  if (jobs == 1) {
    for (int r = 0; r < runs; ++r) body(r);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  pool.reserve(static_cast<std::size_t>(jobs));
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const int r = next.fetch_add(1);
        if (r >= runs) return;
        try {
          body(r);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Counts invariant breaches instead of throwing so a whole Monte Carlo
// sweep can report them in aggregate.
struct InvariantTracker {
  std::vector<std::uint8_t> ever_infected;
  long long violations = 0;

  void init(const EpidemicState& s) {
    ever_infected.assign(s.infected.size(), 0);
    absorb(s);
    check_flags(s);
  }

  void check(const EpidemicState& s) {
    check_flags(s);
    for (std::size_t v = 0; v < ever_infected.size(); ++v)
      if (ever_infected[v] && !s.infected[v] && !s.recovered[v]) ++violations;
    absorb(s);
  }

 private:
  void absorb(const EpidemicState& s) {
    for (std::size_t v = 0; v < ever_infected.size(); ++v)
      if (s.infected[v] || s.recovered[v]) ever_infected[v] = 1;
  }
  void check_flags(const EpidemicState& s) {
    int overlap = 0;
    for (std::size_t v = 0; v < s.infected.size(); ++v) {
      if (s.infected[v] && s.recovered[v]) ++overlap;
      if ((s.recovery_clock[v] > 0) != (s.infected[v] != 0)) ++violations;
    }
    // #susceptible + #infected + #recovered == n fails exactly when the
    // compartments overlap.
    if (overlap != 0) violations += overlap;
  }
};

std::uint64_t arm_run_component(const RunControls& rc, int run,
                                std::size_t instance) {
  if (rc.common_random_numbers) return static_cast<std::uint64_t>(run);
  return mix_key(static_cast<std::uint64_t>(run), tag("independent-arm"),
                 static_cast<std::uint64_t>(instance));
}

}  // namespace

void RunControls::validate() const {
  if (runs < 1) throw config_error("runs must be >= 1");
  if (jobs < 1) throw config_error("jobs must be >= 1");
}

ArmSummary summarize(const std::string& arm,
                     const std::vector<std::vector<int>>& per_run_counts,
                     int n) {
  if (per_run_counts.empty())
    throw config_error("summarize needs at least one run");
  const std::size_t len = per_run_counts.front().size();
  for (const auto& c : per_run_counts)
    if (c.size() != len)
      throw shape_error("summarize: ragged run lengths");

  ArmSummary s;
  s.arm = arm;
  s.n = n;
  s.runs = static_cast<int>(per_run_counts.size());
  s.mean.assign(len, 0.0);
  s.stddev.assign(len, 0.0);

  std::vector<double> row(len);
  for (const auto& counts : per_run_counts) {
    for (std::size_t t = 0; t < len; ++t)
      row[t] = static_cast<double>(counts[t]);
    kernels::add(s.mean, row);
  }
  kernels::scale(s.mean, 1.0 / static_cast<double>(s.runs));
  for (const auto& counts : per_run_counts) {
    for (std::size_t t = 0; t < len; ++t)
      row[t] = static_cast<double>(counts[t]);
    kernels::accumulate_sq_diff(s.stddev, row, s.mean);
  }
  kernels::scale(s.stddev, 1.0 / static_cast<double>(s.runs));
  for (double& v : s.stddev) v = std::sqrt(v);

  for (std::size_t t = 0; t < len; ++t) {
    if (s.mean[t] > s.peak_mean) {
      s.peak_mean = s.mean[t];
      s.peak_std = s.stddev[t];
      s.peak_step = static_cast<int>(t);
    }
  }
  if (n > 0) {
    s.peak_mean_fraction = s.peak_mean / static_cast<double>(n);
    s.peak_std_fraction = s.peak_std / static_cast<double>(n);
  }
  return s;
}

// ---------------------------------------------------------------- school

std::string to_string(SchoolArm a) {
  switch (a) {
    case SchoolArm::free_run: return "free";
    case SchoolArm::random: return "random";
    case SchoolArm::background_hd: return "background_hd";
    case SchoolArm::background_bc: return "background_bc";
    case SchoolArm::assimilated_hd: return "assimilated_hd";
    case SchoolArm::assimilated_bc: return "assimilated_bc";
  }
  throw config_error("unknown school arm");
}

SchoolArm school_arm_from_string(const std::string& s) {
  for (SchoolArm a :
       {SchoolArm::free_run, SchoolArm::random, SchoolArm::background_hd,
        SchoolArm::background_bc, SchoolArm::assimilated_hd,
        SchoolArm::assimilated_bc})
    if (to_string(a) == s) return a;
  throw config_error("unknown school arm: " + s);
}

bool school_arm_uses_network(SchoolArm a) {
  return a != SchoolArm::free_run && a != SchoolArm::random;
}

TemporalNetwork load_school_network(const SchoolScenarioConfig& cfg,
                                    bool* used_synthetic) {
  if (!cfg.dataset_path.empty()) {
    if (std::filesystem::exists(cfg.dataset_path)) {
      const ContactLog log = parse_contact_log_file(cfg.dataset_path);
      if (used_synthetic) *used_synthetic = false;
      return condense(log, cfg.window);
    }
    std::cerr << "WARNING: contact dataset '" << cfg.dataset_path
              << "' not found; falling back to the bundled synthetic "
                 "generator\n";
  }
  if (used_synthetic) *used_synthetic = true;
  return synthetic_school_network(cfg.synthetic);
}

namespace {

struct SchoolInstance {
  SchoolArm arm;
  int fraction_idx;  // -1 for network-free arms
  double fraction;
  std::string name;
};

std::string fraction_suffix(double f) {
  const int pct = static_cast<int>(std::floor(f * 100.0 + 0.5));
  return "_" + std::to_string(pct);
}

struct SchoolRunOutput {
  std::vector<std::vector<int>> curves;  // per instance
  std::vector<long long> violations;
  std::vector<std::vector<TrajectoryPoint>> trajectories;  // run 0 only
};

int count_new_infections(const std::vector<std::uint8_t>& before,
                         const EpidemicState& after) {
  int c = 0;
  for (std::size_t v = 0; v < before.size(); ++v)
    if (!before[v] && after.infected[v]) ++c;
  return c;
}

}  // namespace

SchoolScenarioResult run_school_scenario(const SchoolScenarioConfig& cfg,
                                         const RunControls& rc) {
  rc.validate();
  if (cfg.arms.empty()) throw config_error("school scenario needs >= 1 arm");
  for (double f : cfg.missing_fractions)
    if (f < 0.0 || f > 1.0)
      throw config_error("missing fractions must lie in [0,1]");

  SchoolScenarioResult result;
  const TemporalNetwork tn = load_school_network(cfg, &result.used_synthetic);
  const NodeId n = tn.n();
  const int steps = cfg.steps > 0 ? std::min(cfg.steps, tn.size()) : tn.size();
  result.steps = steps;
  result.n = n;

  // Community structure of the overlapped network defines the observable
  // sub-networks; detected once and shared by every run.
  {
    const Graph overlapped = overlap(tn, 0, tn.size() - 1);
    Rng frng = make_stream(rc.seed, tag("fluid"));
    result.partition = fluid_communities(overlapped, cfg.communities, frng);
    if (!result.partition.converged && !cfg.quiet)
      std::cerr << "WARNING: community detection did not converge\n";
  }
  const auto observations =
      subnetwork_observations(tn, result.partition.blocks());
  const assim::NetworkAssimilator assimilator(result.partition, cfg.b_scale,
                                              cfg.o_scale);

  std::vector<SchoolInstance> instances;
  const bool need_fractions =
      std::any_of(cfg.arms.begin(), cfg.arms.end(), school_arm_uses_network);
  if (need_fractions && cfg.missing_fractions.empty())
    throw config_error("network-based arms need at least one missing fraction");
  for (SchoolArm a : cfg.arms) {
    if (!school_arm_uses_network(a)) {
      instances.push_back({a, -1, 0.0, to_string(a)});
    } else {
      for (std::size_t fi = 0; fi < cfg.missing_fractions.size(); ++fi)
        instances.push_back({a, static_cast<int>(fi),
                             cfg.missing_fractions[fi],
                             to_string(a) +
                                 fraction_suffix(cfg.missing_fractions[fi])});
    }
  }

  SirParams params;
  params.infect_prob = constant_infection_probability(cfg.infect_prob);
  params.recovery_low = cfg.recovery_low;
  params.recovery_high = cfg.recovery_high;
  params.initial_infection_prob = cfg.initial_infection_prob;
  params.combine_mode = cfg.combine_mode;
  params.validate();

  StrategyConfig base_strategy;
  base_strategy.capacity_fraction = cfg.capacity_fraction;
  if (cfg.doses_per_step >= 0) base_strategy.absolute_budget = cfg.doses_per_step;

  std::vector<SchoolRunOutput> run_outputs(static_cast<std::size_t>(rc.runs));

  parallel_runs(rc.runs, rc.jobs, [&](int run) {
    SchoolRunOutput out;
    out.curves.resize(instances.size());
    out.violations.assign(instances.size(), 0);
    if (run == 0) out.trajectories.resize(instances.size());

    // Masked background networks, one per (fraction, run component); arms
    // with the same run component share the hidden set.
    std::vector<TemporalNetwork> masked_cache(cfg.missing_fractions.size());
    std::vector<std::uint64_t> masked_key(cfg.missing_fractions.size(),
                                          ~0ULL);

    for (std::size_t ii = 0; ii < instances.size(); ++ii) {
      const SchoolInstance& inst = instances[ii];
      const std::uint64_t rcomp = arm_run_component(rc, run, ii);

      const TemporalNetwork* background = nullptr;
      if (inst.fraction_idx >= 0) {
        const auto fi = static_cast<std::size_t>(inst.fraction_idx);
        const std::uint64_t mask_seed =
            mix_key(rc.seed, tag("mask-run"), rcomp,
                    static_cast<std::uint64_t>(inst.fraction_idx));
        if (masked_key[fi] != mask_seed) {
          ObservationMask mask;
          mask.mode = cfg.mask_mode;
          mask.fraction = inst.fraction;
          mask.seed = mask_seed;
          masked_cache[fi] = apply_mask(tn, mask);
          masked_key[fi] = mask_seed;
        }
        background = &masked_cache[fi];
      }

      EpidemicState state =
          init_state(n, params, HashedStepDraws(rc.seed, rcomp, kInitStep));
      InvariantTracker tracker;
      tracker.init(state);
      std::vector<int>& curve = out.curves[ii];
      curve.reserve(static_cast<std::size_t>(steps) + 1);
      curve.push_back(state.infected_count());
      if (run == 0)
        out.trajectories[ii].push_back({0, state.infected_count(),
                                        state.recovered_count(),
                                        state.vaccinated_count(),
                                        state.infected_count()});

      std::vector<std::uint8_t> before_step;
      for (int t = 0; t < steps; ++t) {
        if (inst.arm != SchoolArm::free_run) {
          StrategyConfig sc = base_strategy;
          const Graph* scoring = nullptr;
          Graph analysis;
          switch (inst.arm) {
            case SchoolArm::random:
              sc.kind = StrategyKind::random;
              scoring = &tn.at(t);  // only eligibility is used
              break;
            case SchoolArm::background_hd:
            case SchoolArm::background_bc:
              sc.kind = inst.arm == SchoolArm::background_hd
                            ? StrategyKind::highest_degree
                            : StrategyKind::highest_centrality;
              scoring = &background->at(t);
              break;
            case SchoolArm::assimilated_hd:
            case SchoolArm::assimilated_bc:
              sc.kind = inst.arm == SchoolArm::assimilated_hd
                            ? StrategyKind::highest_degree
                            : StrategyKind::highest_centrality;
              analysis = assimilator.assimilate(
                  background->at(t),
                  observations[static_cast<std::size_t>(t)]);
              scoring = &analysis;
              break;
            default:
              break;
          }
          Rng srng = make_stream(rc.seed, tag("strategy"), rcomp,
                                 static_cast<std::uint64_t>(t));
          const auto targets = select_targets(*scoring, state, sc, srng);
          state = apply_vaccination(std::move(state), targets);
        }
        if (run == 0) before_step = state.infected;
        state = step(tn.at(t), state, params,
                     HashedStepDraws(rc.seed, rcomp,
                                     static_cast<std::uint64_t>(t)));
        curve.push_back(state.infected_count());
        if (run == 0)
          out.trajectories[ii].push_back(
              {t + 1, state.infected_count(), state.recovered_count(),
               state.vaccinated_count(),
               count_new_infections(before_step, state)});
        tracker.check(state);
      }
      out.violations[ii] = tracker.violations;
    }
    run_outputs[static_cast<std::size_t>(run)] = std::move(out);
  });

  for (std::size_t ii = 0; ii < instances.size(); ++ii) {
    std::vector<std::vector<int>> curves;
    curves.reserve(static_cast<std::size_t>(rc.runs));
    long long violations = 0;
    for (const SchoolRunOutput& ro : run_outputs) {
      curves.push_back(ro.curves[ii]);
      violations += ro.violations[ii];
    }
    ArmSummary s = summarize(instances[ii].name, curves, n);
    s.invariant_violations = violations;
    result.summaries.push_back(std::move(s));
    result.exemplar_trajectories.push_back(run_outputs.front().trajectories[ii]);
  }
  return result;
}

// ------------------------------------------------------------ multilayer

std::string to_string(MultilayerArm a) {
  switch (a) {
    case MultilayerArm::prior_hd: return "prior_hd";
    case MultilayerArm::prior_bc: return "prior_bc";
    case MultilayerArm::da_hd: return "da_hd";
    case MultilayerArm::da_bc: return "da_bc";
    case MultilayerArm::true_hd: return "true_hd";
    case MultilayerArm::true_bc: return "true_bc";
  }
  throw config_error("unknown multilayer arm");
}

MultilayerArm multilayer_arm_from_string(const std::string& s) {
  for (MultilayerArm a :
       {MultilayerArm::prior_hd, MultilayerArm::prior_bc, MultilayerArm::da_hd,
        MultilayerArm::da_bc, MultilayerArm::true_hd, MultilayerArm::true_bc})
    if (to_string(a) == s) return a;
  throw config_error("unknown multilayer arm: " + s);
}

std::vector<double> MultilayerScenarioConfig::resolved_initial_probs() const {
  if (!generator.initial_probs.empty()) return generator.initial_probs;
  return initial_probs_by_name(preset);
}

namespace {

bool is_da(MultilayerArm a) {
  return a == MultilayerArm::da_hd || a == MultilayerArm::da_bc;
}
bool is_prior(MultilayerArm a) {
  return a == MultilayerArm::prior_hd || a == MultilayerArm::prior_bc;
}
bool is_bc(MultilayerArm a) {
  return a == MultilayerArm::prior_bc || a == MultilayerArm::da_bc ||
         a == MultilayerArm::true_bc;
}

// Strategy view of the contact graph: each arc weighted by the estimated
// infectious probability of its receiving layer (zero-probability arcs
// vanish, which is what lets betweenness react to the estimates).
Graph probability_weighted_graph(const Graph& g, const LayerModel& lm,
                                 const std::vector<double>& probs) {
  GraphBuilder gb(g.n(), true);
  for (const Edge& e : g.edges())
    gb.add_edge(e.u, e.v,
                probs[static_cast<std::size_t>(
                    lm.layer_of[static_cast<std::size_t>(e.v)])]);
  return gb.build();
}

struct MlRunOutput {
  std::vector<std::vector<int>> curves;
  std::vector<long long> violations;
  std::vector<ProbTrajectoryRow> probs;
  std::vector<std::vector<TrajectoryPoint>> trajectories;  // run 0 only
};

}  // namespace

MultilayerScenarioResult run_multilayer_scenario(
    const MultilayerScenarioConfig& cfg, const RunControls& rc) {
  rc.validate();
  if (cfg.arms.empty()) throw config_error("multilayer scenario needs arms");
  if (cfg.steps < 1) throw config_error("multilayer scenario needs steps >= 1");

  MultilayerConfig gen = cfg.generator;
  gen.initial_probs = cfg.resolved_initial_probs();
  gen.validate();
  const NodeId n = gen.n();

  MultilayerScenarioResult result;
  result.n = n;

  SirParams base_params;
  // Placeholder; each step swaps in the layered infection function.
  base_params.infect_prob = constant_infection_probability(0.0);
  base_params.recovery_low = cfg.recovery_low;
  base_params.recovery_high = cfg.recovery_high;
  base_params.initial_infection_prob = cfg.initial_infection_prob;
  base_params.combine_mode = cfg.combine_mode;

  StrategyConfig base_strategy;
  base_strategy.capacity_fraction = cfg.capacity_fraction;
  if (cfg.doses_per_step >= 0) base_strategy.absolute_budget = cfg.doses_per_step;

  const double homogeneous_prob =
      kernels::sum(gen.initial_probs) /
      static_cast<double>(gen.initial_probs.size());
  const std::vector<double> prior_probs(
      static_cast<std::size_t>(gen.n_layers), homogeneous_prob);

  // The DA arm publishing the probability trajectory (first DA arm listed).
  int prob_arm = -1;
  for (std::size_t ai = 0; ai < cfg.arms.size(); ++ai)
    if (is_da(cfg.arms[ai])) {
      prob_arm = static_cast<int>(ai);
      break;
    }

  std::vector<MlRunOutput> run_outputs(static_cast<std::size_t>(rc.runs));

  parallel_runs(rc.runs, rc.jobs, [&](int run) {
    struct ArmState {
      MultilayerArm arm;
      EpidemicState state{0};
      std::vector<double> p_da;
      std::vector<double> prev_h;
      std::vector<double> prev_delta;
      std::vector<int> curve;
      InvariantTracker tracker;
      LayerModel lm;          // per-arm truth when CRN is off
      Graph own_graph;
      Graph own_prev_graph;
    };

    MlRunOutput out;
    out.curves.resize(cfg.arms.size());
    out.violations.assign(cfg.arms.size(), 0);
    if (run == 0) out.trajectories.resize(cfg.arms.size());

    LayerModel lm_shared;
    lm_shared.layer_sizes.assign(static_cast<std::size_t>(gen.n_layers),
                                 gen.layer_size);
    lm_shared.layer_of.resize(static_cast<std::size_t>(n));
    for (NodeId v = 0; v < n; ++v)
      lm_shared.layer_of[static_cast<std::size_t>(v)] = v / gen.layer_size;
    lm_shared.probs = gen.initial_probs;
    lm_shared.drift_period = cfg.drift_period;
    lm_shared.drift_half_width = cfg.drift_half_width;

    std::vector<ArmState> arms(cfg.arms.size());
    for (std::size_t ai = 0; ai < cfg.arms.size(); ++ai) {
      ArmState& a = arms[ai];
      a.arm = cfg.arms[ai];
      a.lm = lm_shared;
      a.p_da = prior_probs;
      const std::uint64_t rcomp = arm_run_component(rc, run, ai);
      a.state = init_state(n, base_params,
                           HashedStepDraws(rc.seed, rcomp, kInitStep));
      a.tracker.init(a.state);
      a.curve.reserve(static_cast<std::size_t>(cfg.steps) + 1);
      a.curve.push_back(a.state.infected_count());
      if (run == 0)
        out.trajectories[ai].push_back({0, a.state.infected_count(),
                                        a.state.recovered_count(),
                                        a.state.vaccinated_count(),
                                        a.state.infected_count()});
    }

    Graph shared_graph, shared_prev_graph;
    std::vector<std::uint8_t> prev_infected;
    std::vector<double> delta(static_cast<std::size_t>(gen.n_layers));

    for (int t = 0; t < cfg.steps; ++t) {
      if (rc.common_random_numbers) {
        drift_probabilities(
            lm_shared, t,
            HashedDriftDraws(rc.seed, static_cast<std::uint64_t>(run),
                             static_cast<std::uint64_t>(t)));
        if (cfg.fresh_graph_per_step || t == 0) {
          Rng grng = make_stream(
              rc.seed, tag("mlgraph"), static_cast<std::uint64_t>(run),
              cfg.fresh_graph_per_step ? static_cast<std::uint64_t>(t) : 0);
          shared_prev_graph = std::move(shared_graph);
          shared_graph = assemble_multilayer(gen, grng).first;
          if (t == 0) shared_prev_graph = shared_graph;
        }
      }

      for (std::size_t ai = 0; ai < arms.size(); ++ai) {
        ArmState& a = arms[ai];
        const std::uint64_t rcomp = arm_run_component(rc, run, ai);

        const LayerModel* lm = &lm_shared;
        const Graph* graph = &shared_graph;
        const Graph* observed_graph = &shared_prev_graph;
        if (!rc.common_random_numbers) {
          drift_probabilities(a.lm, t,
                              HashedDriftDraws(rc.seed, rcomp,
                                               static_cast<std::uint64_t>(t)));
          if (cfg.fresh_graph_per_step || t == 0) {
            Rng grng = make_stream(
                rc.seed, tag("mlgraph"), rcomp,
                cfg.fresh_graph_per_step ? static_cast<std::uint64_t>(t) : 0);
            a.own_prev_graph = std::move(a.own_graph);
            a.own_graph = assemble_multilayer(gen, grng).first;
            if (t == 0) a.own_prev_graph = a.own_graph;
          }
          lm = &a.lm;
          graph = &a.own_graph;
          observed_graph = &a.own_prev_graph;
        }

        // Sequential BLUE correction from the previous transition.
        if (is_da(a.arm) && t > 0)
          a.p_da = assimilate_layer_probs(a.p_da, a.prev_delta, a.prev_h,
                                          cfg.b_scale, cfg.o_scale);

        const std::vector<double>& scoring_probs =
            is_prior(a.arm) ? prior_probs
                            : (is_da(a.arm) ? a.p_da : lm->probs);

        if (static_cast<int>(ai) == prob_arm && run == 0) {
          double sum_true = kernels::sum(lm->probs);
          double sum_da = kernels::sum(a.p_da);
          for (int l = 0; l < gen.n_layers; ++l) {
            const auto li = static_cast<std::size_t>(l);
            out.probs.push_back(
                {t, l, lm->probs[li], a.p_da[li],
                 sum_true > 0.0 ? lm->probs[li] / sum_true : 0.0,
                 sum_da > 0.0 ? a.p_da[li] / sum_da : 0.0});
          }
        }

        // Strategies act on the latest observed snapshot; with a fresh graph
        // per step that is the previous one (the current step's contacts are
        // not observable before they happen).
        const Graph scoring =
            probability_weighted_graph(*observed_graph, *lm, scoring_probs);
        StrategyConfig sc = base_strategy;
        sc.kind = is_bc(a.arm) ? StrategyKind::highest_centrality
                               : StrategyKind::highest_degree;
        Rng srng = make_stream(rc.seed, tag("strategy"), rcomp,
                               static_cast<std::uint64_t>(t));
        const auto targets = select_targets(scoring, a.state, sc, srng);
        a.state = apply_vaccination(std::move(a.state), targets);

        if (is_da(a.arm))
          a.prev_h = layer_observation_operator(*graph, a.state, *lm,
                                                cfg.mask_susceptible_h);

        prev_infected = a.state.infected;
        SirParams params = base_params;
        params.infect_prob = layered_infection_fn(*lm);
        a.state = step(*graph, a.state, params,
                       HashedStepDraws(rc.seed, rcomp,
                                       static_cast<std::uint64_t>(t)));

        if (is_da(a.arm)) {
          std::fill(delta.begin(), delta.end(), 0.0);
          for (NodeId v = 0; v < n; ++v) {
            const auto vi = static_cast<std::size_t>(v);
            if (!prev_infected[vi] && a.state.infected[vi])
              delta[static_cast<std::size_t>(
                  lm->layer_of[vi])] += 1.0;
          }
          a.prev_delta = delta;
        }

        a.curve.push_back(a.state.infected_count());
        if (run == 0)
          out.trajectories[ai].push_back(
              {t + 1, a.state.infected_count(), a.state.recovered_count(),
               a.state.vaccinated_count(),
               count_new_infections(prev_infected, a.state)});
        a.tracker.check(a.state);
      }
    }

    for (std::size_t ai = 0; ai < arms.size(); ++ai) {
      out.curves[ai] = std::move(arms[ai].curve);
      out.violations[ai] = arms[ai].tracker.violations;
    }
    run_outputs[static_cast<std::size_t>(run)] = std::move(out);
  });

  for (std::size_t ai = 0; ai < cfg.arms.size(); ++ai) {
    std::vector<std::vector<int>> curves;
    curves.reserve(static_cast<std::size_t>(rc.runs));
    long long violations = 0;
    for (const MlRunOutput& ro : run_outputs) {
      curves.push_back(ro.curves[ai]);
      violations += ro.violations[ai];
    }
    ArmSummary s = summarize(to_string(cfg.arms[ai]), curves, n);
    s.invariant_violations = violations;
    result.summaries.push_back(std::move(s));
    result.exemplar_trajectories.push_back(run_outputs.front().trajectories[ai]);
  }
  result.probs = std::move(run_outputs.front().probs);
  return result;
}

// ------------------------------------------------------------------ output

std::vector<std::filesystem::path> emit_outputs(
    const std::string& scenario, const std::vector<ArmSummary>& summaries,
    const std::vector<ProbTrajectoryRow>& probs,
    const std::string& probs_label, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec && !std::filesystem::exists(out_dir))
    throw io_error("cannot create output directory: " + out_dir.string());

  std::vector<std::filesystem::path> written;

  std::vector<CurveSeries> series;
  for (const ArmSummary& s : summaries) {
    const auto path = out_dir / ("curves_" + scenario + "_" + s.arm + ".csv");
    auto out = open_output(path);
    write_curve_csv(out, {s.arm, s.mean, s.stddev});
    written.push_back(path);
    series.push_back({s.arm, s.mean, s.stddev});
  }

  {
    const auto path = out_dir / ("summary_" + scenario + ".csv");
    auto out = open_output(path);
    out << "arm,peak_mean,peak_std\n";
    for (const ArmSummary& s : summaries)
      out << s.arm << ',' << format_double(s.peak_mean_fraction) << ','
          << format_double(s.peak_std_fraction) << '\n';
    written.push_back(path);
  }

  if (!probs.empty()) {
    const auto path = out_dir / ("probs_" + probs_label + ".csv");
    auto out = open_output(path);
    out << "step,layer,p_true,p_analyzed,p_normalized_true,"
           "p_normalized_analyzed\n";
    for (const ProbTrajectoryRow& r : probs)
      out << r.step << ',' << r.layer << ',' << format_double(r.p_true) << ','
          << format_double(r.p_analyzed) << ','
          << format_double(r.p_norm_true) << ','
          << format_double(r.p_norm_analyzed) << '\n';
    written.push_back(path);
  }

  {
    const auto path = out_dir / ("curves_" + scenario + ".svg");
    auto out = open_output(path);
    write_curves_svg(out, "Infected over time: " + scenario, series);
    written.push_back(path);
  }
  return written;
}

std::vector<std::filesystem::path> emit_trajectories(
    const std::string& scenario, const std::vector<ArmSummary>& summaries,
    const std::vector<std::vector<TrajectoryPoint>>& trajectories,
    const std::filesystem::path& out_dir) {
  if (summaries.size() != trajectories.size())
    throw shape_error("trajectory count does not match summary count");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  std::vector<std::filesystem::path> written;
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    const auto path =
        out_dir / ("trajectory_" + scenario + "_" + summaries[i].arm + ".csv");
    auto out = open_output(path);
    write_trajectory_csv(out, trajectories[i]);
    written.push_back(path);
  }
  return written;
}

}  // namespace netda::harness
