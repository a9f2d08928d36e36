#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "netda/community.hpp"
#include "netda/contact_data.hpp"
#include "netda/epidemic.hpp"
#include "netda/graph.hpp"
#include "netda/multilayer.hpp"

namespace netda::harness {

struct RunControls {
  int runs = 10;
  std::uint64_t seed = 42;
  int jobs = 1;
  // All strategy arms share initial infections, recovery clocks, masks, and
  // infection draws; switch off to reproduce fully independent runs.
  bool common_random_numbers = true;

  void validate() const;
};

// Cross-run curve statistics for one strategy arm. Counts are absolute;
// *_fraction fields divide by the node count. peak = max of the mean curve;
// peak_std is the cross-run population std at that step.
struct ArmSummary {
  std::string arm;
  int n = 0;
  int runs = 0;
  std::vector<double> mean;
  std::vector<double> stddev;
  double peak_mean = 0.0;
  double peak_std = 0.0;
  int peak_step = 0;
  double peak_mean_fraction = 0.0;
  double peak_std_fraction = 0.0;
  long long invariant_violations = 0;
};

ArmSummary summarize(const std::string& arm,
                     const std::vector<std::vector<int>>& per_run_counts,
                     int n);

// ---------------------------------------------------------------- school

enum class SchoolArm {
  free_run,
  random,
  background_hd,
  background_bc,
  assimilated_hd,
  assimilated_bc,
};
std::string to_string(SchoolArm a);
SchoolArm school_arm_from_string(const std::string& s);
bool school_arm_uses_network(SchoolArm a);

struct SchoolScenarioConfig {
  std::string dataset_path;  // empty or missing file -> synthetic fallback
  int window = 100;
  int communities = 3;
  std::vector<double> missing_fractions = {0.5, 0.6, 0.7};
  std::vector<SchoolArm> arms = {
      SchoolArm::free_run,       SchoolArm::random,
      SchoolArm::background_hd,  SchoolArm::background_bc,
      SchoolArm::assimilated_hd, SchoolArm::assimilated_bc,
  };
  double infect_prob = 0.02;
  int recovery_low = 55;
  int recovery_high = 65;
  double initial_infection_prob = 0.1;
  int doses_per_step = 6;  // absolute; < 0 falls back to capacity_fraction
  double capacity_fraction = 0.02;
  CombineMode combine_mode = CombineMode::matrix;
  ObservationMask::Mode mask_mode = ObservationMask::Mode::static_hidden;
  double b_scale = 1.0;
  double o_scale = 1.0;
  int steps = 0;  // 0 -> all snapshots
  SyntheticSchoolConfig synthetic;
  bool quiet = false;
};

struct SchoolScenarioResult {
  std::vector<ArmSummary> summaries;  // arm names encode the missing fraction
  // Run-0 trajectory per arm, aligned with `summaries`.
  std::vector<std::vector<TrajectoryPoint>> exemplar_trajectories;
  Partition partition;
  bool used_synthetic = false;
  int steps = 0;
  NodeId n = 0;
};

SchoolScenarioResult run_school_scenario(const SchoolScenarioConfig& cfg,
                                         const RunControls& rc);

// Loads the configured dataset or the synthetic fallback (with a warning on
// a configured-but-missing file).
TemporalNetwork load_school_network(const SchoolScenarioConfig& cfg,
                                    bool* used_synthetic);

// ------------------------------------------------------------ multilayer

enum class MultilayerArm { prior_hd, prior_bc, da_hd, da_bc, true_hd, true_bc };
std::string to_string(MultilayerArm a);
MultilayerArm multilayer_arm_from_string(const std::string& s);

struct MultilayerScenarioConfig {
  MultilayerScenarioConfig() { generator.ba_m = 3; }

  MultilayerConfig generator;  // initial_probs filled from `preset` if empty
  std::string preset = "CI_a";
  std::vector<MultilayerArm> arms = {
      MultilayerArm::prior_hd, MultilayerArm::prior_bc,
      MultilayerArm::da_hd,    MultilayerArm::da_bc,
      MultilayerArm::true_hd,  MultilayerArm::true_bc,
  };
  int steps = 75;
  int recovery_low = 55;
  int recovery_high = 65;
  double initial_infection_prob = 0.05;
  int doses_per_step = -1;  // < 0 -> round(capacity_fraction * n)
  double capacity_fraction = 0.02;
  CombineMode combine_mode = CombineMode::matrix;
  double b_scale = 1.0;
  double o_scale = 1.0;
  int drift_period = 5;
  double drift_half_width = 0.0004;
  bool fresh_graph_per_step = true;  // false reuses one frozen topology
  bool mask_susceptible_h = true;

  std::vector<double> resolved_initial_probs() const;
};

struct ProbTrajectoryRow {
  int step;
  int layer;
  double p_true, p_analyzed;
  double p_norm_true, p_norm_analyzed;
};

struct MultilayerScenarioResult {
  std::vector<ArmSummary> summaries;
  std::vector<std::vector<TrajectoryPoint>> exemplar_trajectories;
  std::vector<ProbTrajectoryRow> probs;  // run 0, DA arm; empty without one
  NodeId n = 0;
};

MultilayerScenarioResult run_multilayer_scenario(
    const MultilayerScenarioConfig& cfg, const RunControls& rc);

// ------------------------------------------------------------------ output

// Writes curves_<scenario>_<arm>.csv per arm, summary_<scenario>.csv,
// probs_<label>.csv when probability rows are given, and
// curves_<scenario>.svg. Returns the list of files written.
std::vector<std::filesystem::path> emit_outputs(
    const std::string& scenario, const std::vector<ArmSummary>& summaries,
    const std::vector<ProbTrajectoryRow>& probs, const std::string& probs_label,
    const std::filesystem::path& out_dir);

// trajectory_<scenario>_<arm>.csv for the run-0 exemplar trajectories.
std::vector<std::filesystem::path> emit_trajectories(
    const std::string& scenario, const std::vector<ArmSummary>& summaries,
    const std::vector<std::vector<TrajectoryPoint>>& trajectories,
    const std::filesystem::path& out_dir);

}  // namespace netda::harness
