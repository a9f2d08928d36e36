#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netda/community.hpp"
#include "netda/config.hpp"
#include "netda/contact_data.hpp"
#include "netda/errors.hpp"
#include "netda/graph_measures.hpp"
#include "netda/harness.hpp"
#include "netda/io.hpp"
#include "netda/kernels.hpp"
#include "netda/multilayer.hpp"

namespace {

using namespace netda;

CombineMode combine_mode_from(const std::string& s) {
  if (s == "matrix") return CombineMode::matrix;
  if (s == "complementary") return CombineMode::complementary;
  throw config_error("combine_mode must be 'matrix' or 'complementary'");
}

ObservationMask::Mode mask_mode_from(const std::string& s) {
  if (s == "static") return ObservationMask::Mode::static_hidden;
  if (s == "per_step") return ObservationMask::Mode::per_step;
  throw config_error("mask_mode must be 'static' or 'per_step'");
}

harness::SchoolScenarioConfig school_config_from(const ConfigFile& cfg) {
  harness::SchoolScenarioConfig sc;
  sc.dataset_path = cfg.get_string("school.dataset", "");
  if (const char* env = std::getenv("NETDA_SCHOOL_DATASET"))
    if (*env) sc.dataset_path = env;
  sc.window = static_cast<int>(cfg.get_int("school.window", 100));
  sc.communities = static_cast<int>(cfg.get_int("school.communities", 3));
  sc.missing_fractions =
      cfg.get_double_list("school.missing_fractions", {0.5, 0.6, 0.7});
  if (cfg.has("school.arms")) {
    sc.arms.clear();
    for (const std::string& a : cfg.get_string_list("school.arms", {}))
      sc.arms.push_back(harness::school_arm_from_string(a));
  }
  sc.infect_prob = cfg.get_double("school.infect_prob", 0.02);
  sc.recovery_low = static_cast<int>(cfg.get_int("school.recovery_low", 55));
  sc.recovery_high = static_cast<int>(cfg.get_int("school.recovery_high", 65));
  sc.initial_infection_prob =
      cfg.get_double("school.initial_infection_prob", 0.1);
  sc.doses_per_step =
      static_cast<int>(cfg.get_int("school.doses_per_step", 6));
  sc.capacity_fraction = cfg.get_double("school.capacity_fraction", 0.02);
  sc.combine_mode =
      combine_mode_from(cfg.get_string("school.combine_mode", "matrix"));
  sc.mask_mode = mask_mode_from(cfg.get_string("school.mask_mode", "static"));
  sc.b_scale = cfg.get_double("school.b_scale", 1.0);
  sc.o_scale = cfg.get_double("school.o_scale", 1.0);
  sc.steps = static_cast<int>(cfg.get_int("school.steps", 0));
  sc.synthetic.seed = static_cast<std::uint64_t>(
      cfg.get_int("school.synthetic_seed", 20250809));
  sc.synthetic.steps =
      static_cast<int>(cfg.get_int("school.synthetic_steps", 74));
  return sc;
}

harness::MultilayerScenarioConfig multilayer_config_from(
    const ConfigFile& cfg) {
  harness::MultilayerScenarioConfig mc;
  mc.generator.n_layers =
      static_cast<int>(cfg.get_int("multilayer.layers", 5));
  mc.generator.layer_size =
      static_cast<int>(cfg.get_int("multilayer.layer_size", 200));
  mc.generator.ba_m = static_cast<int>(cfg.get_int("multilayer.ba_m", 3));
  mc.generator.inter_density =
      cfg.get_double("multilayer.inter_density", 0.005);
  if (cfg.has("multilayer.initial_probs"))
    mc.generator.initial_probs =
        cfg.get_double_list("multilayer.initial_probs", {});
  if (cfg.has("multilayer.arms")) {
    mc.arms.clear();
    for (const std::string& a : cfg.get_string_list("multilayer.arms", {}))
      mc.arms.push_back(harness::multilayer_arm_from_string(a));
  }
  mc.steps = static_cast<int>(cfg.get_int("multilayer.steps", 75));
  mc.recovery_low =
      static_cast<int>(cfg.get_int("multilayer.recovery_low", 55));
  mc.recovery_high =
      static_cast<int>(cfg.get_int("multilayer.recovery_high", 65));
  mc.initial_infection_prob =
      cfg.get_double("multilayer.initial_infection_prob", 0.05);
  mc.doses_per_step =
      static_cast<int>(cfg.get_int("multilayer.doses_per_step", -1));
  mc.capacity_fraction = cfg.get_double("multilayer.capacity_fraction", 0.02);
  mc.combine_mode =
      combine_mode_from(cfg.get_string("multilayer.combine_mode", "matrix"));
  mc.b_scale = cfg.get_double("multilayer.b_scale", 1.0);
  mc.o_scale = cfg.get_double("multilayer.o_scale", 1.0);
  mc.drift_period =
      static_cast<int>(cfg.get_int("multilayer.drift_period", 5));
  mc.drift_half_width = cfg.get_double("multilayer.drift_half_width", 0.0004);
  mc.fresh_graph_per_step =
      cfg.get_bool("multilayer.fresh_graph_per_step", true);
  mc.mask_susceptible_h = cfg.get_bool("multilayer.mask_susceptible_h", true);
  return mc;
}

int cmd_run(const std::string& config_path, const std::string& out_override,
            long long seed_override, int runs_override, int jobs_override,
            bool trajectories) {
  ConfigFile cfg = config_path.empty() ? ConfigFile()
                                       : ConfigFile::parse_file(config_path);
  if (seed_override >= 0) cfg.set("seed", std::to_string(seed_override));
  if (runs_override > 0) cfg.set("runs", std::to_string(runs_override));
  if (jobs_override > 0) cfg.set("jobs", std::to_string(jobs_override));
  if (!out_override.empty()) cfg.set("out", out_override);

  const std::string scenario = cfg.get_string("scenario", "school");
  const std::filesystem::path out_dir = cfg.get_string("out", "out");

  harness::RunControls rc;
  rc.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 42));
  rc.runs = static_cast<int>(cfg.get_int("runs", 10));
  rc.jobs = static_cast<int>(cfg.get_int("jobs", 1));
  rc.common_random_numbers = cfg.get_bool("common_random_numbers", true);
  rc.validate();

  std::filesystem::create_directories(out_dir);

  if (scenario == "school") {
    const auto sc = school_config_from(cfg);
    const auto result = harness::run_school_scenario(sc, rc);
    if (result.used_synthetic)
      std::cerr << "note: school scenario ran on the synthetic fallback "
                   "network\n";
    harness::emit_outputs("school", result.summaries, {}, "", out_dir);
    if (trajectories)
      harness::emit_trajectories("school", result.summaries,
                                 result.exemplar_trajectories, out_dir);
    {
      auto out = open_output(out_dir / "partition_school.csv");
      write_partition_csv(out, result.partition);
    }
    for (const auto& s : result.summaries)
      std::cout << s.arm << ": peak " << format_double(s.peak_mean_fraction)
                << " (std " << format_double(s.peak_std_fraction) << ")\n";
  } else if (scenario == "multilayer") {
    auto base = multilayer_config_from(cfg);
    std::vector<std::string> presets = cfg.get_string_list(
        "multilayer.presets", {cfg.get_string("multilayer.preset", "CI_a")});
    for (const std::string& preset : presets) {
      auto mc = base;
      mc.preset = preset;
      const auto result = harness::run_multilayer_scenario(mc, rc);
      const std::string name = "multilayer_" + preset;
      harness::emit_outputs(name, result.summaries, result.probs, preset,
                            out_dir);
      if (trajectories)
        harness::emit_trajectories(name, result.summaries,
                                   result.exemplar_trajectories, out_dir);
      for (const auto& s : result.summaries)
        std::cout << preset << ' ' << s.arm << ": peak "
                  << format_double(s.peak_mean_fraction) << " (std "
                  << format_double(s.peak_std_fraction) << ")\n";
    }
  } else {
    throw config_error("scenario must be 'school' or 'multilayer', got '" +
                       scenario + "'");
  }

  // Provenance copy of the fully resolved configuration.
  cfg.set("resolved.kernel_backend",
          kernels::backend_name(kernels::active_backend()));
  cfg.set("resolved.scenario", scenario);
  auto rcopy = open_output(out_dir / "resolved_config.txt");
  rcopy << cfg.serialize();
  return 0;
}

int cmd_detect_communities(const std::string& dataset, bool synthetic,
                           int window, int k, long long seed,
                           const std::string& out_file,
                           const std::string& scan, int scan_seeds) {
  TemporalNetwork tn;
  if (synthetic || dataset.empty()) {
    SyntheticSchoolConfig sc;
    if (seed >= 0) sc.seed = static_cast<std::uint64_t>(seed);
    tn = synthetic_school_network(sc);
    std::cerr << "note: using synthetic fallback network\n";
  } else {
    tn = condense(parse_contact_log_file(dataset), window);
  }
  const Graph overlapped = overlap(tn, 0, tn.size() - 1);

  if (!scan.empty()) {
    const auto colon = scan.find(':');
    if (colon == std::string::npos)
      throw config_error("--scan expects LO:HI");
    const int lo = std::stoi(scan.substr(0, colon));
    const int hi = std::stoi(scan.substr(colon + 1));
    if (lo < 1 || hi < lo) throw config_error("--scan range invalid");
    std::vector<int> ks;
    for (int kk = lo; kk <= hi; ++kk) ks.push_back(kk);
    const auto scan_result = scan_community_number(
        overlapped, ks, scan_seeds,
        static_cast<std::uint64_t>(seed >= 0 ? seed : 42));
    std::cout << "k,mean_performance\n";
    for (const auto& [kk, perf] : scan_result)
      std::cout << kk << ',' << format_double(perf) << '\n';
  }

  Rng rng = make_stream(static_cast<std::uint64_t>(seed >= 0 ? seed : 42),
                        tag("fluid"));
  const Partition p = fluid_communities(overlapped, k, rng);
  std::cerr << "communities: ";
  for (int s : p.block_sizes()) std::cerr << s << ' ';
  std::cerr << "(performance " << format_double(performance_rate(overlapped, p))
            << ")\n";
  if (!out_file.empty()) {
    auto out = open_output(out_file);
    write_partition_csv(out, p);
  } else {
    write_partition_csv(std::cout, p);
  }
  return 0;
}

int cmd_generate_multilayer(int layers, int layer_size, int m,
                            double inter_density, long long seed,
                            const std::string& out_dir_str) {
  MultilayerConfig cfg;
  cfg.n_layers = layers;
  cfg.layer_size = layer_size;
  cfg.ba_m = m;
  cfg.inter_density = inter_density;
  cfg.initial_probs = initial_probs_by_name("CI_a");
  if (static_cast<int>(cfg.initial_probs.size()) != layers)
    cfg.initial_probs.assign(static_cast<std::size_t>(layers), 0.01);

  Rng rng = make_stream(static_cast<std::uint64_t>(seed >= 0 ? seed : 42),
                        tag("mlgraph"));
  const auto [graph, lm] = assemble_multilayer(cfg, rng);

  const std::filesystem::path out_dir = out_dir_str;
  std::filesystem::create_directories(out_dir);
  {
    auto out = open_output(out_dir / "multilayer_edges.csv");
    out << "i,j,w\n";
    for (const Edge& e : graph.edges())
      if (e.u < e.v) out << e.u << ',' << e.v << ',' << format_double(e.w) << '\n';
  }
  {
    auto out = open_output(out_dir / "multilayer_layers.csv");
    out << "node,layer\n";
    for (NodeId v = 0; v < graph.n(); ++v)
      out << v << ',' << lm.layer_of[static_cast<std::size_t>(v)] << '\n';
  }
  std::cout << "nodes: " << graph.n() << "\nedges: " << graph.edge_count() / 2
            << "\n";
  return 0;
}

int cmd_validate_dataset(const std::string& dataset, int window,
                         const std::string& dump) {
  const ContactLog log = parse_contact_log_file(dataset);
  const TemporalNetwork tn = condense(log, window);
  double density_sum = 0.0;
  for (int t = 0; t < tn.size(); ++t) density_sum += graph_density(tn.at(t));
  std::cout << "nodes: " << log.n() << "\n"
            << "records: " << log.records.size() << "\n"
            << "snapshots: " << tn.size() << " (window " << window << ")\n"
            << "mean_density: " << format_double(density_sum / tn.size())
            << "\n";
  if (!dump.empty()) {
    auto out = open_output(dump);
    dump_snapshots_csv(out, tn);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal-network epidemic simulator with sequential network "
               "assimilation"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run a configured scenario");
  std::string run_config, run_out;
  long long run_seed = -1;
  int run_runs = -1, run_jobs = -1;
  bool run_traj = false;
  run->add_option("--config", run_config, "Scenario config file");
  run->add_option("--out", run_out, "Output directory");
  run->add_option("--seed", run_seed, "Root seed override");
  run->add_option("--runs", run_runs, "Monte Carlo run count override");
  run->add_option("--jobs", run_jobs, "Worker thread count");
  run->add_flag("--trajectories", run_traj,
                "Also write run-0 per-arm trajectory CSVs");

  // detect-communities
  auto* detect = app.add_subcommand("detect-communities",
                                    "Cluster the overlapped contact network");
  std::string det_dataset, det_out, det_scan;
  bool det_synth = false;
  int det_window = 100, det_k = 3, det_scan_seeds = 5;
  long long det_seed = -1;
  detect->add_option("--dataset", det_dataset, "Contact log file");
  detect->add_flag("--synthetic", det_synth, "Use the synthetic fallback");
  detect->add_option("--window", det_window, "Condensing window");
  detect->add_option("--k", det_k, "Community count");
  detect->add_option("--seed", det_seed, "Seed");
  detect->add_option("--out", det_out, "Partition CSV output path");
  detect->add_option("--scan", det_scan,
                     "Scan community numbers LO:HI and print performance");
  detect->add_option("--scan-seeds", det_scan_seeds, "Detections per k");

  // generate-multilayer
  auto* gen = app.add_subcommand("generate-multilayer",
                                 "Generate one multi-layer contact network");
  int gen_layers = 5, gen_size = 200, gen_m = 2;
  double gen_density = 0.005;
  long long gen_seed = -1;
  std::string gen_out = "out";
  gen->add_option("--layers", gen_layers, "Layer count");
  gen->add_option("--layer-size", gen_size, "Nodes per layer");
  gen->add_option("--m", gen_m, "Preferential-attachment edges per node");
  gen->add_option("--inter-density", gen_density, "Inter-layer edge density");
  gen->add_option("--seed", gen_seed, "Seed");
  gen->add_option("--out", gen_out, "Output directory");

  // validate-dataset
  auto* val = app.add_subcommand("validate-dataset",
                                 "Parse and summarize a contact log");
  std::string val_dataset, val_dump;
  int val_window = 100;
  val->add_option("--dataset", val_dataset, "Contact log file")->required();
  val->add_option("--window", val_window, "Condensing window");
  val->add_option("--dump", val_dump, "Write snapshot edge CSV here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run)
      return cmd_run(run_config, run_out, run_seed, run_runs, run_jobs,
                     run_traj);
    if (*detect)
      return cmd_detect_communities(det_dataset, det_synth, det_window, det_k,
                                    det_seed, det_out, det_scan,
                                    det_scan_seeds);
    if (*gen)
      return cmd_generate_multilayer(gen_layers, gen_size, gen_m, gen_density,
                                     gen_seed, gen_out);
    if (*val) return cmd_validate_dataset(val_dataset, val_window, val_dump);
  } catch (const netda::numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const netda::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const netda::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const netda::io_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
