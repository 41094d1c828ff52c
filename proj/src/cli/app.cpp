#include "vocalscreen/cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "vocalscreen/error.hpp"

namespace vocalscreen::cli {

namespace {

void write_effective_config(const GlobalOptions& g, const CLI::App& sub) {
  std::filesystem::create_directories(g.out_dir);
  const auto path = g.out_dir / (sub.get_name() + ".config.toml");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoFailure("cannot write " + path.string());
  out << "# effective configuration for '" << sub.get_name() << "'\n"
      << "seed=" << g.seed << "\n"
      << "jobs=" << g.jobs << "\n"
      << "out=\"" << g.out_dir.generic_string() << "\"\n";
  if (!g.config_file.empty()) out << "config=\"" << g.config_file << "\"\n";
  out << "[" << sub.get_name() << "]\n" << sub.config_to_str(true, false);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"vocalscreen: acoustic depression-risk screening pipeline (WAV -> 16 features -> KNN)",
               "vocalscreen"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML-style key=value configuration file");

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Seed for every random choice")->envname("VOCALSCREEN_SEED")->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker threads for extraction and selection")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--out", g.out_dir, "Output directory")->capture_default_str();

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a labeled synthetic (non-clinical) cohort");
  synth_cmd->add_option("--speakers-per-class", synth.cohort.speakers_per_class)->capture_default_str();
  synth_cmd->add_option("--seconds", synth.cohort.seconds_per_speaker, "Seconds of audio per speaker")
      ->capture_default_str();
  synth_cmd->add_option("--dep-f0", synth.cohort.depression.f0_mean_hz, "Depression-class mean f0 (Hz)")
      ->capture_default_str();
  synth_cmd->add_option("--ctl-f0", synth.cohort.control.f0_mean_hz, "Control-class mean f0 (Hz)")
      ->capture_default_str();
  synth_cmd->add_option("--dep-pauses", synth.cohort.depression.pause_density_per_min, "Pauses per minute")
      ->capture_default_str();
  synth_cmd->add_option("--ctl-pauses", synth.cohort.control.pause_density_per_min, "Pauses per minute")
      ->capture_default_str();

  ExtractOptions extract;
  auto* extract_cmd = app.add_subcommand("extract", "Silence removal, 4 s segmentation and feature extraction");
  extract_cmd->add_option("--manifest", extract.manifest, "Recording manifest (path,label,participant)")
      ->required();
  extract_cmd->add_option("--silence-frame", extract.silence.frame_seconds)->capture_default_str();
  extract_cmd->add_option("--silence-hop", extract.silence.hop_seconds)->capture_default_str();
  extract_cmd->add_option("--silence-ratio", extract.silence.threshold_ratio)->capture_default_str();
  extract_cmd->add_option("--segment-seconds", extract.segment_seconds)->capture_default_str();
  extract_cmd->add_option("--n-fft", extract.features.n_fft)->capture_default_str();
  extract_cmd->add_option("--hop", extract.features.hop)->capture_default_str();
  extract_cmd->add_option("--n-mels", extract.features.n_mels)->capture_default_str();
  extract_cmd->add_option("--fmin", extract.features.fmin)->capture_default_str();
  extract_cmd->add_option("--fmax", extract.features.fmax)->capture_default_str();
  extract_cmd->add_option("--log-floor", extract.features.log_floor)->capture_default_str();
  extract_cmd->add_option("--peak-threshold-db", extract.features.peak_threshold_db)->capture_default_str();

  SplitOptions split_opts;
  auto* split_cmd = app.add_subcommand("split", "Seeded train/test split of a segment manifest");
  split_cmd->add_option("--manifest", split_opts.manifest)->required();
  split_cmd->add_option("--fraction", split_opts.train_fraction, "Training fraction")->capture_default_str();
  split_cmd->add_option("--mode", split_opts.mode)
      ->check(CLI::IsMember({"segment-level", "speaker-disjoint"}))
      ->capture_default_str();

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Fit scaler + KNN and write model.json");
  train_cmd->add_option("--features", train.features)->required();
  train_cmd->add_option("--manifest", train.manifest, "Restrict to the rows of this manifest");
  train_cmd->add_option("--k", train.k)->capture_default_str();
  train_cmd->add_option("--p", train.p, "Minkowski exponent")->capture_default_str();
  train_cmd->add_flag("--no-scaler", train.no_scaler);

  SelectOptions select;
  auto* select_cmd = app.add_subcommand("select", "Cross-validated grid search; writes selection.json and model.json");
  select_cmd->add_option("--features", select.features)->required();
  select_cmd->add_option("--manifest", select.manifest);
  select_cmd->add_option("--folds", select.folds)->capture_default_str();

  EvaluateOptions evaluate;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a model on held-out rows");
  evaluate_cmd->add_option("--model", evaluate.model)->required();
  evaluate_cmd->add_option("--features", evaluate.features)->required();
  evaluate_cmd->add_option("--manifest", evaluate.manifest);
  evaluate_cmd->add_option("--split", evaluate.split_info, "split.json sidecar (default: beside --manifest)");

  PredictOptions predict;
  auto* predict_cmd = app.add_subcommand("predict", "Print segment_id,label,score per feature row");
  predict_cmd->add_option("--model", predict.model)->required();
  predict_cmd->add_option("--features", predict.features)->required();
  predict_cmd->add_option("--manifest", predict.manifest);

  StatsOptions stats;
  auto* stats_cmd = app.add_subcommand("stats", "Per-group descriptive statistics and pooled t-tests");
  stats_cmd->add_option("--features", stats.features)->required();
  stats_cmd->add_option("--manifest", stats.manifest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << "run 'vocalscreen --help' for usage\n";
    return 2;
  }
  if (auto* opt = app.get_config_ptr(); opt && opt->count() > 0) g.config_file = opt->as<std::string>();

  const std::vector<std::pair<CLI::App*, std::function<int()>>> dispatch = {
      {synth_cmd, [&] { return cmd_synth(g, synth, out); }},
      {extract_cmd, [&] { return cmd_extract(g, extract, out); }},
      {split_cmd, [&] { return cmd_split(g, split_opts, out); }},
      {train_cmd, [&] { return cmd_train(g, train, out); }},
      {select_cmd, [&] { return cmd_select(g, select, out); }},
      {evaluate_cmd, [&] { return cmd_evaluate(g, evaluate, out); }},
      {predict_cmd, [&] { return cmd_predict(g, predict, out); }},
      {stats_cmd, [&] { return cmd_stats(g, stats, out); }},
  };

  try {
    for (const auto& [sub, fn] : dispatch) {
      if (!sub->parsed()) continue;
      write_effective_config(g, *sub);
      return fn();
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("vocalscreen");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace vocalscreen::cli
