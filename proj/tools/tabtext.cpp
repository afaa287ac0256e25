// tabtext command-line interface.
//
//   tabtext run <config> [--out DIR] [--full-scale] [--data-dir DIR]
//   tabtext report <record.json> [--format text|json|csv|all] [--out DIR]
//   tabtext data info <dataset> [--data-dir DIR]
//   tabtext data synth <dataset> [--dir DIR] [--rows N]
//   tabtext render <dataset> [--template ID] [--rows N] [--data-dir DIR]
//   tabtext fit <dataset> [--tau T] [--fit-on train|full] [--data-dir DIR]
//   tabtext templates
//
// `run` executes one experiment from a JSON/YAML config and writes the run
// record plus all three report formats; exit status is nonzero if any arm
// failed. The other subcommands are small utilities over the same library.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tabtext/harness.hpp"

using namespace tabtext;

namespace {

TabularDataset load_dataset(const std::string& name, const std::string& data_dir,
                            bool synth_only) {
  if (synth_only) return synth_builtin(name);
  try {
    return register_builtin(name, data_dir);
  } catch (const error&) {
    std::cerr << "note: no file corpus for '" << name
              << "', using the generated replica\n";
    return synth_builtin(name);
  }
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            bool full_scale, const std::string& data_dir) {
  ExperimentConfig cfg = load_config(config_path);
  if (full_scale) cfg.full_scale = true;
  if (!data_dir.empty()) cfg.data_dir = data_dir;
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  cfg.validate();

  std::cout << "running " << experiment_name(cfg.experiment) << " on "
            << cfg.dataset << " ..." << std::endl;
  RunRecord rec = run(cfg);

  std::filesystem::create_directories(cfg.output_dir);
  std::string record_path = cfg.output_dir + "/" + rec.stem() + ".record.json";
  std::ofstream(record_path) << rec.to_json().dump(2) << "\n";
  std::string txt = emit_report(rec, ReportFormat::text_table, cfg.output_dir);
  emit_report(rec, ReportFormat::json, cfg.output_dir);
  emit_report(rec, ReportFormat::plot_data, cfg.output_dir);

  std::ifstream body(txt);
  std::cout << body.rdbuf() << "\n";
  std::cout << "record: " << record_path << "\n";
  if (!rec.all_completed) {
    std::cerr << "one or more arms failed; see the report\n";
    return 1;
  }
  return 0;
}

int cmd_report(const std::string& record_path, const std::string& format,
               const std::string& out_dir) {
  std::ifstream f(record_path);
  if (!f) {
    std::cerr << "cannot read record: " << record_path << "\n";
    return 1;
  }
  RunRecord rec = RunRecord::from_json(nlohmann::json::parse(f));
  std::string dir = out_dir.empty()
                        ? std::filesystem::path(record_path).parent_path().string()
                        : out_dir;
  if (dir.empty()) dir = ".";
  auto one = [&](ReportFormat fmt) {
    std::cout << emit_report(rec, fmt, dir) << "\n";
  };
  if (format == "text" || format == "all") one(ReportFormat::text_table);
  if (format == "json" || format == "all") one(ReportFormat::json);
  if (format == "csv" || format == "all") one(ReportFormat::plot_data);
  return 0;
}

int cmd_data_info(const std::string& name, const std::string& data_dir) {
  TabularDataset ds = load_dataset(name, data_dir, false);
  std::cout << describe(ds) << "\n";
  return 0;
}

int cmd_data_synth(const std::string& name, const std::string& dir, size_t rows) {
  std::string path = write_builtin_csv(name, dir, rows);
  std::cout << "wrote " << path << "\n";
  return 0;
}

int cmd_render(const std::string& name, std::string template_id, size_t rows,
               const std::string& data_dir, bool synth_only) {
  TabularDataset ds = load_dataset(name, data_dir, synth_only);
  if (template_id.empty()) template_id = name;
  SerializationTemplate tmpl = builtin_template(template_id);
  for (size_t i = 0; i < rows && i < ds.n_rows(); ++i)
    std::cout << render_row(ds, i, tmpl).text << "\n\n";
  return 0;
}

int cmd_fit(const std::string& name, double tau, const std::string& fit_on,
            const std::string& data_dir, bool synth_only) {
  TabularDataset ds = load_dataset(name, data_dir, synth_only);
  TabularDataset fit_ds = ds;
  if (fit_on == "train") fit_ds = split(ds, 0.2, 42).train;

  AnovaResult res = anova_f_scores(fit_ds);
  std::printf("%-32s %12s %s\n", "feature", "F-score", tau > 0 ? "kept?" : "");
  for (const auto& fs : ranked(res.scores)) {
    if (tau > 0)
      std::printf("%-32s %12.4f %s\n", fs.feature.c_str(), fs.score,
                  fs.score >= tau ? "keep" : "drop");
    else
      std::printf("%-32s %12.4f\n", fs.feature.c_str(), fs.score);
  }
  return 0;
}

int cmd_templates() {
  for (const auto& name : builtin_dataset_names()) {
    SerializationTemplate t = builtin_template(name);
    std::cout << name << ": " << t.clauses.size() << " clauses\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tabtext: serialize tabular data to text and benchmark models on it"};
  app.require_subcommand(1);

  std::string config_path, out_dir, data_dir, record_path;
  std::string format = "all";
  bool full_scale = false, synth_only = false;

  auto* run_cmd = app.add_subcommand("run", "execute an experiment config");
  run_cmd->add_option("config", config_path, "JSON or YAML experiment config")
      ->required();
  run_cmd->add_option("--out", out_dir, "output directory (default from config)");
  run_cmd->add_flag("--full-scale", full_scale,
                    "lift desk-scale subsampling and use the published full grids");
  run_cmd->add_option("--data-dir", data_dir, "directory with the dataset CSVs");

  auto* report_cmd =
      app.add_subcommand("report", "re-emit reports from a saved run record");
  report_cmd->add_option("record", record_path, "path to a .record.json file")
      ->required();
  report_cmd->add_option("--format", format, "text | json | csv | all")
      ->check(CLI::IsMember({"text", "json", "csv", "all"}));
  report_cmd->add_option("--out", out_dir, "output directory (default: beside record)");

  auto* data_cmd = app.add_subcommand("data", "dataset utilities");
  std::string ds_name, out_csv;
  size_t rows = 0;
  auto* info_cmd = data_cmd->add_subcommand("info", "describe a benchmark dataset");
  info_cmd->add_option("dataset", ds_name, "dataset name")->required();
  info_cmd->add_option("--data-dir", data_dir, "directory with the dataset CSVs");
  auto* synth_cmd =
      data_cmd->add_subcommand("synth", "write a generated replica to CSV");
  synth_cmd->add_option("dataset", ds_name, "dataset name")->required();
  synth_cmd->add_option("--dir", out_csv, "output directory (default: data dir)");
  synth_cmd->add_option("--rows", rows, "row count (default: documented size)");
  data_cmd->require_subcommand(1);

  auto* render_cmd =
      app.add_subcommand("render", "print serialized text for the first rows");
  std::string template_id;
  size_t n_render = 3;
  render_cmd->add_option("dataset", ds_name, "dataset name")->required();
  render_cmd->add_option("--template", template_id, "template id (default: dataset)");
  render_cmd->add_option("--rows", n_render, "rows to render (default 3)");
  render_cmd->add_option("--data-dir", data_dir, "directory with the dataset CSVs");
  render_cmd->add_flag("--synth", synth_only, "use the generated replica");

  auto* fit_cmd =
      app.add_subcommand("fit", "rank features by ANOVA F-score, optionally vs a threshold");
  double tau = 0.0;
  std::string fit_on = "full";
  fit_cmd->add_option("dataset", ds_name, "dataset name")->required();
  fit_cmd->add_option("--tau", tau, "selection threshold (0 = rank only)");
  fit_cmd->add_option("--fit-on", fit_on, "full | train (seed-42 80/20 split)")
      ->check(CLI::IsMember({"full", "train"}));
  fit_cmd->add_option("--data-dir", data_dir, "directory with the dataset CSVs");
  fit_cmd->add_flag("--synth", synth_only, "use the generated replica");

  auto* tmpl_cmd = app.add_subcommand("templates", "list the shipped templates");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(config_path, out_dir, full_scale, data_dir);
    if (report_cmd->parsed()) return cmd_report(record_path, format, out_dir);
    if (data_cmd->parsed()) {
      if (info_cmd->parsed()) return cmd_data_info(ds_name, data_dir);
      if (synth_cmd->parsed()) return cmd_data_synth(ds_name, out_csv, rows);
    }
    if (render_cmd->parsed())
      return cmd_render(ds_name, template_id, n_render, data_dir, synth_only);
    if (fit_cmd->parsed()) return cmd_fit(ds_name, tau, fit_on, data_dir, synth_only);
    if (tmpl_cmd->parsed()) return cmd_templates();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
