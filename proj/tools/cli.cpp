#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cellseg/errors.hpp"
#include "cellseg/pipeline.hpp"
#include "cellseg/pnm.hpp"
#include "cellseg/report.hpp"
#include "cellseg/synthetic.hpp"

namespace cellseg::cli {

namespace fs = std::filesystem;

namespace {

// Carries an exit code and message up to run().
struct Failure {
  int code;
  std::string message;
};

std::string read_text(const fs::path& path, int code, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{code, std::string("cannot read ") + what + " '" + path.string() + "'"};
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

PipelineConfig load_config(const std::string& config_file, const std::vector<std::string>& overrides) {
  PipelineConfig cfg;
  try {
    if (!config_file.empty()) {
      cfg = parse_config(read_text(config_file, kBadConfig, "config file"));
    }
    for (const std::string& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    validate(cfg);
  } catch (const ConfigError& e) {
    throw Failure{kBadConfig, std::string("config error: ") + e.what()};
  }
  return cfg;
}

void prepare_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Failure{kUnwritableOutput, "cannot create output directory '" + dir.string() + "'"};
  }
}

template <typename Write>
void write_output(const fs::path& path, Write&& write) {
  try {
    write(path);
  } catch (const IoError& e) {
    throw Failure{kUnwritableOutput, std::string("cannot write output: ") + e.what()};
  }
}

bool is_image(const fs::path& p) {
  std::string ext = p.extension().string();
  std::ranges::transform(ext, ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".ppm" || ext == ".pgm" || ext == ".pnm";
}

std::vector<fs::path> collect_inputs(const fs::path& input) {
  std::error_code ec;
  if (fs::is_regular_file(input, ec)) return {input};
  if (!fs::is_directory(input, ec)) throw Failure{kUnreadableInput, "cannot read input '" + input.string() + "'"};
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(input, ec)) {
    if (entry.is_regular_file() && is_image(entry.path())) files.push_back(entry.path());
  }
  if (ec) throw Failure{kUnreadableInput, "cannot list input directory '" + input.string() + "'"};
  std::ranges::sort(files);
  return files;
}

RasterImage load_image(const fs::path& path) {
  try {
    return read_pnm(path);
  } catch (const IoError& e) {
    throw Failure{kUnreadableInput, std::string("cannot read input: ") + e.what()};
  }
}

int command_run(const std::string& input, const std::string& out_dir, const PipelineConfig& cfg,
                std::ostream& out, std::ostream& err) {
  const std::vector<fs::path> files = collect_inputs(input);
  prepare_output_dir(out_dir);

  std::string csv = csv_header();
  int status = kOk;
  for (const fs::path& file : files) {
    const std::string stem = file.stem().string();
    try {
      const RasterImage img = load_image(file);
      SegmentationResult result;
      try {
        result = run_pipeline(img, cfg);
      } catch (const StageError& e) {
        throw Failure{kStageFailure, file.filename().string() + ": " + e.what()};
      }
      write_output(fs::path(out_dir) / (stem + "_mask.pgm"),
                   [&](const fs::path& p) { write_pnm(p, result.mask); });
      write_output(fs::path(out_dir) / (stem + "_overlay.ppm"),
                   [&](const fs::path& p) { write_pnm(p, overlay(img, result.labels)); });
      csv += csv_row(file.filename().string(), result.counts);
      out << file.filename().string() << ": " << result.counts.spheric << " spheric, "
          << result.counts.nonspheric << " nonspheric, " << result.counts.rejected << " rejected\n";
    } catch (const Failure& f) {
      if (f.code == kUnwritableOutput) throw;
      err << "error: " << f.message << '\n';
      status = std::max(status, f.code);
    }
  }

  write_output(fs::path(out_dir) / "counts.csv", [&](const fs::path& p) {
    std::ofstream f(p, std::ios::binary);
    f << csv;
    f.flush();
    if (!f) throw IoError("'" + p.string() + "'");
  });
  return status;
}

int command_synth(std::uint64_t seed, const std::string& spec_file, const std::string& out_dir,
                  std::ostream& out) {
  SyntheticSpec spec;
  if (!spec_file.empty()) {
    try {
      spec = parse_synthetic_spec(read_text(spec_file, kBadConfig, "spec file"));
    } catch (const ConfigError& e) {
      throw Failure{kBadConfig, std::string("spec error: ") + e.what()};
    }
  }
  SyntheticImage syn;
  try {
    syn = generate_synthetic(seed, spec);
  } catch (const InvalidArgument& e) {
    throw Failure{kBadConfig, std::string("spec error: ") + e.what()};
  }
  prepare_output_dir(out_dir);
  // Ground truth goes to a subdirectory so the image directory can be fed
  // straight to `run`.
  const fs::path truth_dir = fs::path(out_dir) / "truth";
  prepare_output_dir(truth_dir);
  const std::string stem = "synth_" + std::to_string(seed);
  write_output(fs::path(out_dir) / (stem + ".ppm"), [&](const fs::path& p) { write_pnm(p, syn.image); });
  write_output(truth_dir / (stem + "_labels.pgm"), [&](const fs::path& p) { write_pnm(p, syn.truth); });

  CellCounts truth;
  for (ShapeKind k : syn.kinds) ++(k == ShapeKind::Disk ? truth.spheric : truth.nonspheric);
  write_output(truth_dir / (stem + ".csv"), [&](const fs::path& p) {
    std::ofstream f(p, std::ios::binary);
    f << csv_header() << csv_row(stem + ".ppm", truth);
    f.flush();
    if (!f) throw IoError("'" + p.string() + "'");
  });
  out << stem << ".ppm: " << truth.spheric << " disks, " << truth.nonspheric << " blobs\n";
  return kOk;
}

int command_inspect(const std::string& input, const std::string& stage, const std::string& out_file,
                    const PipelineConfig& cfg, std::ostream& out) {
  const auto& stages = pipeline_stages();
  if (std::ranges::find(stages, stage) == stages.end()) {
    std::string known;
    for (const auto& s : stages) known += (known.empty() ? "" : ", ") + s;
    throw Failure{kUsage, "unknown stage '" + stage + "' (known: " + known + ")"};
  }
  const RasterImage img = load_image(input);
  std::optional<StageValue> captured;
  try {
    run_pipeline(img, cfg, [&](std::string_view name, const StageValue& value) {
      if (name == stage) captured = value;
    });
  } catch (const StageError& e) {
    if (!captured) throw Failure{kStageFailure, e.what()};
  }

  const bool colour = std::holds_alternative<RasterImage>(*captured) &&
                      std::get<RasterImage>(*captured).channels() == 3;
  fs::path target = out_file;
  if (target.empty()) target = fs::path(input).stem().string() + "_" + stage + (colour ? ".ppm" : ".pgm");
  write_output(target, [&](const fs::path& p) {
    std::visit([&](const auto& v) { write_pnm(p, v); }, *captured);
  });
  out << "wrote " << target.string() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cell segmentation for phase-contrast style micrographs", "cellseg"};
  app.require_subcommand(1);

  std::string config_file;
  std::vector<std::string> overrides;
  auto add_config_options = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_file, "Pipeline configuration file (key = value lines)");
    cmd->add_option("--set", overrides, "Override one configuration key: key=value")->take_all();
  };

  std::string input;
  std::string out_dir;
  auto* run_cmd = app.add_subcommand("run", "Segment and count cells in an image or a directory of images");
  run_cmd->add_option("input", input, "PGM/PPM file or directory")->required();
  run_cmd->add_option("--out", out_dir, "Output directory")->required();
  add_config_options(run_cmd);

  std::uint64_t seed = 0;
  std::string spec_file;
  auto* synth_cmd = app.add_subcommand("synth", "Render a synthetic micrograph with ground truth");
  synth_cmd->add_option("--seed", seed, "Random seed")->required();
  synth_cmd->add_option("--spec", spec_file, "Synthetic image parameters (key = value lines)");
  synth_cmd->add_option("--out", out_dir, "Output directory")->required();

  std::string stage;
  std::string out_file;
  auto* inspect_cmd = app.add_subcommand("inspect", "Write one intermediate pipeline result");
  inspect_cmd->add_option("input", input, "PGM/PPM file")->required();
  inspect_cmd->add_option("--stage", stage, "Stage name")->required();
  inspect_cmd->add_option("--out", out_file, "Output file (default: <name>_<stage>.pgm|ppm)");
  add_config_options(inspect_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (run_cmd->parsed()) return command_run(input, out_dir, load_config(config_file, overrides), out, err);
    if (synth_cmd->parsed()) return command_synth(seed, spec_file, out_dir, out);
    return command_inspect(input, stage, out_file, load_config(config_file, overrides), out);
  } catch (const Failure& f) {
    err << "error: " << f.message << '\n';
    return f.code;
  }
}

}  // namespace cellseg::cli
