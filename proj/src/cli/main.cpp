#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "polyflood/config.hpp"
#include "polyflood/fields.hpp"
#include "polyflood/runner.hpp"

namespace {

namespace fs = std::filesystem;
using namespace polyflood;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Source {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::string format;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --preset expands first; keys from --config then override it.
RunConfig load(const Source& src, const std::string& preset_name) {
  std::string text;
  if (!preset_name.empty()) text = "[run]\npreset = " + preset_name + "\n";
  if (!src.config_path.empty()) text += read_file(src.config_path);
  RunConfig config = parse_config(text);
  if (src.seed) config.field.seed = *src.seed;
  if (!src.format.empty()) config.format = parse_output_format(src.format);
  validate(config);
  return config;
}

void add_source_flags(CLI::App* app, Source& src) {
  app->add_option("--config", src.config_path, "Sectioned key = value config file");
  app->add_option("--preset", src.preset, "Built-in preset, expanded before --config");
  app->add_option("--seed", src.seed, "Override field.seed");
}

int cmd_run(const Source& src, const std::string& out_flag) {
  const std::vector<std::string> names =
      src.preset.empty() ? std::vector<std::string>{""} : expand_preset_group(src.preset);
  const bool group = names.size() > 1;
  int status = 0;
  for (const std::string& name : names) {
    std::string out = out_flag;
    RunConfig config;
    try {
      config = load(src, name);
    } catch (const std::exception& e) {
      const std::string dir = out.empty() ? "out" : out;
      write_failure_manifest(group ? (fs::path(dir) / name).string() : dir, name, e.what());
      std::cerr << "config error: " << e.what() << "\n";
      return kExitUsage;
    }
    if (out.empty()) out = config.out_dir;
    if (group) out = (fs::path(out) / name).string();
    const RunOutcome r = run_experiment(config, out);
    std::printf("%s: %s, %ld steps, %.1f s, %ld invariant violations -> %s\n",
                config.name.empty() ? "run" : config.name.c_str(), r.ok ? "ok" : "FAILED", r.steps,
                r.wall_time, r.violations.total(), out.c_str());
    for (const auto& w : r.warnings) std::printf("  warning: %s\n", w.c_str());
    if (!r.ok) {
      std::cerr << "error: " << r.error << "\n";
      status = kExitFailure;
    }
  }
  return status;
}

std::vector<FluxKind> parse_fluxes(const std::vector<std::string>& names) {
  std::vector<FluxKind> out;
  for (const auto& n : names) out.push_back(parse_flux_kind(n));
  return out;
}

int cmd_convergence(const Source& src, const std::string& out_flag,
                    const std::vector<std::string>& fluxes, const std::vector<int>& grids,
                    const ReferenceSpec& ref) {
  RunConfig config = load(src, src.preset.empty() ? "table1-dflu" : src.preset);
  const std::string out = out_flag.empty() ? config.out_dir : out_flag;
  fs::create_directories(out);
  const auto tables = convergence_study(config, parse_fluxes(fluxes), grids, ref);
  nlohmann::json files = nlohmann::json::array();
  for (const auto& t : tables) {
    const std::string name = "convergence_" + to_string(t.flux) + ".csv";
    write_csv((fs::path(out) / name).string(), convergence_csv(t, config.model.m));
    files.push_back(name);
    std::printf("%s\n%6s %12s %10s\n", to_string(t.flux).c_str(), "cells", "e_s", "alpha_s");
    for (const auto& row : t.rows)
      std::printf("%6d %12.4e %10s\n", row.cells, row.error[0],
                  row.alpha[0] ? std::to_string(*row.alpha[0]).c_str() : "-");
  }
  nlohmann::json manifest = {{"name", config.name},
                             {"status", "ok"},
                             {"config", serialize(config)},
                             {"grids", grids},
                             {"reference", {{"cells", ref.cells},
                                            {"flux", to_string(ref.flux)},
                                            {"order", ref.order}}},
                             {"tables", files}};
  std::ofstream(fs::path(out) / "manifest.json") << manifest.dump(2) << "\n";
  return 0;
}

State parse_state(const std::vector<double>& v, int m, const char* what) {
  if (v.size() != static_cast<size_t>(1 + m))
    throw std::invalid_argument(std::string(what) + ": expected s followed by m concentrations");
  State q;
  q.s = v[0];
  for (int l = 0; l < m; ++l) q.c[static_cast<size_t>(l)] = v[static_cast<size_t>(1 + l)];
  return q;
}

int cmd_riemann(const Source& src, const std::string& out_flag, const std::vector<double>& left,
                const std::vector<double>& right, double K_left, double K_right, double xi_min,
                double xi_max, int samples) {
  const RunConfig config = load(src, src.preset.empty() ? "table1-dflu" : src.preset);
  RiemannProblem p;
  p.left = parse_state(left, config.model.m, "--left");
  p.right = parse_state(right, config.model.m, "--right");
  p.ctx_left = {config.v, K_left, config.direction};
  p.ctx_right = {config.v, K_right, config.direction};
  const WaveFan fan = solve(p, config.model);
  const std::string out = out_flag.empty() ? "fan.csv" : out_flag;
  if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
  write_csv(out, fan_table(fan, config.model, xi_min, xi_max, samples));
  std::printf("pattern %s, %zu waves -> %s\n", fan.pattern.c_str(), fan.waves.size(), out.c_str());
  return 0;
}

int cmd_field(const Source& src, const std::string& out_flag) {
  const RunConfig config = load(src, src.preset);
  if (config.dimension != 2) throw std::invalid_argument("field: needs a 2D config");
  const Grid2D grid{config.nx, config.ny};
  const Field f = generate(config.field, grid);
  const std::string out = out_flag.empty() ? "field.csv" : out_flag;
  if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
  export_field(out, grid, f.K);
  for (const auto& w : f.warnings) std::printf("warning: %s\n", w.c_str());
  std::printf("%s field %dx%d, seed %llu -> %s\n", to_string(config.field.kind).c_str(), grid.nx,
              grid.ny, static_cast<unsigned long long>(config.field.seed), out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-volume simulator for two-phase polymer flooding"};
  app.require_subcommand(1);
  std::string out;

  Source run_src;
  auto* run = app.add_subcommand("run", "Run a 1D or 2D simulation; writes snapshots and manifest.json");
  add_source_flags(run, run_src);
  run->add_option("--out", out, "Output directory (default output.dir)");
  run->add_option("--format", run_src.format, "Snapshot format")
      ->check(CLI::IsMember({"csv", "vtk", "both"}));

  Source conv_src;
  std::vector<std::string> fluxes{"dflu", "godunov", "upstream"};
  std::vector<int> grids{50, 100, 200, 400, 800};
  ReferenceSpec ref;
  std::string ref_flux = "godunov";
  auto* conv = app.add_subcommand("convergence", "L1 errors and orders against a fine reference");
  add_source_flags(conv, conv_src);
  conv->add_option("--out", out, "Output directory (default output.dir)");
  conv->add_option("--fluxes", fluxes, "Fluxes to tabulate")->delimiter(',');
  conv->add_option("--grids", grids, "Cell counts, coarse to fine")->delimiter(',');
  conv->add_option("--reference-cells", ref.cells, "Reference cell count");
  conv->add_option("--reference-flux", ref_flux, "Reference flux");
  conv->add_option("--reference-order", ref.order, "Reference order (1 or 2)");

  Source fan_src;
  std::vector<double> left{0.1, 1.0, 0.6}, right{1.0, 0.0, 0.0};
  double K_left = 1.0, K_right = 1.0, xi_min = -2.0, xi_max = 2.0;
  int samples = 801;
  auto* fan = app.add_subcommand("riemann", "Dump the exact Riemann fan as CSV xi, s, c1..cm");
  add_source_flags(fan, fan_src);
  fan->add_option("--out", out, "Output CSV path (default fan.csv)");
  fan->add_option("--left", left, "Left state s,c1,...")->delimiter(',');
  fan->add_option("--right", right, "Right state s,c1,...")->delimiter(',');
  fan->add_option("--K-left", K_left, "Left permeability");
  fan->add_option("--K-right", K_right, "Right permeability");
  fan->add_option("--xi-min", xi_min, "Smallest x/t sampled");
  fan->add_option("--xi-max", xi_max, "Largest x/t sampled");
  fan->add_option("--samples", samples, "Sample count");

  Source field_src;
  auto* field = app.add_subcommand("field", "Generate a permeability field and export it as CSV x, y, K");
  add_source_flags(field, field_src);
  field->add_option("--out", out, "Output CSV path (default field.csv)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (run->parsed()) return cmd_run(run_src, out);
    if (conv->parsed()) {
      ref.flux = parse_flux_kind(ref_flux);
      return cmd_convergence(conv_src, out, fluxes, grids, ref);
    }
    if (fan->parsed())
      return cmd_riemann(fan_src, out, left, right, K_left, K_right, xi_min, xi_max, samples);
    if (field->parsed()) return cmd_field(field_src, out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
