#ifndef POLYFLOOD_CONFIG_HPP_
#define POLYFLOOD_CONFIG_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include "polyflood/solver1d.hpp"
#include "polyflood/solver2d.hpp"

namespace polyflood {

enum class Layout { QuarterFiveSpot, Strip };
enum class OutputFormat { Csv, Vtk, Both };

OutputFormat parse_output_format(const std::string& name);
std::string to_string(OutputFormat f);

// Everything a run needs. Fields that do not apply to `dimension` are ignored.
struct RunConfig {
  int dimension = 0;  // 0 means unset; validation requires 1 or 2
  std::string name;   // preset name or a free label, echoed in the manifest

  PhysicsModel model;
  StepOptions step;
  double cfl_safety = 1.0;
  double T = 1.0;
  std::vector<double> output_times;

  // 1D
  int cells = 100;
  double v = 0.2;
  Direction direction = Direction::Vertical;
  double permeability = 1.0;
  State left{0.1, {1.0, 0.6}};
  State right{1.0, {0.0, 0.0}};
  double x_jump = 0.4;

  // 2D
  int nx = 100;
  int ny = 100;
  Layout layout = Layout::QuarterFiveSpot;
  double p_in = 8.0;
  double p_out = 1.0;
  double inlet_fraction = 0.1;
  double outlet_fraction = 0.1;
  Conc c_inlet{};
  State initial{};
  int pressure_every = 1;
  CgOptions cg;
  FieldSpec field;
  std::string field_file;  // CSV x, y, K; overrides the generated field

  std::string out_dir = "out";
  OutputFormat format = OutputFormat::Csv;

  Run1DConfig to_1d() const;
  // Reads field_file when set.
  Run2DConfig to_2d() const;

  bool operator==(const RunConfig& other) const;
};

// Every problem found, each message naming its key as section.key.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

// Grammar, one statement per line:
//   # comment            (also after a value)
//   [section]
//   key = value          lists are comma separated
// A `run.preset` key expands the named preset first; the other keys then override it.
RunConfig parse_config(const std::string& text);
// Rejects what parse_config would reject.
void validate(const RunConfig& config);
// Text that parse_config maps back to an equal config (numbers at 17 digits).
std::string serialize(const RunConfig& config);

std::vector<std::string> preset_names();
// Throws ConfigError for an unknown name.
RunConfig preset(const std::string& name);
// "expt1" etc. name a pair of presets run side by side; single names map to themselves.
std::vector<std::string> expand_preset_group(const std::string& name);

}  // namespace polyflood

#endif  // POLYFLOOD_CONFIG_HPP_
