#include "polyflood/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace polyflood {

OutputFormat parse_output_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "vtk") return OutputFormat::Vtk;
  if (name == "both") return OutputFormat::Both;
  throw std::invalid_argument("output.format: unknown value '" + name + "'");
}

std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Vtk: return "vtk";
    case OutputFormat::Both: return "both";
  }
  return "csv";
}

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (size_t k = 0; k < parts.size(); ++k) out += (k ? sep : "") + parts[k];
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_list(const double* x, size_t n) {
  std::vector<std::string> parts;
  for (size_t k = 0; k < n; ++k) parts.push_back(fmt(x[k]));
  return join(parts, ", ");
}

// Parse failures carry only the problem; the caller prefixes the key.
struct BadValue {
  std::string what;
};

double to_double(const std::string& s) {
  double x = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(x))
    throw BadValue{"expected a number, got '" + s + "'"};
  return x;
}

template <class I>
I to_integer(const std::string& s) {
  I x = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw BadValue{"expected an integer, got '" + s + "'"};
  return x;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "on" || s == "1") return true;
  if (s == "false" || s == "off" || s == "0") return false;
  throw BadValue{"expected true/false, got '" + s + "'"};
}

std::vector<double> to_list(const std::string& s) {
  std::vector<double> out;
  if (trim(s).empty()) return out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(to_double(trim(item)));
  return out;
}

Conc to_conc(const std::string& s) {
  const std::vector<double> v = to_list(s);
  if (v.size() > static_cast<size_t>(kMaxComponents))
    throw BadValue{"at most " + std::to_string(kMaxComponents) + " components"};
  Conc c{};
  for (size_t k = 0; k < v.size(); ++k) c[k] = v[k];
  return c;
}

template <class E>
E enum_value(const std::string& s, std::initializer_list<std::pair<const char*, E>> table) {
  std::vector<std::string> names;
  for (const auto& [name, value] : table) {
    if (s == name) return value;
    names.emplace_back(name);
  }
  throw BadValue{"unknown value '" + s + "' (expected " + join(names, "|") + ")"};
}

template <class E>
std::string enum_name(E e, std::initializer_list<std::pair<const char*, E>> table) {
  for (const auto& [name, value] : table)
    if (value == e) return name;
  return "";
}

constexpr std::initializer_list<std::pair<const char*, ViscosityKind>> kViscosity = {
    {"linear-sum", ViscosityKind::LinearSum},
    {"sqrt-sum", ViscosityKind::SqrtSum},
    {"affine", ViscosityKind::Affine}};
constexpr std::initializer_list<std::pair<const char*, Direction>> kDirection = {
    {"vertical", Direction::Vertical}, {"horizontal", Direction::Horizontal}};
constexpr std::initializer_list<std::pair<const char*, Layout>> kLayout = {
    {"quarter-five-spot", Layout::QuarterFiveSpot}, {"strip", Layout::Strip}};

// Per-component lists whose length is checked against m once all keys are read.
struct Lists {
  std::map<std::string, size_t> conc_sizes;
  std::optional<std::vector<double>> a0, a1;
};

struct Key {
  std::string name;  // section.key
  std::function<void(RunConfig&, Lists&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

std::function<void(RunConfig&, Lists&, const std::string&)> conc_setter(
    const std::string& name, Conc RunConfig::*field) {
  return [name, field](RunConfig& c, Lists& l, const std::string& v) {
    c.*field = to_conc(v);
    l.conc_sizes[name] = to_list(v).size();
  };
}

std::vector<double> ads_list(const RunConfig& c, double AdsorptionLaw::*field) {
  std::vector<double> v;
  for (const auto& law : c.model.adsorption) v.push_back(law.*field);
  return v;
}

const std::vector<Key>& keys() {
  using C = RunConfig;
  using L = Lists;
  using S = const std::string&;
  static const std::vector<Key> table = {
      {"run.dimension", [](C& c, L&, S v) { c.dimension = to_integer<int>(v); },
       [](const C& c) { return std::to_string(c.dimension); }},
      {"run.name", [](C& c, L&, S v) { c.name = v; }, [](const C& c) { return c.name; }},
      {"run.flux",
       [](C& c, L&, S v) {
         try {
           c.step.flux = parse_flux_kind(v);
         } catch (const std::invalid_argument&) {
           throw BadValue{"unknown value '" + v + "' (expected dflu|godunov|upstream)"};
         }
       },
       [](const C& c) { return to_string(c.step.flux); }},
      {"run.order", [](C& c, L&, S v) { c.step.order = to_integer<int>(v); },
       [](const C& c) { return std::to_string(c.step.order); }},
      {"run.theta", [](C& c, L&, S v) { c.step.limiter.theta = to_double(v); },
       [](const C& c) { return fmt(c.step.limiter.theta); }},
      {"run.cfl_safety", [](C& c, L&, S v) { c.cfl_safety = to_double(v); },
       [](const C& c) { return fmt(c.cfl_safety); }},
      {"run.T", [](C& c, L&, S v) { c.T = to_double(v); }, [](const C& c) { return fmt(c.T); }},
      {"run.output_times", [](C& c, L&, S v) { c.output_times = to_list(v); },
       [](const C& c) { return fmt_list(c.output_times.data(), c.output_times.size()); }},

      {"physics.m", [](C& c, L&, S v) { c.model.m = to_integer<int>(v); },
       [](const C& c) { return std::to_string(c.model.m); }},
      {"physics.mu_o", [](C& c, L&, S v) { c.model.mu_o = to_double(v); },
       [](const C& c) { return fmt(c.model.mu_o); }},
      {"physics.mu_w_law", [](C& c, L&, S v) { c.model.viscosity.kind = enum_value(v, kViscosity); },
       [](const C& c) { return enum_name(c.model.viscosity.kind, kViscosity); }},
      {"physics.mu_w_base", [](C& c, L&, S v) { c.model.viscosity.base = to_double(v); },
       [](const C& c) { return fmt(c.model.viscosity.base); }},
      {"physics.mu_w_coeff", [](C& c, L&, S v) { c.model.viscosity.coeff = to_list(v); },
       [](const C& c) {
         return fmt_list(c.model.viscosity.coeff.data(), c.model.viscosity.coeff.size());
       }},
      {"physics.rho_w_g", [](C& c, L&, S v) { c.model.rho_w_g = to_double(v); },
       [](const C& c) { return fmt(c.model.rho_w_g); }},
      {"physics.rho_o_g", [](C& c, L&, S v) { c.model.rho_o_g = to_double(v); },
       [](const C& c) { return fmt(c.model.rho_o_g); }},
      {"physics.gravity", [](C& c, L&, S v) { c.model.gravity_on = to_bool(v); },
       [](const C& c) { return std::string(c.model.gravity_on ? "true" : "false"); }},
      {"physics.c_max", [](C& c, L&, S v) { c.model.c_max = to_double(v); },
       [](const C& c) { return fmt(c.model.c_max); }},
      {"physics.adsorption_a0", [](C&, L& l, S v) { l.a0 = to_list(v); },
       [](const C& c) {
         const auto v = ads_list(c, &AdsorptionLaw::a0);
         return fmt_list(v.data(), v.size());
       }},
      {"physics.adsorption_a1", [](C&, L& l, S v) { l.a1 = to_list(v); },
       [](const C& c) {
         const auto v = ads_list(c, &AdsorptionLaw::a1);
         return fmt_list(v.data(), v.size());
       }},

      {"oned.cells", [](C& c, L&, S v) { c.cells = to_integer<int>(v); },
       [](const C& c) { return std::to_string(c.cells); }},
      {"oned.v", [](C& c, L&, S v) { c.v = to_double(v); }, [](const C& c) { return fmt(c.v); }},
      {"oned.direction", [](C& c, L&, S v) { c.direction = enum_value(v, kDirection); },
       [](const C& c) { return enum_name(c.direction, kDirection); }},
      {"oned.permeability", [](C& c, L&, S v) { c.permeability = to_double(v); },
       [](const C& c) { return fmt(c.permeability); }},
      {"oned.left_s", [](C& c, L&, S v) { c.left.s = to_double(v); },
       [](const C& c) { return fmt(c.left.s); }},
      {"oned.left_c",
       [](C& c, L& l, S v) {
         c.left.c = to_conc(v);
         l.conc_sizes["oned.left_c"] = to_list(v).size();
       },
       [](const C& c) { return fmt_list(c.left.c.data(), static_cast<size_t>(c.model.m)); }},
      {"oned.right_s", [](C& c, L&, S v) { c.right.s = to_double(v); },
       [](const C& c) { return fmt(c.right.s); }},
      {"oned.right_c",
       [](C& c, L& l, S v) {
         c.right.c = to_conc(v);
         l.conc_sizes["oned.right_c"] = to_list(v).size();
       },
       [](const C& c) { return fmt_list(c.right.c.data(), static_cast<size_t>(c.model.m)); }},
      {"oned.x_jump", [](C& c, L&, S v) { c.x_jump = to_double(v); },
       [](const C& c) { return fmt(c.x_jump); }},

      {"twod.nx", [](C& c, L&, S v) { c.nx = to_integer<int>(v); },
       [](const C& c) { return std::to_string(c.nx); }},
      {"twod.ny", [](C& c, L&, S v) { c.ny = to_integer<int>(v); },
       [](const C& c) { return std::to_string(c.ny); }},
      {"twod.layout", [](C& c, L&, S v) { c.layout = enum_value(v, kLayout); },
       [](const C& c) { return enum_name(c.layout, kLayout); }},
      {"twod.p_in", [](C& c, L&, S v) { c.p_in = to_double(v); },
       [](const C& c) { return fmt(c.p_in); }},
      {"twod.p_out", [](C& c, L&, S v) { c.p_out = to_double(v); },
       [](const C& c) { return fmt(c.p_out); }},
      {"twod.inlet_fraction", [](C& c, L&, S v) { c.inlet_fraction = to_double(v); },
       [](const C& c) { return fmt(c.inlet_fraction); }},
      {"twod.outlet_fraction", [](C& c, L&, S v) { c.outlet_fraction = to_double(v); },
       [](const C& c) { return fmt(c.outlet_fraction); }},
      {"twod.c_inlet", conc_setter("twod.c_inlet", &RunConfig::c_inlet),
       [](const C& c) { return fmt_list(c.c_inlet.data(), static_cast<size_t>(c.model.m)); }},
      {"twod.initial_s", [](C& c, L&, S v) { c.initial.s = to_double(v); },
       [](const C& c) { return fmt(c.initial.s); }},
      {"twod.initial_c",
       [](C& c, L& l, S v) {
         c.initial.c = to_conc(v);
         l.conc_sizes["twod.initial_c"] = to_list(v).size();
       },
       [](const C& c) { return fmt_list(c.initial.c.data(), static_cast<size_t>(c.model.m)); }},
      {"twod.pressure_every", [](C& c, L&, S v) { c.pressure_every = to_integer<int>(v); },
       [](const C& c) { return std::to_string(c.pressure_every); }},
      {"twod.cg_tol", [](C& c, L&, S v) { c.cg.rel_tol = to_double(v); },
       [](const C& c) { return fmt(c.cg.rel_tol); }},
      {"twod.cg_max_iter", [](C& c, L&, S v) { c.cg.max_iter = to_integer<int>(v); },
       [](const C& c) { return std::to_string(c.cg.max_iter); }},
      {"twod.preconditioner",
       [](C& c, L&, S v) {
         try {
           c.cg.precond = parse_preconditioner(v);
         } catch (const std::invalid_argument&) {
           throw BadValue{"unknown value '" + v + "' (expected none|jacobi|ic0|mic0)"};
         }
       },
       [](const C& c) { return to_string(c.cg.precond); }},

      {"field.kind",
       [](C& c, L&, S v) {
         try {
           c.field.kind = parse_field_kind(v);
         } catch (const std::invalid_argument&) {
           throw BadValue{"unknown value '" + v + "' (expected constant|gaussian-bumps|hard-rock)"};
         }
       },
       [](const C& c) { return to_string(c.field.kind); }},
      {"field.value", [](C& c, L&, S v) { c.field.value = to_double(v); },
       [](const C& c) { return fmt(c.field.value); }},
      {"field.N", [](C& c, L&, S v) { c.field.N = to_integer<int>(v); },
       [](const C& c) { return std::to_string(c.field.N); }},
      {"field.seed", [](C& c, L&, S v) { c.field.seed = to_integer<std::uint64_t>(v); },
       [](const C& c) { return std::to_string(c.field.seed); }},
      {"field.bump_width", [](C& c, L&, S v) { c.field.bump_width = to_double(v); },
       [](const C& c) { return fmt(c.field.bump_width); }},
      {"field.clip_lo", [](C& c, L&, S v) { c.field.clip_lo = to_double(v); },
       [](const C& c) { return fmt(c.field.clip_lo); }},
      {"field.clip_hi", [](C& c, L&, S v) { c.field.clip_hi = to_double(v); },
       [](const C& c) { return fmt(c.field.clip_hi); }},
      {"field.radius", [](C& c, L&, S v) { c.field.radius = to_double(v); },
       [](const C& c) { return fmt(c.field.radius); }},
      {"field.rock_value", [](C& c, L&, S v) { c.field.rock_value = to_double(v); },
       [](const C& c) { return fmt(c.field.rock_value); }},
      {"field.background", [](C& c, L&, S v) { c.field.background = to_double(v); },
       [](const C& c) { return fmt(c.field.background); }},
      {"field.file", [](C& c, L&, S v) { c.field_file = v; },
       [](const C& c) { return c.field_file; }},

      {"output.dir", [](C& c, L&, S v) { c.out_dir = v; }, [](const C& c) { return c.out_dir; }},
      {"output.format",
       [](C& c, L&, S v) {
         try {
           c.format = parse_output_format(v);
         } catch (const std::invalid_argument&) {
           throw BadValue{"unknown value '" + v + "' (expected csv|vtk|both)"};
         }
       },
       [](const C& c) { return to_string(c.format); }},
  };
  return table;
}

const Key* find_key(const std::string& name) {
  for (const Key& k : keys())
    if (k.name == name) return &k;
  return nullptr;
}

// Adsorption lists take m entries or a single entry applied to every component.
void apply_adsorption(RunConfig& c, const Lists& l, std::vector<std::string>& errors) {
  const auto m = static_cast<size_t>(std::clamp(c.model.m, 0, kMaxComponents));
  std::vector<AdsorptionLaw> laws(m);
  for (size_t k = 0; k < m && k < c.model.adsorption.size(); ++k) laws[k] = c.model.adsorption[k];
  auto fill = [&](const std::optional<std::vector<double>>& list, double AdsorptionLaw::*field,
                  const char* name) {
    if (!list) return;
    if (list->size() == 1) {
      for (auto& law : laws) law.*field = list->front();
    } else if (list->size() == m) {
      for (size_t k = 0; k < m; ++k) laws[k].*field = (*list)[k];
    } else {
      errors.push_back(std::string(name) + ": needs 1 or m = " + std::to_string(m) + " entries");
    }
  };
  fill(l.a0, &AdsorptionLaw::a0, "physics.adsorption_a0");
  fill(l.a1, &AdsorptionLaw::a1, "physics.adsorption_a1");
  c.model.adsorption = laws;
}

void check_conc(const Conc& c, int m, double c_max, const std::string& key,
                std::vector<std::string>& errors) {
  for (int l = 0; l < kMaxComponents; ++l) {
    const double x = c[static_cast<size_t>(l)];
    if (l >= m && x != 0.0) {
      errors.push_back(key + ": component " + std::to_string(l + 1) + " beyond m");
      return;
    }
    if (l < m && !(x >= 0.0 && x <= c_max)) {
      errors.push_back(key + ": concentrations must lie in [0, physics.c_max]");
      return;
    }
  }
}

void collect_errors(const RunConfig& c, std::vector<std::string>& errors) {
  auto check = [&](bool ok, const std::string& msg) {
    if (!ok) errors.push_back(msg);
  };
  if (c.dimension == 0) {
    errors.emplace_back("missing required: dimension");
  } else {
    check(c.dimension == 1 || c.dimension == 2, "run.dimension: must be 1 or 2");
  }
  try {
    c.model.validate();
  } catch (const std::invalid_argument& e) {
    errors.emplace_back(e.what());
  }
  try {
    c.step.limiter.validate();
  } catch (const std::invalid_argument& e) {
    errors.emplace_back(std::string("run.theta: ") + e.what());
  }
  check(c.step.order == 1 || c.step.order == 2, "run.order: must be 1 or 2");
  check(c.cfl_safety > 0.0 && c.cfl_safety <= 1.0, "run.cfl_safety: must lie in (0, 1]");
  check(c.T >= 0.0, "run.T: must be >= 0");
  for (double t : c.output_times) check(t >= 0.0, "run.output_times: must be >= 0");
  if (c.model.m > 2 && c.step.flux == FluxKind::Godunov)
    errors.emplace_back("run.flux: godunov supports at most 2 components");
  // The exact Riemann solver needs the same flux on both sides of a face; a K jump
  // on a vertical face with buoyancy changes it.
  if (c.dimension == 2 && c.step.flux == FluxKind::Godunov && c.model.gravity_on &&
      c.model.rho_w_g != c.model.rho_o_g &&
      (c.field.kind != FieldKind::Constant || !c.field_file.empty()))
    errors.emplace_back("run.flux: godunov needs a constant field when gravity is on; use dflu");
  if (c.dimension == 1) {
    check(c.cells >= 1, "oned.cells: must be >= 1");
    check(c.permeability > 0.0, "oned.permeability: must be > 0");
    check(c.left.s >= 0.0 && c.left.s <= 1.0, "oned.left_s: must lie in [0, 1]");
    check(c.right.s >= 0.0 && c.right.s <= 1.0, "oned.right_s: must lie in [0, 1]");
    check(c.x_jump >= 0.0 && c.x_jump <= 1.0, "oned.x_jump: must lie in [0, 1]");
    check_conc(c.left.c, c.model.m, c.model.c_max, "oned.left_c", errors);
    check_conc(c.right.c, c.model.m, c.model.c_max, "oned.right_c", errors);
  }
  if (c.dimension == 2) {
    check(c.nx >= 1 && c.ny >= 1, "twod.nx, twod.ny: must be >= 1");
    check(c.p_in > c.p_out, "twod.p_in: must exceed twod.p_out");
    check(c.inlet_fraction > 0.0 && c.inlet_fraction <= 1.0,
          "twod.inlet_fraction: must lie in (0, 1]");
    check(c.outlet_fraction > 0.0 && c.outlet_fraction <= 1.0,
          "twod.outlet_fraction: must lie in (0, 1]");
    check(c.initial.s >= 0.0 && c.initial.s <= 1.0, "twod.initial_s: must lie in [0, 1]");
    check_conc(c.c_inlet, c.model.m, c.model.c_max, "twod.c_inlet", errors);
    check_conc(c.initial.c, c.model.m, c.model.c_max, "twod.initial_c", errors);
    check(c.pressure_every >= 1, "twod.pressure_every: must be >= 1");
    check(c.cg.rel_tol > 0.0, "twod.cg_tol: must be > 0");
    check(c.cg.max_iter >= 0, "twod.cg_max_iter: must be >= 0");
    if (c.field_file.empty()) {
      try {
        c.field.validate();
      } catch (const std::invalid_argument& e) {
        errors.emplace_back(e.what());
      }
    }
  }
}

RunConfig table1(FluxKind flux, const std::string& name) {
  RunConfig c;
  c.dimension = 1;
  c.name = name;
  c.step.flux = flux;
  c.step.order = 2;
  return c;
}

RunConfig experiment(const std::string& name, FieldKind field, Conc c_inlet, double c_max,
                     bool gravity, ViscosityKind viscosity) {
  RunConfig c;
  c.dimension = 2;
  c.name = name;
  c.model.gravity_on = gravity;
  c.model.c_max = c_max;
  c.model.viscosity.kind = viscosity;
  c.c_inlet = c_inlet;
  c.initial = State{0.0, {}};
  c.field.kind = field;
  c.cg.precond = Preconditioner::ModifiedIncompleteCholesky;
  c.output_times = {0.25, 0.5, 0.75};
  return c;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join(errors, "; ")), errors_(std::move(errors)) {}

Run1DConfig RunConfig::to_1d() const {
  Run1DConfig r;
  r.model = model;
  r.step = step;
  r.grid.n_cells = cells;
  r.cfl_safety = cfl_safety;
  r.T = T;
  r.v = v;
  r.dir = direction;
  r.left = left;
  r.right = right;
  r.x_jump = x_jump;
  if (permeability != 1.0) r.K.assign(static_cast<size_t>(cells), permeability);
  r.output_times = output_times;
  return r;
}

Run2DConfig RunConfig::to_2d() const {
  Run2DConfig r;
  r.model = model;
  r.step = step;
  r.grid = Grid2D{nx, ny};
  r.boundary.bc = layout == Layout::Strip
                      ? PressureBC::strip()
                      : PressureBC::quarter_five_spot(inlet_fraction, outlet_fraction);
  r.boundary.bc.p_in = p_in;
  r.boundary.bc.p_out = p_out;
  r.boundary.c_inlet = c_inlet;
  r.cfl_safety = cfl_safety;
  r.T = T;
  r.initial = initial;
  r.field = field;
  if (!field_file.empty()) r.K = import_field(field_file, r.grid);
  r.pressure_every = pressure_every;
  r.cg = cg;
  r.output_times = output_times;
  return r;
}

bool RunConfig::operator==(const RunConfig& o) const {
  auto same_ads = [](const std::vector<AdsorptionLaw>& a, const std::vector<AdsorptionLaw>& b) {
    if (a.size() != b.size()) return false;
    for (size_t k = 0; k < a.size(); ++k)
      if (a[k].a0 != b[k].a0 || a[k].a1 != b[k].a1 || a[k].affine() != b[k].affine()) return false;
    return true;
  };
  auto same_state = [](const State& a, const State& b) { return a.s == b.s && a.c == b.c; };
  const PhysicsModel &p = model, &q = o.model;
  const FieldSpec &f = field, &g = o.field;
  return dimension == o.dimension && name == o.name && p.mu_o == q.mu_o &&
         p.viscosity.kind == q.viscosity.kind && p.viscosity.base == q.viscosity.base &&
         p.viscosity.coeff == q.viscosity.coeff && p.rho_w_g == q.rho_w_g &&
         p.rho_o_g == q.rho_o_g && p.gravity_on == q.gravity_on && p.m == q.m &&
         p.c_max == q.c_max && same_ads(p.adsorption, q.adsorption) &&
         step.flux == o.step.flux && step.order == o.step.order &&
         step.limiter.theta == o.step.limiter.theta && cfl_safety == o.cfl_safety && T == o.T &&
         output_times == o.output_times && cells == o.cells && v == o.v &&
         direction == o.direction && permeability == o.permeability &&
         same_state(left, o.left) && same_state(right, o.right) && x_jump == o.x_jump &&
         nx == o.nx && ny == o.ny && layout == o.layout && p_in == o.p_in && p_out == o.p_out &&
         inlet_fraction == o.inlet_fraction && outlet_fraction == o.outlet_fraction &&
         c_inlet == o.c_inlet && same_state(initial, o.initial) &&
         pressure_every == o.pressure_every && cg.rel_tol == o.cg.rel_tol &&
         cg.max_iter == o.cg.max_iter && cg.precond == o.cg.precond && f.kind == g.kind &&
         f.value == g.value && f.N == g.N && f.seed == g.seed && f.bump_width == g.bump_width &&
         f.clip_lo == g.clip_lo && f.clip_hi == g.clip_hi && f.radius == g.radius &&
         f.rock_value == g.rock_value && f.background == g.background &&
         field_file == o.field_file && out_dir == o.out_dir && format == o.format;
}

void validate(const RunConfig& config) {
  std::vector<std::string> errors;
  collect_errors(config, errors);
  if (!errors.empty()) throw ConfigError(errors);
}

RunConfig parse_config(const std::string& text) {
  struct Line {
    std::string key, value;
    int number;
  };
  std::vector<Line> lines;
  std::vector<std::string> errors;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(number) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back(where + "unterminated section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"run", "physics", "oned", "twod", "field", "output"};
      if (std::find(std::begin(known), std::end(known), section) == std::end(known))
        errors.push_back(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back(where + "expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    if (section.empty()) {
      errors.push_back(where + key + ": key outside any [section]");
      continue;
    }
    lines.push_back({section + "." + key, trim(line.substr(eq + 1)), number});
  }

  RunConfig config;
  for (const Line& l : lines) {
    if (l.key != "run.preset") continue;
    try {
      config = preset(l.value);
    } catch (const ConfigError& e) {
      errors.push_back("run.preset: " + e.errors().front());
    }
  }
  Lists lists;
  for (const Line& l : lines) {
    if (l.key == "run.preset") continue;
    const Key* k = find_key(l.key);
    if (!k) {
      errors.push_back(l.key + ": unknown key (line " + std::to_string(l.number) + ")");
      continue;
    }
    try {
      k->set(config, lists, l.value);
    } catch (const BadValue& e) {
      errors.push_back(l.key + ": " + e.what);
    }
  }
  apply_adsorption(config, lists, errors);
  for (const auto& [key, size] : lists.conc_sizes)
    if (static_cast<int>(size) != config.model.m)
      errors.push_back(key + ": needs m = " + std::to_string(config.model.m) + " entries");
  collect_errors(config, errors);
  if (!errors.empty()) throw ConfigError(errors);
  return config;
}

std::string serialize(const RunConfig& config) {
  std::string out;
  std::string section;
  for (const Key& k : keys()) {
    const auto dot = k.name.find('.');
    const std::string sec = k.name.substr(0, dot);
    if (sec != section) {
      out += (section.empty() ? "" : "\n") + ("[" + sec + "]\n");
      section = sec;
    }
    const std::string value = k.get(config);
    // An empty list is written as an empty value, which parses back to an empty list.
    out += k.name.substr(dot + 1) + " = " + value + "\n";
  }
  return out;
}

std::vector<std::string> preset_names() {
  return {"table1-dflu",       "table1-godunov",     "table1-upstream",  "expt1-nopolymer",
          "expt1-polymer",     "expt2-nopolymer",    "expt2-polymer",    "expt3-gravity-off",
          "expt3-gravity-on",  "expt4-single",       "expt4-mixed"};
}

RunConfig preset(const std::string& name) {
  using V = ViscosityKind;
  const auto pm1 = FieldKind::GaussianBumps, pm2 = FieldKind::HardRock;
  if (name == "table1-dflu") return table1(FluxKind::Dflu, name);
  if (name == "table1-godunov") return table1(FluxKind::Godunov, name);
  if (name == "table1-upstream") return table1(FluxKind::Upstream, name);
  if (name == "expt1-nopolymer") return experiment(name, pm1, {0, 0}, 7, true, V::LinearSum);
  if (name == "expt1-polymer") return experiment(name, pm1, {7, 0}, 7, true, V::LinearSum);
  if (name == "expt2-nopolymer") return experiment(name, pm2, {0, 0}, 5, true, V::LinearSum);
  if (name == "expt2-polymer") return experiment(name, pm2, {5, 3}, 5, true, V::LinearSum);
  if (name == "expt3-gravity-off") return experiment(name, pm2, {7, 0}, 7, false, V::LinearSum);
  if (name == "expt3-gravity-on") return experiment(name, pm2, {7, 0}, 7, true, V::LinearSum);
  if (name == "expt4-single") return experiment(name, pm2, {49, 0}, 49, true, V::SqrtSum);
  if (name == "expt4-mixed") return experiment(name, pm2, {25, 24}, 49, true, V::SqrtSum);
  throw ConfigError({"unknown preset '" + name + "' (known: " + join(preset_names(), ", ") +
                     ", table1, expt1, expt2, expt3, expt4)"});
}

std::vector<std::string> expand_preset_group(const std::string& name) {
  if (name == "table1") return {"table1-dflu", "table1-godunov", "table1-upstream"};
  if (name == "expt1") return {"expt1-nopolymer", "expt1-polymer"};
  if (name == "expt2") return {"expt2-nopolymer", "expt2-polymer"};
  if (name == "expt3") return {"expt3-gravity-off", "expt3-gravity-on"};
  if (name == "expt4") return {"expt4-single", "expt4-mixed"};
  return {name};
}

}  // namespace polyflood
