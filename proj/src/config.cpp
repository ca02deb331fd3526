#include "fracflow/config.hpp"

#include "fracflow/line_ops.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

namespace fracflow {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Collects violations across the whole file so one parse reports them all.
struct Diagnostics {
  std::vector<std::string> errors;
  int line = 0;

  void fail(const std::string& msg) {
    errors.push_back("line " + std::to_string(line) + ": " + msg);
  }
  void raise_if_any() const {
    if (errors.empty()) return;
    std::string joined = "invalid configuration:";
    for (const auto& e : errors) joined += "\n  " + e;
    throw config_error(joined);
  }
};

bool parse_double(const std::string& v, double& out) {
  char* end = nullptr;
  out = std::strtod(v.c_str(), &end);
  return end == v.c_str() + v.size() && !v.empty();
}

bool parse_int(const std::string& v, long long& out) {
  char* end = nullptr;
  out = std::strtoll(v.c_str(), &end, 10);
  return end == v.c_str() + v.size() && !v.empty();
}

bool parse_bool(const std::string& v, bool& out) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") { out = true; return true; }
  if (v == "false" || v == "0" || v == "off" || v == "no") { out = false; return true; }
  return false;
}

using Setter = std::function<void(const std::string& key, const std::string& value,
                                  Diagnostics& diag)>;

double need_double(const std::string& key, const std::string& value,
                   Diagnostics& diag, double fallback) {
  double x;
  if (parse_double(value, x)) return x;
  diag.fail("value for '" + key + "' is not a number: '" + value + "'");
  return fallback;
}

long long need_int(const std::string& key, const std::string& value,
                   Diagnostics& diag, long long fallback) {
  long long x;
  if (parse_int(value, x)) return x;
  diag.fail("value for '" + key + "' is not an integer: '" + value + "'");
  return fallback;
}

bool need_bool(const std::string& key, const std::string& value,
               Diagnostics& diag, bool fallback) {
  bool x;
  if (parse_bool(value, x)) return x;
  diag.fail("value for '" + key + "' is not a boolean: '" + value + "'");
  return fallback;
}

void set_beta(FractionalOrder& slot, const std::string& value, Diagnostics& diag) {
  double x;
  if (!parse_double(value, x)) {
    diag.fail("value for 'beta' is not a number: '" + value + "'");
    return;
  }
  try {
    slot = FractionalOrder(x);
  } catch (const std::invalid_argument& e) {
    diag.fail(e.what());
  }
}

void set_mode(NormalizationMode& slot, const std::string& value, Diagnostics& diag) {
  try {
    slot = normalization_from_string(value);
  } catch (const config_error& e) {
    diag.fail(e.what());
  }
}

void set_field_input(FieldInput& slot, const std::string& key,
                     const std::string& value, Diagnostics& diag) {
  slot.raw = value;
  if (slot.from_file()) return;  // resolved at run time
  try {
    slot.expr = AnalyticField::parse(value);
  } catch (const config_error& e) {
    diag.fail(std::string("in '") + key + "': " + e.what());
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  Diagnostics diag;

  // Inline-expression defaults.
  cfg.op.input.raw = "sin(x)";
  cfg.op.input.expr = AnalyticField::parse("sin(x)");
  cfg.heat_source.raw = "0";
  cfg.heat_initial.raw = "sin(x)";
  cfg.heat_initial.expr = AnalyticField::parse("sin(x)");

  Setter grid_setter = [&](const std::string& key, const std::string& value,
                           Diagnostics& d) {
    if (key == "ndim") {
      long long v = need_int(key, value, d, cfg.grid.ndim);
      if (v < 1 || v > 3) d.fail("ndim must be 1, 2, or 3");
      else cfg.grid.ndim = static_cast<int>(v);
    } else if (key == "n") {
      long long v = need_int(key, value, d, cfg.grid.n);
      if (v < 8) d.fail("grid size n must be at least 8");
      else cfg.grid.n = static_cast<int>(v);
    } else if (key == "length") {
      double v = need_double(key, value, d, cfg.grid.length);
      if (!(v > 0.0)) d.fail("length must be positive");
      else cfg.grid.length = v;
    } else if (key == "boundary") {
      if (value == "periodic") cfg.grid.boundary = Boundary::Periodic;
      else if (value == "truncated") cfg.grid.boundary = Boundary::Truncated;
      else d.fail("unknown boundary '" + value + "' (expected periodic or truncated)");
    } else {
      d.fail("unknown key '" + key + "' in [grid]");
    }
  };

  int op_input_line = 0;
  Setter op_setter = [&](const std::string& key, const std::string& value,
                         Diagnostics& d) {
    if (key == "op") cfg.op.op = value;
    else if (key == "beta") set_beta(cfg.op.beta, value, d);
    else if (key == "mode") set_mode(cfg.op.mode, value, d);
    else if (key == "variant") {
      try { cfg.op.variant = variant_from_string(value); }
      catch (const config_error& e) { d.fail(e.what()); }
    } else if (key == "backend") {
      try { cfg.op.backend = backend_from_string(value); }
      catch (const config_error& e) { d.fail(e.what()); }
    } else if (key == "input") {
      // Deferred: cf/ysm take line descriptors, field ops take expressions,
      // and `op` may appear later in the file than `input`.
      cfg.op.input.raw = value;
      op_input_line = d.line;
    } else if (key == "input_y") set_field_input(cfg.op.input_y, key, value, d);
    else if (key == "input_z") set_field_input(cfg.op.input_z, key, value, d);
    else if (key == "origin") cfg.op.origin = need_double(key, value, d, cfg.op.origin);
    else d.fail("unknown key '" + key + "' in [operator]");
  };

  Setter heat_setter = [&](const std::string& key, const std::string& value,
                           Diagnostics& d) {
    if (key == "beta") set_beta(cfg.heat.beta, value, d);
    else if (key == "mode") set_mode(cfg.heat.mode, value, d);
    else if (key == "kappa") cfg.heat.kappa = need_double(key, value, d, cfg.heat.kappa);
    else if (key == "rho") cfg.heat.rho = need_double(key, value, d, cfg.heat.rho);
    else if (key == "c") cfg.heat.c_heat =
        need_double(key, value, d, cfg.heat.c_heat);
    else if (key == "source") set_field_input(cfg.heat_source, key, value, d);
    else if (key == "initial") set_field_input(cfg.heat_initial, key, value, d);
    else if (key == "dt") cfg.heat.dt = need_double(key, value, d, cfg.heat.dt);
    else if (key == "steps") {
      long long v = need_int(key, value, d, cfg.heat.steps);
      if (v < 0) d.fail("steps must be non-negative");
      else cfg.heat.steps = static_cast<long>(v);
    } else if (key == "integrator") {
      try { cfg.heat.integrator = heat_integrator_from_string(value); }
      catch (const config_error& e) { d.fail(e.what()); }
    } else d.fail("unknown key '" + key + "' in [heat]");
  };

  Setter ns_setter = [&](const std::string& key, const std::string& value,
                         Diagnostics& d) {
    if (key == "beta") set_beta(cfg.ns.beta, value, d);
    else if (key == "mode") set_mode(cfg.ns.mode, value, d);
    else if (key == "mu") cfg.ns.mu = need_double(key, value, d, cfg.ns.mu);
    else if (key == "rho") cfg.ns.rho = need_double(key, value, d, cfg.ns.rho);
    else if (key == "lambda") cfg.ns.lambda_bulk =
        need_double(key, value, d, cfg.ns.lambda_bulk);
    else if (key == "initial") {
      cfg.ns_initial_raw = value;
      if (value == "taylor-green") cfg.ns.initial = NSInitial::TaylorGreen;
      else if (value == "random") cfg.ns.initial = NSInitial::RandomDivFree;
      else if (!value.empty() && value[0] == '@') cfg.ns.initial = NSInitial::Sampled;
      else d.fail("unknown initial '" + value +
                  "' (expected taylor-green, random, or @file_x,@file_y)");
    } else if (key == "seed") {
      long long v = need_int(key, value, d, 1);
      cfg.ns.seed = static_cast<std::uint64_t>(v);
    } else if (key == "slope") cfg.ns.spectrum_slope =
        need_double(key, value, d, cfg.ns.spectrum_slope);
    else if (key == "force_x" || key == "force_y") {
      try {
        AnalyticField f = AnalyticField::parse(value);
        if (key == "force_x") cfg.ns.force_x = f;
        else cfg.ns.force_y = f;
      } catch (const config_error& e) {
        d.fail(std::string("in '") + key + "': " + e.what());
      }
    } else if (key == "dt") cfg.ns.dt = need_double(key, value, d, cfg.ns.dt);
    else if (key == "steps") {
      long long v = need_int(key, value, d, cfg.ns.steps);
      if (v < 0) d.fail("steps must be non-negative");
      else cfg.ns.steps = static_cast<long>(v);
    } else if (key == "dealias") cfg.ns.dealias = need_bool(key, value, d, cfg.ns.dealias);
    else if (key == "double_mollify_viscous") cfg.ns.double_mollify_viscous =
        need_bool(key, value, d, cfg.ns.double_mollify_viscous);
    else if (key == "variant") {
      try { cfg.ns.variant = variant_from_string(value); }
      catch (const config_error& e) { d.fail(e.what()); }
    } else d.fail("unknown key '" + key + "' in [ns]");
  };

  Setter output_setter = [&](const std::string& key, const std::string& value,
                             Diagnostics& d) {
    if (key == "dir") cfg.output.dir = value;
    else if (key == "every") {
      long long v = need_int(key, value, d, cfg.output.every);
      if (v < 1) d.fail("every must be at least 1");
      else cfg.output.every = static_cast<int>(v);
    } else if (key == "format") {
      try { cfg.output.format = field_format_from_string(value); }
      catch (const config_error& e) { d.fail(e.what()); }
    } else if (key == "prefix") cfg.output.prefix = value;
    else if (key == "timings") cfg.output.timings =
        need_bool(key, value, d, cfg.output.timings);
    else d.fail("unknown key '" + key + "' in [output]");
  };

  Setter* active = nullptr;
  std::string section;

  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++diag.line;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        diag.fail("malformed section header '" + line + "'");
        active = nullptr;
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section == "grid") active = &grid_setter;
      else if (section == "operator") active = &op_setter;
      else if (section == "heat") active = &heat_setter;
      else if (section == "ns") active = &ns_setter;
      else if (section == "output") active = &output_setter;
      else {
        diag.fail("unknown section [" + section + "]");
        active = nullptr;
      }
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string::npos) {
      diag.fail("expected 'key = value', got '" + line + "'");
      continue;
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      diag.fail("missing key before '='");
      continue;
    }
    if (!active) {
      if (section.empty()) diag.fail("key '" + key + "' appears before any section");
      continue;  // keys in an unknown section were already reported once
    }
    (*active)(key, value, diag);
  }

  if (!cfg.op.input.from_file()) {
    std::string problem;
    if (cfg.op.op == "cf" || cfg.op.op == "ysm") {
      try {
        AnalyticLine::parse(cfg.op.input.raw);
      } catch (const config_error& e) {
        problem = e.what();
      }
    } else {
      try {
        cfg.op.input.expr = AnalyticField::parse(cfg.op.input.raw);
      } catch (const config_error& e) {
        problem = e.what();
      }
    }
    if (!problem.empty()) {
      if (op_input_line > 0) {
        diag.line = op_input_line;
        diag.fail("in 'input': " + problem);
      } else {
        diag.errors.push_back("in 'input': " + problem);
      }
    }
  }
  diag.raise_if_any();

  cfg.heat.grid = cfg.grid;
  if (cfg.grid.ndim == 2) cfg.ns.grid = cfg.grid;
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void apply_overrides(RunConfig& cfg, const CliOverrides& ov) {
  if (ov.beta) {
    FractionalOrder b(*ov.beta);  // may throw invalid_argument -> config error path
    cfg.op.beta = b;
    cfg.heat.beta = b;
    cfg.ns.beta = b;
  }
  if (ov.mode) {
    cfg.op.mode = *ov.mode;
    cfg.heat.mode = *ov.mode;
    cfg.ns.mode = *ov.mode;
  }
  if (ov.backend) cfg.op.backend = *ov.backend;
  if (ov.format) cfg.output.format = *ov.format;
  if (ov.seed) cfg.ns.seed = *ov.seed;
  if (ov.out_dir) cfg.output.dir = *ov.out_dir;
}

}  // namespace fracflow
