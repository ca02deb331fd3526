#pragma once

#include <optional>
#include <string>

#include "fracflow/field_io.hpp"
#include "fracflow/heat.hpp"
#include "fracflow/ns.hpp"

namespace fracflow {

// A field-valued config entry: either an inline expression or "@path" to a
// serialized field, resolved at run time (so missing files surface as I/O
// errors, not config errors).
struct FieldInput {
  std::string raw;
  AnalyticField expr;  // parsed form; meaningful when not from_file()

  bool from_file() const { return !raw.empty() && raw[0] == '@'; }
  std::string path() const { return raw.substr(1); }
};

// Section-structured run configuration:
//   [grid]     ndim, n, length, boundary
//   [operator] op, beta, mode, variant, backend, input, input_y, input_z, origin
//   [heat]     beta, mode, kappa, rho, c, source, initial, dt, steps, integrator
//   [ns]       beta, mode, mu, rho, lambda, initial, seed, slope, force_x,
//              force_y, dt, steps, dealias, double_mollify_viscous, variant
//   [output]   dir, every, format, prefix, timings
struct RunConfig {
  GridSpec grid;

  struct Operator {
    std::string op = "mollify";
    FractionalOrder beta{0.5};
    NormalizationMode mode = NormalizationMode::UnitMass;
    OperatorVariant variant = OperatorVariant::DerivativeOutside;
    FieldBackend backend = FieldBackend::Spectral;
    FieldInput input;    // scalar input, or x component for div/curl
    FieldInput input_y;
    FieldInput input_z;
    double origin = 0.0;  // lower limit for the line operators
  } op;

  HeatConfig heat;
  FieldInput heat_source;
  FieldInput heat_initial;

  NSConfig ns;
  std::string ns_initial_raw = "taylor-green";  // descriptor or "@vx,@vy"

  struct Output {
    std::string dir = "out";
    int every = 10;
    FieldFormat format = FieldFormat::Csv;
    std::string prefix = "field";
    bool timings = false;
  } output;
};

// Parses and validates; collects every violation (unknown sections/keys, bad
// values) and throws one config_error listing them with line numbers.
RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

struct CliOverrides {
  std::optional<double> beta;
  std::optional<NormalizationMode> mode;
  std::optional<FieldBackend> backend;
  std::optional<FieldFormat> format;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
};

// Flag overrides: beta/mode apply to all three solver sections, backend to
// [operator], seed to [ns], format/out_dir to [output].
void apply_overrides(RunConfig& cfg, const CliOverrides& ov);

}  // namespace fracflow
