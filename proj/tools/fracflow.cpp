// fracflow: command-line front end. Subcommands: op, heat, ns, verify, bench.
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 I/O error, 5 verification failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fracflow/bench.hpp"
#include "fracflow/config.hpp"
#include "fracflow/line_ops.hpp"
#include "fracflow/verify.hpp"

namespace fs = std::filesystem;
using namespace fracflow;

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::string> backend;
  std::optional<std::string> mode;
  std::optional<std::string> format;
  std::optional<double> beta;
  std::optional<std::uint64_t> seed;
  bool timings = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "configuration file path");
  cmd->add_option("--out-dir", f.out_dir, "output directory (default: out)");
  cmd->add_option("--backend", f.backend, "spectral | direct");
  cmd->add_option("--beta", f.beta, "fractional order, strictly in (0,1)");
  cmd->add_option("--mode", f.mode,
                  "unit-mass | paper-cf | paper-ysm | losada-nieto");
  cmd->add_option("--format", f.format, "csv | bin");
  cmd->add_option("--seed", f.seed, "random seed for generated initial data");
  cmd->add_flag("--timings", f.timings,
                "embed wall-clock timings in report.json (non-canonical)");
}

RunConfig make_config(const CommonFlags& f) {
  RunConfig cfg =
      f.config_path.empty() ? parse_config("") : load_config_file(f.config_path);
  CliOverrides ov;
  ov.beta = f.beta;
  if (f.mode) ov.mode = normalization_from_string(*f.mode);
  if (f.backend) ov.backend = backend_from_string(*f.backend);
  if (f.format) ov.format = field_format_from_string(*f.format);
  ov.seed = f.seed;
  ov.out_dir = f.out_dir;
  try {
    apply_overrides(cfg, ov);
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
  if (f.timings) cfg.output.timings = true;
  return cfg;
}

fs::path prepare_out_dir(const RunConfig& cfg) {
  fs::path dir(cfg.output.dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw io_error("cannot create output directory: " + cfg.output.dir);
  return dir;
}

void write_report(const RunReport& report, const fs::path& dir, bool timings) {
  fs::path path = dir / "report.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path.string());
  out << report.to_json(timings);
  out.put('\n');
  if (!out) throw io_error("write failed: " + path.string());
}

const char* axis_suffix(int i) {
  static const char* names[3] = {"_x", "_y", "_z"};
  return names[i];
}

// ---------------------------------------------------------------- op ------

ScalarField resolve_input(const FieldInput& fi, const GridSpec& grid) {
  if (fi.from_file()) return read_field(fi.path());
  return fi.expr.sample(grid);
}

int cmd_op(RunConfig cfg) {
  fs::path dir = prepare_out_dir(cfg);
  const std::string& op = cfg.op.op;
  RunReport report;

  ReportValue::Object echo;
  echo["op"] = ReportValue(op);
  echo["beta"] = ReportValue(cfg.op.beta.beta());
  echo["mode"] = ReportValue(to_string(cfg.op.mode));
  echo["variant"] = ReportValue(to_string(cfg.op.variant));
  echo["backend"] = ReportValue(to_string(cfg.op.backend));
  echo["input"] = ReportValue(cfg.op.input.raw);

  std::vector<std::string> written;
  auto emit = [&](const ScalarField& f, const std::string& stem) {
    fs::path p = dir / (stem + extension(cfg.output.format));
    write_field(f, p.string(), cfg.output.format);
    written.push_back(p.string());
  };

  if (op == "cf" || op == "ysm") {
    AnalyticLine f = AnalyticLine::parse(cfg.op.input.raw);
    const int n = cfg.grid.n;
    const double dx = cfg.grid.length / static_cast<double>(n - 1);
    SampledLine line = sample_line(f, cfg.op.origin, dx, n);
    LineOp kind = op == "cf" ? LineOp::CF : LineOp::YSM;
    SampledLine d = kind == LineOp::CF ? cf_derivative(line, cfg.op.beta, cfg.op.mode)
                                       : ysm_derivative(line, cfg.op.beta, cfg.op.mode);
    fs::path p = dir / (cfg.output.prefix + "_" + op + ".csv");
    write_line(d.values, d.origin, d.dx, p.string());
    written.push_back(p.string());

    const double x_end = cfg.op.origin + (n - 1) * dx;
    const double exact = line_oracle(f, kind, cfg.op.beta, cfg.op.mode,
                                     cfg.op.origin, x_end);
    echo["origin"] = ReportValue(cfg.op.origin);
    echo["dx"] = ReportValue(dx);
    echo["samples"] = ReportValue(n);
    report.set("value_at_end", ReportValue(d.values.back()));
    report.set("oracle_at_end", ReportValue(exact));
    report.set("abs_error_at_end", ReportValue(std::abs(d.values.back() - exact)));
  } else {
    GridSpec grid = cfg.grid;
    if (cfg.op.input.from_file()) {
      ScalarField probe = read_field(cfg.op.input.path());
      grid = probe.grid();
    }
    auto vector_input = [&]() {
      VectorField v(grid);
      const FieldInput* comps[3] = {&cfg.op.input, &cfg.op.input_y, &cfg.op.input_z};
      for (int d = 0; d < grid.ndim; ++d) {
        ScalarField c = resolve_input(*comps[d], grid);
        if (!(c.grid() == grid))
          throw config_error("input fields disagree on grid geometry");
        v.comp(d) = std::move(c);
      }
      return v;
    };

    if (op == "mollify") {
      ScalarField out = mollify(resolve_input(cfg.op.input, grid), cfg.op.beta,
                                cfg.op.mode, cfg.op.backend);
      report.set("l2_norm", ReportValue(l2_norm(out)));
      report.set("max_abs", ReportValue(max_abs(out)));
      emit(out, cfg.output.prefix);
    } else if (op == "laplacian") {
      ScalarField out = laplacian_beta(resolve_input(cfg.op.input, grid), cfg.op.beta,
                                       cfg.op.mode, cfg.op.backend);
      report.set("l2_norm", ReportValue(l2_norm(out)));
      report.set("max_abs", ReportValue(max_abs(out)));
      emit(out, cfg.output.prefix);
    } else if (op == "grad") {
      VectorField out = grad_beta(resolve_input(cfg.op.input, grid), cfg.op.beta,
                                  cfg.op.variant, cfg.op.mode, cfg.op.backend);
      report.set("l2_norm", ReportValue(l2_norm(out)));
      report.set("max_abs", ReportValue(max_abs(out)));
      for (int d = 0; d < grid.ndim; ++d)
        emit(out.comp(d), cfg.output.prefix + axis_suffix(d));
    } else if (op == "div") {
      ScalarField out = div_beta(vector_input(), cfg.op.beta, cfg.op.variant,
                                 cfg.op.mode, cfg.op.backend);
      report.set("l2_norm", ReportValue(l2_norm(out)));
      report.set("max_abs", ReportValue(max_abs(out)));
      emit(out, cfg.output.prefix);
    } else if (op == "curl") {
      VectorField v = vector_input();
      if (grid.ndim == 2) {
        ScalarField out = curl2d_beta(v, cfg.op.beta, cfg.op.variant, cfg.op.mode,
                                      cfg.op.backend);
        report.set("l2_norm", ReportValue(l2_norm(out)));
        report.set("max_abs", ReportValue(max_abs(out)));
        emit(out, cfg.output.prefix);
      } else {
        VectorField out = curl3d_beta(v, cfg.op.beta, cfg.op.variant, cfg.op.mode,
                                      cfg.op.backend);
        report.set("l2_norm", ReportValue(l2_norm(out)));
        report.set("max_abs", ReportValue(max_abs(out)));
        for (int d = 0; d < grid.ndim; ++d)
          emit(out.comp(d), cfg.output.prefix + axis_suffix(d));
      }
    } else {
      throw config_error("unknown operator '" + op +
                         "' (expected cf, ysm, mollify, grad, div, curl, or laplacian)");
    }
    ReportValue::Object g;
    g["ndim"] = ReportValue(grid.ndim);
    g["n"] = ReportValue(grid.n);
    g["length"] = ReportValue(grid.length);
    echo["grid"] = ReportValue(std::move(g));
  }

  report.set("config", ReportValue(std::move(echo)));
  ReportValue::Array files;
  for (const auto& w : written) files.push_back(ReportValue(w));
  report.set("files", ReportValue(std::move(files)));
  report.set("exit_status", ReportValue(0));
  write_report(report, dir, cfg.output.timings);
  std::printf("op %s done; %zu file(s) written to %s\n", op.c_str(), written.size(),
              dir.string().c_str());
  return 0;
}

// -------------------------------------------------------------- heat ------

int cmd_heat(RunConfig cfg) {
  fs::path dir = prepare_out_dir(cfg);
  if (cfg.heat_source.from_file())
    cfg.heat.source_field = read_field(cfg.heat_source.path());
  else
    cfg.heat.source = cfg.heat_source.expr;
  if (cfg.heat_initial.from_file())
    cfg.heat.initial_field = read_field(cfg.heat_initial.path());
  else
    cfg.heat.initial = cfg.heat_initial.expr;

  HeatSnapshotHook hook;
  hook.every = cfg.output.every;
  hook.write = [&](long step, double, const ScalarField& T) {
    char name[128];
    std::snprintf(name, sizeof name, "%s_%06ld%s", cfg.output.prefix.c_str(), step,
                  extension(cfg.output.format));
    write_field(T, (dir / name).string(), cfg.output.format);
  };

  RunReport report = run_heat(cfg.heat, hook);
  write_report(report, dir, cfg.output.timings);
  std::printf("heat run done: %ld step(s); report at %s\n", cfg.heat.steps,
              (dir / "report.json").string().c_str());
  return 0;
}

// ---------------------------------------------------------------- ns ------

int cmd_ns(RunConfig cfg) {
  fs::path dir = prepare_out_dir(cfg);
  if (!cfg.ns_initial_raw.empty() && cfg.ns_initial_raw[0] == '@') {
    auto comma = cfg.ns_initial_raw.find(',');
    if (comma == std::string::npos || comma + 1 >= cfg.ns_initial_raw.size() ||
        cfg.ns_initial_raw[comma + 1] != '@')
      throw config_error("sampled initial must name two files: @<vx>,@<vy>");
    ScalarField vx = read_field(cfg.ns_initial_raw.substr(1, comma - 1));
    ScalarField vy = read_field(cfg.ns_initial_raw.substr(comma + 2));
    if (!(vx.grid() == vy.grid()))
      throw config_error("sampled initial components disagree on grid geometry");
    cfg.ns.grid = vx.grid();
    VectorField v(cfg.ns.grid);
    v.comp(0) = std::move(vx);
    v.comp(1) = std::move(vy);
    cfg.ns.initial_field = std::move(v);
    cfg.ns.initial = NSInitial::Sampled;
  }

  NSSnapshotHook hook;
  hook.every = cfg.output.every;
  hook.write = [&](long step, double, const NSState& state) {
    const char* stems[3] = {"vx", "vy", "p"};
    const ScalarField* fields[3] = {&state.velocity.comp(0), &state.velocity.comp(1),
                                    &state.pressure};
    for (int i = 0; i < 3; ++i) {
      char name[128];
      std::snprintf(name, sizeof name, "%s_%s_%06ld%s", cfg.output.prefix.c_str(),
                    stems[i], step, extension(cfg.output.format));
      write_field(*fields[i], (dir / name).string(), cfg.output.format);
    }
  };

  RunReport report = run_ns(cfg.ns, hook);
  write_report(report, dir, cfg.output.timings);
  std::printf("ns run done: %ld step(s); report at %s\n", cfg.ns.steps,
              (dir / "report.json").string().c_str());
  return 0;
}

// ------------------------------------------------------------ verify ------

int cmd_verify(RunConfig cfg, const std::string& suite, double tol_scale) {
  fs::path dir = prepare_out_dir(cfg);
  VerifyResult all;
  all.suite = suite;
  std::vector<std::string> suites;
  if (suite == "all")
    suites = verify_suite_names();
  else
    suites.push_back(suite);

  for (const auto& name : suites) {
    VerifyResult r = verify_suite(name, tol_scale);
    std::printf("suite: %s\n", name.c_str());
    for (const auto& row : r.rows) {
      std::printf("  [%s] %-62s measured=%-13.6g tolerance=%-13.6g\n",
                  row.pass ? "PASS" : "FAIL", row.name.c_str(), row.measured,
                  row.tolerance);
      all.rows.push_back(row);
    }
  }
  int passed = 0;
  for (const auto& row : all.rows) passed += row.pass ? 1 : 0;
  std::printf("verification: %d/%zu checks passed\n", passed, all.rows.size());

  RunReport report;
  report_checks(report, all);
  report.set("tolerance_scale", ReportValue(tol_scale));
  report.set("exit_status", ReportValue(all.passed() ? 0 : 5));
  write_report(report, dir, cfg.output.timings);
  return all.passed() ? 0 : 5;
}

// ------------------------------------------------------------- bench ------

int cmd_bench(RunConfig cfg, const std::string& sizes_csv) {
  fs::path dir = prepare_out_dir(cfg);
  std::vector<int> sizes;
  std::size_t start = 0;
  while (start <= sizes_csv.size()) {
    auto comma = sizes_csv.find(',', start);
    std::string tok = sizes_csv.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!tok.empty()) {
      try {
        sizes.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw config_error("bad bench size '" + tok + "'");
      }
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }

  std::vector<BenchSeries> series = run_bench(sizes);
  for (const auto& s : series) {
    std::printf("%s: exponent %.3f +- %.3f\n", s.name.c_str(), s.exponent,
                s.exponent_ci95);
    for (std::size_t i = 0; i < s.sizes.size(); ++i)
      std::printf("  n=%-6ld points=%-8ld %10.1f ns/sample\n", s.sizes[i], s.points[i],
                  s.ns_per_sample[i]);
  }

  RunReport report;
  report_bench(report, series);
  report.set("exit_status", ReportValue(0));
  // Benchmarks are timings by nature; embed them regardless of the flag.
  write_report(report, dir, true);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fracflow: smoothed-kernel fractional operators, heat, and flow"};
  app.require_subcommand(1);

  CommonFlags f_op, f_heat, f_ns, f_verify, f_bench;
  CLI::App* c_op = app.add_subcommand("op", "apply a line or field operator");
  add_common(c_op, f_op);
  CLI::App* c_heat = app.add_subcommand("heat", "run the heat-conduction solver");
  add_common(c_heat, f_heat);
  CLI::App* c_ns = app.add_subcommand("ns", "run the 2D incompressible flow solver");
  add_common(c_ns, f_ns);

  CLI::App* c_verify = app.add_subcommand("verify", "run a verification suite");
  add_common(c_verify, f_verify);
  std::string suite = "all";
  double tol_scale = 1.0;
  c_verify->add_option("suite", suite, "limits | identities | oracles | backends | all");
  c_verify->add_option("--tolerance-scale", tol_scale,
                       "multiply every tolerance by this factor");

  CLI::App* c_bench = app.add_subcommand("bench", "time the operator kernels");
  add_common(c_bench, f_bench);
  std::string sizes_csv = "256,512,1024";
  c_bench->add_option("--sizes", sizes_csv, "comma-separated grid sizes, ascending");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_op->parsed()) return cmd_op(make_config(f_op));
    if (c_heat->parsed()) return cmd_heat(make_config(f_heat));
    if (c_ns->parsed()) return cmd_ns(make_config(f_ns));
    if (c_verify->parsed()) return cmd_verify(make_config(f_verify), suite, tol_scale);
    if (c_bench->parsed()) return cmd_bench(make_config(f_bench), sizes_csv);
  } catch (const config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const numeric_error& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 3;
  } catch (const io_error& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 4;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
