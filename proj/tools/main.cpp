#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "manifest.hpp"
#include "oped/errors.hpp"
#include "oped/grid.hpp"
#include "oped/kernels.hpp"
#include "oped/oped.hpp"
#include "oped/parallel.hpp"
#include "oped/phantom.hpp"
#include "oped/radon.hpp"
#include "oped/svd.hpp"

namespace {

using nlohmann::json;
using oped::cli::Manifest;

enum Exit { kOk = 0, kIo = 1, kValidation = 2, kNumerical = 3 };

struct SimulateArgs {
  std::string phantom;
  std::string output;
  int dim = 0;
  std::string type;
  int order = 0;
  double noise = 0.0;
  std::optional<std::uint64_t> seed;
  bool numeric = false;
  int refinement = 16;
  int threads = 0;
};

struct ReconstructArgs {
  std::string input;
  std::string output;
  int order = 0;
  std::string type;
  std::string filter = "none";
  int resolution = 128;
  std::string algorithm = "oped";
  int truncation = -1;
  std::string reference;
  std::string pgm;
  std::string summation = "pairwise";
  bool diagnostics = false;
  bool compare = false;
  int threads = 0;
};

struct VerifyArgs {
  int dim = 2;
  int n_max = 6;
  int lattice = 20;
  std::uint64_t seed = 7;
  std::string output;
};

struct ReportArgs {
  std::string grid;
  std::string reference;
  std::string reference_grid;
  std::string output;
};

struct DiagnoseArgs {
  std::string input;
  int dim = 2;
  std::string type;
  int order = 0;
  std::string filter = "none";
  int resolution = 128;
  std::string output;
  int threads = 0;
};

bool is_preset(const std::string& spec) { return spec.rfind("preset:", 0) == 0; }

oped::ScanType expected_type(const std::string& name, int dim) {
  const oped::ScanType t = oped::parse_scan_type(name);
  if (name == "3d" && dim != 3) throw oped::ValidationError("--type 3d needs a three-dimensional sinogram");
  return t;
}

void write_json_file(const json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw oped::IoError("cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
  if (!out) throw oped::IoError("failed writing '" + path + "'");
}

double max_abs_delta(const oped::ImageGrid& a, const oped::ImageGrid& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.mask[i]) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  }
  return m;
}

int run_simulate(const SimulateArgs& a, int argc, char** argv) {
  Manifest manifest("simulate", argc, argv);
  const oped::Source source = oped::load_source(a.phantom);
  if (!is_preset(a.phantom)) manifest.add_input("phantom", a.phantom);
  const int dim = a.dim > 0 ? a.dim : oped::source_dim(source);
  if (dim != oped::source_dim(source)) {
    throw oped::ValidationError("--d " + std::to_string(dim) + " does not match the " +
                                std::to_string(oped::source_dim(source)) + "-dimensional phantom");
  }
  const std::string type_name = a.type.empty() ? (dim == 2 ? "II" : "3d") : a.type;
  if (type_name == "3d" && dim != 3) throw oped::ValidationError("--type 3d needs --d 3");
  if (a.noise > 0.0 && !a.seed) throw oped::ValidationError("--noise needs an explicit --seed");

  const oped::ScanGeometry g = oped::make_geometry(dim, oped::parse_scan_type(type_name), a.order);
  oped::SamplingOptions opts;
  opts.analytic = !a.numeric;
  opts.refinement = a.refinement;
  opts.noise_sigma = a.noise;
  opts.seed = a.seed.value_or(0);
  opts.threads = a.threads;
  const oped::Sinogram s = oped::sample_sinogram(source, g, opts);
  oped::write_sinogram(s, a.output);

  manifest.add_output("sinogram", a.output);
  manifest.set("geometry", oped::cli::geometry_summary(g));
  manifest.set("parameters", {{"phantom", a.phantom},
                              {"noise_sigma", a.noise},
                              {"seed", opts.seed},
                              {"analytic", opts.analytic},
                              {"refinement", a.refinement},
                              {"threads", oped::resolve_threads(a.threads)}});
  manifest.write(a.output);
  std::cout << json{{"output", a.output}, {"views", g.views()}, {"offsets", g.offsets()}}.dump() << '\n';
  return kOk;
}

int run_reconstruct(const ReconstructArgs& a, int argc, char** argv) {
  Manifest manifest(a.algorithm == "svd" ? "svd-reconstruct" : "reconstruct", argc, argv);
  if (a.algorithm != "oped" && a.algorithm != "svd") {
    throw oped::ValidationError("--algorithm must be oped or svd");
  }
  const oped::Sinogram s = oped::read_sinogram(a.input);
  manifest.add_input("sinogram", a.input);

  oped::ReconstructionConfig config;
  config.order = a.order;
  config.type = a.type.empty() ? oped::ScanType::Custom : expected_type(a.type, s.geometry.dim);
  config.filter = oped::parse_filter(a.filter);
  config.resolution = a.resolution;
  config.summation = oped::parse_summation(a.summation);
  config.threads = a.threads;
  int n = oped::reconstruction_order(s, config);

  std::optional<oped::Source> reference;
  if (!a.reference.empty()) {
    reference = oped::load_source(a.reference);
    if (!is_preset(a.reference)) manifest.add_input("reference", a.reference);
    if (oped::source_dim(*reference) != s.geometry.dim) {
      throw oped::ValidationError("reference dimension does not match the sinogram");
    }
  }

  oped::ImageGrid grid;
  const auto t0 = manifest.elapsed();
  if (a.algorithm == "svd") {
    if (config.filter != oped::Filter::None) throw oped::ValidationError("the SVD reconstruction has no eta filter");
    n = a.truncation >= 0 ? a.truncation : std::min(s.geometry.operator_degree(), oped::max_truncation(s.geometry));
    grid = oped::truncated_svd_reconstruct(s, n, a.resolution, a.threads);
  } else {
    if (a.truncation >= 0) throw oped::ValidationError("--truncation applies to --algorithm svd");
    grid = oped::reconstruct_grid(s, config);
  }
  const double runtime = manifest.elapsed() - t0;

  json summary = {{"output", a.output}, {"algorithm", a.algorithm}, {"order", n}};
  manifest.set("geometry", oped::cli::geometry_summary(s.geometry));
  manifest.set("parameters", {{"algorithm", a.algorithm},
                              {"order", n},
                              {"filter", oped::to_string(config.filter)},
                              {"summation", oped::to_string(config.summation)},
                              {"resolution", a.resolution},
                              {"threads", oped::resolve_threads(a.threads)}});
  manifest.set_metric("reconstruction_seconds", runtime);
  if (reference) {
    const json metrics = oped::compare_to_source(grid, *reference).to_json();
    manifest.set_metric("error", metrics);
    summary["metrics"] = metrics;
  }
  if (a.compare) {
    oped::ImageGrid other;
    json cmp;
    if (a.algorithm == "svd") {
      oped::ReconstructionConfig plain = config;
      plain.filter = oped::Filter::None;
      other = oped::reconstruct_grid(s, plain);
      cmp = {{"against", "oped"}, {"order", s.geometry.operator_degree()}};
    } else {
      const int N = oped::reconstruction_order(s, config);
      other = oped::truncated_svd_reconstruct(s, N, a.resolution, a.threads);
      cmp = {{"against", "svd"}, {"truncation", N}};
    }
    cmp["max_delta"] = max_abs_delta(grid, other);
    manifest.set_metric("comparison", cmp);
    summary["comparison"] = cmp;
  }
  if (a.diagnostics) {
    const oped::ImageGrid lambda = oped::lebesgue_grid(s.geometry, n, a.resolution, config.filter, a.threads);
    double max_lambda = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      if (lambda.mask[i]) max_lambda = std::max(max_lambda, lambda.values[i]);
    }
    const json diag = {{"max_lambda", max_lambda},
                       {"runtime_seconds", runtime},
                       {"isa", oped::kernels::isa_name(oped::kernels::active_isa())}};
    manifest.set_metric("diagnostics", diag);
    summary["diagnostics"] = diag;
  }

  oped::write_grid(grid, a.output);
  manifest.add_output("grid", a.output);
  manifest.add_output("sidecar", a.output + ".json");
  if (!a.pgm.empty()) {
    oped::write_pgm(grid, a.pgm);
    manifest.add_output("pgm", a.pgm);
  }
  manifest.write(a.output);
  std::cout << summary.dump() << '\n';
  return kOk;
}

int run_svd_verify(const VerifyArgs& a, int argc, char** argv) {
  Manifest manifest("svd-verify", argc, argv);
  const json report = oped::svd_verify(a.dim, a.n_max, a.lattice, a.seed).to_json();
  if (!a.output.empty()) {
    write_json_file(report, a.output);
    manifest.add_output("report", a.output);
    manifest.set("parameters", {{"d", a.dim}, {"n_max", a.n_max}, {"lattice", a.lattice}, {"seed", a.seed}});
    manifest.write(a.output);
  }
  std::cout << report.dump(2) << '\n';
  return kOk;
}

int run_report(const ReportArgs& a, int argc, char** argv) {
  Manifest manifest("report", argc, argv);
  if (a.reference.empty() == a.reference_grid.empty()) {
    throw oped::ValidationError("give exactly one of --reference and --reference-grid");
  }
  const oped::ImageGrid grid = oped::read_grid(a.grid);
  manifest.add_input("grid", a.grid);
  oped::ErrorMetrics m;
  if (!a.reference.empty()) {
    const oped::Source ref = oped::load_source(a.reference);
    if (!is_preset(a.reference)) manifest.add_input("reference", a.reference);
    m = oped::compare_to_source(grid, ref);
  } else {
    const oped::ImageGrid ref = oped::read_grid(a.reference_grid);
    manifest.add_input("reference_grid", a.reference_grid);
    m = oped::compare_grids(grid, ref);
  }
  const json metrics = m.to_json();
  if (!a.output.empty()) {
    write_json_file(metrics, a.output);
    manifest.add_output("report", a.output);
    manifest.set_metric("error", metrics);
    manifest.write(a.output);
  }
  std::cout << metrics.dump(2) << '\n';
  return kOk;
}

int run_diagnose(const DiagnoseArgs& a, int argc, char** argv) {
  Manifest manifest("diagnose", argc, argv);
  oped::ScanGeometry g;
  if (!a.input.empty()) {
    g = oped::read_sinogram(a.input).geometry;
    manifest.add_input("sinogram", a.input);
  } else {
    const std::string type_name = a.type.empty() ? (a.dim == 2 ? "II" : "3d") : a.type;
    if (type_name == "3d" && a.dim != 3) throw oped::ValidationError("--type 3d needs --d 3");
    g = oped::make_geometry(a.dim, oped::parse_scan_type(type_name), a.order);
  }
  const oped::Filter filter = oped::parse_filter(a.filter);
  const int n = filter == oped::Filter::Eta ? g.operator_degree() / 2 : g.operator_degree();
  if (filter == oped::Filter::Eta && n < 1) throw oped::ValidationError("the eta filter needs operator degree >= 2");

  const auto t0 = manifest.elapsed();
  const oped::ImageGrid lambda = oped::lebesgue_grid(g, n, a.resolution, filter, a.threads);
  const double runtime = manifest.elapsed() - t0;
  double max_lambda = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (!lambda.mask[i]) continue;
    max_lambda = std::max(max_lambda, lambda.values[i]);
    sum += lambda.values[i];
  }
  json isas = json::array();
  for (auto isa : oped::kernels::available_isas()) isas.push_back(oped::kernels::isa_name(isa));
  const json out = {
      {"geometry", oped::cli::geometry_summary(g)},
      {"order", n},
      {"filter", oped::to_string(filter)},
      {"resolution", a.resolution},
      {"max_lambda", max_lambda},
      {"mean_lambda", sum / static_cast<double>(lambda.inside_count())},
      {"runtime_seconds", runtime},
      {"isa", oped::kernels::isa_name(oped::kernels::active_isa())},
      {"available_isas", isas},
      {"threads", oped::resolve_threads(a.threads)},
  };
  if (!a.output.empty()) {
    oped::write_grid(lambda, a.output);
    manifest.add_output("lambda_grid", a.output);
    manifest.set("geometry", oped::cli::geometry_summary(g));
    manifest.set_metric("lebesgue", out);
    manifest.write(a.output);
  }
  std::cout << out.dump(2) << '\n';
  return kOk;
}

void add_reconstruct_options(CLI::App* cmd, ReconstructArgs& a, bool svd) {
  cmd->add_option("-i,--input", a.input, "OPEDSINO sinogram")->required();
  cmd->add_option("-o,--output", a.output, "output grid (float32 + .json sidecar)")->required();
  cmd->add_option("--order", a.order, "expected geometry order m (type I/II) or n; 0 accepts any");
  cmd->add_option("--type", a.type, "expected geometry: I, II, 3d or gauss");
  cmd->add_option("--resolution", a.resolution, "grid points per axis");
  cmd->add_option("--truncation", a.truncation, "SVD truncation degree N");
  cmd->add_option("--reference", a.reference, "phantom file or preset:NAME for error metrics");
  cmd->add_option("--pgm", a.pgm, "also write an 8-bit PGM preview");
  cmd->add_option("--threads", a.threads, "worker threads (default OPED_THREADS, then all cores)");
  cmd->add_flag("--diagnostics", a.diagnostics, "emit max Lebesgue function and runtime");
  cmd->add_flag("--compare", a.compare, "also run the other algorithm and report the max difference");
  if (!svd) {
    cmd->add_option("--filter", a.filter, "none or eta");
    cmd->add_option("--algorithm", a.algorithm, "oped or svd");
    cmd->add_option("--summation", a.summation, "pairwise or sequential view reduction");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthogonal polynomial expansion reconstruction from Radon data"};
  app.set_version_flag("--version", std::string(OPED_VERSION));
  app.require_subcommand(1);
  std::string isa;
  app.add_option("--isa", isa, "kernel variant: scalar, avx2 or avx512");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "sample a sinogram of a phantom or polynomial");
  simulate->add_option("-p,--phantom", sim.phantom, "phantom/polynomial JSON file or preset:NAME")->required();
  simulate->add_option("-o,--output", sim.output, "output OPEDSINO file")->required();
  simulate->add_option("--d", sim.dim, "dimension (default: the phantom's)");
  simulate->add_option("--type", sim.type, "I, II (d=2), 3d or gauss");
  simulate->add_option("--order", sim.order, "m for type I/II, n for Gegenbauer-Gauss")->required();
  simulate->add_option("--noise", sim.noise, "additive Gaussian noise sigma");
  simulate->add_option("--seed", sim.seed, "noise seed");
  simulate->add_flag("--numeric", sim.numeric, "use quadrature even for ellipsoid phantoms");
  simulate->add_option("--refinement", sim.refinement, "quadrature panels for numeric projections");
  simulate->add_option("--threads", sim.threads, "worker threads");

  ReconstructArgs rec;
  auto* reconstruct = app.add_subcommand("reconstruct", "OPED (or truncated SVD) reconstruction on a grid");
  add_reconstruct_options(reconstruct, rec, false);
  ReconstructArgs srec;
  srec.algorithm = "svd";
  auto* svd_reconstruct = app.add_subcommand("svd-reconstruct", "truncated SVD reconstruction on a grid");
  add_reconstruct_options(svd_reconstruct, srec, true);

  VerifyArgs ver;
  auto* verify = app.add_subcommand("svd-verify", "check the singular system numerically");
  verify->add_option("--d", ver.dim, "dimension (2 or 3)");
  verify->add_option("--n-max", ver.n_max, "largest degree checked");
  verify->add_option("--lattice", ver.lattice, "lattice size per axis for the pair identity");
  verify->add_option("--seed", ver.seed, "seed for the Gram and kernel test points");
  verify->add_option("-o,--output", ver.output, "also write the report here");

  ReportArgs rep;
  auto* report = app.add_subcommand("report", "error metrics of a grid against a reference");
  report->add_option("-g,--grid", rep.grid, "grid file")->required();
  report->add_option("--reference", rep.reference, "phantom file or preset:NAME");
  report->add_option("--reference-grid", rep.reference_grid, "reference grid file");
  report->add_option("-o,--output", rep.output, "also write the metrics here");

  DiagnoseArgs dia;
  auto* diagnose = app.add_subcommand("diagnose", "Lebesgue function of a geometry and kernel info");
  diagnose->add_option("-i,--input", dia.input, "take the geometry from this sinogram");
  diagnose->add_option("--d", dia.dim, "dimension");
  diagnose->add_option("--type", dia.type, "I, II, 3d or gauss");
  diagnose->add_option("--order", dia.order, "geometry order");
  diagnose->add_option("--filter", dia.filter, "none or eta");
  diagnose->add_option("--resolution", dia.resolution, "grid points per axis");
  diagnose->add_option("-o,--output", dia.output, "write the Lebesgue function grid here");
  diagnose->add_option("--threads", dia.threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  try {
    if (!isa.empty()) oped::kernels::set_active_isa(oped::kernels::parse_isa(isa));
    if (simulate->parsed()) return run_simulate(sim, argc, argv);
    if (reconstruct->parsed()) return run_reconstruct(rec, argc, argv);
    if (svd_reconstruct->parsed()) return run_reconstruct(srec, argc, argv);
    if (verify->parsed()) return run_svd_verify(ver, argc, argv);
    if (report->parsed()) return run_report(rep, argc, argv);
    if (diagnose->parsed()) return run_diagnose(dia, argc, argv);
  } catch (const oped::IoError& e) {
    std::cerr << "oped: I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const oped::ValidationError& e) {
    std::cerr << "oped: invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "oped: invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const oped::NumericalError& e) {
    std::cerr << "oped: numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "oped: " << e.what() << '\n';
    return kNumerical;
  }
  return kValidation;
}
