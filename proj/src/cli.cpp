#include "vesselkit/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <iostream>

#include "vesselkit/dilation.hpp"
#include "vesselkit/fixtures.hpp"
#include "vesselkit/io.hpp"

namespace vesselkit {
namespace cli {

namespace {

constexpr const char* kToolVersion = "vesselkit 0.1.0";
constexpr const char* kReportSchema = "vesselkit-report/1";

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 2;
constexpr int kExitIoError = 3;
constexpr int kExitInternal = 4;

struct GlobalOptions {
  double tol_scale = 1.0;
  std::uint64_t seed = 0;
  std::string deterministic = "on";
  std::string json_out;
};

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

RealVector parse_real_vector(const std::string& csv) {
  RealVector out;
  std::vector<double> values;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    values.push_back(std::stod(item));
  }
  out.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out(i) = values[i];
  return out;
}

std::vector<RealVector> parse_vector_list(const std::string& spec) {
  std::vector<RealVector> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    out.push_back(parse_real_vector(item));
  }
  return out;
}

GridSpec parse_grid(const std::string& spec) {
  auto comma = spec.find(',');
  if (comma == std::string::npos)
    throw Error(ErrorCode::ParseError, "grid spec must be N,L");
  return GridSpec(std::stoi(spec.substr(0, comma)),
                  std::stod(spec.substr(comma + 1)));
}

io::Json base_report(const GlobalOptions& global, const std::string& digest) {
  io::Json report;
  report["schema"] = kReportSchema;
  report["tool_version"] = kToolVersion;
  report["input_digest"] = digest;
  report["seed"] = global.seed;
  report["deterministic"] = global.deterministic == "on";
  // wall-clock timings go to stderr in deterministic mode so identical
  // inputs give byte-identical reports
  report["timings_ms"] = nullptr;
  return report;
}

void finish_report(const GlobalOptions& global, io::Json& report,
                   const io::Json& timings) {
  if (global.deterministic != "on") report["timings_ms"] = timings;
  if (!global.json_out.empty()) io::write_json_file(global.json_out, report);
}

void print_check_lines(const ConditionReport& report) {
  for (const auto& e : report.entries()) {
    std::cout << (e.pass ? "  pass  " : "  FAIL  ") << e.name
              << "  residual=" << e.residual << "  tol=" << e.tolerance;
    if (e.redundant) std::cout << "  (redundant)";
    if (!e.note.empty()) std::cout << "  [" << e.note << "]";
    std::cout << "\n";
  }
}

Vessel load_vessel(const std::string& path, std::string* digest) {
  std::string bytes = io::read_file_bytes(path);
  if (digest) *digest = io::digest_bytes(bytes);
  io::Json j = io::Json::parse(bytes, nullptr, false);
  if (j.is_discarded())
    throw Error(ErrorCode::ParseError, "malformed JSON in " + path);
  io::ProblemFile p = io::problem_from_json(j);
  if (!p.vessel)
    throw Error(ErrorCode::ParseError, path + " carries no vessel block");
  return *p.vessel;
}

// ---------------------------------------------------------------------------

int cmd_embed(const GlobalOptions& global, const std::string& in_path,
              const std::string& out_path, double rank_tol) {
  std::string bytes = io::read_file_bytes(in_path);
  io::Json j = io::Json::parse(bytes, nullptr, false);
  if (j.is_discarded())
    throw Error(ErrorCode::ParseError, "malformed JSON in " + in_path);
  io::ProblemFile p = io::problem_from_json(j);

  CommutingTuple tuple{p.d, p.dim_h, p.A};
  Vessel v;
  try {
    v = make_strict_vessel(tuple, rank_tol,
                           Tolerances{}.scaled(global.tol_scale));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NonCommuting ||
        e.code() == ErrorCode::NonDissipative) {
      std::cerr << "embed: tuple invariants fail: " << e.what() << "\n";
      return kExitCheckFailure;
    }
    throw;
  }
  if (v.degenerate_signal_space)
    std::cerr << "embed: selfadjoint tuple, vessel has empty signal space\n";

  io::ProblemFile out = p;
  out.vessel = v;
  io::write_json_file(out_path, io::problem_to_json(out));
  std::cout << "wrote vessel with dim_e=" << v.dim_e << " to " << out_path
            << "\n";
  return kExitPass;
}

int cmd_check(const GlobalOptions& global, const std::string& in_path,
              bool run_vessel, bool run_vr, bool run_vrstar, bool run_cone,
              bool run_weakly_strict, const std::string& direction_csv,
              double tol) {
  auto start = Clock::now();
  std::string digest;
  Vessel v = load_vessel(in_path, &digest);
  if (!(run_vessel || run_vr || run_vrstar || run_cone || run_weakly_strict))
    run_vessel = run_vr = run_vrstar = run_cone = run_weakly_strict = true;
  tol *= global.tol_scale;

  ConditionReport all;
  if (run_vessel) all.merge(check_vessel(v, tol), "vessel");
  if (run_vr) {
    Direction dir = direction_csv.empty()
                        ? Direction::axis(0)
                        : Direction::vector(parse_real_vector(direction_csv));
    all.merge(check_vr(v, dir, tol), "vr");
  }
  if (run_vrstar) all.merge(check_vr_star(v, tol), "vr_star");
  if (run_cone) all.merge(dissipative_embedding_report(v, tol), "cone");
  if (run_weakly_strict) {
    WeaklyStrictReport ws = weakly_strict_report(v, Tolerances{}.rank);
    std::ostringstream os;
    os << "dim W = " << ws.kernel_basis.cols();
    all.add_flag("weakly_strict", ws.weakly_strict, os.str());
  }

  print_check_lines(all);
  io::Json report = base_report(global, digest);
  report["checks"] = io::report_entries_to_json(all);
  finish_report(global, report, io::Json{{"total", elapsed_ms(start)}});
  return all.pass() ? kExitPass : kExitCheckFailure;
}

int cmd_fixture(const GlobalOptions& global, const std::string& kind,
                int d, int dim, const std::string& out_path) {
  // fixtures are desk scale; a tensor of factor dimension k has n = k^d
  long state_dim = kind == "tensor-doubly-commuting" || kind == "decoupled-W"
                       ? static_cast<long>(std::pow(dim, d))
                       : dim;
  if (state_dim < 1 || state_dim > 16)
    throw Error(ErrorCode::ParseError,
                "fixture dims give n = " + std::to_string(state_dim) +
                    ", outside 1..16");
  io::ProblemFile p;
  if (kind == "tensor-doubly-commuting") {
    CommutingTuple t = fixtures::tensor_tuple(global.seed, d, dim);
    p = io::ProblemFile{t.d, t.dim_h, t.A, std::nullopt, std::nullopt,
                        std::nullopt};
  } else if (kind == "jordan") {
    CommutingTuple t = fixtures::jordan_tuple(global.seed, dim);
    p = io::ProblemFile{t.d, t.dim_h, t.A, std::nullopt, std::nullopt,
                        std::nullopt};
  } else if (kind == "random-dissipative-pair") {
    CommutingTuple t = fixtures::polynomial_tuple(global.seed, d, dim);
    p = io::ProblemFile{t.d, t.dim_h, t.A, std::nullopt, std::nullopt,
                        std::nullopt};
  } else if (kind == "decoupled-W") {
    Vessel v = fixtures::decoupled_w_vessel(global.seed, d, dim);
    p = io::ProblemFile{v.d, v.dim_h, v.A, v, std::nullopt, std::nullopt};
  } else {
    throw Error(ErrorCode::ParseError, "unknown fixture kind " + kind);
  }
  io::write_json_file(out_path, io::problem_to_json(p));
  std::cout << "wrote " << kind << " fixture (n=" << p.dim_h << ", d=" << p.d
            << ") to " << out_path << "\n";
  return kExitPass;
}

int cmd_solve(const GlobalOptions& global, const std::string& in_path,
              int degree, const std::string& initial,
              const std::string& xi0_csv, const std::string& out_path) {
  std::string digest;
  Vessel v = load_vessel(in_path, &digest);
  RealVector xi0 = xi0_csv.empty() ? RealVector(RealVector::Ones(v.d))
                                   : parse_real_vector(xi0_csv);
  Normalized nv = normalize(v, xi0, Tolerances{}.scaled(global.tol_scale));

  AnalyticInitialData init;
  if (initial.rfind("geometric:", 0) == 0) {
    double ratio = std::stod(initial.substr(10));
    Rng rng(global.seed);
    Vector dir = rng.complex_gaussian(v.dim_e, 1).col(0);
    dir /= dir.norm();
    for (int k = 0; k <= degree; ++k)
      init.b.push_back(Vector(std::pow(ratio, k) * dir));
    init.radius = 1.0 / std::max(1e-12, std::abs(ratio));
    init.bound = 1.0;
  } else if (initial.rfind("file:", 0) == 0) {
    io::Json j = io::read_json_file(initial.substr(5));
    for (const auto& row : j.at("b"))
      init.b.push_back(Vector(io::matrix_from_json(io::Json::array({row}))
                                  .row(0)
                                  .transpose()));
  } else {
    throw Error(ErrorCode::ParseError, "initial must be geometric:r or file:p");
  }

  PowerSeriesSolution sol = solve_discrete(nv.pencil, init, degree);
  double residual = check_discrete_compat(sol, nv.pencil);

  io::Json out = io::series_to_json(sol);
  out["compat_residual"] = residual;
  out["input_digest"] = digest;
  io::write_json_file(out_path, out);
  std::cout << "series degree " << degree << ", compat residual " << residual
            << "\n";
  return residual <= 1e-10 ? kExitPass : kExitCheckFailure;
}

int cmd_simulate(const GlobalOptions& global, const std::string& in_path,
                 const std::string& line_spec, const std::string& input_spec,
                 const std::string& h_spec, const std::string& grid_spec,
                 bool force, const std::string& out_path) {
  std::string digest;
  Vessel v = load_vessel(in_path, &digest);
  GridSpec grid = grid_spec.empty() ? GridSpec(1024, 20.0)
                                    : parse_grid(grid_spec);

  auto bar = line_spec.find('|');
  if (bar == std::string::npos)
    throw Error(ErrorCode::ParseError, "line spec must be xi|eta");
  RealVector xi = parse_real_vector(line_spec.substr(0, bar));
  RealVector eta = parse_real_vector(line_spec.substr(bar + 1));
  if (xi.size() != v.d || eta.size() != v.d)
    throw Error(ErrorCode::ParseError, "line spec dimension != d");

  double margin = pos_cone_margin(v, xi);
  bool in_cone = margin > 0.0;
  if (!in_cone && !force)
    std::cerr << "simulate: xi outside the positivity cone (margin=" << margin
              << "); isometry fields not applicable\n";

  SampledSignal u(grid, v.dim_e);
  if (input_spec.rfind("gaussian", 0) == 0) {
    double center = 0.0, width = 1.0;
    auto colon = input_spec.find(':');
    if (colon != std::string::npos) {
      RealVector params = parse_real_vector(input_spec.substr(colon + 1));
      if (params.size() > 0) center = params(0);
      if (params.size() > 1) width = params(1);
    }
    Rng rng(global.seed);
    Vector dir = v.dim_e > 0 ? Vector(rng.complex_gaussian(v.dim_e, 1).col(0))
                             : Vector(0);
    if (v.dim_e > 0) dir /= dir.norm();
    u = gaussian_signal(grid, center, width, dir);
  } else if (input_spec == "zero") {
    // keep zeros
  } else if (input_spec.rfind("file:", 0) == 0) {
    u = io::signal_from_json(io::read_json_file(input_spec.substr(5)));
  } else {
    throw Error(ErrorCode::ParseError, "input must be gaussian|zero|file:p");
  }

  Vector h = Vector::Zero(v.dim_h);
  if (h_spec.rfind("basis:", 0) == 0) {
    int idx = std::stoi(h_spec.substr(6));
    if (idx < 0 || idx >= v.dim_h)
      throw Error(ErrorCode::ParseError, "basis index out of range");
    h(idx) = 1.0;
  } else if (h_spec != "zero" && !h_spec.empty()) {
    throw Error(ErrorCode::ParseError, "h must be basis:i or zero");
  }

  LineTrajectory traj = propagate_state(v, h, u, xi, eta);
  double energy = energy_balance_residual(traj, v);
  double system = system_residual(traj, v);
  double adjoint = adjoint_trajectory_check(traj, v);

  io::Json out;
  out["schema"] = "vesselkit-trajectory/1";
  out["input_digest"] = digest;
  out["grid"] = io::Json{{"N", grid.n}, {"L", grid.half_width}};
  out["u"] = io::signal_to_json(traj.u)["values"];
  out["y"] = io::signal_to_json(traj.y)["values"];
  io::Json states = io::Json::array();
  for (const auto& x : traj.state) {
    io::Json node = io::Json::array();
    for (Eigen::Index i = 0; i < x.size(); ++i)
      node.push_back(io::Json::array({x(i).real(), x(i).imag()}));
    states.push_back(std::move(node));
  }
  out["x"] = std::move(states);
  out["residuals"] = io::Json{{"energy_balance", energy},
                              {"system", system},
                              {"adjoint", adjoint}};
  out["cone"] = io::Json{{"margin", margin},
                         {"isometry_applicable", in_cone}};
  io::write_json_file(out_path, out);
  std::cout << "trajectory written; energy balance residual " << energy
            << "\n";
  return kExitPass;
}

int cmd_dilate(const GlobalOptions& global, const std::string& in_path,
               const std::string& times_spec, const std::string& grid_spec,
               int refine, const std::string& xi0_csv, double max_error,
               double min_slope, double residual_tol,
               const std::string& report_path) {
  auto start = Clock::now();
  std::string digest;
  Vessel v = load_vessel(in_path, &digest);
  RealVector xi0 = xi0_csv.empty() ? RealVector(RealVector::Ones(v.d))
                                   : parse_real_vector(xi0_csv);
  GridSpec grid = grid_spec.empty() ? GridSpec(1024, 40.0)
                                    : parse_grid(grid_spec);
  std::vector<RealVector> times = parse_vector_list(times_spec);
  if (times.empty())
    throw Error(ErrorCode::ParseError, "dilate: no --times given");
  for (const auto& t : times)
    if (t.size() != v.d)
      throw Error(ErrorCode::ParseError, "dilate: time vector dimension != d");

  Tolerances tol = Tolerances{}.scaled(global.tol_scale);
  // NotVR / NotInCone surface here before any heavy compute
  DilationConfig probe = make_dilation_config(v, xi0, GridSpec(64, grid.half_width), tol);
  (void)probe;

  DilationCheckReport check =
      dilation_check(v, xi0, times, grid, std::max(1, refine), tol);

  DilationConfig cfg = make_dilation_config(v, xi0, grid, tol);
  Rng rng(global.seed);
  Vector dir = rng.complex_gaussian(v.dim_e, 1).col(0);
  dir /= dir.norm();
  DilationVector smooth;
  smooth.triple = BoundaryTriple::zero(grid, v.dim_e, v.dim_h);
  double bump_center = grid.half_width / 4.0;
  double bump_width = grid.half_width / 12.0;
  SampledSignal bump_u =
      gaussian_signal(grid, bump_center, bump_width, dir);
  SampledSignal bump_y =
      gaussian_signal(grid, -bump_center, bump_width, dir);
  const int n0 = grid.zero_node();
  for (int k = 0; k <= n0; ++k) smooth.triple.y_past[k] = bump_y.values[k];
  for (int k = n0; k < grid.n; ++k)
    smooth.triple.u_future[k - n0] = bump_u.values[k];

  const RealVector& t0 = times.front();
  const RealVector& t1 = times.back();
  double iso = isometry_residual(cfg, t0, smooth);
  double group = group_law_residual(cfg, t0, t1, smooth);
  double comm = 0.0;
  if (v.d >= 2) {
    RealVector te1 = RealVector::Zero(v.d), te2 = RealVector::Zero(v.d);
    te1(0) = t0(0) != 0.0 ? t0(0) : 0.5;
    te2(1) = t0(1) != 0.0 ? t0(1) : 0.5;
    comm = commutativity_residual(cfg, te1, te2, smooth);
  }

  bool pass = check.max_error_finest <= max_error && iso <= residual_tol &&
              group <= residual_tol && comm <= residual_tol;
  if (refine >= 2) pass = pass && check.slope >= min_slope;

  io::Json report = base_report(global, digest);
  io::Json levels = io::Json::array();
  for (std::size_t l = 0; l < check.level_errors.size(); ++l)
    levels.push_back(io::Json{{"N", check.level_n[l]},
                              {"max_error", check.level_errors[l]}});
  io::Json per_t = io::Json::array();
  for (std::size_t i = 0; i < times.size(); ++i) {
    io::Json tv = io::Json::array();
    for (int j = 0; j < times[i].size(); ++j) tv.push_back(times[i](j));
    per_t.push_back(io::Json{{"t", tv}, {"error", check.per_t_errors[i]}});
  }
  report["experiments"] =
      io::Json{{"dilation_identity",
                io::Json{{"levels", levels},
                         {"per_t", per_t},
                         {"slope", check.slope},
                         {"max_error_finest", check.max_error_finest},
                         {"threshold", max_error}}},
               {"isometry_residual", iso},
               {"group_law_residual", group},
               {"commutativity_residual", comm},
               {"residual_threshold", residual_tol}};
  report["pass"] = pass;
  if (!report_path.empty()) io::write_json_file(report_path, report);
  finish_report(global, report, io::Json{{"total", elapsed_ms(start)}});

  std::cout << "dilation identity: max error " << check.max_error_finest
            << " (threshold " << max_error << "), slope " << check.slope
            << "\n"
            << "isometry " << iso << ", group law " << group
            << ", commutativity " << comm << " (threshold " << residual_tol
            << ")\n"
            << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitPass : kExitCheckFailure;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  std::vector<std::string> storage = args;
  std::vector<char*> argv;
  std::string name = "vesselkit";
  argv.push_back(name.data());
  for (auto& s : storage) argv.push_back(s.data());
  return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, char** argv) {
  CLI::App app{"commutative operator vessels: embeddings, compatibility "
               "solvers, transport and unitary dilations"};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--tol-scale", global.tol_scale,
                 "multiply all default tolerances");
  app.add_option("--seed", global.seed, "seed for all randomness");
  app.add_option("--deterministic", global.deterministic,
                 "on|off (off records wall-clock timings in reports)");
  app.add_option("--json-out", global.json_out, "write a run report here");

  auto* embed = app.add_subcommand("embed", "strict vessel embedding");
  std::string embed_in, embed_out;
  double rank_tol = 1e-10;
  embed->add_option("--in", embed_in)->required();
  embed->add_option("--out", embed_out)->required();
  embed->add_option("--rank-tol", rank_tol);

  auto* check = app.add_subcommand("check", "vessel condition checks");
  std::string check_in, check_direction;
  bool f_vessel = false, f_vr = false, f_vrstar = false, f_cone = false,
       f_ws = false;
  double check_tol = 1e-10;
  check->add_option("--in", check_in)->required();
  check->add_flag("--vessel", f_vessel);
  check->add_flag("--vr", f_vr);
  check->add_flag("--vrstar", f_vrstar);
  check->add_flag("--cone", f_cone);
  check->add_flag("--weakly-strict", f_ws);
  check->add_option("--direction", check_direction, "VR direction, csv");
  check->add_option("--tol", check_tol);

  auto* fixture = app.add_subcommand("fixture", "deterministic fixtures");
  std::string fx_kind, fx_out;
  int fx_d = 2, fx_dim = 2;
  fixture->add_option("--kind", fx_kind)->required();
  fixture->add_option("--out", fx_out)->required();
  fixture->add_option("--d", fx_d);
  fixture->add_option("--n", fx_dim, "fixture size (tensor factor dim)");

  auto* solve = app.add_subcommand("solve", "discrete compatibility series");
  std::string solve_in, solve_initial = "geometric:0.5", solve_xi0, solve_out;
  int solve_degree = 8;
  bool solve_series = true;
  solve->add_flag("--series", solve_series);
  solve->add_option("--in", solve_in)->required();
  solve->add_option("--degree", solve_degree);
  solve->add_option("--initial", solve_initial);
  solve->add_option("--xi0", solve_xi0);
  solve->add_option("--out", solve_out)->required();

  auto* simulate = app.add_subcommand("simulate", "line trajectory");
  std::string sim_in, sim_line, sim_input = "gaussian", sim_h = "zero",
              sim_grid, sim_out;
  bool sim_force = false;
  // long-form help only, so --h stays free for the initial state
  simulate->set_help_flag("--help", "print help");
  simulate->add_option("--in", sim_in)->required();
  simulate->add_option("--line", sim_line, "xi|eta")->required();
  simulate->add_option("--input", sim_input, "gaussian[:c,w]|zero|file:p");
  simulate->add_option("--h,--state", sim_h, "basis:i|zero");
  simulate->add_option("--grid", sim_grid, "N,L");
  simulate->add_flag("--force", sim_force);
  simulate->add_option("--out", sim_out)->required();

  auto* dilate = app.add_subcommand("dilate", "unitary dilation experiments");
  std::string dil_in, dil_times, dil_grid, dil_xi0, dil_report;
  int dil_refine = 2;
  double dil_max_error = 5e-3, dil_min_slope = 1.8, dil_residual = 1e-4;
  dilate->add_option("--in", dil_in)->required();
  dilate->add_option("--times", dil_times, "semicolon list of t vectors")
      ->required();
  dilate->add_option("--grid", dil_grid, "N,L");
  dilate->add_option("--refine", dil_refine);
  dilate->add_option("--xi0", dil_xi0);
  dilate->add_option("--max-error", dil_max_error);
  dilate->add_option("--min-slope", dil_min_slope);
  dilate->add_option("--residual-tol", dil_residual);
  dilate->add_option("--report", dil_report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitIoError;
  }

  try {
    if (*embed) return cmd_embed(global, embed_in, embed_out, rank_tol);
    if (*check)
      return cmd_check(global, check_in, f_vessel, f_vr, f_vrstar, f_cone,
                       f_ws, check_direction, check_tol);
    if (*fixture) return cmd_fixture(global, fx_kind, fx_d, fx_dim, fx_out);
    if (*solve)
      return cmd_solve(global, solve_in, solve_degree, solve_initial,
                       solve_xi0, solve_out);
    if (*simulate)
      return cmd_simulate(global, sim_in, sim_line, sim_input, sim_h,
                          sim_grid, sim_force, sim_out);
    if (*dilate)
      return cmd_dilate(global, dil_in, dil_times, dil_grid, dil_refine,
                        dil_xi0, dil_max_error, dil_min_slope, dil_residual,
                        dil_report);
  } catch (const Error& e) {
    std::cerr << error_code_name(e.code()) << ": " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::ParseError:
        return kExitIoError;
      case ErrorCode::Internal:
        return kExitInternal;
      default:
        return kExitCheckFailure;
    }
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace cli
}  // namespace vesselkit
