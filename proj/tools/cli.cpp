#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qgf/config_io.hpp"
#include "qgf/design.hpp"
#include "qgf/flatband.hpp"
#include "qgf/optimize.hpp"
#include "qgf/probes.hpp"
#include "qgf/sweep.hpp"

namespace qgf {

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return kExitParse;
    case ErrorCode::UnsupportedLayout:
    case ErrorCode::ConfigMismatch: return kExitUnsupported;
    default: return kExitInvalid;
  }
}

// "1" or "1,0.5" (real, imaginary).
cplx parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      const double re = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {re, 0.0};
    }
    const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
    const double re = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(text);
    const double im = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(text);
    return {re, im};
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::ParseError, "expected a number or re,im pair, got \"" + text + "\"");
  }
}

// Writes to the file when a path is given, to `fallback` otherwise.
template <class Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty()) {
    fn(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error(ErrorCode::InvalidSpec, "cannot open " + path + " for writing");
  fn(file);
}

int cmd_validate(const std::string& path, const Tolerances& tol, std::ostream& out) {
  const CouplingConfig cfg = load_config(path);
  require_valid(cfg.coupling, tol);
  require_valid(cfg.lines, cfg.coupling.n);
  const SelfAdjointCheck sa = check_selfadjoint(st_to_general(cfg.coupling), tol);
  out << "n: " << cfg.coupling.n << "\n"
      << "r: " << cfg.coupling.r << "\n"
      << "rank(A|B): " << sa.rank << "\n"
      << "commutator_residual: " << sa.commutator_residual << "\n";
  if (!sa.ok) {
    std::ostringstream msg;
    msg << "boundary condition is not self-adjoint (rank " << sa.rank << ", residual "
        << sa.commutator_residual << ")";
    throw Error(ErrorCode::NonHermitianS, msg.str());
  }
  out << "ok\n";
  return kExitOk;
}

struct ScanArgs {
  std::string coupling;
  std::optional<double> emin, emax;
  int points = 500;
  std::string spacing = "linear";
  std::string out;
};

int cmd_scan(const ScanArgs& a, const Tolerances& tol, std::ostream& out) {
  const CouplingConfig cfg = load_config(a.coupling);
  require_valid(cfg.coupling, tol);
  require_valid(cfg.lines, cfg.coupling.n);

  EnergyGrid grid = default_grid(cfg.lines);
  if (a.emin) grid.e_min = *a.emin;
  if (a.emax) grid.e_max = *a.emax;
  grid.points = a.points;
  grid.spacing = a.spacing == "log" ? Spacing::Log : Spacing::Linear;

  const auto records = sweep(cfg.coupling, cfg.lines, grid.energies(), tol);
  emit(a.out, out, [&](std::ostream& o) { write_csv(o, records); });
  return kExitOk;
}

int cmd_check(const std::string& path, const Tolerances& tol, std::ostream& out, std::ostream& err) {
  const CouplingConfig cfg = load_config(path);
  require_valid(cfg.coupling, tol);
  require_valid(cfg.lines, cfg.coupling.n);
  const STCoupling& c = cfg.coupling;

  if (c.r != 2) {
    err << "UnsupportedLayout: flat-band check requires r=2\n";
    const bool standard_io = cfg.lines.input_index() + cfg.lines.output_index() == 1;
    if (c.r >= 3 && standard_io) {
      const CMatrix T1 = c.T.topRows(2);
      const CMatrix T2 = c.T.bottomRows(c.r - 2);
      const DiagonalityCheck d = r3_diagonality_check(T1, T2);
      nlohmann::json j;
      j["r3_diagonality_check"] = {{"diagonal", d.diagonal}, {"off_diagonal", d.off_diagonal}};
      out << j.dump(2) << "\n";
    }
    return kExitUnsupported;
  }

  const FlatbandInput in = make_partition(c, cfg.lines, tol);
  const FlatbandReport report = check_flat(in.partition, in.S, tol);
  out << to_json(report).dump(2) << "\n";
  return report.verdict ? kExitOk : kExitFlatFail;
}

struct DesignArgs {
  bool maximal = false;
  std::string alpha = "1";
  std::optional<double> s;
  std::string variant = "zero";
  int dim_v = 1;
  int dim_w = 1;
  std::string flat_case;
  int controllers = 1;
  int drains = 1;
  double v1sq = 0.5;
  std::string lambda = "1";
  double w1sq = 0.5;
  double w2_phase = 0.0;
  double V = 1.0;
  std::string out;
};

FlatCase parse_case(const std::string& name) {
  if (name == "S_zero" || name == "s_zero") return FlatCase::SZero;
  if (name == "same_sign") return FlatCase::SameSign;
  if (name == "opposite_sign") return FlatCase::OppositeSign;
  throw Error(ErrorCode::InvalidSpec, "unknown case \"" + name + "\"");
}

int cmd_design(const DesignArgs& a, const Tolerances& tol, std::ostream& out) {
  CouplingConfig cfg;
  if (a.maximal) {
    MaximalVariant variant = MaximalVariant::Zero;
    if (a.variant == "plus") variant = MaximalVariant::Plus;
    else if (a.variant == "pm-upper") variant = MaximalVariant::PmUpper;
    else if (a.variant == "pm-lower") variant = MaximalVariant::PmLower;
    const double s = a.s.value_or(0.0);
    if (a.variant == "zero" && s != 0.0) {
      throw Error(ErrorCode::InvalidSpec, "variant zero needs --s 0 (choose plus, pm-upper or pm-lower)");
    }
    if (!a.s && variant != MaximalVariant::Zero) {
      throw Error(ErrorCode::InvalidSpec, "variant " + a.variant + " needs --s");
    }
    const Layout l = design_maximal(parse_complex(a.alpha), a.dim_v, a.dim_w, s, variant, a.V);
    cfg.coupling = l.coupling;
    cfg.lines = l.lines;
    cfg.design = nlohmann::json{{"maximal", true},
                                {"alpha", {parse_complex(a.alpha).real(), parse_complex(a.alpha).imag()}},
                                {"variant", a.variant},
                                {"s", s},
                                {"V", a.V}};
  } else {
    if (a.flat_case.empty()) throw Error(ErrorCode::InvalidSpec, "design needs --maximal or --case");
    DesignSpec spec;
    spec.controllers = a.controllers;
    spec.drains = a.drains;
    spec.flat_case = parse_case(a.flat_case);
    if (a.controllers < 1 || a.drains < 1 || a.v1sq <= 0.0 || a.w1sq <= 0.0) {
      throw Error(ErrorCode::InvalidSpec, "counts and squared norms must be positive");
    }
    spec.v1 = CRow::Constant(a.controllers, std::sqrt(a.v1sq / a.controllers));
    spec.lambda = parse_complex(a.lambda);
    spec.w1 = CRow::Constant(a.drains, std::sqrt(a.w1sq / a.drains));
    spec.w2_phase = a.w2_phase;
    spec.s = spec.flat_case == FlatCase::SZero ? 0.0 : a.s.value_or(1.0);
    spec.V = a.V;
    const Layout l = design_flat(spec, tol);
    cfg.coupling = l.coupling;
    cfg.lines = l.lines;
    cfg.design = to_json(spec);
  }
  emit(a.out, out, [&](std::ostream& o) { o << dump_config(cfg); });
  return kExitOk;
}

int cmd_probe(const std::string& layout, int samples, std::uint64_t seed, std::ostream& out) {
  ProbeReport rep;
  if (layout == "r1") rep = probe_r1_impossibility(samples, seed);
  else if (layout == "lindep") rep = probe_lindep_impossibility(samples, seed);
  else throw Error(ErrorCode::InvalidSpec, "unknown probe layout \"" + layout + "\"");
  out << rep.to_text();
  return kExitOk;
}

int cmd_optimize(int density, int refine, std::ostream& out) {
  OptimizeOptions opt;
  opt.density = density;
  opt.refine_steps = refine;
  const OptimizationResult res = optimize_passband(opt);
  std::ostringstream line;
  line.precision(10);
  line << "F* = " << res.F_value << " at (x, y, z, u) = (" << res.x << ", " << res.y << ", "
       << res.z << ", " << res.u << ")\n"
       << "boundary: " << (res.at_boundary ? "u = 1" : "interior") << "\n"
       << "evaluations: " << res.evaluations << "\n";
  out << line.str();
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Flat-passband filters on quantum star graphs"};
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check that a coupling file is a valid self-adjoint vertex");
  validate->add_option("path,--coupling", validate_path, "Coupling JSON file")->required();

  ScanArgs scan_args;
  auto* scan = app.add_subcommand("scan", "Write P(E) and related amplitudes as CSV");
  scan->add_option("--coupling", scan_args.coupling, "Coupling JSON file")->required();
  scan->add_option("--emin", scan_args.emin, "Lowest energy (default 0.002 Vmax)");
  scan->add_option("--emax", scan_args.emax, "Highest energy (default 5 Vmax)");
  scan->add_option("--points", scan_args.points, "Number of grid points")->capture_default_str();
  scan->add_option("--spacing", scan_args.spacing, "linear or log")
      ->check(CLI::IsMember({"linear", "log"}))
      ->capture_default_str();
  scan->add_option("--out", scan_args.out, "CSV output path (default stdout)");

  std::string check_path;
  auto* check = app.add_subcommand("check", "Run the flat-passband conditions on an r=2 coupling");
  check->add_option("path,--coupling", check_path, "Coupling JSON file")->required();

  DesignArgs d;
  auto* design = app.add_subcommand("design", "Construct a flat-passband coupling");
  design->add_flag("--maximal", d.maximal, "Maximal filter, passband 1/4");
  design->add_option("--alpha", d.alpha, "Unit-modulus alpha: re or re,im")->capture_default_str();
  design->add_option("--s", d.s, "Scale of S");
  design->add_option("--variant", d.variant, "zero, plus, pm-upper or pm-lower")
      ->check(CLI::IsMember({"zero", "plus", "pm-upper", "pm-lower"}))
      ->capture_default_str();
  design->add_option("--dim-v", d.dim_v, "Controllers of the maximal filter")->capture_default_str();
  design->add_option("--dim-w", d.dim_w, "Drains of the maximal filter")->capture_default_str();
  design->add_option("--case", d.flat_case, "S_zero, same_sign or opposite_sign");
  design->add_option("--controllers", d.controllers, "Number of controllers")->capture_default_str();
  design->add_option("--drains", d.drains, "Number of drains")->capture_default_str();
  design->add_option("--v1sq", d.v1sq, "||v1||^2")->capture_default_str();
  design->add_option("--lambda", d.lambda, "v2 = lambda v1: re or re,im")->capture_default_str();
  design->add_option("--w1sq", d.w1sq, "||w1||^2 (fixed by v1 in the opposite_sign case)")
      ->capture_default_str();
  design->add_option("--w2-phase", d.w2_phase, "Phase of the w2 part orthogonal to w1")->capture_default_str();
  design->add_option("--V", d.V, "Controller potential")->capture_default_str();
  design->add_option("--out", d.out, "Output config path (default stdout)");

  std::string probe_layout;
  int probe_samples = 1000;
  std::uint64_t probe_seed = 7;
  auto* probe = app.add_subcommand("probe", "Random search for flat and decaying r=1 or linearly dependent couplings");
  probe->add_option("--layout", probe_layout, "r1 or lindep")->required()->check(CLI::IsMember({"r1", "lindep"}));
  probe->add_option("--samples", probe_samples, "Number of random couplings")->capture_default_str();
  probe->add_option("--seed", probe_seed, "Random seed")->capture_default_str();

  int opt_density = 50;
  int opt_refine = 3;
  auto* optimize = app.add_subcommand("optimize", "Maximize the passband value over the feasible norms");
  optimize->add_option("--density", opt_density, "Grid points per axis")->capture_default_str();
  optimize->add_option("--refine", opt_refine, "Zoomed refinement passes")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  const Tolerances tol = Tolerances::from_env();
  try {
    if (*validate) return cmd_validate(validate_path, tol, out);
    if (*scan) return cmd_scan(scan_args, tol, out);
    if (*check) return cmd_check(check_path, tol, out, err);
    if (*design) return cmd_design(d, tol, out);
    if (*probe) return cmd_probe(probe_layout, probe_samples, probe_seed, out);
    if (*optimize) return cmd_optimize(opt_density, opt_refine, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return kExitOk;
}

}  // namespace qgf
