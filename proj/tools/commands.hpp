#pragma once

// Subcommand bodies of the `banachrep` tool.  Everything runs through
// run_cli() so the test suite can drive the tool in-process.
//
// Exit codes: 0 ok, 1 usage / I-O / schema, 2 infeasible, 3 non-convergence,
// 4 admissibility counterexample.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "banachrep/core/pnorm_space.hpp"
#include "banachrep/core/random.hpp"
#include "banachrep/io/files.hpp"
#include "banachrep/nonreflexive/l1_demo.hpp"
#include "banachrep/regularisers/admissibility.hpp"
#include "banachrep/regularisers/beurling_livingston.hpp"
#include "banachrep/regularisers/independence.hpp"
#include "banachrep/regularisers/regulariser.hpp"
#include "banachrep/rkbs/rkbs.hpp"
#include "banachrep/solver/min_norm.hpp"
#include "banachrep/solver/regularised.hpp"

namespace banachrep::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInfeasible = 2, kNonConvergence = 3, kCounterexample = 4 };

struct GlobalFlags {
  double tol = 1e-9;
  int max_iter = 500;
  std::uint64_t seed = 0;
  std::string out = ".";
};

namespace detail {

namespace fs = std::filesystem;
using io::CsvTable;
using nlohmann::json;

inline fs::path out_path(const GlobalFlags& g, const std::string& name) { return fs::path(g.out) / name; }

inline std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw InvalidArgument(flag + ": cannot parse '" + item + "' as a number");
    out.push_back(v);
  }
  return out;
}

inline json element_json(const Element<Real>& f) {
  json a = json::array();
  for (Eigen::Index i = 0; i < f.size(); ++i) a.push_back(f.coords[i]);
  return a;
}

inline int cmd_solve(const GlobalFlags& g, const std::string& problem_path, bool verify_only,
                     const std::string& cert_arg, std::ostream& out) {
  const InterpolationProblem<Real> problem = io::load_problem(problem_path);
  const fs::path cert_path = cert_arg.empty() ? out_path(g, "certificate.json") : fs::path(cert_arg);

  if (verify_only) {
    const io::Certificate cert = io::certificate_from_json(io::parse_json(io::read_text(cert_path), cert_path.string()));
    if (cert.solution.f0.size() != static_cast<Eigen::Index>(problem.space().dim()))
      throw io::SchemaError("f0", "length must equal space.dim");
    if (cert.solution.c.size() != static_cast<Eigen::Index>(problem.num_constraints()))
      throw io::SchemaError("c", "length must equal the number of functionals");
    const RepresenterReport rep = verify_representer(cert.solution, problem, g.tol);
    const bool stored_match = std::abs(rep.feasibility - cert.solution.feasibility_residual) <= 1e-12 &&
                              std::abs(rep.peaking - cert.solution.peaking_residual) <= 1e-12 &&
                              std::abs(rep.norm_match - cert.solution.norm_match_residual) <= 1e-12;
    out << "feasibility " << rep.feasibility << (rep.feasibility_ok ? " ok" : " FAIL") << "\n"
        << "peaking     " << rep.peaking << (rep.peaking_ok ? " ok" : " FAIL") << "\n"
        << "norm_match  " << rep.norm_match << (rep.norm_match_ok ? " ok" : " FAIL") << "\n"
        << "stored residuals " << (stored_match ? "match" : "DIFFER") << "\n";
    if (!rep.passed() || !stored_match) {
      out << "certificate rejected\n";
      return kNonConvergence;
    }
    out << "certificate verified\n";
    return kOk;
  }

  const RepresenterSolution<Real> sol = solve_min_norm(problem, {g.tol, g.max_iter});
  io::write_atomic(cert_path,
                   io::certificate_to_json(problem, sol, {sol.iterations, g.tol, g.max_iter, g.seed}).dump(2) + "\n");
  out << "norm        " << norm(problem.space(), sol.f0) << "\n"
      << "feasibility " << sol.feasibility_residual << "\n"
      << "peaking     " << sol.peaking_residual << "\n"
      << "norm_match  " << sol.norm_match_residual << "\n"
      << "iterations  " << sol.iterations << "\n"
      << "certificate " << cert_path.string() << "\n";
  return kOk;
}

inline int cmd_admissibility(const GlobalFlags& g, const std::string& text, std::size_t dim, double p,
                             std::size_t samples, std::ostream& out) {
  const RegulariserSpec omega = regulariser_from_text(text);
  const PNormSpace space(dim, p);
  const AdmissibilityReport tang = test_tangential_monotonicity(omega, space, samples, g.seed);
  const RadialSymmetryReport rad = test_radial_symmetry(omega, space, samples, g.seed);

  json j;
  j["regulariser"] = omega.source;
  j["claims_admissible"] = omega.claims_admissible;
  j["space"] = {{"dim", dim}, {"p", p}};
  j["seed"] = g.seed;
  j["tangential"] = {{"verdict", to_string(tang.verdict)}, {"samples_tested", tang.samples_tested}};
  j["tangential"]["counterexamples"] = json::array();
  for (const auto& cx : tang.counterexamples) {
    j["tangential"]["counterexamples"].push_back({{"f", element_json(cx.f)},
                                                 {"f_tangent", element_json(cx.f_tangent)},
                                                 {"omega_f", cx.omega_f},
                                                 {"omega_f_plus_tangent", cx.omega_shifted}});
  }
  j["radial"] = {{"verdict", to_string(rad.verdict)}, {"samples_tested", rad.samples_tested}};
  j["radial"]["witnesses"] = json::array();
  for (const auto& w : rad.witnesses) {
    j["radial"]["witnesses"].push_back(
        {{"f", element_json(w.f)}, {"g", element_json(w.g)}, {"omega_f", w.omega_f}, {"omega_g", w.omega_g}});
  }
  io::write_atomic(out_path(g, "admissibility.json"), j.dump(2) + "\n");

  out << "regulariser " << omega.source << " (claims admissible: " << (omega.claims_admissible ? "yes" : "no")
      << ")\n"
      << "tangential monotonicity: " << to_string(tang.verdict) << " over " << tang.samples_tested << " samples\n"
      << "radial symmetry:         " << to_string(rad.verdict) << " over " << rad.samples_tested << " samples\n";
  if (tang.verdict == Verdict::counterexample || rad.verdict == Verdict::counterexample) {
    if (!tang.counterexamples.empty()) {
      const auto& cx = tang.counterexamples.front();
      out << "counterexample: Omega(f) = " << cx.omega_f << " > Omega(f + f_T) = " << cx.omega_shifted << "\n";
    }
    return kCounterexample;
  }
  out << "no counterexample found (statistical evidence, not a proof)\n";
  return kOk;
}

inline int cmd_independence(const GlobalFlags& g, const std::string& problem_path, std::vector<std::string> regs,
                            bool defaults, std::ostream& out) {
  if (defaults) {
    for (const char* name : {"identity", "square", "exp-minus-one"}) regs.emplace_back(name);
  }
  if (regs.empty()) throw PreconditionFailed("no regularisers given (use --reg or --defaults)");
  const InterpolationProblem<Real> problem = io::load_problem(problem_path);
  std::vector<RegulariserSpec> specs;
  for (const auto& r : regs) specs.push_back(regulariser_from_text(r));
  const double tol = 1e-5;
  const IndependenceReport rep = independence_check(problem, specs, tol);

  CsvTable table({"regulariser", "deviation_from_min_norm"});
  for (const auto& e : rep.entries) table.add(e.name, e.deviation_from_min_norm);
  io::write_atomic(out_path(g, "independence.csv"), table.str());
  for (const auto& e : rep.entries) out << e.name << "\t" << e.deviation_from_min_norm << "\n";
  out << "max pairwise deviation " << rep.max_deviation << (rep.passed ? " <= " : " > ") << tol << "\n";
  return rep.passed ? kOk : kNonConvergence;
}

inline int cmd_kernel(const GlobalFlags& g, int nodes, double p, int pairs, double range, std::ostream& out) {
  const rkbs::Rkbs1D rk = rkbs::build_rkbs(p, nodes);
  Rng rng(g.seed);
  CsvTable table({"x", "y", "K", "sinc", "abs_error"});
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const double x = random_uniform(rng, -range, range);
    const double y = random_uniform(rng, -range, range);
    const double K = rkbs::kernel(rk, x, y);
    const double s = rkbs::sinc(x - y);
    worst = std::max(worst, std::abs(K - s));
    table.add(x, y, K, s, std::abs(K - s));
  }
  io::write_atomic(out_path(g, "kernel.csv"), table.str());
  out << "max abs_error " << worst << " over " << pairs << " pairs (N = " << nodes << ")\n";
  return kOk;
}

inline int cmd_rkbs_interp(const GlobalFlags& g, double p, int nodes, const std::string& points,
                           const std::string& values, const std::string& grid, std::ostream& out) {
  const std::vector<double> xs = parse_list(points, "--points");
  const std::vector<double> ys = parse_list(values, "--values");
  const std::vector<double> gs = parse_list(grid, "--grid");
  if (gs.size() != 3 || gs[2] < 2 || gs[2] != std::floor(gs[2]))
    throw InvalidArgument("--grid expects lo,hi,count with integer count >= 2");
  const rkbs::Rkbs1D rk = rkbs::build_rkbs(p, nodes);
  const rkbs::Interpolant ip = rkbs::interpolate(rk, xs, ys, {g.tol, g.max_iter});

  CsvTable table({"x", "f"});
  const int count = static_cast<int>(gs[2]);
  double max_imag = 0.0;
  for (int k = 0; k < count; ++k) {
    const double x = gs[0] + (gs[1] - gs[0]) * k / (count - 1);
    const Complex v = rkbs::evaluate(rk, ip.fn, x);
    max_imag = std::max(max_imag, std::abs(v.imag()));
    table.add(x, v.real());
  }
  io::write_atomic(out_path(g, "interpolant.csv"), table.str());
  out << "norm " << norm(rk.space(), Element<Complex>(ip.fn.u)) << "\n"
      << "feasibility " << ip.certificate.feasibility_residual << "\n"
      << "max |imag f| on grid " << max_imag << "\n";
  return kOk;
}

inline int cmd_counterexample(const GlobalFlags& g, const std::string& ns, double c1, double c2, std::ostream& out) {
  std::vector<std::int64_t> n_list;
  for (double v : parse_list(ns, "--n")) {
    if (v != std::floor(v)) throw InvalidArgument("--n expects integers");
    n_list.push_back(static_cast<std::int64_t>(v));
  }
  const nonreflexive::ScanReport rep = nonreflexive::span_peaking_scan(c1, c2, n_list);
  CsvTable table({"n", "c1", "c2", "sup_norm", "attaining_index", "gap"});
  for (const auto& r : rep.rows) {
    table.add(r.n, r.c1, r.c2, r.analysis.sup_norm, r.analysis.attaining_index, r.analysis.gap_to_limit);
    out << "n=" << r.n << " sup_norm=" << r.analysis.sup_norm << " index=" << r.analysis.attaining_index
        << " gap=" << r.analysis.gap_to_limit << "\n";
  }
  io::write_atomic(out_path(g, "counterexample.csv"), table.str());
  out << (rep.escapes ? "norming index escapes (>= n-1) for every n\n" : "norming index did NOT escape\n");
  return kOk;
}

inline int cmd_blw(const GlobalFlags& g, int instances, int dim, int wdim, double p, std::ostream& out) {
  if (dim < 1 || wdim < 0 || wdim > dim) throw InvalidArgument("need 1 <= dim and 0 <= wdim <= dim");
  const PNormSpace space(static_cast<std::size_t>(dim), p);
  Rng rng(g.seed);
  CsvTable table({"instance", "p", "dim", "wdim", "membership_residual", "annihilator_residual", "z_norm"});
  double worst = 0.0;
  for (int k = 0; k < instances; ++k) {
    std::vector<Element<Real>> W;
    for (int c = 0; c < wdim; ++c) W.emplace_back(random_normal(rng, dim));
    const Element<Real> x0(random_normal(rng, dim));
    const Functional<Real> u0(random_normal(rng, dim));
    const BlwWitness w = beurling_livingston_witness(space, W, x0, u0, 1e-6, g.max_iter);
    worst = std::max({worst, w.membership_residual, w.annihilator_residual});
    table.add(k, p, dim, wdim, w.membership_residual, w.annihilator_residual, norm(space, w.z));
  }
  io::write_atomic(out_path(g, "blw.csv"), table.str());
  out << "max residual " << worst << " over " << instances << " instances\n";
  return kOk;
}

inline int cmd_path(const GlobalFlags& g, const std::string& problem_path, const std::string& lambdas,
                    const std::string& reg, std::ostream& out) {
  const InterpolationProblem<Real> problem = io::load_problem(problem_path);
  const RegulariserSpec omega = regulariser_from_text(reg);
  RegularisedOptions opt;
  opt.seed = g.seed;
  const std::vector<PathPoint> path = regularisation_path(problem, omega, LossSpec{}, parse_list(lambdas, "--lambdas"), opt);
  CsvTable table({"lambda", "distance", "objective"});
  for (const auto& pt : path) {
    table.add(pt.lambda, pt.distance, pt.objective);
    out << "lambda=" << pt.lambda << " distance=" << pt.distance << "\n";
  }
  io::write_atomic(out_path(g, "path.csv"), table.str());
  return kOk;
}

}  // namespace detail

/// Parses `args` (without the program name) and runs the selected subcommand.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimal-norm and regularised interpolation in weighted l^p spaces, with dual certificates", "banachrep"};
  app.require_subcommand(1);
  GlobalFlags g;
  app.add_option("--tol", g.tol, "Residual tolerance")->capture_default_str();
  app.add_option("--max-iter", g.max_iter, "Iteration cap")->capture_default_str();
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--out", g.out, "Output directory")->capture_default_str();

  std::function<int()> action;

  std::string problem_path;
  bool verify_only = false;
  std::string cert_path;
  auto* solve = app.add_subcommand("solve", "Solve a minimal-norm interpolation problem and write certificate.json");
  solve->add_option("problem", problem_path, "Problem JSON file")->required();
  solve->add_flag("--verify-only", verify_only, "Re-verify an existing certificate instead of solving");
  solve->add_option("--certificate", cert_path, "Certificate path (default <out>/certificate.json)");
  solve->callback([&] { action = [&] { return detail::cmd_solve(g, problem_path, verify_only, cert_path, out); }; });

  std::string reg_text;
  std::size_t dim = 3;
  double p = 2.0;
  std::size_t samples = 10000;
  auto* adm = app.add_subcommand("admissibility",
                                 "Property-test a regulariser for tangential monotonicity and radial symmetry; "
                                 "writes admissibility.json");
  adm->add_option("regulariser", reg_text, "Expression or named profile (identity, square, exp-minus-one)")->required();
  adm->add_option("--dim", dim, "Space dimension")->capture_default_str();
  adm->add_option("--p", p, "Exponent")->capture_default_str();
  adm->add_option("--samples", samples, "Number of samples")->capture_default_str();
  adm->callback([&] { action = [&] { return detail::cmd_admissibility(g, reg_text, dim, p, samples, out); }; });

  std::vector<std::string> regs;
  bool defaults = false;
  auto* ind = app.add_subcommand("independence",
                                 "Compare solutions across admissible regularisers; writes independence.csv "
                                 "(regulariser, deviation_from_min_norm)");
  ind->add_option("problem", problem_path, "Problem JSON file")->required();
  ind->add_option("--reg", regs, "Regulariser (repeatable)");
  ind->add_flag("--defaults", defaults, "Add identity, square and exp-minus-one");
  ind->callback([&] { action = [&] { return detail::cmd_independence(g, problem_path, regs, defaults, out); }; });

  int nodes = 512;
  int pairs = 100;
  double range = 4.0;
  auto* ker = app.add_subcommand("kernel", "Tabulate the RKBS kernel; writes kernel.csv (x, y, K, sinc, abs_error)");
  ker->add_option("--N", nodes, "Quadrature nodes")->capture_default_str();
  ker->add_option("--p", p, "Exponent")->capture_default_str();
  ker->add_option("--pairs", pairs, "Random (x, y) pairs")->capture_default_str();
  ker->add_option("--range", range, "Sample x, y uniformly in [-range, range]")->capture_default_str();
  ker->callback([&] { action = [&] { return detail::cmd_kernel(g, nodes, p, pairs, range, out); }; });

  std::string points, values, grid = "-4,4,161";
  int interp_nodes = 128;
  auto* rki = app.add_subcommand("rkbs-interp", "Minimal-norm RKBS interpolant; writes interpolant.csv (x, f)");
  rki->add_option("--p", p, "Exponent")->capture_default_str();
  rki->add_option("--N", interp_nodes, "Quadrature nodes")->capture_default_str();
  rki->add_option("--points", points, "Comma-separated interpolation points")->required();
  rki->add_option("--values", values, "Comma-separated target values")->required();
  rki->add_option("--grid", grid, "Evaluation grid lo,hi,count")->capture_default_str();
  rki->callback([&] { action = [&] { return detail::cmd_rkbs_interp(g, p, interp_nodes, points, values, grid, out); }; });

  std::string ns = "10";
  double c1 = 1.0, c2 = 0.0;
  auto* cx = app.add_subcommand("counterexample",
                                "l^1 norming scan of c1 L1 + c2 L2; writes counterexample.csv "
                                "(n, c1, c2, sup_norm, attaining_index, gap)");
  cx->add_option("--n", ns, "Comma-separated truncation lengths")->capture_default_str();
  cx->add_option("--c1", c1, "Coefficient of L1")->capture_default_str();
  cx->add_option("--c2", c2, "Coefficient of L2")->capture_default_str();
  cx->callback([&] { action = [&] { return detail::cmd_counterexample(g, ns, c1, c2, out); }; });

  int instances = 100, blw_dim = 6, wdim = 3;
  double blw_p = 3.0;
  auto* blw = app.add_subcommand("blw",
                                 "Beurling-Livingston witnesses on random instances; writes blw.csv (instance, p, dim, "
                                 "wdim, membership_residual, annihilator_residual, z_norm)");
  blw->add_option("--instances", instances, "Number of random instances")->capture_default_str();
  blw->add_option("--dim", blw_dim, "Space dimension")->capture_default_str();
  blw->add_option("--wdim", wdim, "Subspace dimension")->capture_default_str();
  blw->add_option("--p", blw_p, "Exponent")->capture_default_str();
  blw->callback([&] { action = [&] { return detail::cmd_blw(g, instances, blw_dim, wdim, blw_p, out); }; });

  std::string lambdas = "1e-1,1e-2,1e-3,1e-4,1e-5,1e-6";
  std::string path_reg = "norm^2";
  auto* pth = app.add_subcommand("path", "Regularisation path with square loss; writes path.csv (lambda, distance, objective)");
  pth->add_option("problem", problem_path, "Problem JSON file")->required();
  pth->add_option("--lambdas", lambdas, "Strictly decreasing comma-separated lambdas")->capture_default_str();
  pth->add_option("--reg", path_reg, "Regulariser")->capture_default_str();
  pth->callback([&] { action = [&] { return detail::cmd_path(g, problem_path, lambdas, path_reg, out); }; });

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsage;
  }

  try {
    return action ? action() : kUsage;
  } catch (const Infeasible& e) {
    err << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const NonConvergence& e) {
    err << "no convergence: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace banachrep::cli
