// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "banachrep/core/pnorm_space.hpp"
#include "banachrep/core/random.hpp"
#include "banachrep/nonreflexive/l1_demo.hpp"
#include "banachrep/regularisers/admissibility.hpp"
#include "banachrep/regularisers/beurling_livingston.hpp"
#include "banachrep/regularisers/independence.hpp"
#include "banachrep/regularisers/mollify.hpp"
#include "banachrep/regularisers/regulariser.hpp"
#include "banachrep/regularisers/tangent_walk.hpp"
#include "banachrep/rkbs/rkbs.hpp"
#include "banachrep/solver/min_norm.hpp"
#include "banachrep/solver/oracle.hpp"
#include "banachrep/solver/regularised.hpp"

using namespace banachrep;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

InterpolationProblem<Real> random_problem(Rng& rng, int m_max, int null_max, int n_max, double p) {
  const int m = uniform_int(rng, 1, m_max);
  const int n = uniform_int(rng, m, std::min(n_max, m + null_max));
  std::vector<Functional<Real>> rows;
  for (int i = 0; i < m; ++i) rows.emplace_back(random_normal(rng, n));
  return InterpolationProblem<Real>(PNormSpace(static_cast<std::size_t>(n), p), std::move(rows), random_normal(rng, m));
}

Outcome duality_identities() {
  Rng rng(1001);
  const double ps[] = {1.2, 1.5, 2.0, 3.0, 4.0, 8.0};
  double worst_pair = 0.0, worst_norm = 0.0, worst_round = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const int n = uniform_int(rng, 1, 16);
    const PNormSpace sp(static_cast<std::size_t>(n), ps[k % 6]);
    const Element<Real> f(random_normal(rng, n) * std::pow(10.0, random_uniform(rng, -3, 3)));
    const Functional<Real> J = duality_map(sp, f);
    const double nf = norm(sp, f);
    worst_pair = std::max(worst_pair, std::abs(pairing(sp, J, f) - nf * nf) / (nf * nf));
    worst_norm = std::max(worst_norm, std::abs(dual_norm(sp, J) - nf) / nf);
    worst_round = std::max(worst_round, norm(sp, Element<Real>(inverse_duality_map(sp, J).coords - f.coords)) / (1 + nf));
  }
  return {worst_pair <= 1e-10 && worst_norm <= 1e-10 && worst_round <= 1e-8,
          "1000 samples; rel <J f,f> err " + fmt("%.2e", worst_pair) + ", rel norm err " + fmt("%.2e", worst_norm) +
              ", round trip " + fmt("%.2e", worst_round)};
}

Outcome solver_vs_oracle() {
  Rng rng(1002);
  const double ps[] = {1.3, 2.0, 3.0, 5.0};
  double worst_gap = 0.0, worst_res = 0.0;
  const int instances = 240;
  for (int k = 0; k < instances; ++k) {
    const auto problem = random_problem(rng, 3, 3, 6, ps[k % 4]);
    const auto sol = solve_min_norm(problem);
    worst_res = std::max({worst_res, sol.feasibility_residual, std::abs(sol.peaking_residual), sol.norm_match_residual});
    const Element<Real> o = oracle_min_norm(problem);
    worst_gap = std::max(worst_gap, norm(problem.space(), Element<Real>(o.coords - sol.f0.coords)));
  }
  const InterpolationProblem<Real> p4(PNormSpace(2, 4.0), {Functional<Real>(Eigen::Vector2d(1, 2))},
                                      Eigen::VectorXd::Constant(1, 1.0));
  const double t = 1.0 / (1.0 + std::pow(2.0, 4.0 / 3.0));
  const Eigen::VectorXd f = solve_min_norm(p4).f0.coords;
  const double closed = std::max(std::abs(f[0] - t), std::abs(f[1] - t * std::cbrt(2.0)));
  return {worst_gap <= 1e-4 && worst_res <= 1e-9 && closed <= 1e-8,
          std::to_string(instances) + " instances; max oracle gap " + fmt("%.2e", worst_gap) + ", max residual " +
              fmt("%.2e", worst_res) + ", p=4 closed form err " + fmt("%.2e", closed)};
}

Outcome regulariser_independence() {
  Rng rng(1003);
  const double ps[] = {1.5, 2.0, 3.0, 4.0};
  const std::vector<RegulariserSpec> regs{regulariser_from_text("identity"), regulariser_from_text("square"),
                                          regulariser_from_text("exp-minus-one")};
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto problem = random_problem(rng, 3, 3, 6, ps[k % 4]);
    worst = std::max(worst, independence_check(problem, regs, 1e-5).max_deviation);
  }
  return {worst <= 1e-5, "50 problems x 3 regularisers; max pairwise deviation " + fmt("%.2e", worst)};
}

Outcome admissibility_tester() {
  bool ok = true;
  std::string detail;
  for (double p : {2.0, 3.0}) {
    const PNormSpace sp(p == 2.0 ? 2 : 3, p);
    const auto good = test_tangential_monotonicity(parse_regulariser("norm^2"), sp, 10000, 42);
    const RegulariserSpec coord = parse_regulariser("coord(0)");
    const auto bad = test_tangential_monotonicity(coord, sp, 10000, 42);
    bool rechecked = !bad.counterexamples.empty();
    for (const auto& cx : bad.counterexamples) rechecked = rechecked && recheck_counterexample(coord, sp, cx, 1e-10, 1e-9);
    ok = ok && good.verdict == Verdict::pass && good.samples_tested == 10000 && bad.verdict == Verdict::counterexample &&
         rechecked;
    detail += "p=" + fmt("%g", p) + ": norm^2 " + to_string(good.verdict) + ", coord(0) " + to_string(bad.verdict) +
              (rechecked ? " (re-verified)" : " (NOT re-verified)") + "; ";
  }
  return {ok, detail + "seed 42, 10000 samples"};
}

Outcome tangent_walk_chain() {
  Rng rng(1005);
  const std::vector<RegulariserSpec> regs{regulariser_from_text("identity"), regulariser_from_text("square"),
                                          regulariser_from_text("exp-minus-one")};
  const double ps[] = {1.5, 2.0, 3.0, 4.0};
  double worst_res = 0.0;
  bool chain = true;
  for (int k = 0; k < 100; ++k) {
    const int n = uniform_int(rng, 2, 6);
    const PNormSpace sp(static_cast<std::size_t>(n), ps[k % 4]);
    const Element<Real> f(random_normal(rng, n));
    const double lambda = random_uniform(rng, 1.05, 4.0);
    const auto r = tangent_walk(sp, f, lambda, 1e-8, std::nullopt, static_cast<std::uint64_t>(k));
    worst_res = std::max(worst_res, r.residual);
    const Element<Real> lf(lambda * f.coords);
    for (const auto& om : regs) {
      const double a = om(sp, f), b = om(sp, r.f_t0), c = om(sp, lf);
      chain = chain && a <= b + 1e-12 && b <= c + 1e-12 * (1 + c);
    }
  }
  const auto r2 = tangent_walk(PNormSpace(2, 2.0), Element<Real>(Eigen::Vector2d(1, 0)), 2.0, 1e-13,
                               Element<Real>(Eigen::Vector2d(0, 1)));
  const double closed = std::abs(r2.t0 - 1.0);
  return {worst_res <= 1e-8 && chain && closed <= 1e-12,
          "100 trials; max root residual " + fmt("%.2e", worst_res) + ", chain " + (chain ? "holds" : "VIOLATED") +
              ", p=2 t0 err " + fmt("%.2e", closed)};
}

Outcome mollification() {
  Rng rng(1006);
  const RadialMollifier m(64);
  const std::vector<RegulariserSpec> regs{
      regulariser_from_text("identity"), regulariser_from_text("square"), regulariser_from_text("exp-minus-one"),
      make_admissible(MonotoneFn::table({0.0, 1.0, 2.0}, {0.0, 1.0, 1.5}, MonotoneFn::Interp::step))};
  double worst_drop = 0.0;
  int directions = 0;
  for (double p : {1.5, 2.0, 3.0}) {
    for (int d = 0; d < 10; ++d, ++directions) {
      const PNormSpace sp(4, p);
      Eigen::VectorXd v = random_normal(rng, 4);
      v /= norm(sp, Element<Real>(v));
      const Element<Real> f0(v);
      for (const auto& om : regs) {
        double prev = m(om, sp, f0, 0.0);
        for (int k = 1; k < 100; ++k) {
          const double cur = m(om, sp, f0, 3.0 * k / 99.0);
          worst_drop = std::max(worst_drop, prev - cur);
          prev = cur;
        }
      }
    }
  }
  return {worst_drop <= 1e-6, std::to_string(directions) + " directions x 4 regularisers x 100-point grid; max decrease " +
                                  fmt("%.2e", std::max(0.0, worst_drop))};
}

Outcome beurling_livingston() {
  Rng rng(1007);
  const double ps[] = {1.5, 2.0, 3.0};
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int n = uniform_int(rng, 1, 8);
    const int dimw = uniform_int(rng, 0, std::min(4, n));
    const PNormSpace sp(static_cast<std::size_t>(n), ps[k % 3]);
    std::vector<Element<Real>> W;
    for (int c = 0; c < dimw; ++c) W.emplace_back(random_normal(rng, n));
    const auto w = beurling_livingston_witness(sp, W, Element<Real>(random_normal(rng, n)),
                                               Functional<Real>(random_normal(rng, n)), 1e-6);
    worst = std::max({worst, w.membership_residual, w.annihilator_residual});
  }
  const PNormSpace sp2(2, 2.0);
  const auto w = beurling_livingston_witness(sp2, {Element<Real>(Eigen::Vector2d(1, 0))}, Element<Real>(Eigen::Vector2d(0, 1)),
                                             Functional<Real>(Eigen::Vector2d(1, 0)), 1e-12);
  const double closed = std::max((w.z.coords - Eigen::Vector2d(-1, 0)).cwiseAbs().maxCoeff(),
                                 (w.L.coords - Eigen::Vector2d(-1, 1)).cwiseAbs().maxCoeff());
  return {worst <= 1e-6 && closed <= 1e-10,
          "100 instances; max residual " + fmt("%.2e", worst) + ", p=2 closed form err " + fmt("%.2e", closed)};
}

Outcome regularisation_path_limit() {
  Rng rng(1008);
  const std::vector<double> lambdas{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  double final_dist = 0.0, worst_rise = 0.0;
  for (int k = 0; k < 10; ++k) {
    const auto problem = random_problem(rng, 3, 3, 6, 2.0);
    const auto path = regularisation_path(problem, parse_regulariser("norm^2"), {}, lambdas);
    final_dist = std::max(final_dist, path.back().distance);
    for (std::size_t i = 1; i < path.size(); ++i) worst_rise = std::max(worst_rise, path[i].distance - path[i - 1].distance);
  }
  return {final_dist <= 1e-3 && worst_rise <= 1e-9,
          "10 problems, p=2, square loss; max distance at 1e-6 " + fmt("%.2e", final_dist) + ", max increase " +
              fmt("%.2e", std::max(0.0, worst_rise))};
}

Outcome rkbs_kernel() {
  Rng rng(1009);
  const rkbs::Rkbs1D rk512 = rkbs::build_rkbs(2.0, 512);
  double kerr = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double x = random_uniform(rng, -4, 4), y = random_uniform(rng, -4, 4);
    kerr = std::max(kerr, std::abs(rkbs::kernel(rk512, x, y) - rkbs::sinc(x - y)));
  }

  const std::vector<double> xs{-1.7, -0.4, 0.3, 1.1, 2.5}, ys{0.2, -1.0, 1.5, 0.7, -0.3};
  const rkbs::Rkbs1D rk2 = rkbs::build_rkbs(2.0, 128);
  const auto ip2 = rkbs::interpolate(rk2, xs, ys);
  const auto m = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd K(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) K(i, j) = rkbs::sinc(xs[static_cast<std::size_t>(i)] - xs[static_cast<std::size_t>(j)]);
  const Eigen::VectorXd alpha = K.ldlt().solve(Eigen::Map<const Eigen::VectorXd>(ys.data(), m));
  double gram_err = 0.0, imag = 0.0;
  for (int k = 0; k <= 160; ++k) {
    const double x = -4.0 + 0.05 * k;
    double g = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) g += alpha[i] * rkbs::sinc(x - xs[static_cast<std::size_t>(i)]);
    gram_err = std::max(gram_err, std::abs(rkbs::evaluate(rk2, ip2.fn, x) - g));
  }
  for (double p : {1.5, 2.0, 3.0}) {
    const rkbs::Rkbs1D rk = rkbs::build_rkbs(p, 128);
    const auto ip = rkbs::interpolate(rk, xs, ys);
    for (int k = 0; k <= 160; ++k) imag = std::max(imag, std::abs(rkbs::evaluate(rk, ip.fn, -4.0 + 0.05 * k).imag()));
  }

  const rkbs::Rkbs1D rk3 = rkbs::build_rkbs(3.0, 64);
  double dual_err = 0.0;
  for (int k = 0; k < 20; ++k) {
    Eigen::VectorXcd u(64);
    for (Eigen::Index j = 0; j < 64; ++j) u[j] = Complex(random_normal(rng, 1)[0], random_normal(rng, 1)[0]);
    const auto back = rkbs::predual_function(rk3, rkbs::dual_function(rk3, {u}));
    dual_err = std::max(dual_err, (back.u - u).cwiseAbs().maxCoeff());
  }
  return {kerr <= 1e-8 && gram_err <= 1e-6 && imag <= 1e-7 && dual_err <= 1e-8,
          "N=512 kernel err " + fmt("%.2e", kerr) + ", p=2 vs Gram " + fmt("%.2e", gram_err) + ", max |imag| " +
              fmt("%.2e", imag) + ", (f*)* err " + fmt("%.2e", dual_err)};
}

Outcome nonreflexive_demo() {
  using namespace nonreflexive;
  const auto t = build_l1_counterexample(10);
  const NormingAnalysis a = norming_analysis(t.L1, 10);
  const bool rational = entry_fraction(a.attaining_index) == Fraction{9, 10} && a.sup_norm == Fraction{9, 10}.value();
  std::vector<std::int64_t> ns;
  for (std::int64_t n = 2; n <= 4096; n = n < 16 ? n + 1 : n * 2) ns.push_back(n);
  const std::vector<std::pair<double, double>> cs{{1, 0}, {0, 1}, {1, 1}, {1, -1}, {-3, 0.5}, {0.001, 1}, {1, 0.001}, {-1, -2}};
  bool escapes = true;
  for (const auto& [c1, c2] : cs) escapes = escapes && span_peaking_scan(c1, c2, ns).escapes;
  return {rational && escapes, std::string("n=10 sup_norm ") + (rational ? "= 9/10" : "!= 9/10") + "; index >= n-1 for " +
                                   std::to_string(cs.size()) + " coefficient pairs, n up to 4096: " +
                                   (escapes ? "yes" : "NO")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"duality-map identities", duality_identities},
      {"solver vs oracle", solver_vs_oracle},
      {"regulariser independence", regulariser_independence},
      {"admissibility tester", admissibility_tester},
      {"tangent walk", tangent_walk_chain},
      {"radial mollification", mollification},
      {"Beurling-Livingston witness", beurling_livingston},
      {"regularisation path", regularisation_path_limit},
      {"RKBS kernel and interpolation", rkbs_kernel},
      {"non-reflexive l1 demo", nonreflexive_demo},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  %2zu %-30s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    if (!o.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
