#include <cmath>

#include <gtest/gtest.h>

#include "banachrep/solver/min_norm.hpp"
#include "generators.hpp"

using namespace banachrep;

namespace {

InterpolationProblem<Real> single_row(double p, double a, double b, double y) {
  return InterpolationProblem<Real>(PNormSpace(2, p), {Functional<Real>(Eigen::Vector2d(a, b))}, Eigen::VectorXd::Constant(1, y));
}

constexpr std::array<double, 4> kSolverExponents{1.3, 2.0, 3.0, 5.0};

}  // namespace

TEST(SolveMinNorm, SymmetricProblemGivesEqualCoordinates) {
  for (double p : {1.2, 1.5, 2.0, 3.0, 8.0}) {
    const auto sol = solve_min_norm(single_row(p, 1, 1, 2));
    EXPECT_NEAR(sol.f0.coords[0], 1.0, 1e-9) << p;
    EXPECT_NEAR(sol.f0.coords[1], 1.0, 1e-9) << p;
  }
}

TEST(SolveMinNorm, EuclideanCaseMatchesNormalEquations) {
  const auto sol = solve_min_norm(single_row(2.0, 1, 2, 1));
  EXPECT_NEAR(sol.f0.coords[0], 0.2, 1e-12);
  EXPECT_NEAR(sol.f0.coords[1], 0.4, 1e-12);
  EXPECT_NEAR(sol.c[0], 0.2, 1e-12);
}

TEST(SolveMinNorm, P4ClosedForm) {
  const double t = 1.0 / (1.0 + std::pow(2.0, 4.0 / 3.0));
  const auto problem = single_row(4.0, 1, 2, 1);
  const auto sol = solve_min_norm(problem);
  EXPECT_NEAR(sol.f0.coords[0], t, 1e-8);
  EXPECT_NEAR(sol.f0.coords[1], t * std::cbrt(2.0), 1e-8);
  EXPECT_NEAR(t, 0.284104, 1e-6);
  EXPECT_LE(sol.feasibility_residual, 1e-9);
  EXPECT_LE(std::abs(sol.peaking_residual), 1e-9);
  EXPECT_LE(sol.norm_match_residual, 1e-9);
}

TEST(SolveMinNorm, DualCoefficientsAreScaledToTheNorm) {
  Rng rng(11);
  for (int k = 0; k < 20; ++k) {
    const auto problem = gen::problem(rng, 2, 6, 3, kSolverExponents);
    const auto sol = solve_min_norm(problem);
    const double nL = dual_norm(problem.space(), problem.combine(sol.c));
    EXPECT_NEAR(nL, norm(problem.space(), sol.f0), 1e-9 * (1.0 + nL));
  }
}

TEST(SolveMinNorm, InconsistentRowsAreInfeasible) {
  const InterpolationProblem<Real> problem(
      PNormSpace(3, 3.0), {Functional<Real>(Eigen::Vector3d(1, 1, 0)), Functional<Real>(Eigen::Vector3d(1, 1, 0))},
      Eigen::Vector2d(1, 2));
  EXPECT_THROW(solve_min_norm(problem), Infeasible);
}

TEST(SolveMinNorm, ConsistentDependentRowsAreAccepted) {
  const InterpolationProblem<Real> problem(
      PNormSpace(3, 3.0),
      {Functional<Real>(Eigen::Vector3d(1, 1, 0)), Functional<Real>(Eigen::Vector3d(2, 2, 0)),
       Functional<Real>(Eigen::Vector3d(0, 1, 1))},
      Eigen::Vector3d(1, 2, 0.5));
  const auto sol = solve_min_norm(problem);
  EXPECT_LE(sol.feasibility_residual, 1e-9);
  EXPECT_EQ(sol.c.size(), 3);
  EXPECT_TRUE(verify_representer(sol, problem, 1e-9).passed());
}

TEST(SolveMinNorm, RejectsZeroFunctional) {
  EXPECT_THROW(single_row(2.0, 0, 0, 1), InvalidArgument);
}

TEST(SolveMinNorm, ZeroTargetsGiveZero) {
  const auto sol = solve_min_norm(single_row(3.0, 1, -2, 0));
  EXPECT_EQ(sol.f0.coords.cwiseAbs().maxCoeff(), 0.0);
}

TEST(SolveMinNorm, WeightedSpace) {
  Eigen::VectorXd w(3);
  w << 0.25, 1.0, 4.0;
  const InterpolationProblem<Real> problem(PNormSpace(3.0, w), {Functional<Real>(Eigen::Vector3d(1, 1, 1))},
                                           Eigen::VectorXd::Constant(1, 1.0));
  const auto sol = solve_min_norm(problem);
  EXPECT_TRUE(verify_representer(sol, problem, 1e-9).passed());
  // Constraint sum_j w_j f_j = 1 with weighted p-norm: the optimum has equal coordinates.
  EXPECT_NEAR(sol.f0.coords[0], 1.0 / w.sum(), 1e-9);
  EXPECT_NEAR(sol.f0.coords[2], 1.0 / w.sum(), 1e-9);
}

TEST(VerifyRepresenter, PassesOnSolverOutput) {
  const auto problem = single_row(4.0, 1, 2, 1);
  EXPECT_TRUE(verify_representer(solve_min_norm(problem), problem, 1e-9).passed());
}

TEST(VerifyRepresenter, NullSpacePerturbationFailsPeaking) {
  const auto problem = single_row(2.0, 1, 2, 1);
  auto sol = solve_min_norm(problem);
  sol.f0.coords += 1e-3 * Eigen::Vector2d(2, -1);  // still feasible
  const RepresenterReport rep = verify_representer(sol, problem, 1e-9);
  EXPECT_TRUE(rep.feasibility_ok);
  EXPECT_FALSE(rep.peaking_ok);
  EXPECT_GT(rep.peaking, 0.0);
  EXPECT_FALSE(rep.passed());
}

TEST(VerifyRepresenter, ZeroProblemPasses) {
  const auto problem = single_row(3.0, 1, 1, 0);
  RepresenterSolution<Real> sol;
  sol.f0 = Element<Real>(Eigen::Vector2d::Zero());
  sol.c = Eigen::VectorXd::Zero(1);
  EXPECT_TRUE(verify_representer(sol, problem, 1e-9).passed());
}

TEST(SolveMinNorm, ComplexSpaceWithRealData) {
  const PNormSpace sp(3, 3.0, Field::complex);
  Eigen::VectorXcd a(3), b(3);
  a << Complex(1, 1), Complex(0, 2), Complex(1, 0);
  b << Complex(0.5, 0), Complex(-1, 1), Complex(0, -1);
  const InterpolationProblem<Complex> problem(sp, {Functional<Complex>(a), Functional<Complex>(b)},
                                              Eigen::Vector2cd(Complex(1, 0), Complex(0, 2)));
  const auto sol = solve_min_norm(problem);
  EXPECT_TRUE(verify_representer(sol, problem, 1e-9).passed());
}

// --- properties --------------------------------------------------------------

TEST(SolveMinNormProperty, CertificatesOnRandomInstances) {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto problem = gen::problem(rng, 1, 6, 3, kSolverExponents);
    const auto sol = solve_min_norm(problem);
    ASSERT_LE(sol.feasibility_residual, 1e-9) << trial;
    ASSERT_LE(std::abs(sol.peaking_residual), 1e-9) << trial;
    ASSERT_LE(sol.norm_match_residual, 1e-9) << trial;
  }
}

TEST(DualObjectiveProperty, Concave) {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const auto problem = gen::problem(rng, 1, 6, 3, kSolverExponents);
    const auto m = static_cast<Eigen::Index>(problem.num_constraints());
    const Eigen::VectorXd c1 = random_normal(rng, m), c2 = random_normal(rng, m);
    const double t = random_uniform(rng, 0.0, 1.0);
    const double lhs = dual_objective(problem, Eigen::VectorXd(t * c1 + (1 - t) * c2));
    const double rhs = t * dual_objective(problem, c1) + (1 - t) * dual_objective(problem, c2);
    ASSERT_GE(lhs, rhs - 1e-10) << trial;
  }
}

TEST(DualObjectiveProperty, GradientIsTheResidual) {
  Rng rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const auto problem = gen::problem(rng, 1, 6, 3, kSolverExponents);
    const auto m = static_cast<Eigen::Index>(problem.num_constraints());
    const Eigen::VectorXd c = random_normal(rng, m);
    const Eigen::VectorXd g = dual_residual(problem, c);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double h = 1e-6;
      Eigen::VectorXd cp = c, cm = c;
      cp[i] += h;
      cm[i] -= h;
      const double fd = (dual_objective(problem, cp) - dual_objective(problem, cm)) / (2 * h);
      ASSERT_NEAR(fd, g[i], 1e-5 * std::max(1.0, std::abs(g[i]))) << trial;
    }
  }
}

TEST(SolveMinNormProperty, ScalingTargetsScalesSolution) {
  Rng rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const auto problem = gen::problem(rng, 2, 6, 3, kSolverExponents);
    const double s = random_uniform(rng, 0.1, 10.0);
    const InterpolationProblem<Real> scaled(problem.space(), problem.functionals(), s * problem.targets());
    const Eigen::VectorXd f = solve_min_norm(problem).f0.coords;
    const Eigen::VectorXd fs = solve_min_norm(scaled).f0.coords;
    ASSERT_LE((fs - s * f).cwiseAbs().maxCoeff(), 1e-8 * std::max(1.0, (s * f).cwiseAbs().maxCoeff())) << trial;
  }
}

TEST(SolveMinNormProperty, CertificatesAtExtremeExponents) {
  Rng rng(16);
  for (int trial = 0; trial < 150; ++trial) {
    const auto problem = gen::problem(rng, 1, 60, 8, std::array<double, 4>{1.05, 1.1, 12.0, 20.0});
    const auto sol = solve_min_norm(problem);
    ASSERT_TRUE(verify_representer(sol, problem, 1e-9).passed()) << trial << " p=" << problem.space().p();
  }
}

TEST(SolveMinNormProperty, ComplexCertificates) {
  Rng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const auto n = static_cast<Eigen::Index>(gen::uniform_int(rng, 1, 40));
    const auto m = static_cast<Eigen::Index>(gen::uniform_int(rng, 1, static_cast<int>(std::min<Eigen::Index>(n, 5))));
    const auto cvec = [&](Eigen::Index k) {
      Eigen::VectorXcd v(k);
      v.real() = random_normal(rng, k);
      v.imag() = random_normal(rng, k);
      return v;
    };
    std::vector<Functional<Complex>> rows;
    for (Eigen::Index i = 0; i < m; ++i) rows.emplace_back(cvec(n));
    const InterpolationProblem<Complex> problem(PNormSpace(static_cast<std::size_t>(n), gen::pick(rng, gen::kExponents),
                                                           Field::complex),
                                                rows, cvec(m));
    ASSERT_TRUE(verify_representer(solve_min_norm(problem), problem, 1e-9).passed()) << trial;
  }
}
