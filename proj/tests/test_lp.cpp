#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "drg/lp.hpp"

using namespace drg;
using namespace drg::lp;

TEST_CASE("minimum at a lower bound reports the bound multiplier") {
  // min x s.t. x >= 3, encoded through the variable bound: the optimum is 3
  // and the bound carries a reduced cost of 1.
  LinearProgram p;
  p.c = {1.0};
  p.lower = {3.0};
  p.upper = {kInf};
  LpSolution s = solve_lp(p);
  REQUIRE(s.status == Status::optimal);
  CHECK(s.objective == doctest::Approx(3.0));
  CHECK(s.x[0] == doctest::Approx(3.0));
  CHECK(s.reduced_costs[0] == doctest::Approx(1.0));
}

TEST_CASE("minimum at a row constraint reports a shadow price") {
  // Same program as a row: -x <= -3. Duals are shadow prices d(obj)/d(rhs),
  // so the active <= row of a minimization carries -1.
  LinearProgram p;
  p.c = {1.0};
  p.a_ub = Matrix(1, 1);
  p.a_ub(0, 0) = -1.0;
  p.b_ub = {-3.0};
  LpSolution s = solve_lp(p);
  REQUIRE(s.status == Status::optimal);
  CHECK(s.objective == doctest::Approx(3.0));
  CHECK(s.dual_ub[0] == doctest::Approx(-1.0));
}

TEST_CASE("simple maximization") {
  LinearProgram p;
  p.sense = Sense::maximize;
  p.c = {1.0, 1.0};
  p.a_ub = Matrix(1, 2);
  p.a_ub(0, 0) = 1.0;
  p.a_ub(0, 1) = 1.0;
  p.b_ub = {1.0};
  p.lower = {0.0, 0.0};
  p.upper = {kInf, kInf};
  LpSolution s = solve_lp(p);
  REQUIRE(s.status == Status::optimal);
  CHECK(s.objective == doctest::Approx(1.0));
  CHECK(s.dual_ub[0] == doctest::Approx(1.0));
}

TEST_CASE("infeasible and unbounded programs are reported as such") {
  LinearProgram p;
  p.c = {1.0};
  p.a_ub = Matrix(2, 1);
  p.a_ub(0, 0) = 1.0;
  p.a_ub(1, 0) = -1.0;
  p.b_ub = {1.0, -2.0};  // x <= 1 and x >= 2
  CHECK(solve_lp(p).status == Status::infeasible);

  LinearProgram q;
  q.c = {-1.0};
  q.lower = {0.0};
  q.upper = {kInf};
  CHECK(solve_lp(q).status == Status::unbounded);
}

TEST_CASE("dimension mismatches are rejected") {
  LinearProgram p;
  p.c = {1.0, 2.0};
  p.a_ub = Matrix(1, 1);
  p.b_ub = {0.0};
  CHECK_THROWS_AS(solve_lp(p), std::invalid_argument);
}

namespace {

// Random min LP with x >= 0 and rows A x <= b built feasible by construction
// (b = A x0 + slack for a random x0 >= 0) and bounded (c > 0).
LinearProgram random_bounded_lp(std::mt19937_64& rng, int n, int m) {
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_real_distribution<double> pos(0.1, 2.0);
  LinearProgram p;
  p.c.resize(n);
  for (double& v : p.c) v = pos(rng);
  p.a_ub = Matrix(m, n);
  for (double& v : p.a_ub.data) v = coef(rng);
  std::vector<double> x0(n);
  for (double& v : x0) v = pos(rng);
  p.b_ub.resize(m);
  for (int r = 0; r < m; ++r) p.b_ub[r] = dot(p.a_ub.row(r), x0) + pos(rng);
  p.lower.assign(n, 0.0);
  p.upper.assign(n, kInf);
  return p;
}

}  // namespace

TEST_CASE("strong duality holds on 20 random feasible bounded programs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    LinearProgram p = random_bounded_lp(rng, 4 + trial % 4, 3 + trial % 5);
    LpSolution s = solve_lp(p);
    REQUIRE(s.status == Status::optimal);
    LpCheck chk = check_solution(p, s);
    INFO("trial ", trial, " gap=", chk.duality_gap, " dinf=", chk.dual_infeasibility);
    CHECK(chk.ok(1.0 + std::abs(s.objective)));
  }
}

TEST_CASE("solving the explicit dual reproduces the optimum") {
  // For min c'x s.t. Ax <= b, x >= 0 the dual is max b'y s.t. A'y <= c,
  // y <= 0 in the shadow-price convention.
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 3, m = 2 + trial % 4;
    LinearProgram p = random_bounded_lp(rng, n, m);
    LpSolution s = solve_lp(p);
    REQUIRE(s.status == Status::optimal);

    LinearProgram d;
    d.sense = Sense::maximize;
    d.c = p.b_ub;
    d.a_ub = Matrix(n, m);
    for (int j = 0; j < n; ++j)
      for (int r = 0; r < m; ++r) d.a_ub(j, r) = p.a_ub(r, j);
    d.b_ub = p.c;
    d.lower.assign(m, -kInf);
    d.upper.assign(m, 0.0);
    LpSolution ds = solve_lp(d);
    REQUIRE(ds.status == Status::optimal);
    CHECK(ds.objective == doctest::Approx(s.objective).epsilon(1e-7));
  }
}

TEST_CASE("determinism: repeated solves return identical vertices") {
  std::mt19937_64 rng(3);
  LinearProgram p = random_bounded_lp(rng, 6, 5);
  LpSolution a = solve_lp(p);
  LpSolution b = solve_lp(p);
  REQUIRE(a.status == Status::optimal);
  for (size_t j = 0; j < a.x.size(); ++j) CHECK(a.x[j] == b.x[j]);
  for (size_t r = 0; r < a.dual_ub.size(); ++r) CHECK(a.dual_ub[r] == b.dual_ub[r]);
}

TEST_CASE("equality rows and free variables") {
  // min z s.t. z >= x - 5, z >= 1 - x with x, z free: optimum z = -2, x = 3.
  LinearProgram p;
  p.c = {0.0, 1.0};
  p.a_ub = Matrix(2, 2);
  p.a_ub(0, 0) = 1.0;
  p.a_ub(0, 1) = -1.0;
  p.a_ub(1, 0) = -1.0;
  p.a_ub(1, 1) = -1.0;
  p.b_ub = {5.0, -1.0};
  LpSolution s = solve_lp(p);
  REQUIRE(s.status == Status::optimal);
  CHECK(s.objective == doctest::Approx(-2.0));
  CHECK(s.x[0] == doctest::Approx(3.0));

  // Equality row with finite ranges on both variables.
  LinearProgram q;
  q.c = {1.0, 0.0};
  q.a_eq = Matrix(1, 2);
  q.a_eq(0, 0) = 1.0;
  q.a_eq(0, 1) = 1.0;
  q.b_eq = {-2.0};
  q.lower = {-10.0, -10.0};
  q.upper = {10.0, 10.0};
  LpSolution t = solve_lp(q);
  REQUIRE(t.status == Status::optimal);
  CHECK(t.objective == doctest::Approx(-10.0));
}
