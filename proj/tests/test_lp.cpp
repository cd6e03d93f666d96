#include <catch2/catch.hpp>
#include <cmath>

#include "cellsched/lp.hpp"
#include "cellsched/prng.hpp"

using namespace cellsched;

namespace {

lp::Problem make_problem(int rows, int cols) {
  lp::Problem p;
  p.resize(rows, cols);
  return p;
}

}  // namespace

TEST_CASE("lp: single bound") {
  lp::Problem p = make_problem(1, 1);
  p.cost = {1.0};
  p.at(0, 0) = 1.0;
  p.rel[0] = lp::Relation::Ge;
  p.rhs[0] = 3.0;
  const lp::Solution s = lp::solve(p);
  REQUIRE(s.status == lp::Status::Optimal);
  CHECK(s.x[0] == Approx(3.0));
  CHECK(s.objective == Approx(3.0));
  CHECK(s.dual[0] == Approx(1.0));
}

TEST_CASE("lp: degenerate optimum with a capacity row") {
  // min x1+x2 s.t. x1+x2 >= 2, x1 <= 0.5; both (0.5, 1.5) and (0, 2) are
  // optimal vertices with objective 2 and duals (1, 0)
  lp::Problem p = make_problem(2, 2);
  p.cost = {1.0, 1.0};
  p.at(0, 0) = 1.0;
  p.at(0, 1) = 1.0;
  p.rel[0] = lp::Relation::Ge;
  p.rhs[0] = 2.0;
  p.at(1, 0) = 1.0;
  p.rel[1] = lp::Relation::Le;
  p.rhs[1] = 0.5;
  const lp::Solution s = lp::solve(p);
  REQUIRE(s.status == lp::Status::Optimal);
  CHECK(s.objective == Approx(2.0));
  CHECK(s.x[0] + s.x[1] == Approx(2.0));
  CHECK((s.x[0] == Approx(0.5) || s.x[0] == Approx(0.0).margin(1e-12)));
  CHECK(s.dual[0] == Approx(1.0));
  CHECK(s.dual[1] == Approx(0.0).margin(1e-9));
}

TEST_CASE("lp: infeasible system") {
  lp::Problem p = make_problem(2, 1);
  p.cost = {1.0};
  p.at(0, 0) = 1.0;
  p.rel[0] = lp::Relation::Ge;
  p.rhs[0] = 1.0;
  p.at(1, 0) = 1.0;
  p.rel[1] = lp::Relation::Le;
  p.rhs[1] = 0.0;
  CHECK(lp::solve(p).status == lp::Status::Infeasible);
}

TEST_CASE("lp: unbounded ray") {
  lp::Problem p = make_problem(1, 1);
  p.cost = {-1.0};
  p.at(0, 0) = 1.0;
  p.rel[0] = lp::Relation::Ge;
  p.rhs[0] = 1.0;
  CHECK(lp::solve(p).status == lp::Status::Unbounded);
}

TEST_CASE("lp: equality row dual is free") {
  lp::Problem p = make_problem(1, 2);
  p.cost = {1.0, 2.0};
  p.at(0, 0) = 1.0;
  p.at(0, 1) = 1.0;
  p.rel[0] = lp::Relation::Eq;
  p.rhs[0] = 1.0;
  const lp::Solution s = lp::solve(p);
  REQUIRE(s.status == lp::Status::Optimal);
  CHECK(s.x[0] == Approx(1.0));
  CHECK(s.x[1] == Approx(0.0).margin(1e-12));
  CHECK(s.dual[0] == Approx(1.0));
}

TEST_CASE("lp: negative rhs rows keep the sign convention") {
  // -x <= -3 is x >= 3 in disguise; the <=-row dual must come back <= 0
  lp::Problem p = make_problem(1, 1);
  p.cost = {1.0};
  p.at(0, 0) = -1.0;
  p.rel[0] = lp::Relation::Le;
  p.rhs[0] = -3.0;
  const lp::Solution s = lp::solve(p);
  REQUIRE(s.status == lp::Status::Optimal);
  CHECK(s.x[0] == Approx(3.0));
  CHECK(s.dual[0] == Approx(-1.0));
  CHECK(s.dual[0] * p.rhs[0] == Approx(s.objective));  // strong duality
}

TEST_CASE("lp: Beale's cycling example terminates at the optimum") {
  lp::Problem p = make_problem(3, 4);
  p.cost = {-0.75, 150.0, -0.02, 6.0};
  const double a0[] = {0.25, -60.0, -0.04, 9.0};
  const double a1[] = {0.5, -90.0, -0.02, 3.0};
  const double a2[] = {0.0, 0.0, 1.0, 0.0};
  for (int c = 0; c < 4; ++c) {
    p.at(0, c) = a0[c];
    p.at(1, c) = a1[c];
    p.at(2, c) = a2[c];
  }
  p.rel = {lp::Relation::Le, lp::Relation::Le, lp::Relation::Le};
  p.rhs = {0.0, 0.0, 1.0};
  const lp::Solution s = lp::solve(p);
  REQUIRE(s.status == lp::Status::Optimal);
  CHECK(s.objective == Approx(-0.05));
  CHECK(s.x[0] == Approx(0.04));
  CHECK(s.x[2] == Approx(1.0));
}

TEST_CASE("lp: random feasible problems satisfy optimality certificates") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = rng.uniform_int(1, 6);
    const int cols = rng.uniform_int(1, 8);
    lp::Problem p = make_problem(rows, cols);
    std::vector<double> x0(cols);
    for (double& v : x0) v = rng.uniform(0.0, 2.0);
    for (int c = 0; c < cols; ++c) p.cost[c] = rng.uniform(0.0, 3.0);
    for (int r = 0; r < rows; ++r) {
      double ax = 0;
      for (int c = 0; c < cols; ++c) {
        p.at(r, c) = rng.uniform(-2.0, 2.0);
        ax += p.at(r, c) * x0[c];
      }
      const int kind = rng.uniform_int(0, 2);
      if (kind == 0) {
        p.rel[r] = lp::Relation::Ge;
        p.rhs[r] = ax - rng.uniform(0.0, 1.0);
      } else if (kind == 1) {
        p.rel[r] = lp::Relation::Le;
        p.rhs[r] = ax + rng.uniform(0.0, 1.0);
      } else {
        p.rel[r] = lp::Relation::Eq;
        p.rhs[r] = ax;
      }
    }
    const lp::Solution s = lp::solve(p);
    REQUIRE(s.status == lp::Status::Optimal);  // x0 is feasible, costs >= 0

    // primal feasibility
    for (int r = 0; r < rows; ++r) {
      double ax = 0;
      for (int c = 0; c < cols; ++c) ax += p.at(r, c) * s.x[c];
      if (p.rel[r] == lp::Relation::Ge) CHECK(ax >= p.rhs[r] - 1e-7);
      if (p.rel[r] == lp::Relation::Le) CHECK(ax <= p.rhs[r] + 1e-7);
      if (p.rel[r] == lp::Relation::Eq) CHECK(ax == Approx(p.rhs[r]).margin(1e-7));
    }
    for (int c = 0; c < cols; ++c) CHECK(s.x[c] >= -1e-9);

    // dual signs and reduced costs
    for (int r = 0; r < rows; ++r) {
      if (p.rel[r] == lp::Relation::Ge) CHECK(s.dual[r] >= -1e-9);
      if (p.rel[r] == lp::Relation::Le) CHECK(s.dual[r] <= 1e-9);
    }
    for (int c = 0; c < cols; ++c) {
      double ya = 0;
      for (int r = 0; r < rows; ++r) ya += s.dual[r] * p.at(r, c);
      CHECK(p.cost[c] - ya >= -1e-7);
    }

    // strong duality
    double yb = 0;
    for (int r = 0; r < rows; ++r) yb += s.dual[r] * p.rhs[r];
    CHECK(s.objective == Approx(yb).epsilon(1e-8).margin(1e-8));

    // basic solutions have at most `rows` positive variables
    int positive = 0;
    for (int c = 0; c < cols; ++c)
      if (s.x[c] > 1e-9) ++positive;
    CHECK(positive <= rows);

    // determinism
    const lp::Solution again = lp::solve(p);
    CHECK(again.x == s.x);
    CHECK(again.dual == s.dual);
  }
}
