#include <doctest.h>

#include <cmath>

#include "lsmdg/errors.hpp"
#include "lsmdg/ode_study.hpp"

using namespace lsmdg;

TEST_CASE("default study covers three formulations on nine levels") {
  const OdeStudyResult r = run_ode_study(OdeStudyConfig{});
  CHECK(r.rows.size() == 27);
  CHECK(r.rows.front().cells == 2);
  CHECK(r.rows.back().cells == 512);
  CHECK(std::isnan(r.rows.front().rate));
  CHECK(r.max_coefficient_difference < 1e-10);
}

TEST_CASE("degree six reproduces the polynomial on two cells") {
  OdeStudyConfig cfg;
  cfg.degree = 6;
  cfg.levels = 1;
  const OdeStudyResult r = run_ode_study(cfg);
  REQUIRE(r.rows.size() == 3);
  for (const auto& row : r.rows) CHECK(row.error < 1e-12);
}

TEST_CASE("optimal formulations reach third order, equal order does not") {
  const OdeStudyResult r = run_ode_study(OdeStudyConfig{});
  CHECK(asymptotic_rate(r, Formulation::trial_to_test) == doctest::Approx(3.0).epsilon(0.1 / 3.0));
  CHECK(asymptotic_rate(r, Formulation::reduced_order) == doctest::Approx(3.0).epsilon(0.1 / 3.0));
  CHECK(asymptotic_rate(r, Formulation::equal_order) <= 2.6);
}

TEST_CASE("single formulation runs") {
  OdeStudyConfig cfg;
  cfg.formulations = {Formulation::equal_order};
  cfg.levels = 4;
  const OdeStudyResult r = run_ode_study(cfg);
  CHECK(r.rows.size() == 4);
  CHECK(std::isnan(r.max_coefficient_difference));
}

TEST_CASE("formulation names") {
  for (Formulation f : {Formulation::equal_order, Formulation::reduced_order,
                        Formulation::trial_to_test})
    CHECK(parse_formulation(formulation_name(f)) == f);
  CHECK_THROWS_AS(parse_formulation("galerkin"), ConfigError);
}

TEST_CASE("invalid study configurations") {
  OdeStudyConfig cfg;
  cfg.coarsest_cells = 1;
  CHECK_THROWS_AS(run_ode_study(cfg), ConfigError);
  cfg = OdeStudyConfig{};
  cfg.degree = 0;
  CHECK_THROWS_AS(run_ode_study(cfg), ConfigError);
  cfg = OdeStudyConfig{};
  cfg.formulations.clear();
  CHECK_THROWS_AS(run_ode_study(cfg), ConfigError);
}
