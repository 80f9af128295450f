#include <doctest.h>

#include <sstream>

#include "nicem/experiments.hpp"

using namespace nicem;

TEST_SUITE("cli_bench") {
  TEST_CASE("manufactured forcing agrees with finite differences") {
    for (const auto& name : manufactured_case_names()) {
      const auto c = manufactured_case(name);
      CHECK(forcing_fd_mismatch(c, 100, 1) < 1e-5);
    }
    // A transcription error is caught.
    auto c = manufactured_case("A");
    const auto f = c.forcing;
    c.forcing = [f](double x, double y) { return f(x, y) + 1e-2 * x; };
    CHECK(forcing_fd_mismatch(c) > 1e-5);
    CHECK_THROWS(manufactured_case("C"));
  }

  TEST_CASE("config parsing") {
    const auto c = parse_config(R"({"case": "B", "layout": "grid12", "degree": 3, "alpha_policy": "per-interface",
                                   "solver": "gmres", "seed": 5, "stop_rule": "fixed"})");
    CHECK(c.case_name == "B");
    CHECK(c.degree == 3);
    CHECK(c.alpha_policy == AlphaPolicy::PerInterface);
    CHECK(c.solver == SolverKind::Gmres);
    CHECK(c.stop_rule == StopRule::Fixed);
    CHECK(c.seed == 5);
    // Round trip through JSON.
    const auto r = parse_config(to_json(c));
    CHECK(to_json(r) == to_json(c));

    CHECK_THROWS_AS(parse_config(R"({"degre": 2})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"degree": 4})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"degree": "two"})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"alpha_policy": "fixed"})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"layout": "hex"})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"refine_factor": 4})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("[1, 2]"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("{"), std::invalid_argument);
  }

  TEST_CASE("layouts validate and alpha policies resolve") {
    for (const auto& name : layout_names()) {
      ExperimentConfig c;
      c.layout = name;
      const auto m = build_layout(c);
      CHECK_NOTHROW(validate(m));
      const auto a = resolve_alpha(c, m);
      CHECK(a.size() == m.interfaces.size());
    }
    ExperimentConfig c;
    c.layout = "quad4";
    const auto m = build_layout(c);
    c.alpha_policy = AlphaPolicy::Fixed;
    c.alpha = 7.0;
    CHECK(resolve_alpha(c, m) == std::vector<double>(4, 7.0));
    c.alpha_policy = AlphaPolicy::PerInterface;
    c.alpha_values = {1.0, 2.0};
    CHECK_THROWS(resolve_alpha(c, m));
    c.resolutions = {{2, 2}};
    CHECK_THROWS(build_layout(c));
  }

  TEST_CASE("fitted slope") {
    const std::vector<double> h{0.1, 0.05, 0.025};
    CHECK(fitted_slope(h, {0.01, 0.0025, 0.000625}) == doctest::Approx(2.0));
    CHECK(fitted_slope(h, {3.0, 1.5, 0.75}) == doctest::Approx(1.0));
  }

  TEST_CASE("solve command on a multi-domain patch test") {
    for (int p = 1; p <= 3; ++p) {
      ExperimentConfig c;
      c.case_name = "poly" + std::to_string(p);
      c.degree = p;
      c.resolutions = {{4, 8}, {4, 8}};
      c.tol = 1e-12;
      std::ostringstream log;
      const auto s = cmd_solve(c, log);
      CHECK(s.converged);
      CHECK(s.relative_h1_error < 1e-9);
    }
    ExperimentConfig z;
    z.case_name = "zero";
    std::ostringstream log;
    const auto s = cmd_solve(z, log);
    CHECK(s.converged);
    CHECK(s.iterations == 0);
  }

  TEST_CASE("domain mismatch is rejected") {
    ExperimentConfig c;
    c.case_name = "B";
    c.layout = "two-strip";
    std::ostringstream log;
    CHECK_THROWS(cmd_solve(c, log));
  }

  TEST_CASE("alpha sweep seed sensitivity") {
    ExperimentConfig c;
    c.degree = 1;
    c.error_equation = true;
    c.alpha_ratios = {0.8, 1.0, 1.2};
    std::ostringstream log;
    c.seed = 42;
    const auto a = cmd_alpha_sweep(c, log);
    c.seed = 84;
    const auto b = cmd_alpha_sweep(c, log);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i)
      CHECK(std::abs(a.rows[i].iterations - b.rows[i].iterations) <= 2);
  }

  TEST_CASE("legendre report") {
    ExperimentConfig c;
    c.p_max = 14;
    std::ostringstream log;
    const auto r = cmd_legendre_verify(c, log);
    CHECK(r.all_negative_up_to_13);
    REQUIRE(r.rows.size() == 14);
    CHECK(r.rows[13].case1 > 0);
    CHECK(r.rows[1].case1 == -768);
    CHECK(log.str().find("-80/3") != std::string::npos);
    CHECK(log.str().find("-133/15") != std::string::npos);
  }
}
