#include "doctest.h"
#include "rfsep/config.hpp"

using namespace rfsep;
using namespace rfsep::config;

TEST_CASE("parse and defaults") {
    const auto c = RunConfig::parse(
        "# comment\nseed = 42\nmethods = [mf, \"lmmse\"]  # trailing\nsir_db = [-12, -6]\n\n[basis]\nn_inner = 7\n");
    CHECK(c.get_u64("seed") == 42);
    CHECK(c.get_strings("methods") == std::vector<std::string>{"mf", "lmmse"});
    CHECK(c.get_doubles("sir_db") == std::vector<double>{-12, -6});
    CHECK(c.get_int("basis.n_inner") == 7);
    CHECK(c.get_int("trials") == 25);
    CHECK(c.is_auto("iterations"));
    const auto s = to_sweep_spec(c);
    CHECK(s.master_seed == 42);
    CHECK(s.basis_n_inner == 7);
    CHECK_FALSE(s.iterations.has_value());
    CHECK(s.signal.d == 2560);
    CHECK(c.effective().size() == known_keys().size());
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(RunConfig::parse("bogus = 1"), std::invalid_argument);
    CHECK_THROWS_AS(RunConfig::parse("seed 1"), std::invalid_argument);
    CHECK_THROWS_AS(RunConfig::parse("seed = 1\nseed = 2"), std::invalid_argument);
    CHECK_THROWS_AS(RunConfig::parse("trials = 2.5").get_int("trials"), std::invalid_argument);
    CHECK_THROWS_AS(RunConfig::parse("eta_max = abc").get_double("eta_max"), std::invalid_argument);
    CHECK_THROWS_AS(to_sweep_spec(RunConfig::parse("mixture = fm")), std::invalid_argument);
    CHECK_THROWS_AS(RunConfig::load("/nonexistent/rfsep.toml"), std::invalid_argument);
}

TEST_CASE("inf SIR parses") {
    const auto c = RunConfig::parse("sir_db = [inf, -3]");
    CHECK(std::isinf(c.get_doubles("sir_db")[0]));
}
