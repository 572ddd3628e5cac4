#include "doctest.h"

#include "lmg/config.hpp"

using namespace lmg;

TEST_CASE("config parsing") {
    const auto cfg = Config::parse(
        "mode = paper\n"
        "[device]\n"
        "n_spins = 1e12   # anchor\n"
        "kappa = 0.1\n"
        "[sweep]\n"
        "lambda_min = 0\n");
    CHECK(cfg.get_string("", "mode") == "paper");
    CHECK(cfg.get_number("device", "n_spins") == doctest::Approx(1e12));
    CHECK(cfg.get_number("device", "kappa") == doctest::Approx(0.1));
    CHECK(cfg.get_number_or("sweep", "lambda_max", 3.0) == 3.0);
    CHECK(!cfg.has("sweep", "lambda_max"));
}

TEST_CASE("unit suffixes are rejected") {
    const auto cfg = Config::parse("[device]\nkappa = 0.1 MHz\nzeta = 2.7kHz\n");
    CHECK_THROWS_AS((void)cfg.get_number("device", "kappa"), ConfigError);
    CHECK_THROWS_AS((void)cfg.get_number("device", "zeta"), ConfigError);
}

TEST_CASE("parse errors carry line diagnostics") {
    CHECK_THROWS_WITH_AS(Config::parse("a = 1\nnonsense line\n", "run.ini"),
                         doctest::Contains("run.ini:2"), ConfigError);
    CHECK_THROWS_AS(Config::parse("[unclosed\n"), ConfigError);
    CHECK_THROWS_AS((void)Config::parse("a = 1\n").get_number("x", "y"), ConfigError);
}

TEST_CASE("config round-trips through serialization") {
    const std::string text =
        "mode = oracle\n"
        "[device]\n"
        "preset = two-axis\n"
        "n_spins = 1e12\n"
        "kappa = 0.1\n"
        "[sweep]\n"
        "lambda_min = 0\n"
        "lambda_max = 3\n";
    const auto cfg = Config::parse(text);
    const auto again = Config::parse(cfg.to_ini_text());
    CHECK(cfg.flat() == again.flat());
    CHECK(Config::parse(again.to_ini_text()).flat() == again.flat());
}
