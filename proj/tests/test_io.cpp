#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "secular/io.hpp"

using namespace secular;

TEST_CASE("config parsing: sections, comments, types") {
    const Config c = parse_config(
        "top = 1\n"
        "[system]\n"
        "m0 = 1.0   # inner primary\n"
        "m1 = 2.5\n"
        "; full-line comment\n"
        "[splitting]\n"
        "mu = 1e-4, 3e-4 1e-3\n"
        "n_gamma0 = 24\n"
        "label = run-a\n");
    CHECK(c.has("system.m0"));
    CHECK(c.get_double("top", 0.0) == 1.0);
    CHECK(c.get_double("system.m1", 0.0) == 2.5);
    CHECK(c.get_double("system.missing", 7.0) == 7.0);
    CHECK(c.get_int("splitting.n_gamma0", 0) == 24);
    CHECK(c.get_string("splitting.label", "") == "run-a");
    const auto mus = c.get_double_list("splitting.mu", {});
    REQUIRE(mus.size() == 3);
    CHECK(mus[1] == 3e-4);
    CHECK(c.require_double("system.m0") == 1.0);
}

TEST_CASE("config parsing: typed failures") {
    CHECK_THROWS_AS(parse_config("[broken\nk = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("no equals sign here\n"), ConfigError);
    const Config c = parse_config("[a]\nx = banana\nn = 2.5\n");
    CHECK_THROWS_AS(c.get_double("a.x", 0.0), ConfigError);
    CHECK_THROWS_AS(c.get_int("a.n", 0), ConfigError);
    CHECK_THROWS_AS(c.require_double("a.absent"), ConfigError);
}

TEST_CASE("FNV-1a 64 reference vectors") {
    // Standard published values for the 64-bit FNV-1a function.
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("config hash: canonical, order-independent, value-sensitive") {
    const Config a = parse_config("[s]\nx = 1\ny = 2\n");
    const Config b = parse_config("[s]\ny = 2\nx = 1\n");   // same content
    const Config d = parse_config("[s]\nx = 1\ny = 3\n");   // different value
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a) != config_hash(d));
    CHECK(config_hash(a).size() == 16);
}

TEST_CASE("17-significant-digit formatting round-trips") {
    for (double v : {1.0 / 3.0, -2.7182818284590452, 1e-300, 0.0, 6.25e17}) {
        const std::string s = format_g17(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_g17(0.1) == "0.10000000000000001");
}

TEST_CASE("metadata block layout") {
    const std::string m =
        metadata_block({{"config-hash", "abc"}, {"seed", "12345"}});
    CHECK(m == "# config-hash: abc\n# seed: 12345\n");
}

TEST_CASE("file round trip") {
    const std::string path = "/tmp/secular_io_test.txt";
    write_file(path, "[a]\nx = 4.5\n");
    const Config c = load_config_file(path);
    CHECK(c.get_double("a.x", 0.0) == 4.5);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_config_file("/nonexistent/nope.cfg"), ConfigError);
}
