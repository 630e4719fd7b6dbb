#include "cellfree/config.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace cellfree;

namespace {

const char* kBase = R"(
[network]
num_aps = 400
antennas_per_ap = 1
num_ues = 100

[frame]
coherence_len = 200
pilot_len = 10
ul_data_len = 190
dl_data_len = 0

[campaign]
seed = 42
)";

std::string replace(std::string text, const std::string& from, const std::string& to) {
    text.replace(text.find(from), from.size(), to);
    return text;
}

}  // namespace

TEST_CASE("parse a minimal configuration") {
    const SimulationConfig c = parse_config_text(kBase);
    CHECK(c.num_aps == 400);
    CHECK(c.pilot_len == 10);
    CHECK(c.ul_data_len == 190);
    CHECK(c.seed == 42);
    CHECK(c.ul_prelog() == doctest::Approx(0.95));
    CHECK(c.noise_ul_w == doctest::Approx(dbm_to_watt(-94.0)));
    CHECK(c.noise_ul_w == c.noise_dl_w);
    CHECK(c.ue_power_w == 0.1);
    CHECK(c.ap_power_w == 1.0);
}

TEST_CASE("coherence budget is enforced") {
    CHECK_THROWS_AS(parse_config_text(replace(kBase, "ul_data_len = 190", "ul_data_len = 195")), ValidationError);
}

TEST_CASE("missing and ill-typed keys are named") {
    try {
        parse_config_text(replace(kBase, "seed = 42", ""));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "campaign.seed");
        CHECK(std::string(e.what()).find("seed") != std::string::npos);
    }
    try {
        parse_config_text(replace(kBase, "num_ues = 100", "num_ues = many"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "network.num_ues");
    }
    CHECK_THROWS_AS(parse_config_text(std::string(kBase) + "bogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(std::string(kBase) + "[campaign]\nseed = 3\n"), ConfigError);
}

TEST_CASE("dotted keys, comments, schemes and modes") {
    const std::string text = std::string(kBase) + "campaign.schemes = MR, p-mmse ; trailing\n# comment\n"
                                                  "campaign.mode = centralized\npower.noise_dbm = -90\n";
    const SimulationConfig c = parse_config_text(text);
    REQUIRE(c.schemes.size() == 2);
    CHECK(c.schemes[0] == Scheme::MR);
    CHECK(c.schemes[1] == Scheme::PMMSE);
    CHECK(c.mode == Mode::Centralized);
    CHECK(c.noise_ul_w == doctest::Approx(1e-12));
    CHECK_THROWS_AS(parse_config_text(std::string(kBase) + "campaign.schemes = ZF\n"), ConfigError);
}

TEST_CASE("canonical text round trip and hash") {
    SimulationConfig c = parse_config_text(kBase);
    c.schemes = {Scheme::LPMMSE, Scheme::MR};
    c.genie = true;
    c.channel.shadowing_std_db = 3.3;
    const SimulationConfig back = parse_config_text(to_text(c));
    CHECK(back == c);
    CHECK(config_hash(back) == config_hash(c));
    SimulationConfig d = c;
    d.seed += 1;
    CHECK(config_hash(d) != config_hash(c));
}

TEST_CASE("file parsing") {
    const auto path = std::filesystem::temp_directory_path() / "cellfree-config-test.ini";
    {
        std::ofstream f(path);
        f << kBase;
    }
    CHECK(parse_config(path).num_ues == 100);
    std::filesystem::remove(path);
    CHECK_THROWS(parse_config(path));
}

TEST_CASE("validation of individual fields") {
    SimulationConfig c = parse_config_text(kBase);
    SUBCASE("zero pilots") { c.pilot_len = 0; }
    SUBCASE("zero UEs") { c.num_ues = 0; }
    SUBCASE("negative power") { c.ue_power_w = -1; }
    SUBCASE("no schemes") { c.schemes.clear(); }
    CHECK_THROWS_AS(validate(c), ValidationError);
}

TEST_CASE("dBm conversion") {
    CHECK(dbm_to_watt(30.0) == doctest::Approx(1.0));
    CHECK(watt_to_dbm(0.1) == doctest::Approx(20.0));
    CHECK(dbm_to_watt(-94.0) == doctest::Approx(3.981071705534969e-13));
}
