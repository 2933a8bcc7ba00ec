#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "entangler/config.hpp"

using namespace entangler;

TEST_CASE("defaults are the reference operating point") {
  SimConfig cfg;
  CHECK(cfg.temperature == 295.0);
  CHECK(cfg.carrier.circulating_power == doctest::Approx(0.2816));
  CHECK(cfg.carrier.detuning == doctest::Approx(0.3));
  CHECK(cfg.subcarrier.circulating_power == doctest::Approx(0.2238));
  CHECK(cfg.subcarrier.detuning == doctest::Approx(-1.5));
  CHECK(cfg.round_trip_loss == 250.0);
  CHECK(cfg.cavity_length == doctest::Approx(0.01));
  CHECK(cfg.wavelength == doctest::Approx(1.064e-6));
  CHECK_NOTHROW(validate_config(cfg));
}

TEST_CASE("toml subset parsing") {
  std::string text =
      "# reference point, tweaked\n"
      "[cavity]\n"
      "length_m = 0.02   # inline comment\n"
      "round_trip_loss_ppm = 100\n"
      "[carrier]\n"
      "power_w = 0.1\n"
      "detuning = 0.5\n"
      "[subcarrier]\n"
      "detuning = -1.0\n"
      "[environment]\n"
      "temperature_k = 4\n";
  SimConfig cfg = config_from_string(text, "inline");
  CHECK(cfg.cavity_length == doctest::Approx(0.02));
  CHECK(cfg.round_trip_loss == doctest::Approx(100.0));
  CHECK(cfg.carrier.circulating_power == doctest::Approx(0.1));
  CHECK(cfg.carrier.detuning == doctest::Approx(0.5));
  CHECK(cfg.subcarrier.detuning == doctest::Approx(-1.0));
  CHECK(cfg.temperature == doctest::Approx(4.0));
  // untouched keys keep their defaults
  CHECK(cfg.subcarrier.circulating_power == doctest::Approx(0.2238));
  CHECK(cfg.input_transmission == doctest::Approx(250.0));
}

TEST_CASE("unknown keys and sections are named in the error") {
  CHECK_THROWS_AS(config_from_string("[cavity]\nlenght_m = 0.01\n", "inline"),
                  ConfigError);
  CHECK_THROWS_AS(config_from_string("[resonator]\n", "inline"), ConfigError);
  CHECK_THROWS_AS(config_from_string("length_m = 0.01\n", "inline"),
                  ConfigError);
  try {
    config_from_string("[cavity]\nlenght_m = 0.01\n", "inline");
  } catch (const ConfigError& err) {
    CHECK(std::string(err.what()).find("lenght_m") != std::string::npos);
  }
}

TEST_CASE("invalid values are rejected with the field name") {
  CHECK_THROWS_AS(
      config_from_string("[cavity]\nlength_m = -1\n", "inline"), ConfigError);
  CHECK_THROWS_AS(
      config_from_string("[environment]\ntemperature_k = -3\n", "inline"),
      ConfigError);
  CHECK_THROWS_AS(
      config_from_string("[carrier]\npower_w = oops\n", "inline"), ConfigError);
  try {
    config_from_string("[cavity]\nlength_m = -1\n", "inline");
  } catch (const ConfigError& err) {
    CHECK(std::string(err.what()).find("length_m") != std::string::npos);
  }
}

TEST_CASE("mode table path resolves relative to the config file") {
  std::string csv_path = "cfgtest_modes.csv";
  {
    std::ofstream csv(csv_path);
    csv << "label,frequency_hz,quality_factor,effective_mass_kg\n"
        << "only,1000,5000,1e-9\n";
  }
  std::string cfg_path = "cfgtest.toml";
  {
    std::ofstream cfg(cfg_path);
    cfg << "[mechanics]\nmode_table = \"" << csv_path << "\"\n";
  }
  SimConfig cfg = load_config(cfg_path);
  REQUIRE(cfg.modes.modes.size() == 1);
  CHECK(cfg.modes.modes[0].label == "only");
  std::remove(cfg_path.c_str());
  std::remove(csv_path.c_str());
}

TEST_CASE("quality factor override applies to every mode") {
  SimConfig cfg =
      config_from_string("[mechanics]\nquality_factor = 5000\n", "inline");
  for (const auto& mode : cfg.modes.modes)
    CHECK(mode.quality_factor == doctest::Approx(5000.0));
}

TEST_CASE("missing config file") {
  CHECK_THROWS_AS(load_config("no_such_config.toml"), ConfigError);
}

TEST_CASE("config_to_toml round-trips the scalar fields") {
  SimConfig cfg;
  cfg.temperature = 77.0;
  cfg.carrier.detuning = 0.42;
  SimConfig back = config_from_string(config_to_toml(cfg), "inline");
  CHECK(back.temperature == cfg.temperature);
  CHECK(back.carrier.detuning == cfg.carrier.detuning);
  CHECK(back.cavity_length == cfg.cavity_length);
}
