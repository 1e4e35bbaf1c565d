#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "oracles.hpp"
#include "quasih/io.hpp"
#include "quasih/model.hpp"
#include "quasih/spectrum.hpp"

using namespace quasih;

TEST_CASE("double formatting round-trips") {
  oracle::Rng rng(1);
  for (int k = 0; k < 2000; ++k) {
    const double x = rng.uniform(-1, 1) * std::pow(10.0, rng.uniform(-20, 20));
    CHECK(std::stod(io::format_double(x)) == x);
  }
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(3.0) == "3");
  CHECK(io::format_double(std::nan("")) == "nan");
}

TEST_CASE("matrix JSON and CSV") {
  const RealMatrix h = build_full({0.1, -2.0 / 3.0, std::sqrt(2.0), 1e-17});
  const auto j = io::matrix_to_json(h);
  CHECK(j["n"] == 4);
  const auto back = io::matrix_from_json(nlohmann::json::parse(io::dump_json(j)));
  CHECK(back == h);

  const std::string csv = io::matrix_to_csv(build_two_state(0.5));
  CHECK(csv == "-1,0.5\n-0.5,1\n");

  nlohmann::json bad = {{"n", 2}, {"rows", {{1, 2}, {3}}}};
  CHECK_THROWS_AS(io::matrix_from_json(bad), std::invalid_argument);
}

TEST_CASE("spectrum JSON round-trip") {
  const Spectrum s = numeric_energies(build_full({0.7, 1.3, -2.2, 0.4}));
  const std::string text = io::dump_json(io::spectrum_to_json(s));
  const Spectrum back = io::spectrum_from_json(nlohmann::json::parse(text));
  CHECK(back.energies == s.energies);
  CHECK(back.classification == s.classification);
  CHECK(back.max_imag == s.max_imag);
}

TEST_CASE("writer layout") {
  const nlohmann::json j = {{"x", std::vector<double>{1.5, 2}}, {"y", nullptr}, {"z", "s"}};
  CHECK(io::dump_json(j) == "{\n  \"x\": [1.5, 2],\n  \"y\": null,\n  \"z\": \"s\"\n}");
  CHECK(io::dump_json(nlohmann::json(std::numeric_limits<double>::infinity())) == "null");
}
