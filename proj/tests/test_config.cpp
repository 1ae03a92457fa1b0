#include <doctest.h>

#include <string>

#include "rpbeats/config.hpp"
#include "rpbeats/errors.hpp"

using namespace rpbeats;

namespace {

const char* kMinimal = R"(name: tiny
system:
  g1: 2.0023
  g2: 2.0031
  groups:
    - count: 2
      hfc_mt: 1.0
regimes:
  zero: {field_t: 0.0, T1_ns: 10, T2_ns: 15}
  high: {field_t: 0.2, T1_ns: .inf, T2_ns: 8}
field_regime: high
initial_state: {I: 1, m: 0}
average: representative
noise_method: none
time_grid: {start: 0, end: 5, step: 0.5}
)";

}  // namespace

TEST_CASE("presets load and validate") {
  const auto names = preset_names();
  REQUIRE(names.size() >= 2);
  for (const auto& n : names) CHECK_NOTHROW(preset_config(n).validate());
  const auto oct = preset_config("octalin");
  CHECK(oct.groups.size() == 1);
  CHECK(oct.groups[0].count == 8);
  CHECK(oct.groups[0].hfc_mt == doctest::Approx(2.49));
  CHECK(oct.high.field_t == doctest::Approx(0.3));
  CHECK(std::isinf(oct.high.T1));
  REQUIRE(oct.postprocess);
  CHECK(oct.postprocess->theta == doctest::Approx(0.35));
  const auto dmb = preset_config("dmb");
  CHECK(dmb.groups.size() == 2);
  CHECK(dmb.groups[0].count == 2);
  CHECK(dmb.groups[1].count == 12);
  try {
    preset_config("nope");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("octalin") != std::string::npos);
  }
}

TEST_CASE("minimal config") {
  const auto c = parse_config(kMinimal);
  CHECK(c.name == "tiny");
  CHECK(c.g2 == doctest::Approx(2.0031));
  CHECK(c.field_regime == FieldRegime::High);
  CHECK_FALSE(c.initial_state.mixed);
  CHECK(*c.initial_state.I == HalfInt::from_int(1));
  CHECK(c.average == AverageMode::Representative);
  CHECK(c.noise == NoiseMethod::None);
  CHECK(c.times().size() == 11);
  const auto s = c.spec(FieldRegime::High);
  CHECK(s.field_t == doctest::Approx(0.2));
  CHECK(std::isinf(s.relaxation.T1));
  CHECK(s.relaxation.T2 == doctest::Approx(8.0));
}

TEST_CASE("serialization round trip and hash") {
  for (const auto& n : preset_names()) {
    const auto c = preset_config(n);
    const auto text = serialize_config(c);
    const auto back = parse_config(text);
    CHECK(serialize_config(back) == text);
    CHECK(config_hash(back) == config_hash(c));
    CHECK(config_hash(c).size() == 16);
  }
  auto a = parse_config(kMinimal);
  auto b = a;
  b.t_step = 0.25;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(serialize_config(a).find(".inf") != std::string::npos);
}

TEST_CASE("field values and units") {
  std::string s = kMinimal;
  s.replace(s.find("hfc_mt: 1.0"), 11, "hfc_gauss: 10");
  CHECK(parse_config(s).groups[0].hfc_mt == doctest::Approx(1.0));
  s = kMinimal;
  s.replace(s.find("{I: 1, m: 0}"), 12, "{I: \"3/2\", m: \"1/2\"}");
  CHECK_THROWS_AS(parse_config(s).validate(), ConfigError);  // two nuclei cannot reach I = 3/2
  s = kMinimal;
  s.replace(s.find("T1_ns: .inf"), 11, "T1_ns: inf");
  CHECK(std::isinf(parse_config(s).high.T1));
}

TEST_CASE("invalid configs") {
  std::string s = kMinimal;
  s.replace(s.find("noise_method"), 12, "noise_methd");
  try {
    parse_config(s);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 14") != std::string::npos);
    CHECK(msg.find("noise_methd") != std::string::npos);
  }
  s = kMinimal;
  s.replace(s.find("T2_ns: 15"), 9, "T2_ns: 25");
  CHECK_THROWS_AS(parse_config(s).validate(), ConfigError);
  s = kMinimal;
  s.replace(s.find("average: representative"), 23, "average: sometimes");
  CHECK_THROWS_AS(parse_config(s), ConfigError);
  s = kMinimal;
  s.replace(s.find("step: 0.5"), 9, "step: -1");
  CHECK_THROWS_AS(parse_config(s).validate(), ConfigError);
  CHECK_THROWS_AS(parse_config("name: [unclosed"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/file.yaml"), ConfigError);
}
