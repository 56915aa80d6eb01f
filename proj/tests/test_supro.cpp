#include <doctest.h>

#include "suplab/error.hpp"
#include "suplab/supro.hpp"

using namespace suplab;

namespace {

ErrorKind kind_of(std::string_view text) {
  try {
    parse_supro(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Io;
}

std::string message_of(std::string_view text) {
  try {
    parse_supro(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal SUPRO document") {
  const auto s = parse_supro(R"({"appliance":"dryer","operationMode":"Heavy","phases":[
      {"repeatMin":1,"repeatMax":1,"cycles":[{"name":"MaxHeat","power":5000,"duration":300}]}]})");
  CHECK(s.appliance == "dryer");
  CHECK(s.mode == OperationMode::Heavy);
  REQUIRE(s.phases.size() == 1);
  CHECK(s.phases[0].cycles[0].power == 5000);
}

TEST_CASE("repeat bounds out of order are a validation error on the phase") {
  const char* doc = R"({"appliance":"dryer","operationMode":"Light","phases":[
      {"repeatMin":3,"repeatMax":2,"cycles":[{"name":"A","power":1,"duration":1}]}]})";
  CHECK(kind_of(doc) == ErrorKind::Validation);
  CHECK(message_of(doc).find("phases[0]") != std::string::npos);
}

TEST_CASE("paired cycle phase echoes its repetition bounds") {
  const auto s = parse_supro(R"({"appliance":"dryer","operationMode":"Medium","phases":[
      {"repeatMin":19,"repeatMax":22,"cycles":[{"name":"NoHeat","power":250,"duration":200},
                                               {"name":"HalfHeat","power":2800,"duration":180}]}]})");
  CHECK(s.phases[0].repeat_min == 19);
  CHECK(s.phases[0].repeat_max == 22);
  CHECK(s.phases[0].cycles.size() == 2);
}

TEST_CASE("schema violations") {
  CHECK(kind_of("{not json") == ErrorKind::Parse);
  CHECK(kind_of(R"({"appliance":"x","operationMode":"Light","phases":[],"extra":1})") == ErrorKind::Validation);
  CHECK(kind_of(R"({"appliance":"x","operationMode":"Turbo","phases":[
      {"repeatMin":1,"repeatMax":1,"cycles":[{"name":"A","power":1,"duration":1}]}]})") == ErrorKind::Validation);
  CHECK(kind_of(R"({"appliance":"x","operationMode":"Light","phases":[
      {"repeatMin":1,"repeatMax":1,"cycles":[{"name":"A","power":-5,"duration":1}]}]})") == ErrorKind::Validation);
  CHECK(kind_of(R"({"appliance":"x","operationMode":"Light","phases":[
      {"repeatMin":1,"repeatMax":1,"cycles":[{"name":"A","power":5,"duration":1.5}]}]})") == ErrorKind::Validation);
  CHECK(message_of(R"({"appliance":"x","operationMode":"Light","phases":[
      {"repeatMin":1,"repeatMax":1,"cycles":[{"name":"A","power":5}]}]})")
            .find("phases[0].cycles[0].duration") != std::string::npos);
}

TEST_CASE("serialize then parse is the identity") {
  Supro s;
  s.appliance = "washer";
  s.mode = OperationMode::Medium;
  s.phases = {{1, 1, {{"Fill", 150, 300}}}, {4, 7, {{"Agitate", 550.5, 45}, {"Pause", 150, 30}}}};
  CHECK(parse_supro(serialize_supro(s)) == s);
}

TEST_CASE("duration bounds") {
  Supro a{"a", OperationMode::Light, {{1, 1, {{"X", 1, 300}}}}};
  auto b = duration_bounds(a);
  CHECK(b.min_seconds == 300);
  CHECK(b.max_seconds == 300);

  Supro c{"c", OperationMode::Light, {{2, 3, {{"X", 1, 200}, {"Y", 1, 180}}}}};
  b = duration_bounds(c);
  CHECK(b.min_seconds == 760);
  CHECK(b.max_seconds == 1140);

  Supro d{"d", OperationMode::Light, {{1, 1, {{"X", 1, 60}}}, {1, 2, {{"Y", 1, 40}}}}};
  b = duration_bounds(d);
  CHECK(b.min_seconds == 100);
  CHECK(b.max_seconds == 140);
}

TEST_CASE("midpoint repeats round down") {
  Supro s{"s", OperationMode::Light, {{2, 3, {{"X", 1, 10}}}, {4, 4, {{"Y", 1, 10}}}}};
  const auto m = with_midpoint_repeats(s);
  CHECK(m.phases[0].repeat_min == 2);
  CHECK(m.phases[0].repeat_max == 2);
  CHECK(m.phases[1].repeat_min == 4);
}

TEST_CASE("bundled library has three modes for three appliances") {
  const auto lib = SuproLibrary::load_directory(std::string(SUPLAB_DATA_DIR) + "/supro");
  CHECK(lib.size() == 9);
  CHECK(lib.appliances() == std::vector<std::string>{"dishwasher", "dryer", "washer"});
  for (const auto& a : lib.appliances()) {
    CHECK(lib.modes(a).size() == 3);
    // Heavier modes run longer on average.
    const auto light = duration_bounds(lib.get(a, OperationMode::Light));
    const auto heavy = duration_bounds(lib.get(a, OperationMode::Heavy));
    CHECK(light.max_seconds < heavy.min_seconds);
  }
  CHECK_THROWS_AS(lib.get("toaster", OperationMode::Light), Error);
}

TEST_CASE("library rejects duplicates and missing directories") {
  SuproLibrary lib;
  Supro s{"a", OperationMode::Light, {{1, 1, {{"X", 1, 1}}}}};
  lib.add(s);
  CHECK_THROWS_AS(lib.add(s), Error);
  CHECK_THROWS_AS(SuproLibrary::load_directory("/nonexistent/supro"), Error);
}
