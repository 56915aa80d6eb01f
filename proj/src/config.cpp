#include "suplab/config.hpp"

#include <set>

#include <json.hpp>

#include "suplab/error.hpp"
#include "suplab/io.hpp"

namespace suplab {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  fail(ErrorKind::Validation, "config " + path + ": " + what);
}

void reject_unknown(const json& object, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& item : object.items()) {
    if (allowed.count(item.key()) == 0) invalid(path + item.key(), "unknown field");
  }
}

double number_at(const json& node, const std::string& path) {
  if (!node.is_number()) invalid(path, "expected a number");
  return node.get<double>();
}

Intensity intensity_at(const json& node, const std::string& path) {
  if (!node.is_string()) invalid(path, "expected an intensity name");
  try {
    return parse_intensity(node.get<std::string>());
  } catch (const Error& e) {
    invalid(path, e.what());
  }
}

void apply_tuning(const json& node, SimTuning& tuning) {
  if (!node.is_object()) invalid("tuning", "expected an object");
  reject_unknown(node, "tuning.", {"alphaSigma", "betaSigma", "gamma", "smootherWindow"});
  if (node.contains("alphaSigma")) tuning.alpha_sigma = number_at(node["alphaSigma"], "tuning.alphaSigma");
  if (node.contains("betaSigma")) tuning.beta_sigma = number_at(node["betaSigma"], "tuning.betaSigma");
  if (node.contains("gamma")) tuning.gamma = number_at(node["gamma"], "tuning.gamma");
  if (node.contains("smootherWindow")) {
    const auto& w = node["smootherWindow"];
    if (!w.is_number_unsigned()) invalid("tuning.smootherWindow", "expected a positive integer");
    tuning.smoother_window = w.get<std::size_t>();
  }
  try {
    tuning.validate();
  } catch (const Error& e) {
    invalid("tuning", e.what());
  }
}

ApplianceEntry parse_appliance(const json& node, const std::string& path) {
  if (!node.is_object()) invalid(path, "expected an object");
  reject_unknown(node, path + ".", {"name", "turnOnPdf", "intensity"});
  ApplianceEntry entry;
  if (!node.contains("name") || !node["name"].is_string() || node["name"].get<std::string>().empty()) {
    invalid(path + ".name", "expected a non-empty string");
  }
  entry.name = node["name"].get<std::string>();
  if (node.contains("turnOnPdf")) {
    const auto& pdf = node["turnOnPdf"];
    if (!pdf.is_array() || pdf.size() != kHoursPerDay) invalid(path + ".turnOnPdf", "expected 24 numbers");
    std::vector<double> weights;
    for (std::size_t h = 0; h < pdf.size(); ++h) {
      weights.push_back(number_at(pdf[h], path + ".turnOnPdf[" + std::to_string(h) + "]"));
    }
    try {
      entry.turn_on = TurnOnDistribution::from_weights(weights);
    } catch (const Error& e) {
      invalid(path + ".turnOnPdf", e.what());
    }
  }
  if (node.contains("intensity")) entry.intensity = intensity_at(node["intensity"], path + ".intensity");
  return entry;
}

}  // namespace

SimulationConfig parse_simulation_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Parse, std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) invalid("(root)", "expected an object");
  reject_unknown(root, "", {"seed", "intensity", "tuning", "appliances"});

  SimulationConfig config;
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) invalid("seed", "expected a non-negative integer");
    config.seed = root["seed"].get<std::uint64_t>();
  }
  if (root.contains("intensity")) config.intensity = intensity_at(root["intensity"], "intensity");
  if (root.contains("tuning")) apply_tuning(root["tuning"], config.tuning);
  if (root.contains("appliances")) {
    const auto& list = root["appliances"];
    if (!list.is_array()) invalid("appliances", "expected an array");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string path = "appliances[" + std::to_string(i) + "]";
      auto entry = parse_appliance(list[i], path);
      if (!seen.insert(entry.name).second) invalid(path + ".name", "duplicate appliance '" + entry.name + "'");
      config.appliances.push_back(std::move(entry));
    }
  }
  return config;
}

SimulationConfig load_simulation_config(const std::filesystem::path& path) {
  return parse_simulation_config(io::read_text(path));
}

std::vector<ApplianceSetup> resolve_appliances(const SimulationConfig& config, const SuproLibrary& library,
                                               Intensity fallback) {
  std::vector<ApplianceEntry> entries = config.appliances;
  if (entries.empty()) {
    for (const auto& name : library.appliances()) entries.push_back({name, std::nullopt, std::nullopt});
  }
  std::vector<ApplianceSetup> setups;
  for (const auto& entry : entries) {
    if (library.modes(entry.name).empty()) {
      fail(ErrorKind::Validation, "config names appliance '" + entry.name + "' but the SUPRO library has none");
    }
    ApplianceSetup setup;
    setup.name = entry.name;
    setup.turn_on = entry.turn_on.value_or(TurnOnDistribution::uniform());
    setup.intensity = entry.intensity.value_or(fallback);
    setups.push_back(std::move(setup));
  }
  return setups;
}

}  // namespace suplab
