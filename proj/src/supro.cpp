#include "suplab/supro.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "suplab/error.hpp"

namespace suplab {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  fail(ErrorKind::Validation, path + ": " + what);
}

void reject_unknown(const json& object, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (auto name : allowed) known = known || key == name;
    if (!known) invalid(path.empty() ? key : path + "." + key, "unknown field");
  }
}

const json& require(const json& object, const std::string& path, const char* key) {
  const auto it = object.find(key);
  if (it == object.end()) invalid(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

std::string require_string(const json& object, const std::string& path, const char* key) {
  const auto& value = require(object, path, key);
  if (!value.is_string()) invalid(path + "." + key, "expected a string");
  return value.get<std::string>();
}

long require_positive_integer(const json& object, const std::string& path, const char* key) {
  const auto& value = require(object, path, key);
  const std::string field = path + "." + key;
  if (!value.is_number_integer()) invalid(field, "expected an integer");
  const auto number = value.get<long long>();
  if (number < 1) invalid(field, "must be >= 1");
  return static_cast<long>(number);
}

CycleSpec parse_cycle(const json& node, const std::string& path) {
  if (!node.is_object()) invalid(path, "expected an object");
  reject_unknown(node, path, {"name", "power", "duration"});
  CycleSpec cycle;
  cycle.name = require_string(node, path, "name");
  const auto& power = require(node, path, "power");
  if (!power.is_number()) invalid(path + ".power", "expected a number");
  cycle.power = power.get<double>();
  if (!(cycle.power > 0.0) || !std::isfinite(cycle.power)) invalid(path + ".power", "must be > 0");
  cycle.duration = require_positive_integer(node, path, "duration");
  return cycle;
}

PhaseSpec parse_phase(const json& node, const std::string& path) {
  if (!node.is_object()) invalid(path, "expected an object");
  reject_unknown(node, path, {"repeatMin", "repeatMax", "cycles"});
  PhaseSpec phase;
  phase.repeat_min = require_positive_integer(node, path, "repeatMin");
  phase.repeat_max = require_positive_integer(node, path, "repeatMax");
  if (phase.repeat_min > phase.repeat_max) invalid(path, "repeatMin exceeds repeatMax");
  const auto& cycles = require(node, path, "cycles");
  if (!cycles.is_array() || cycles.empty()) invalid(path + ".cycles", "expected a non-empty array");
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    phase.cycles.push_back(parse_cycle(cycles[i], path + ".cycles[" + std::to_string(i) + "]"));
  }
  return phase;
}

}  // namespace

void validate(const Supro& supro) {
  if (supro.appliance.empty()) invalid("appliance", "must not be empty");
  if (supro.phases.empty()) invalid("phases", "expected a non-empty array");
  for (std::size_t i = 0; i < supro.phases.size(); ++i) {
    const auto& phase = supro.phases[i];
    const std::string path = "phases[" + std::to_string(i) + "]";
    if (phase.repeat_min < 1) invalid(path + ".repeatMin", "must be >= 1");
    if (phase.repeat_min > phase.repeat_max) invalid(path, "repeatMin exceeds repeatMax");
    if (phase.cycles.empty()) invalid(path + ".cycles", "expected a non-empty array");
    for (std::size_t j = 0; j < phase.cycles.size(); ++j) {
      const auto& cycle = phase.cycles[j];
      const std::string cpath = path + ".cycles[" + std::to_string(j) + "]";
      if (!(cycle.power > 0.0)) invalid(cpath + ".power", "must be > 0");
      if (cycle.duration < 1) invalid(cpath + ".duration", "must be >= 1");
    }
  }
}

Supro parse_supro(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Parse, "SUPRO is not valid JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) invalid("$", "expected a JSON object");
  reject_unknown(doc, "", {"appliance", "operationMode", "phases"});
  Supro supro;
  supro.appliance = require_string(doc, "", "appliance");
  const auto mode = require_string(doc, "", "operationMode");
  try {
    supro.mode = parse_mode(mode);
  } catch (const Error&) {
    invalid("operationMode", "expected one of Light, Medium, Heavy");
  }
  const auto& phases = require(doc, "", "phases");
  if (!phases.is_array() || phases.empty()) invalid("phases", "expected a non-empty array");
  for (std::size_t i = 0; i < phases.size(); ++i) {
    supro.phases.push_back(parse_phase(phases[i], "phases[" + std::to_string(i) + "]"));
  }
  validate(supro);
  return supro;
}

std::string serialize_supro(const Supro& supro) {
  json doc;
  doc["appliance"] = supro.appliance;
  doc["operationMode"] = std::string(to_string(supro.mode));
  doc["phases"] = json::array();
  for (const auto& phase : supro.phases) {
    json p;
    p["repeatMin"] = phase.repeat_min;
    p["repeatMax"] = phase.repeat_max;
    p["cycles"] = json::array();
    for (const auto& cycle : phase.cycles) {
      p["cycles"].push_back({{"name", cycle.name}, {"power", cycle.power}, {"duration", cycle.duration}});
    }
    doc["phases"].push_back(std::move(p));
  }
  return doc.dump(2);
}

DurationBounds duration_bounds(const Supro& supro) {
  DurationBounds bounds;
  for (const auto& phase : supro.phases) {
    long cycle_total = 0;
    for (const auto& cycle : phase.cycles) cycle_total += cycle.duration;
    bounds.min_seconds += phase.repeat_min * cycle_total;
    bounds.max_seconds += phase.repeat_max * cycle_total;
  }
  return bounds;
}

Supro with_midpoint_repeats(const Supro& supro) {
  Supro out = supro;
  for (auto& phase : out.phases) {
    const long mid = (phase.repeat_min + phase.repeat_max) / 2;
    phase.repeat_min = mid;
    phase.repeat_max = mid;
  }
  return out;
}

SuproLibrary SuproLibrary::load_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    fail(ErrorKind::Io, "SUPRO directory '" + dir.string() + "' does not exist");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  SuproLibrary library;
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) fail(ErrorKind::Io, "cannot read '" + file.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
      library.add(parse_supro(buffer.str()));
    } catch (const Error& e) {
      throw Error(e.kind(), file.filename().string() + ": " + e.what());
    }
  }
  if (library.size() == 0) fail(ErrorKind::Io, "no SUPRO files in '" + dir.string() + "'");
  return library;
}

void SuproLibrary::add(Supro supro) {
  validate(supro);
  auto key = std::make_pair(supro.appliance, supro.mode);
  if (entries_.count(key) != 0) {
    invalid(supro.appliance, "duplicate SUPRO for mode " + std::string(to_string(supro.mode)));
  }
  entries_.emplace(std::move(key), std::move(supro));
}

const Supro& SuproLibrary::get(std::string_view appliance, OperationMode mode) const {
  const auto it = entries_.find(std::make_pair(std::string(appliance), mode));
  if (it == entries_.end()) {
    fail(ErrorKind::InvalidInput, "no SUPRO for " + std::string(appliance) + "/" +
                                      std::string(to_string(mode)));
  }
  return it->second;
}

bool SuproLibrary::contains(std::string_view appliance, OperationMode mode) const {
  return entries_.count(std::make_pair(std::string(appliance), mode)) != 0;
}

std::vector<std::string> SuproLibrary::appliances() const {
  std::set<std::string> names;
  for (const auto& [key, value] : entries_) names.insert(key.first);
  return {names.begin(), names.end()};
}

std::vector<OperationMode> SuproLibrary::modes(std::string_view appliance) const {
  std::vector<OperationMode> out;
  for (auto mode : kModes) {
    if (contains(appliance, mode)) out.push_back(mode);
  }
  return out;
}

}  // namespace suplab
