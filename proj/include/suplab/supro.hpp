#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "suplab/mode.hpp"

namespace suplab {

// A span of roughly constant power inside a SUP.
struct CycleSpec {
  std::string name;
  double power = 0.0;    // watts, > 0
  long duration = 0;     // seconds, >= 1

  friend bool operator==(const CycleSpec&, const CycleSpec&) = default;
};

// A group of cycles repeated between repeat_min and repeat_max times.
struct PhaseSpec {
  long repeat_min = 1;
  long repeat_max = 1;
  std::vector<CycleSpec> cycles;

  friend bool operator==(const PhaseSpec&, const PhaseSpec&) = default;
};

// SUP Representation Object: the cycle structure of one appliance running in
// one operation mode.
struct Supro {
  std::string appliance;
  OperationMode mode = OperationMode::Light;
  std::vector<PhaseSpec> phases;

  friend bool operator==(const Supro&, const Supro&) = default;
};

struct DurationBounds {
  long min_seconds = 0;
  long max_seconds = 0;
};

// Strict parse: unknown fields, wrong types and violated bounds are errors.
// Malformed JSON raises ErrorKind::Parse (message carries the byte offset);
// schema problems raise ErrorKind::Validation naming the field path.
Supro parse_supro(std::string_view text);
std::string serialize_supro(const Supro& supro);
void validate(const Supro& supro);

DurationBounds duration_bounds(const Supro& supro);

// Same structure with each phase pinned to round-half-down((min+max)/2)
// repetitions; the canonical shape used for reference patterns.
Supro with_midpoint_repeats(const Supro& supro);

// All SUPROs of a directory of `<appliance>_<mode>.json` files, keyed by
// (appliance, mode).
class SuproLibrary {
 public:
  static SuproLibrary load_directory(const std::filesystem::path& dir);

  void add(Supro supro);
  const Supro& get(std::string_view appliance, OperationMode mode) const;
  bool contains(std::string_view appliance, OperationMode mode) const;
  std::vector<std::string> appliances() const;
  // Modes available for one appliance in Light, Medium, Heavy order.
  std::vector<OperationMode> modes(std::string_view appliance) const;
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::map<std::pair<std::string, OperationMode>, Supro, std::less<>> entries_;
};

}  // namespace suplab
