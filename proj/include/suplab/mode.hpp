#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

namespace suplab {

// Fixed order matters: CDF inversion, tie-breaking and confusion-matrix
// indexing all rely on Light < Medium < Heavy.
enum class OperationMode { Light = 0, Medium = 1, Heavy = 2 };

inline constexpr std::size_t kModeCount = 3;
inline constexpr std::array<OperationMode, kModeCount> kModes = {
    OperationMode::Light, OperationMode::Medium, OperationMode::Heavy};

enum class Intensity { Low = 0, Medium = 1, High = 2 };

inline constexpr std::array<Intensity, 3> kIntensities = {
    Intensity::Low, Intensity::Medium, Intensity::High};

constexpr std::size_t index_of(OperationMode mode) {
  return static_cast<std::size_t>(mode);
}

constexpr std::size_t index_of(Intensity intensity) {
  return static_cast<std::size_t>(intensity);
}

std::string_view to_string(OperationMode mode);
std::string_view to_string(Intensity intensity);

// Case-insensitive. Throw Error(InvalidParameter) on unknown names.
OperationMode parse_mode(std::string_view text);
Intensity parse_intensity(std::string_view text);

// The operation mode a household of the given intensity uses most.
constexpr OperationMode major_mode(Intensity intensity) {
  return static_cast<OperationMode>(static_cast<int>(intensity));
}

}  // namespace suplab
