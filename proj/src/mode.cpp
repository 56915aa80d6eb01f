#include "suplab/mode.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "suplab/error.hpp"

namespace suplab {

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Generation: return "generation";
    case ErrorKind::NoCycles: return "no-cycles";
    case ErrorKind::DegenerateInput: return "degenerate-input";
    case ErrorKind::InvalidState: return "invalid-state";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

std::string_view to_string(OperationMode mode) {
  switch (mode) {
    case OperationMode::Light: return "Light";
    case OperationMode::Medium: return "Medium";
    case OperationMode::Heavy: return "Heavy";
  }
  return "?";
}

std::string_view to_string(Intensity intensity) {
  switch (intensity) {
    case Intensity::Low: return "low";
    case Intensity::Medium: return "medium";
    case Intensity::High: return "high";
  }
  return "?";
}

OperationMode parse_mode(std::string_view text) {
  const auto name = lower(text);
  if (name == "light") return OperationMode::Light;
  if (name == "medium") return OperationMode::Medium;
  if (name == "heavy") return OperationMode::Heavy;
  fail(ErrorKind::InvalidParameter, "unknown operation mode '" + std::string(text) + "'");
}

Intensity parse_intensity(std::string_view text) {
  const auto name = lower(text);
  if (name == "low") return Intensity::Low;
  if (name == "medium") return Intensity::Medium;
  if (name == "high") return Intensity::High;
  fail(ErrorKind::InvalidParameter, "unknown usage intensity '" + std::string(text) + "'");
}

}  // namespace suplab
