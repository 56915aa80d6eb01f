#include "suplab/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "suplab/error.hpp"

namespace suplab::io {

namespace {

std::string location(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

template <typename T>
T parse_number(const std::string& field, const std::filesystem::path& path, std::size_t line) {
  T value{};
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if constexpr (std::is_floating_point_v<T>) {
    // std::from_chars for doubles is missing on older toolchains.
    char* end = nullptr;
    value = std::strtod(first, &end);
    if (end != last || field.empty()) fail(ErrorKind::Parse, location(path, line) + ": bad number '" + field + "'");
  } else {
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      fail(ErrorKind::Parse, location(path, line) + ": bad integer '" + field + "'");
    }
  }
  return value;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write '" + path.string() + "'");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read '" + path.string() + "'");
  return in;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

std::string format_power(double watts) {
  char buffer[64];
  const int n = std::snprintf(buffer, sizeof buffer, "%.2f", watts);
  return std::string(buffer, static_cast<std::size_t>(n));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

void write_series_csv(const std::filesystem::path& path, const PowerSeries& series) {
  auto out = open_out(path);
  std::string buffer = "t,power\n";
  buffer.reserve(series.size() * 16 + 8);
  for (std::size_t i = 0; i < series.size(); ++i) {
    buffer += std::to_string(series.origin + i);
    buffer += ',';
    buffer += format_power(series[i]);
    buffer += '\n';
  }
  out << buffer;
  if (!out) fail(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

PowerSeries read_series_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) fail(ErrorKind::Parse, path.string() + ": empty file");
  strip_cr(line);
  if (line != "t,power") fail(ErrorKind::Parse, location(path, 1) + ": expected header 't,power'");
  PowerSeries series;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) fail(ErrorKind::Parse, location(path, line_no) + ": expected 't,power'");
    const auto t = parse_number<std::size_t>(line.substr(0, comma), path, line_no);
    const auto power = parse_number<double>(line.substr(comma + 1), path, line_no);
    if (series.empty()) {
      series.origin = t;
    } else if (t != series.origin + series.size()) {
      fail(ErrorKind::Parse, location(path, line_no) + ": samples must be dense and increasing");
    }
    if (!(power >= 0.0) || !std::isfinite(power)) {
      fail(ErrorKind::InvalidInput, location(path, line_no) + ": power must be finite and >= 0");
    }
    series.samples.push_back(power);
  }
  if (series.empty()) fail(ErrorKind::InvalidInput, path.string() + ": no samples");
  return series;
}

void write_labels_csv(const std::filesystem::path& path, const std::vector<LabelEvent>& labels) {
  auto out = open_out(path);
  out << "day_file,t_on,appliance,mode,ssup_length\n";
  for (const auto& label : labels) {
    out << label.day_file << ',' << label.t_on << ',' << label.appliance << ','
        << to_string(label.mode) << ',' << label.ssup_length << '\n';
  }
  if (!out) fail(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

std::vector<LabelEvent> read_labels_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::Parse, path.string() + ": empty file");
  strip_cr(line);
  if (line != "day_file,t_on,appliance,mode,ssup_length") {
    fail(ErrorKind::Parse, location(path, 1) + ": unexpected labels header");
  }
  std::vector<LabelEvent> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 5) fail(ErrorKind::Parse, location(path, line_no) + ": expected 5 fields");
    LabelEvent label;
    label.day_file = fields[0];
    label.t_on = parse_number<std::size_t>(fields[1], path, line_no);
    label.appliance = fields[2];
    try {
      label.mode = parse_mode(fields[3]);
    } catch (const Error& e) {
      fail(ErrorKind::Parse, location(path, line_no) + ": " + e.what());
    }
    label.ssup_length = parse_number<std::size_t>(fields[4], path, line_no);
    labels.push_back(std::move(label));
  }
  return labels;
}

std::string read_text(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out) fail(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

}  // namespace suplab::io
