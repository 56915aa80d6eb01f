#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "suplab/series.hpp"
#include "suplab/simulator.hpp"

namespace suplab::io {

// Power values are written with two decimals (centiwatt resolution).
std::string format_power(double watts);

// `t,power` header, one `day_index,power_watts` row per sample.
void write_series_csv(const std::filesystem::path& path, const PowerSeries& series);
PowerSeries read_series_csv(const std::filesystem::path& path);

// `day_file,t_on,appliance,mode,ssup_length` with header.
void write_labels_csv(const std::filesystem::path& path, const std::vector<LabelEvent>& labels);
std::vector<LabelEvent> read_labels_csv(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

// Comma split without quoting support; fields never contain commas here.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace suplab::io
