#pragma once

// CSV serialization. Every file starts with "# gauge-squeeze v<version>",
// followed by "# key = value" metadata lines and a column header row.
// Numbers use the shortest decimal that round-trips; nulls are empty fields.

#include "gauge_squeeze/observables.hpp"
#include "gauge_squeeze/sweep.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace gauge_squeeze {

std::string version_string();
std::string format_number(double x);
// Current UTC time, ISO 8601.
std::string utc_timestamp();
// FNV-1a 64 of the newline-joined lines, as 16 hex digits.
std::string param_hash(const std::vector<std::string>& lines);

void write_sweep_csv(std::ostream& os, const SweepDataset& ds);
void write_sweep_csv(const std::string& path, const SweepDataset& ds);

// Accepts files produced by write_sweep_csv. Metadata lines are kept in
// meta.spec_echo except version/timestamp/param_hash.
SweepDataset read_sweep_csv(std::istream& is);
SweepDataset read_sweep_csv(const std::string& path);

void write_series_csv(std::ostream& os, const VarianceSeries& s,
                      const std::vector<std::string>& echo);
void write_wigner_csv(std::ostream& os, const WignerGrid& g,
                      const std::vector<std::string>& echo);

// Opens for writing or throws IoError naming the path.
std::ofstream open_output(const std::string& path);

} // namespace gauge_squeeze
