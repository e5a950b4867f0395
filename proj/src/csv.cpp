#include "gauge_squeeze/csv.hpp"

#include "gauge_squeeze/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace gauge_squeeze {

std::string version_string() { return GAUGE_SQUEEZE_VERSION; }

std::string format_number(double x) {
  if (!std::isfinite(x))
    throw NonFiniteState("refusing to serialize a non-finite number");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string param_hash(const std::vector<std::string>& lines) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& line : lines) {
    for (unsigned char c : line) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= '\n';
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw IoError("cannot open '" + path + "' for writing");
  return os;
}

namespace {

void write_preamble(std::ostream& os, const std::vector<std::string>& echo,
                    const std::string& timestamp, const std::string& hash) {
  os << "# gauge-squeeze v" << version_string() << "\n";
  for (const auto& line : echo)
    os << "# " << line << "\n";
  os << "# param_hash = " << hash << "\n";
  os << "# timestamp = " << timestamp << "\n";
}

void write_optional(std::ostream& os, const std::optional<double>& v) {
  if (v && std::isfinite(*v))
    os << format_number(*v);
}

void finish(std::ostream& os, const std::string& what) {
  os.flush();
  if (!os)
    throw IoError("write failed for " + what);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::optional<double> parse_field(const std::string& field, std::size_t line_no) {
  if (field.empty())
    return std::nullopt;
  double v = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size())
    throw ConfigError("line " + std::to_string(line_no) + ": malformed number '" +
                      field + "'");
  return v;
}

} // namespace

void write_sweep_csv(std::ostream& os, const SweepDataset& ds) {
  write_preamble(os, ds.meta.spec_echo, ds.meta.timestamp, ds.meta.param_hash);
  const bool two_d = !ds.axis2_name.empty();
  os << "axis1";
  if (two_d)
    os << ",axis2";
  for (Observable o : kAllObservables)
    if (std::find(ds.observables.begin(), ds.observables.end(), o) != ds.observables.end())
      os << "," << to_string(o);
  os << "\n";

  for (const SweepRecord& rec : ds.records) {
    os << format_number(rec.axis1);
    if (two_d) {
      os << ",";
      write_optional(os, rec.axis2);
    }
    for (Observable o : kAllObservables) {
      if (std::find(ds.observables.begin(), ds.observables.end(), o) ==
          ds.observables.end())
        continue;
      os << ",";
      if (o == Observable::stable)
        os << (rec.stable ? "true" : "false");
      else
        write_optional(os, rec.value(o));
    }
    os << "\n";
  }
}

void write_sweep_csv(const std::string& path, const SweepDataset& ds) {
  std::ofstream os = open_output(path);
  write_sweep_csv(os, ds);
  finish(os, "'" + path + "'");
}

SweepDataset read_sweep_csv(std::istream& is) {
  SweepDataset ds;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> columns;

  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    if (line[0] == '#') {
      const std::string body = trim(line.substr(1));
      if (line_no == 1) {
        if (body.rfind("gauge-squeeze v", 0) != 0)
          throw ConfigError("not a gauge-squeeze dataset (bad first line)");
        ds.meta.version = body.substr(15);
        continue;
      }
      const auto eq = body.find('=');
      const std::string key = eq == std::string::npos ? body : trim(body.substr(0, eq));
      const std::string value = eq == std::string::npos ? "" : trim(body.substr(eq + 1));
      if (key == "timestamp")
        ds.meta.timestamp = value;
      else if (key == "param_hash")
        ds.meta.param_hash = value;
      else
        ds.meta.spec_echo.push_back(body);
      if (key == "axis1" || key == "axis2") {
        const auto parts = split(value, ',');
        (key == "axis1" ? ds.axis1_name : ds.axis2_name) = trim(parts.front());
      }
      continue;
    }
    if (line_no == 1)
      throw ConfigError("not a gauge-squeeze dataset (missing version line)");

    const auto fields = split(line, ',');
    if (columns.empty()) {
      columns = fields;
      if (columns.front() != "axis1")
        throw ConfigError("line " + std::to_string(line_no) +
                          ": column header must start with axis1");
      for (std::size_t c = 1; c < columns.size(); ++c) {
        if (columns[c] == "axis2")
          continue;
        const auto o = parse_observable(columns[c]);
        if (!o)
          throw ConfigError("line " + std::to_string(line_no) + ": unknown column '" +
                            columns[c] + "'");
        ds.observables.push_back(*o);
      }
      continue;
    }
    if (fields.size() != columns.size())
      throw ConfigError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(columns.size()) + " fields, got " +
                        std::to_string(fields.size()));

    SweepRecord rec;
    bool has_stable_column = false;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const std::string& col = columns[c];
      if (col == "stable") {
        has_stable_column = true;
        if (fields[c] != "true" && fields[c] != "false")
          throw ConfigError("line " + std::to_string(line_no) +
                            ": stable must be true or false");
        rec.stable = fields[c] == "true";
        continue;
      }
      const auto v = parse_field(fields[c], line_no);
      if (col == "axis1") {
        if (!v)
          throw ConfigError("line " + std::to_string(line_no) + ": empty axis1");
        rec.axis1 = *v;
      } else if (col == "axis2") {
        rec.axis2 = v;
      } else if (col == "var_q") {
        rec.var_q = v;
      } else if (col == "squeeze_db") {
        rec.squeeze_db = v;
      } else if (col == "n_eff") {
        rec.n_eff = v;
      } else if (col == "var_p") {
        rec.var_p = v;
      } else if (col == "spectral_abscissa") {
        rec.spectral_abscissa = v;
      }
    }
    if (!has_stable_column) {
      // Without the flag a point counts as stable when it carries values.
      rec.stable = rec.var_q || rec.squeeze_db || rec.n_eff || rec.var_p;
    }
    ds.records.push_back(rec);
  }
  if (columns.empty())
    throw ConfigError("dataset has no column header");

  ds.count2 = 1;
  if (!ds.records.empty() && ds.records.front().axis2) {
    std::size_t n2 = 1;
    while (n2 < ds.records.size() && ds.records[n2].axis1 == ds.records[0].axis1)
      ++n2;
    ds.count2 = n2;
  }
  ds.count1 = ds.records.size() / ds.count2;
  return ds;
}

SweepDataset read_sweep_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw IoError("cannot open '" + path + "' for reading");
  return read_sweep_csv(is);
}

void write_series_csv(std::ostream& os, const VarianceSeries& s,
                      const std::vector<std::string>& echo) {
  write_preamble(os, echo, utc_timestamp(), param_hash(echo));
  os << "t,var_q,var_p\n";
  for (std::size_t i = 0; i < s.times.size(); ++i)
    os << format_number(s.times[i]) << "," << format_number(s.var_q[i]) << ","
       << format_number(s.var_p[i]) << "\n";
}

void write_wigner_csv(std::ostream& os, const WignerGrid& g,
                      const std::vector<std::string>& echo) {
  std::vector<std::string> lines = echo;
  lines.push_back("normalization_check = " + format_number(g.normalization_check));
  write_preamble(os, lines, utc_timestamp(), param_hash(echo));
  os << "q,p,w\n";
  for (std::size_t i = 0; i < g.q_axis.size(); ++i)
    for (std::size_t j = 0; j < g.p_axis.size(); ++j)
      os << format_number(g.q_axis[i]) << "," << format_number(g.p_axis[j]) << ","
         << format_number(g.at(i, j)) << "\n";
}

} // namespace gauge_squeeze
