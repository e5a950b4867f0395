#include "gauge_squeeze/config.hpp"

#include "gauge_squeeze/csv.hpp"
#include "gauge_squeeze/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace gauge_squeeze {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> plain_number(std::string_view s) {
  if (s.empty())
    return std::nullopt;
  if (s.front() == '+')
    s.remove_prefix(1);
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    return std::nullopt;
  return v;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value,
                            std::string_view why) {
  throw ConfigError("key '" + std::string(key) + "': " + std::string(why) + " (got '" +
                    std::string(value) + "')");
}

double number_for(std::string_view key, std::string_view value) {
  try {
    return parse_number(value);
  } catch (const ConfigError&) {
    bad_value(key, value, "expected a number");
  }
}

std::size_t count_for(std::string_view key, std::string_view value) {
  const double v = number_for(key, value);
  if (!(v >= 1) || v != std::floor(v) || v > 1e9)
    bad_value(key, value, "expected a positive integer");
  return static_cast<std::size_t>(v);
}

Axis parse_axis(std::string_view key, std::string_view value) {
  std::vector<std::string_view> parts;
  std::string_view rest = value;
  while (true) {
    const auto comma = rest.find(',');
    parts.push_back(trim(rest.substr(0, comma)));
    if (comma == std::string_view::npos)
      break;
    rest.remove_prefix(comma + 1);
  }
  if (parts.size() != 4)
    bad_value(key, value, "expected name,min,max,count");
  Axis a;
  a.name = std::string(parts[0]);
  SystemParams probe;
  if (param_slot(probe, a.name) == nullptr)
    bad_value(key, value, "unknown sweep parameter '" + a.name + "'");
  a.min = number_for(key, parts[1]);
  a.max = number_for(key, parts[2]);
  a.count = count_for(key, parts[3]);
  if (a.count < 2)
    bad_value(key, value, "axis count must be >= 2");
  if (!(a.min < a.max))
    bad_value(key, value, "axis requires min < max");
  return a;
}

std::vector<Observable> parse_observables(std::string_view key, std::string_view value) {
  std::vector<Observable> out;
  std::string_view rest = value;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    const auto o = parse_observable(item);
    if (!o)
      bad_value(key, value, "unknown observable '" + std::string(item) + "'");
    if (std::find(out.begin(), out.end(), *o) == out.end())
      out.push_back(*o);
    if (comma == std::string_view::npos)
      break;
    rest.remove_prefix(comma + 1);
  }
  if (out.empty())
    bad_value(key, value, "at least one observable required");
  return out;
}

std::string axis_text(const Axis& a) {
  return a.name + "," + format_number(a.min) + "," + format_number(a.max) + "," +
         std::to_string(a.count);
}

} // namespace

double parse_number(std::string_view text) {
  std::string_view s = trim(text);
  if (auto v = plain_number(s))
    return *v;

  // [sign][coef]pi[/den]
  double sign = 1.0;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    sign = s.front() == '-' ? -1.0 : 1.0;
    s.remove_prefix(1);
  }
  const auto pos = s.find("pi");
  if (pos == std::string_view::npos)
    throw ConfigError("malformed number '" + std::string(text) + "'");
  double coef = 1.0;
  if (pos > 0) {
    std::string_view c = trim(s.substr(0, pos));
    if (!c.empty() && c.back() == '*')
      c = trim(c.substr(0, c.size() - 1));
    const auto v = plain_number(c);
    if (!v || c.front() == '-')
      throw ConfigError("malformed number '" + std::string(text) + "'");
    coef = *v;
  }
  double den = 1.0;
  std::string_view tail = trim(s.substr(pos + 2));
  if (!tail.empty()) {
    if (tail.front() != '/')
      throw ConfigError("malformed number '" + std::string(text) + "'");
    const auto v = plain_number(trim(tail.substr(1)));
    if (!v || *v == 0.0)
      throw ConfigError("malformed number '" + std::string(text) + "'");
    den = *v;
  }
  return sign * coef * std::numbers::pi / den;
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  if (value.empty())
    bad_value(key, value, "empty value");

  if (key == "Delta_tilde") {
    if (value == "red-sideband")
      cfg.params.optical_detuning.reset();
    else
      cfg.params.optical_detuning = number_for(key, value);
    return;
  }
  if (key == "beta_m_re") {
    cfg.params.mechanical_mean_field_re = number_for(key, value);
    cfg.beta_set = true;
    return;
  }
  for (const auto& f : param_fields()) {
    if (f.name == key) {
      cfg.params.*f.member = number_for(key, value);
      return;
    }
  }

  if (key == "Lambda") {
    cfg.lambda = number_for(key, value);
  } else if (key == "omega_m_hz") {
    cfg.omega_m_hz = number_for(key, value);
  } else if (key == "mode") {
    if (value == "effective")
      cfg.mode = ParamMode::effective;
    else if (value == "from-drives")
      cfg.mode = ParamMode::from_drives;
    else
      bad_value(key, value, "expected effective or from-drives");
  } else if (key == "E_1") {
    cfg.drives.E_1 = number_for(key, value);
  } else if (key == "Delta_1") {
    cfg.drives.Delta_1 = number_for(key, value);
  } else if (key == "E_2") {
    cfg.drives.E_2 = number_for(key, value);
  } else if (key == "Delta_2_prime") {
    cfg.drives.Delta_2_prime = number_for(key, value);
  } else if (key == "kappa_2") {
    cfg.drives.kappa_2 = number_for(key, value);
  } else if (key == "g_a") {
    cfg.drives.g_a = number_for(key, value);
  } else if (key == "damping") {
    cfg.drives.damping = number_for(key, value);
  } else if (key == "max_iter") {
    cfg.drives.max_iter = static_cast<int>(count_for(key, value));
  } else if (key == "axis1") {
    cfg.axis1 = parse_axis(key, value);
  } else if (key == "axis2") {
    if (value == "none")
      cfg.axis2.reset();
    else
      cfg.axis2 = parse_axis(key, value);
  } else if (key == "observables") {
    cfg.observables = parse_observables(key, value);
  } else if (key == "output_path") {
    cfg.output_path = std::string(value);
  } else if (key == "tol_stab") {
    cfg.tol_stab = number_for(key, value);
  } else if (key == "t_end") {
    cfg.t_end = number_for(key, value);
  } else if (key == "dt") {
    cfg.dt = number_for(key, value);
  } else if (key == "store_every") {
    cfg.store_every = count_for(key, value);
  } else if (key == "wigner_points") {
    cfg.wigner_points = count_for(key, value);
  } else if (key == "wigner_extent") {
    cfg.wigner_extent = number_for(key, value);
  } else if (key == "wigner_output_path") {
    cfg.wigner_output_path = std::string(value);
  } else {
    throw ConfigError("unknown key '" + std::string(key) + "'");
  }
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  const std::string_view key = trim(assignment.substr(0, eq));
  if (key.empty())
    throw ConfigError("override '" + std::string(assignment) + "' has an empty key");
  apply_setting(cfg, key, assignment.substr(eq + 1));
}

RunConfig parse_config(std::string_view text, RunConfig cfg) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    try {
      apply_setting(cfg, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw IoError("cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

SystemParams resolve_params(const RunConfig& cfg) {
  SystemParams p = cfg.params;
  if (cfg.lambda) {
    if (cfg.beta_set)
      throw ConfigError("set either Lambda or beta_m_re, not both");
    p.mechanical_mean_field_re = mean_field_for_shift(*cfg.lambda, p.duffing);
  }
  if (cfg.mode == ParamMode::from_drives) {
    if (cfg.lambda || cfg.beta_set)
      throw ConfigError("from-drives mode derives beta_m_re; do not set Lambda or beta_m_re");
    const DriveSettings& d = cfg.drives;
    const Amplitude alpha_2 =
        control_mode_amplitude({d.E_2, d.Delta_2_prime, d.kappa_2, d.g_a});
    p.brillouin_coupling = effective_brillouin_coupling(d.g_a, alpha_2);

    MeanFieldConfig mf;
    mf.omega_m = p.omega_m;
    mf.single_photon_coupling = p.single_photon_coupling;
    mf.optical_decay = p.optical_decay;
    mf.acoustic_decay = p.acoustic_decay;
    mf.mechanical_decay = p.mechanical_decay;
    mf.duffing = p.duffing;
    mf.hopping = p.hopping;
    mf.gauge_phase = p.gauge_phase;
    mf.acoustic_detuning = p.acoustic_detuning;
    mf.brillouin_coupling = p.brillouin_coupling;
    mf.optical_detuning = d.Delta_1;
    mf.drive = d.E_1;
    mf.damping = d.damping;
    mf.max_iter = d.max_iter;
    const MeanFields f = mean_field_fixed_point(mf);
    p.optomech_coupling = f.optomech_coupling;
    p.mechanical_mean_field_re = f.beta_m.real();
  }
  validate(p);
  return p;
}

SweepSpec make_sweep_spec(const RunConfig& cfg) {
  if (!cfg.axis1)
    throw ConfigError("sweep needs axis1 = name,min,max,count");
  SweepSpec spec;
  spec.base = resolve_params(cfg);
  spec.axis1 = *cfg.axis1;
  spec.axis2 = cfg.axis2;
  spec.observables = cfg.observables;
  spec.output_path = cfg.output_path;
  spec.stability.tol_stab = cfg.tol_stab;
  validate(spec);
  return spec;
}

DynamicsConfig make_dynamics_config(const RunConfig& cfg) {
  DynamicsConfig d;
  d.params = resolve_params(cfg);
  d.t_end = cfg.t_end;
  d.dt = cfg.dt;
  d.store_every = cfg.store_every;
  d.wigner_points = cfg.wigner_points;
  d.wigner_extent = cfg.wigner_extent;
  return d;
}

std::vector<std::string> echo_config(const RunConfig& cfg) {
  const SystemParams p = resolve_params(cfg);
  std::vector<std::string> lines;
  lines.push_back(std::string("mode = ") +
                  (cfg.mode == ParamMode::effective
                       ? "effective"
                       : "from-drives (interpretation-dependent mean field)"));
  for (const auto& f : param_fields())
    lines.push_back(std::string(f.name) + " = " + format_number(p.*f.member));
  lines.push_back("Delta_tilde = " + (p.optical_detuning
                                          ? format_number(*p.optical_detuning)
                                          : std::string("red-sideband")));
  if (cfg.lambda)
    lines.push_back("Lambda = " + format_number(*cfg.lambda));
  if (cfg.omega_m_hz)
    lines.push_back("omega_m_hz = " + format_number(*cfg.omega_m_hz));
  if (cfg.mode == ParamMode::from_drives) {
    const DriveSettings& d = cfg.drives;
    lines.push_back("E_1 = " + format_number(d.E_1));
    lines.push_back("Delta_1 = " + format_number(d.Delta_1));
    lines.push_back("E_2 = " + format_number(d.E_2));
    lines.push_back("Delta_2_prime = " + format_number(d.Delta_2_prime));
    lines.push_back("kappa_2 = " + format_number(d.kappa_2));
    lines.push_back("g_a = " + format_number(d.g_a));
  }
  if (cfg.axis1)
    lines.push_back("axis1 = " + axis_text(*cfg.axis1));
  if (cfg.axis2)
    lines.push_back("axis2 = " + axis_text(*cfg.axis2));
  lines.push_back("t_end = " + format_number(cfg.t_end));
  lines.push_back("dt = " + format_number(cfg.dt));
  lines.push_back("tol_stab = " + format_number(cfg.tol_stab));
  return lines;
}

} // namespace gauge_squeeze
