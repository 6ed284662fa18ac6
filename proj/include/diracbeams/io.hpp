#pragma once

// Grid specs, the delimited dataset format, validation config/report I/O and
// the figure dataset builders behind the command-line tool.
//
// Dataset format:
//   # key: value            metadata lines (tool version, parameters, units)
//   name1,name2,...         one header line
//   v,v,...                 rows; %.16e floats, "NA" for absent values

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "diracbeams/core.hpp"
#include "diracbeams/dirac.hpp"
#include "diracbeams/observables.hpp"
#include "diracbeams/scalar_solutions.hpp"
#include "diracbeams/spectral.hpp"
#include "diracbeams/validation.hpp"

namespace diracbeams {

inline constexpr std::string_view kToolVersion = "diracbeams 0.1.0";
inline constexpr std::string_view kMissing = "NA";

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Grids

struct GridRange {
  double min = 0.0;
  double max = 0.0;
  int count = 0;

  double at(int i) const { return count == 1 ? min : min + (max - min) * i / (count - 1); }
  std::vector<double> values() const {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) v.push_back(at(i));
    return v;
  }
  std::string str() const {
    std::ostringstream os;
    os.precision(17);
    os << min << ":" << max << ":" << count;
    return os.str();
  }
};

/// Parse "min:max:count" (count >= 2, min < max).
inline GridRange parse_grid(std::string_view text) {
  const std::string s(text);
  const auto a = s.find(':');
  const auto b = a == std::string::npos ? std::string::npos : s.find(':', a + 1);
  if (b == std::string::npos || s.find(':', b + 1) != std::string::npos)
    throw std::invalid_argument("grid must be min:max:count, got '" + s + "'");
  GridRange g;
  try {
    std::size_t used = 0;
    const std::string lo = s.substr(0, a), hi = s.substr(a + 1, b - a - 1), n = s.substr(b + 1);
    g.min = std::stod(lo, &used);
    if (used != lo.size()) throw std::invalid_argument("");
    g.max = std::stod(hi, &used);
    if (used != hi.size()) throw std::invalid_argument("");
    g.count = std::stoi(n, &used);
    if (used != n.size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw std::invalid_argument("grid must be min:max:count, got '" + s + "'");
  }
  if (!std::isfinite(g.min) || !std::isfinite(g.max) || !(g.min < g.max))
    throw std::invalid_argument("grid: need finite min < max in '" + s + "'");
  if (g.count < 2) throw std::invalid_argument("grid: count must be >= 2 in '" + s + "'");
  return g;
}

// ---------------------------------------------------------------------------
// Datasets

using Cell = std::optional<double>;

struct FigureDataset {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_meta(std::string key, std::string value) { metadata.emplace_back(std::move(key), std::move(value)); }
  std::optional<std::string> meta(std::string_view key) const {
    for (const auto& [k, v] : metadata)
      if (k == key) return v;
    return std::nullopt;
  }
  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw std::out_of_range("dataset has no column '" + std::string(name) + "'");
  }
  std::vector<double> column_values(std::string_view name) const {
    const auto j = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[j] ? *r[j] : std::nan(""));
    return out;
  }
  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::invalid_argument("dataset row width does not match header");
    for (const auto& c : row)
      if (c && !std::isfinite(*c)) throw std::invalid_argument("dataset value is not finite");
    rows.push_back(std::move(row));
  }
};

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

inline void write_dataset(std::ostream& os, const FigureDataset& ds) {
  std::set<std::string> seen;
  for (const auto& c : ds.columns) {
    if (c.empty() || c.find_first_of(",\n#") != std::string::npos)
      throw std::invalid_argument("invalid column name '" + c + "'");
    if (!seen.insert(c).second) throw std::invalid_argument("duplicate column name '" + c + "'");
  }
  for (const auto& [k, v] : ds.metadata) {
    if (k.find_first_of(":\n") != std::string::npos || v.find('\n') != std::string::npos)
      throw std::invalid_argument("invalid metadata entry '" + k + "'");
    os << "# " << k << ": " << v << "\n";
  }
  for (std::size_t i = 0; i < ds.columns.size(); ++i) os << (i ? "," : "") << ds.columns[i];
  os << "\n";
  for (const auto& r : ds.rows) {
    if (r.size() != ds.columns.size()) throw std::invalid_argument("dataset is not rectangular");
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) os << ",";
      if (r[i]) {
        if (!std::isfinite(*r[i])) throw std::invalid_argument("dataset value is not finite");
        os << format_number(*r[i]);
      } else {
        os << kMissing;
      }
    }
    os << "\n";
  }
}

inline std::string dataset_to_string(const FigureDataset& ds) {
  std::ostringstream os;
  write_dataset(os, ds);
  return os.str();
}

namespace detail {

inline std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline std::string trim(std::string s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace detail

inline FigureDataset read_dataset(std::istream& is) {
  FigureDataset ds;
  std::string line;
  bool have_header = false;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (have_header) continue;
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      ds.add_meta(detail::trim(line.substr(1, colon - 1)), detail::trim(line.substr(colon + 1)));
      continue;
    }
    const auto fields = detail::split_commas(line);
    if (!have_header) {
      std::set<std::string> seen;
      for (const auto& f : fields) {
        const auto name = detail::trim(f);
        if (name.empty() || !seen.insert(name).second)
          throw FormatError("line " + std::to_string(lineno) + ": empty or duplicate column name");
        ds.columns.push_back(name);
      }
      have_header = true;
      continue;
    }
    if (fields.size() != ds.columns.size())
      throw FormatError("line " + std::to_string(lineno) + ": expected " + std::to_string(ds.columns.size()) +
                        " fields, got " + std::to_string(fields.size()));
    std::vector<Cell> row;
    for (const auto& raw : fields) {
      const auto f = detail::trim(raw);
      if (f == kMissing) {
        row.emplace_back();
        continue;
      }
      // strtod flags subnormals with ERANGE; only overflow is rejected.
      char* end = nullptr;
      const double v = std::strtod(f.c_str(), &end);
      const std::size_t used = static_cast<std::size_t>(end - f.c_str());
      const bool hex = f.find_first_of("xX") != std::string::npos;
      if (used == 0 || used != f.size() || hex || !std::isfinite(v))
        throw FormatError("line " + std::to_string(lineno) + ": bad number '" + f + "'");
      row.push_back(v);
    }
    ds.rows.push_back(std::move(row));
  }
  if (!have_header) throw FormatError("dataset has no header line");
  return ds;
}

inline FigureDataset read_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_dataset(in);
}

// ---------------------------------------------------------------------------
// Validation config and report

/// JSON config. Unknown keys and wrong types are errors.
inline ValidationConfig parse_validation_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("config must be a JSON object");
  ValidationConfig cfg;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (key == "points") cfg.points = v.get<int>();
      else if (key == "gordon_points") cfg.gordon_points = v.get<int>();
      else if (key == "subluminal_points") cfg.subluminal_points = v.get<int>();
      else if (key == "fd_step") cfg.fd_step = v.get<double>();
      else if (key == "gordon_step") cfg.gordon_step = v.get<double>();
      else if (key == "convergence_step") cfg.convergence_step = v.get<double>();
      else if (key == "tolerance_override") cfg.tolerance_override = v.get<double>();
      else if (key == "checks") cfg.checks = v.get<std::vector<std::string>>();
      else if (key == "l") cfg.l = v.get<int>();
      else if (key == "b") cfg.b = v.get<double>();
      else if (key == "p_z") cfg.p_z = v.get<double>();
      else if (key == "record_runtime") cfg.record_runtime = v.get<bool>();
      else throw FormatError("config: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("config: wrong value type: ") + e.what());
  }
  if (cfg.points < 1 || cfg.gordon_points < 1 || cfg.subluminal_points < 1)
    throw FormatError("config: point counts must be >= 1");
  if (!(cfg.fd_step > 0.0) || !(cfg.gordon_step > 0.0) || !(cfg.convergence_step > 0.0))
    throw FormatError("config: steps must be > 0");
  if (!(cfg.b > 0.0)) throw FormatError("config: b must be > 0");
  if (cfg.checks) {
    const auto& known = all_check_ids();
    for (const auto& id : *cfg.checks)
      if (std::find(known.begin(), known.end(), id) == known.end())
        throw FormatError("config: unknown check id '" + id + "'");
  }
  return cfg;
}

inline ValidationConfig load_validation_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_validation_config(ss.str());
}

namespace detail {

// key=value pairs; values optionally double-quoted with backslash escapes.
inline std::vector<std::pair<std::string, std::string>> parse_pairs(const std::string& s, std::size_t pos) {
  std::vector<std::pair<std::string, std::string>> out;
  while (pos < s.size()) {
    while (pos < s.size() && s[pos] == ' ') ++pos;
    if (pos >= s.size()) break;
    const auto eq = s.find('=', pos);
    if (eq == std::string::npos) throw FormatError("report: expected key=value");
    std::string key = s.substr(pos, eq - pos), value;
    pos = eq + 1;
    if (pos < s.size() && s[pos] == '"') {
      ++pos;
      bool closed = false;
      while (pos < s.size()) {
        const char ch = s[pos++];
        if (ch == '\\' && pos < s.size()) {
          value += s[pos++];
        } else if (ch == '"') {
          closed = true;
          break;
        } else {
          value += ch;
        }
      }
      if (!closed) throw FormatError("report: unterminated string for '" + key + "'");
    } else {
      const auto end = s.find(' ', pos);
      value = s.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
      pos = end == std::string::npos ? s.size() : end;
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

}  // namespace detail

/// Inverse of serialize_report.
inline ValidationReport parse_report(const std::string& text) {
  ValidationReport rep;
  rep.record_runtime = false;
  std::istringstream is(text);
  std::string line;
  bool summary = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# seed: ", 0) == 0) rep.seed = std::stoull(line.substr(8));
      continue;
    }
    if (line.rfind("check ", 0) == 0) {
      CheckResult c;
      for (const auto& [k, v] : detail::parse_pairs(line, 6)) {
        if (k == "id") c.id = v;
        else if (k == "pass") c.pass = v == "true";
        else if (k == "value") c.value = std::stod(v);
        else if (k == "bound") c.bound = v == "min" ? Bound::above : Bound::at_most;
        else if (k == "tolerance") c.tolerance = std::stod(v);
        else if (k == "runtime_s") {
          c.runtime_s = std::stod(v);
          rep.record_runtime = true;
        } else if (k == "parameters") c.parameters = v;
        else if (k == "detail") c.detail = v;
        else if (k == "error") c.error = v;
      }
      if (c.id.empty()) throw FormatError("report: check without id");
      rep.checks.push_back(std::move(c));
    } else if (line.rfind("summary ", 0) == 0) {
      summary = true;
    } else {
      throw FormatError("report: unexpected line '" + line + "'");
    }
  }
  if (!summary) throw FormatError("report: missing summary line");
  return rep;
}

// ---------------------------------------------------------------------------
// Figure datasets. Inputs are in lambda-bar / mc / mc^2 units and converted
// with the given constants.

struct FigureOptions {
  PhysicalConstants k;
  int l = 10;
  std::vector<double> b_list{20.0, 100.0, 500.0};
  double b = 40.0;
  double p_z = 0.0;  // mc units
  double t = 0.0;    // lambda-bar / c units
  std::optional<GridRange> grid_rho, grid_z, grid_e;
  std::string slice = "meridional";
  std::string modulus = "scalar";
  double fd_step = 1e-3;
};

namespace detail {

inline std::string units_line(const PhysicalConstants& k) {
  std::ostringstream os;
  os.precision(17);
  os << "hbar=" << k.hbar() << " mass=" << k.mass() << " c=" << k.c()
     << "; lengths in lambda_bar, times in lambda_bar/c, momenta in mc, energies in mc^2";
  return os.str();
}

inline std::string b_label(double b) {
  std::ostringstream os;
  os.precision(17);
  os << b;
  return os.str();
}

inline std::string join_b(const std::vector<double>& bs) {
  std::string s;
  for (std::size_t i = 0; i < bs.size(); ++i) s += (i ? "," : "") + b_label(bs[i]);
  return s;
}

inline void check_b_list(const std::vector<double>& bs) {
  if (bs.empty()) throw std::invalid_argument("b list is empty");
  std::set<double> seen;
  for (double b : bs) {
    if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("b values must be finite and > 0");
    if (!seen.insert(b).second) throw std::invalid_argument("b values must be distinct");
  }
}

inline FigureDataset start_dataset(std::string_view figure, const FigureOptions& o) {
  FigureDataset ds;
  ds.add_meta("tool", std::string(kToolVersion));
  ds.add_meta("figure", std::string(figure));
  ds.add_meta("units", units_line(o.k));
  return ds;
}

}  // namespace detail

/// Normalized modulus of the exponential packet against rho for each b.
inline FigureDataset figure1_dataset(const FigureOptions& o) {
  detail::check_b_list(o.b_list);
  const GridRange grid = o.grid_rho.value_or(GridRange{0.0, 300.0, 3001});
  if (grid.min < 0.0) throw std::invalid_argument("fig1: rho grid must start at >= 0");
  const auto& k = o.k;
  auto ds = detail::start_dataset("fig1", o);
  ds.add_meta("l", std::to_string(o.l));
  ds.add_meta("b_list", detail::join_b(o.b_list));
  ds.add_meta("p_z", detail::b_label(o.p_z));
  ds.add_meta("t", detail::b_label(o.t));
  ds.add_meta("grid_rho", grid.str());
  ds.add_meta("modulus", o.modulus);
  ds.add_meta("normalization", "each column divided by its maximum on the grid");
  ds.columns.push_back("rho_over_lambda");
  const auto rhos = grid.values();
  std::vector<std::vector<double>> cols;
  for (double b : o.b_list) {
    ds.columns.push_back("abs_psi_b" + detail::b_label(b));
    BeamParams p;
    p.l = o.l;
    p.b = b;
    p.p_z = o.p_z * k.mass() * k.c();
    std::vector<double> logs;
    for (double r : rhos) {
      const SpacetimePoint x{r * k.lambda_bar(), 0.0, 0.0, o.t * k.lambda_bar() / k.c()};
      if (o.modulus == "bispinor") {
        const double n2 = packet_field(ScalarKind::exponential, SpinChoice::up, p, k, ExpNormalization::unit_at_origin)(x).norm2();
        logs.push_back(n2 > 0.0 ? 0.5 * std::log(n2) : -std::numeric_limits<double>::infinity());
      } else if (o.modulus == "scalar") {
        logs.push_back(exp_scalar_log_modulus(p, k, x));
      } else {
        throw std::invalid_argument("fig1: modulus must be scalar or bispinor");
      }
    }
    const double peak = *std::max_element(logs.begin(), logs.end());
    if (!std::isfinite(peak)) throw std::runtime_error("fig1: modulus vanishes on the whole grid");
    std::vector<double> col;
    for (double v : logs) col.push_back(std::exp(v - peak));
    cols.push_back(std::move(col));
  }
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    std::vector<Cell> row{rhos[i]};
    for (const auto& c : cols) row.push_back(c[i]);
    ds.add_row(std::move(row));
  }
  return ds;
}

/// g_N per b on the common grid [E_par, E_cut(min b)].
inline FigureDataset figure2_dataset(const FigureOptions& o) {
  detail::check_b_list(o.b_list);
  const auto& k = o.k;
  BeamParams p;
  p.l = o.l;
  p.p_z = o.p_z * k.mass() * k.c();
  p.b = *std::min_element(o.b_list.begin(), o.b_list.end());
  const double e_par = derived_quantities(p, k).e_parallel;
  GridRange grid;
  if (o.grid_e) {
    grid = *o.grid_e;
    if (grid.min * k.rest_energy() < e_par * (1.0 - 1e-12))
      throw std::invalid_argument("fig2: energy grid starts below E_parallel");
  } else {
    grid = {e_par / k.rest_energy(), spectral_cutoff(p, k) / k.rest_energy(), 20001};
  }
  auto ds = detail::start_dataset("fig2", o);
  ds.add_meta("l", std::to_string(o.l));
  ds.add_meta("b_list", detail::join_b(o.b_list));
  ds.add_meta("p_z", detail::b_label(o.p_z));
  ds.add_meta("grid_e", grid.str());
  ds.add_meta("normalization", "trapezoid integral over the grid equals 1");
  ds.columns.push_back("E_over_mc2");
  std::vector<double> energies = grid.values();
  for (auto& e : energies) e = std::max(e * k.rest_energy(), e_par);
  std::vector<std::vector<double>> cols;
  for (double b : o.b_list) {
    ds.columns.push_back("gN_b" + detail::b_label(b));
    p.b = b;
    auto prof = normalized_profile(p, k, energies);
    // Stored against E/mc^2: rescale the density accordingly.
    for (auto& w : prof.weights) w *= k.rest_energy();
    cols.push_back(std::move(prof.weights));
  }
  for (std::size_t i = 0; i < energies.size(); ++i) {
    std::vector<Cell> row{energies[i] / k.rest_energy()};
    for (const auto& c : cols) row.push_back(c[i]);
    ds.add_row(std::move(row));
  }
  return ds;
}

/// Vorticity of the Dirac velocity of the spin-up exponential beam.
inline FigureDataset figure3_dataset(const FigureOptions& o) {
  const auto& k = o.k;
  BeamParams p;
  p.l = o.l;
  p.b = o.b;
  p.p_z = o.p_z * k.mass() * k.c();
  if (!(p.b > 0.0)) throw std::invalid_argument("fig3: b must be > 0");
  const auto field = packet_field(ScalarKind::exponential, SpinChoice::up, p, k, ExpNormalization::unit_at_origin);
  const auto v = dirac_velocity_sampler(field, k);
  const double step = o.fd_step * k.lambda_bar();
  const double t = o.t * k.lambda_bar() / k.c();

  auto ds = detail::start_dataset("fig3", o);
  ds.add_meta("l", std::to_string(o.l));
  ds.add_meta("b", detail::b_label(o.b));
  ds.add_meta("p_z", detail::b_label(o.p_z));
  ds.add_meta("t", detail::b_label(o.t));
  ds.add_meta("slice", o.slice);
  ds.add_meta("fd_step", detail::b_label(o.fd_step));
  ds.add_meta("normalization", "exponential packet divided by exp(-b); density in those units");
  ds.add_meta("missing", "vorticity NA where the density underflows or the point is within 2 fd steps of the axis");

  auto emit = [&](double x_col, double y_col, const SpacetimePoint& x) {
    const double dens = field(x).norm2();
    Cell w_abs, w_phi;
    if (dens > 0.0 && x.rho >= 2.0 * step) {
      try {
        const Vec3 w = curl(v, x, step);
        const double scale = k.c() / k.lambda_bar();
        if (std::isfinite(w.norm())) {
          w_abs = w.norm() / scale;
          w_phi = w.to_cylindrical(x.phi).y / scale;
        }
      } catch (const DomainError&) {
      }
    }
    ds.add_row({x_col, y_col, w_abs, w_phi, dens});
  };

  if (o.slice == "meridional") {
    const GridRange gr = o.grid_rho.value_or(GridRange{1.0, 100.0, 100});
    const GridRange gz = o.grid_z.value_or(GridRange{-50.0, 50.0, 41});
    if (!(gr.min > 0.0)) throw std::invalid_argument("fig3: meridional rho grid must start above 0");
    ds.add_meta("grid_rho", gr.str());
    ds.add_meta("grid_z", gz.str());
    ds.columns = {"rho_over_lambda", "z_over_lambda", "w_abs", "w_phi", "density"};
    for (double z : gz.values())
      for (double r : gr.values()) emit(r, z, {r * k.lambda_bar(), 0.0, z * k.lambda_bar(), t});
  } else if (o.slice == "transverse") {
    // --grid-rho gives the x and y range of the square slice at z = 0.
    const GridRange gxy = o.grid_rho.value_or(GridRange{-50.0, 50.0, 80});
    ds.add_meta("grid_xy", gxy.str());
    ds.columns = {"x_over_lambda", "y_over_lambda", "w_abs", "w_phi", "density"};
    for (double yv : gxy.values())
      for (double xv : gxy.values()) {
        const double r = std::hypot(xv, yv);
        emit(xv, yv, {r * k.lambda_bar(), std::atan2(yv, xv), 0.0, t});
      }
  } else {
    throw std::invalid_argument("fig3: slice must be meridional or transverse");
  }
  return ds;
}

struct SampleOptions {
  PhysicalConstants k;
  ScalarKind kind = ScalarKind::exponential;
  SpinChoice spin = SpinChoice::up;
  BeamParams params;  // dimensional
};

/// Field values at the (rho, phi, z, t) rows of `points` (lambda-bar units).
inline FigureDataset sample_dataset(const SampleOptions& o, const FigureDataset& points) {
  const std::size_t ir = points.column("rho"), ip = points.column("phi"), iz = points.column("z"),
                    it = points.column("t");
  const auto& k = o.k;
  const bool has_bispinor = o.kind != ScalarKind::lg_nonrel;
  FigureDataset ds;
  ds.add_meta("tool", std::string(kToolVersion));
  ds.add_meta("command", "sample");
  ds.add_meta("kind", std::string(to_string(o.kind)));
  ds.add_meta("spin", std::string(to_string(o.spin)));
  {
    std::ostringstream os;
    os.precision(17);
    os << "l=" << o.params.l << " p_z=" << o.params.p_z / (k.mass() * k.c()) << " b=" << o.params.b;
    if (o.params.energy) os << " E=" << *o.params.energy / k.rest_energy();
    os << " n=" << o.params.n << " w=" << o.params.w / k.lambda_bar();
    ds.add_meta("parameters", os.str());
  }
  ds.add_meta("units", detail::units_line(k));
  if (!has_bispinor) ds.add_meta("note", "lg_nonrel is a Schroedinger solution; bispinor columns are NA");
  ds.columns = {"rho", "phi", "z", "t", "f_re", "f_im"};
  for (const char* comp : {"phi1", "phi2", "chi1", "chi2"}) {
    ds.columns.push_back(std::string(comp) + "_re");
    ds.columns.push_back(std::string(comp) + "_im");
  }
  for (const char* c : {"density", "vx_over_c", "vy_over_c", "vz_over_c"}) ds.columns.push_back(c);

  for (const auto& row : points.rows) {
    if (!row[ir] || !row[ip] || !row[iz] || !row[it]) throw FormatError("points file: missing coordinate");
    const SpacetimePoint x{*row[ir] * k.lambda_bar(), *row[ip], *row[iz] * k.lambda_bar(),
                           *row[it] * k.lambda_bar() / k.c()};
    if (x.rho < 0.0) throw FormatError("points file: negative rho");
    const ScalarJet jet = eval_scalar(o.kind, o.params, k, x);
    std::vector<Cell> out{*row[ir], *row[ip], *row[iz], *row[it], jet.value.real(), jet.value.imag()};
    if (has_bispinor) {
      const Bispinor psi = build_bispinor(jet, o.spin, k, x.phi);
      for (const auto& c : psi.c) {
        out.push_back(c.real());
        out.push_back(c.imag());
      }
      const double dens = psi.norm2();
      out.push_back(dens);
      if (dens > 0.0) {
        const Vec3 vd = dirac_velocity(psi, k).v * (1.0 / k.c());
        out.insert(out.end(), {vd.x, vd.y, vd.z});
      } else {
        out.insert(out.end(), {Cell{}, Cell{}, Cell{}});
      }
    } else {
      for (int i = 0; i < 8; ++i) out.emplace_back();
      out.push_back(std::norm(jet.value));
      out.insert(out.end(), {Cell{}, Cell{}, Cell{}});
    }
    ds.add_row(std::move(out));
  }
  return ds;
}

}  // namespace diracbeams
