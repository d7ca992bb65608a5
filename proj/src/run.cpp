#include "debranges/run.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "debranges/gram.hpp"
#include "debranges/structure.hpp"

namespace debranges {

namespace {

using nlohmann::json;

cplx parse_complex(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(field, "complex numbers are written as [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<cplx> parse_complex_list(const json& j, const std::string& field) {
  if (!j.is_array()) throw ConfigError(field, "expected a list of [re, im] pairs");
  std::vector<cplx> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(parse_complex(j[k], field + "[" + std::to_string(k) + "]"));
  return out;
}

double number(const json& obj, const char* key, const std::string& field) {
  if (!obj.contains(key) || !obj[key].is_number()) throw ConfigError(field + "." + key, "missing or not a number");
  return obj[key].get<double>();
}

int integer(const json& obj, const char* key, const std::string& field) {
  if (!obj.contains(key) || !obj[key].is_number_integer())
    throw ConfigError(field + "." + key, "missing or not an integer");
  return obj[key].get<int>();
}

StructureFunction parse_space(const json& j) {
  if (!j.is_object()) throw ConfigError("space", "expected an object");
  if (!j.contains("family") || !j["family"].is_string()) throw ConfigError("space.family", "missing");
  const std::string family = j["family"].get<std::string>();
  try {
    if (family == "paley_wiener") {
      const double x = number(j, "x", "space");
      if (j.contains("max_derivative_order"))
        return StructureFunction::paley_wiener(x, integer(j, "max_derivative_order", "space"));
      return StructureFunction::paley_wiener(x);
    }
    if (family == "polynomial_hb") {
      if (!j.contains("roots")) throw ConfigError("space.roots", "missing");
      auto roots = parse_complex_list(j["roots"], "space.roots");
      if (j.contains("max_derivative_order"))
        return StructureFunction::polynomial_hb(std::move(roots), integer(j, "max_derivative_order", "space"));
      return StructureFunction::polynomial_hb(std::move(roots));
    }
  } catch (const DomainError& e) {
    throw ConfigError("space", e.what());
  }
  throw ConfigError("space.family", "unknown family '" + family + "' (paley_wiener | polynomial_hb)");
}

Command parse_command(const json& j) {
  if (!j.is_string()) throw ConfigError("command", "expected a string");
  const std::string c = j.get<std::string>();
  if (c == "kernel") return Command::Kernel;
  if (c == "structure") return Command::Structure;
  if (c == "verify") return Command::Verify;
  if (c == "pw-example") return Command::PwExample;
  throw ConfigError("command", "unknown command '" + c + "' (kernel | structure | verify | pw-example)");
}

GridSpec parse_grid(const json& j) {
  if (!j.is_object()) throw ConfigError("grid", "expected an object");
  GridSpec g{number(j, "re_min", "grid"), number(j, "re_max", "grid"), integer(j, "re_steps", "grid"),
             number(j, "im_min", "grid"), number(j, "im_max", "grid"), integer(j, "im_steps", "grid")};
  if (g.re_steps < 1) throw ConfigError("grid.re_steps", "must be >= 1");
  if (g.im_steps < 1) throw ConfigError("grid.im_steps", "must be >= 1");
  if (!(g.re_min <= g.re_max)) throw ConfigError("grid.re_min", "must not exceed re_max");
  if (!(g.im_min <= g.im_max)) throw ConfigError("grid.im_min", "must not exceed im_max");
  return g;
}

double grid_coord(double lo, double hi, int steps, int k) {
  if (steps == 1) return lo;
  return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(steps - 1);
}

void write_csv_value(std::ostream& os, cplx v) { os << format_number(v.real()) << ',' << format_number(v.imag()); }

std::string complex_text(cplx v) { return "(" + format_number(v.real()) + "," + format_number(v.imag()) + ")"; }

int execute(const RunConfig& cfg, std::ostream& os) {
  const ZeroSequence zs = canonicalize(cfg.sigma);
  switch (cfg.command) {
    case Command::Kernel: {
      const GramSystem gs = GramSystem::build(cfg.space, zs);
      const auto points = evaluation_points(cfg);
      if (cfg.format == OutputFormat::Csv) os << "re_z,im_z,re_w,im_w,re_val,im_val\n";
      for (const cplx& z : cfg.z_points) {
        for (const cplx& w : points) {
          const cplx v = sigma_kernel(gs, z, w);
          if (cfg.format == OutputFormat::Csv) {
            write_csv_value(os, z);
            os << ',';
            write_csv_value(os, w);
            os << ',';
            write_csv_value(os, v);
            os << '\n';
          } else {
            os << "z=" << complex_text(z) << " w=" << complex_text(w) << " value=" << complex_text(v) << '\n';
          }
        }
      }
      return kExitOk;
    }
    case Command::Structure: {
      const SigmaStructureFunction ssf = derive(GramSystem::build(cfg.space, zs));
      const auto points = evaluation_points(cfg);
      if (cfg.format == OutputFormat::Csv) os << "re_w,im_w,re_val,im_val\n";
      for (const cplx& w : points) {
        const cplx v = ssf.eval(cfg.which, w);
        if (cfg.format == OutputFormat::Csv) {
          write_csv_value(os, w);
          os << ',';
          write_csv_value(os, v);
          os << '\n';
        } else {
          os << "w=" << complex_text(w) << " value=" << complex_text(v) << '\n';
        }
      }
      return kExitOk;
    }
    case Command::Verify: {
      const auto reports = run_default_suite(cfg.space, zs.points(), cfg.seed, cfg.tolerances);
      write_reports(os, reports, cfg.format);
      for (const auto& r : reports)
        if (!r.passed) return kExitCheckFailed;
      return kExitOk;
    }
    case Command::PwExample: {
      if (!cfg.space.is_paley_wiener()) throw ConfigError("space.family", "pw-example needs the paley_wiener family");
      const std::vector<cplx> samples = cfg.eval_points.value_or(std::vector<cplx>{{0.0, 2.0}, {0.5, 1.5}});
      const auto reports = check_pw_example(cfg.space.pw_type(), zs.points(), samples,
                                            cfg.tolerances.base(checks::kPwNorm));
      write_reports(os, reports, cfg.format);
      for (const auto& r : reports)
        if (!r.passed) return kExitCheckFailed;
      return kExitOk;
    }
  }
  return kExitConfigError;
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", e.what());
  }
  if (!j.is_object()) throw ConfigError("<document>", "top level must be an object");

  RunConfig cfg;
  if (!j.contains("space")) throw ConfigError("space", "missing");
  cfg.space = parse_space(j["space"]);
  if (!j.contains("command")) throw ConfigError("command", "missing");
  cfg.command = parse_command(j["command"]);
  if (j.contains("sigma")) cfg.sigma = parse_complex_list(j["sigma"], "sigma");
  if (j.contains("grid")) cfg.grid = parse_grid(j["grid"]);
  if (j.contains("eval_points")) cfg.eval_points = parse_complex_list(j["eval_points"], "eval_points");
  if (j.contains("z_points")) cfg.z_points = parse_complex_list(j["z_points"], "z_points");
  if (j.contains("which")) {
    const std::string w = j["which"].is_string() ? j["which"].get<std::string>() : "";
    if (w == "E_sigma")
      cfg.which = Which::E_sigma;
    else if (w == "F_sigma")
      cfg.which = Which::F_sigma;
    else
      throw ConfigError("which", "expected \"E_sigma\" or \"F_sigma\"");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("seed", "expected an unsigned 64-bit integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) throw ConfigError("tolerances", "expected an object");
    for (const auto& [key, value] : j["tolerances"].items()) {
      if (!value.is_number()) throw ConfigError("tolerances." + key, "expected a number");
      try {
        cfg.tolerances.set(key, value.get<double>());
      } catch (const DomainError& e) {
        throw ConfigError("tolerances." + key, e.what());
      }
    }
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    if (!o.is_object()) throw ConfigError("output", "expected an object");
    if (o.contains("path")) {
      if (!o["path"].is_string()) throw ConfigError("output.path", "expected a string");
      cfg.output_path = o["path"].get<std::string>();
    }
    if (o.contains("format")) {
      const std::string f = o["format"].is_string() ? o["format"].get<std::string>() : "";
      if (f == "csv")
        cfg.format = OutputFormat::Csv;
      else if (f == "structured-text")
        cfg.format = OutputFormat::StructuredText;
      else
        throw ConfigError("output.format", "expected \"csv\" or \"structured-text\"");
    }
  }

  if (cfg.command == Command::Kernel || cfg.command == Command::Structure) {
    if (cfg.grid.has_value() == cfg.eval_points.has_value())
      throw ConfigError(cfg.grid ? "grid" : "eval_points", "exactly one of grid / eval_points is required");
  }
  return cfg;
}

std::vector<cplx> evaluation_points(const RunConfig& config) {
  if (config.eval_points) return *config.eval_points;
  std::vector<cplx> pts;
  if (!config.grid) return pts;
  const GridSpec& g = *config.grid;
  for (int b = 0; b < g.im_steps; ++b)
    for (int a = 0; a < g.re_steps; ++a)
      pts.emplace_back(grid_coord(g.re_min, g.re_max, g.re_steps, a), grid_coord(g.im_min, g.im_max, g.im_steps, b));
  return pts;
}

void write_reports(std::ostream& os, const std::vector<CheckReport>& reports, OutputFormat format) {
  std::size_t passed = 0;
  if (format == OutputFormat::Csv) os << "check_id,samples,max_rel_residual,tolerance,condition_estimate,passed,note\n";
  for (const auto& r : reports) {
    if (r.passed) ++passed;
    std::string note = r.note;
    for (const auto& [k, v] : r.metrics) note += (note.empty() ? "" : "; ") + k + "=" + format_number(v);
    if (format == OutputFormat::Csv) {
      os << r.check_id << ',' << r.samples << ',' << format_number(r.max_rel_residual) << ','
         << format_number(r.tolerance) << ',' << format_number(r.condition_estimate) << ','
         << (r.passed ? "true" : "false") << ",\"" << note << "\"\n";
    } else {
      os << "check_id=" << r.check_id << " samples=" << r.samples
         << " max_rel_residual=" << format_number(r.max_rel_residual) << " tolerance=" << format_number(r.tolerance)
         << " condition_estimate=" << format_number(r.condition_estimate) << " passed=" << (r.passed ? "true" : "false");
      for (const auto& [k, v] : r.metrics) os << ' ' << k << '=' << format_number(v);
      if (!r.note.empty()) os << " note=\"" << r.note << '"';
      os << '\n';
    }
  }
  if (passed == reports.size())
    os << "PASS " << passed << '/' << reports.size() << '\n';
  else
    os << "FAIL " << passed << '/' << reports.size() << '\n';
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::ofstream file;
  std::ostream* os = &out;
  if (!config.output_path.empty()) {
    file.open(config.output_path, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "error: cannot open output path '" << config.output_path << "'\n";
      return kExitConfigError;
    }
    os = &file;
  }
  try {
    return execute(config, *os);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const LinearDependenceError& e) {
    err << "error: " << e.what() << " (condition estimate " << format_number(e.condition_estimate()) << ")\n";
    return kExitNumericalBreakdown;
  } catch (const UnsupportedOrderError& e) {
    err << "error: config field 'sigma': " << e.what() << '\n';
    return kExitConfigError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumericalBreakdown;
  }
}

}  // namespace debranges
