#ifndef DEBRANGES_RUN_HPP
#define DEBRANGES_RUN_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "debranges/errors.hpp"
#include "debranges/kernels.hpp"
#include "debranges/structure.hpp"
#include "debranges/verify.hpp"

namespace debranges {

enum class Command { Kernel, Structure, Verify, PwExample };
enum class OutputFormat { Csv, StructuredText };

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitConfigError = 2,
  kExitNumericalBreakdown = 3,
};

struct GridSpec {
  double re_min, re_max;
  int re_steps;
  double im_min, im_max;
  int im_steps;
};

/// A malformed configuration; field() names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error("config field '" + field + "': " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct RunConfig {
  StructureFunction space = StructureFunction::paley_wiener(1.0);
  std::vector<cplx> sigma;
  Command command = Command::Verify;
  std::optional<GridSpec> grid;
  std::optional<std::vector<cplx>> eval_points;
  /// First-argument points for the kernel command.
  std::vector<cplx> z_points{cplx{0.0, 1.0}};
  Which which = Which::E_sigma;
  std::uint64_t seed = 0;
  Tolerances tolerances;
  std::string output_path;  // empty: stdout
  OutputFormat format = OutputFormat::Csv;
};

/// Parses and validates a JSON configuration document. Throws ConfigError.
RunConfig parse_config(const std::string& json_text);

/// The points a kernel/structure run evaluates at, in output order
/// (grid rows by increasing imaginary part, real part fastest).
std::vector<cplx> evaluation_points(const RunConfig& config);

/// Executes the configured command, writing results to config.output_path
/// (or `out` when the path is empty) and diagnostics to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Formats a double with 17 significant digits.
std::string format_number(double v);

void write_reports(std::ostream& os, const std::vector<CheckReport>& reports, OutputFormat format);

}  // namespace debranges

#endif  // DEBRANGES_RUN_HPP
