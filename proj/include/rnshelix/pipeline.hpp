#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "rnshelix/curve.hpp"
#include "rnshelix/helix.hpp"
#include "rnshelix/synthesis.hpp"

namespace rnshelix {

inline constexpr const char* kToolName = "rnshelix";
inline constexpr const char* kToolVersion = "1.0.0";

enum class Mode { Analyze, Synthesize, CheckProps };

std::string_view to_string(Mode m);

/// Parsed input document. Expression errors surface as ParseError, schema
/// errors as Error(InvalidDocument).
struct InputDocument {
  std::optional<SurfaceSpec> surface;
  std::optional<CurveSpec> curve;
  std::optional<InvariantProfile> profile;
  std::optional<std::array<double, 2>> window;
  std::optional<int> samples;
  std::optional<double> h, eps, h_int;
};

InputDocument parse_document(const std::string& json_text);

/// Numerical settings after merging defaults, the document and explicit
/// command-line overrides (in increasing priority).
struct Settings {
  double tol = 1e-3;
  double eps = kDefaultNullEps;
  double h = 1e-4;
  int samples = 1001;
  double h_int = 1e-3;
};

struct Overrides {
  std::optional<double> tol, eps, h;
  std::optional<int> samples;
};

Settings resolve_settings(const InputDocument& doc, const Overrides& cli);

struct Artifacts {
  std::string report;  // report.json contents
  std::string csv;     // samples.csv contents
  std::size_t rows = 0;
  bool propositions_ok = true;
};

/// Runs the whole analysis in memory. Throws Error/ParseError on failure.
Artifacts run_document(const std::string& json_text, Mode mode, const Overrides& cli,
                       const std::string& input_label = "");

struct RunConfig {
  Mode mode = Mode::Analyze;
  std::string input;
  std::string out_dir = "./out";
  Overrides overrides;
};

/// Reads the input, writes report.json and samples.csv into out_dir and
/// returns the exit status: 0 success, 2 validation error, 3 numerical
/// failure. Partial outputs are removed on failure.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

inline constexpr const char* kCsvHeader = "s,kappa_g,kappa_n,tau_g,sigma,d1,d2,d3";

}  // namespace rnshelix
