#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace boxgap {

// ---------------------------------------------------------------------------
// run configuration
// ---------------------------------------------------------------------------

// Per-suite knobs, all desk-scale by default.  Documented ranges are enforced
// by validate_config; the finer structural preconditions (divisibility and
// resolution floors) live with the modules themselves.

struct PoincareParams {
  int gap_n = 256;       // 1-D grid for the spectral-gap checks, in [8, 4096]
  int sweep_n = 128;     // grid for the certifying-constant sweep, in [16, 1024]
  int sweep_M = 2;       // subdivision for the sweep, >= 2, divides sweep_n
  std::vector<double> eps_factors = {0.2, 0.1, 0.05};  // multiples of 1/pi^2, in (0, 1]
  std::vector<int> staircase_N = {1, 2, 4};            // profile indices, >= 1
  int staircase_n = 256;  // grid for the sharpness sweep
  int kinetic_n = 64;     // grid for the localization certificates, in [16, 1024]
  int kinetic_M = 4;      // subdivision for the localization certificates, >= 3
};

struct GraphParams {
  std::vector<int> M_values = {4, 8, 16, 32};  // lattice sides, each >= 2
  double p = 2.0;                              // vertex inequality exponent, > 1
  int trials = 40;                             // random profiles per constant
};

struct ScatteringParams {
  double amplitude = 2.0;        // square-well height, > 0
  double range = 0.5;            // support radius, in (0, 1)
  int n_r = 4096;                // radial integration nodes, in [64, 65536]
  double born_amplitude = 1e-3;  // weak-coupling height for the Born check
};

struct SymmetrizationParams {
  double amplitude = 2.0;          // smooth-bump height for the kernel checks
  double range = 0.5;              // smooth-bump support radius, in (0, 1)
  int order = 48;                  // quadrature order for the identity check, in [4, 64]
  int max_mode = 2;                // modes per axis in the identity check, in [0, 4]
  std::vector<int> ells = {8, 16, 32};  // cell scales for the boundary sweep, each >= 4
  double lambda = 0.5;             // cutoff radius, in (0, 1/2]
  int pairs = 5;                   // sampled point pairs for the kernel split
  int k_cut = 24;                  // mode truncation for the kernel split, >= 4
};

struct BogoliubovParams {
  double amplitude = 2.0;  // square well height, > 0
  double range = 0.5;      // square well radius, in (0, 1)
  double n = 4.0;          // particles per cell, > 0
  double ell = 16.0;       // cell scale, >= 2
  int cutoff = 64;         // mode cutoff per axis, >= 2
  int samples = 40;        // random coefficient pairs for the oracle check
  int n_max = 60;          // Fock truncation for the oracle check, >= 2
  int csv_cutoff = 8;      // mode cutoff of the emitted CSV table, >= 1
};

struct BudgetParams {
  int sweep_points = 100;  // kappa grid for the CSV sweep, in [2, 100000]
};

// Thrown for malformed configuration (unknown keys, out-of-range values,
// unparseable JSON or --set assignments); maps to the usage exit code.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::vector<std::string> suites = {"poincare",        "graph",      "scattering",
                                     "symmetrization",  "bogoliubov", "budget"};
  std::uint64_t seed = 2026;
  int workers = 2;                 // concurrent suite evaluations, in [1, 64]
  std::string out_dir = "reports";
  std::string format = "both";     // csv | json | both
  PoincareParams poincare;
  GraphParams graph;
  ScatteringParams scattering;
  SymmetrizationParams symmetrization;
  BogoliubovParams bogoliubov;
  BudgetParams budget;
};

RunConfig default_config();

// Parses a JSON config; unknown keys anywhere in the document are rejected,
// as are values outside the documented ranges.
RunConfig parse_config_json(const std::string& text);

// Builds the effective config from an optional file body plus a list of
// dotted "key=value" assignments (e.g. "bogoliubov.cutoff=32",
// "suites=budget,graph").  Assignment targets must exist in the schema and
// are typed by their defaults.
RunConfig load_config(const std::string* file_text, const std::vector<std::string>& sets);

void validate_config(const RunConfig& cfg);

// canonical JSON echo: fixed key order, floats at 17 significant digits
std::string config_to_json(const RunConfig& cfg);

// ---------------------------------------------------------------------------
// verification report
// ---------------------------------------------------------------------------

struct CheckRecord {
  std::string suite;
  std::string name;
  std::string anchor;   // short quote locating the claim being checked
  std::string params;   // rendered "key=value" list
  double value = 0.0;
  double reference = 0.0;  // target value or bound shape
  double tolerance = 0.0;
  std::string verdict;  // pass | fail | info
  std::string note;     // diagnostics, usually empty
};

bool operator==(const CheckRecord& a, const CheckRecord& b);

struct VerificationReport {
  std::string version;
  std::uint64_t seed = 0;
  RunConfig config;
  std::vector<CheckRecord> records;
  int passed = 0;
  int failed = 0;
  int infos = 0;
  std::map<std::string, std::string> csv;  // file name -> body
};

std::string tool_version();  // "0.1.0"

// ---------------------------------------------------------------------------
// declarative check registry
// ---------------------------------------------------------------------------

struct CheckInfo {
  std::string suite;
  std::string name;
  std::string anchor;
};

// Every check each suite can emit, in execution order; describe_checks and
// the runner both draw from this single table.
std::vector<CheckInfo> registered_checks();

// one line per registered check: suite, name, anchor quote
std::string describe_checks();

// ---------------------------------------------------------------------------
// execution
// ---------------------------------------------------------------------------

// Runs the requested suites (each seeded from cfg.seed xor a suite-name
// hash), up to cfg.workers at a time, and merges records in registry order so
// the result is byte-reproducible.  A suite that throws contributes fail
// records carrying the diagnostic instead of aborting the run.
VerificationReport run_suites(const RunConfig& cfg);

// deterministic emitter (17 significant digits) and its exact inverse
std::string report_to_json(const VerificationReport& r);
VerificationReport parse_report_json(const std::string& text);
bool reports_equal(const VerificationReport& a, const VerificationReport& b);

// Writes report.json and/or the per-suite CSV bodies under cfg.out_dir,
// honouring cfg.format; creates the directory if needed.
void write_report_files(const VerificationReport& r);

}  // namespace boxgap
