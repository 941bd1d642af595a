#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orthospec/body.hpp"
#include "orthospec/measure.hpp"
#include "orthospec/observable.hpp"
#include "orthospec/orthospectrum.hpp"
#include "orthospec/transforms.hpp"
#include "orthospec/zeta.hpp"

#include "json.hpp"

namespace orthospec {

enum class Command { Spectrum, Count, Zeta, Residues, Scan, Guinand, Correlation, Laplace, Mellin };

Command command_from_string(const std::string& name);
std::string command_to_string(Command c);

/// Validated experiment description.
struct Scenario {
    Command command = Command::Spectrum;
    int dimension = 0;

    std::vector<ConvexBody> bodies;       // exactly two when present
    std::vector<Observable> observables;  // exactly two when present
    OneForm one_form;

    double T = 0.0;
    std::vector<double> t_values;         // count: cutoffs; correlation: times
    std::vector<Complex> s_values;
    std::string zeta_method = "continued";
    double t_max = 0.0;                   // direct zeta summation cutoff
    std::vector<double> tau_grid;
    std::vector<double> scales;
    double sigma = 0.0;                   // guinand extraction resolution
    int n_atoms = 20;

    int threads = 1;
    std::string out_dir = ".";

    // Numeric options (surfaced with documented defaults).
    SolverOptions solver;
    ConvexZetaOptions zeta_options;
    TransformOptions transform_options;
    ScanOptions scan_options;
};

/// Parses and validates a scenario document; unknown keys are rejected and
/// every reported error carries the offending field path.
Scenario parse_scenario(const nlohmann::json& config);

/// Runs the scenario and writes <command>.csv plus summary.json into out_dir.
/// Returns the summary document.  Outputs are byte-deterministic for a fixed
/// config, independent of the thread count.
nlohmann::json run(const Scenario& scenario);

/// Formats a double with round-trip precision (shared by all CSV writers).
std::string format_double(double x);

}  // namespace orthospec
