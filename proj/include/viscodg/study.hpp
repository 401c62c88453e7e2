#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "viscodg/errors.hpp"
#include "viscodg/stepper.hpp"

namespace viscodg {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class StudyKind { Single, HConvergence, TConvergence, Penalty, Stability };

/// manufactured: loads and initial data of the exact solution.
/// zero: no loads and zero initial data (errors are then the exact norms).
/// homogeneous: no loads, initial data of the exact solution.
enum class DataKind { Manufactured, Zero, Homogeneous };

std::string_view study_name(StudyKind kind);
std::string_view data_name(DataKind kind);

struct StudyConfig {
    StudyKind study = StudyKind::Single;
    std::vector<Scheme> schemes{Scheme::Displacement};
    std::vector<int> degrees{1};
    std::vector<int> ns{4};
    std::vector<double> dts{0.25};
    bool dt_equals_h = false;  // dt = 1/n for each mesh
    double T = 1.0;
    std::vector<double> stability_times{5.0, 10.0};
    PenaltyParameters penalty;
    double rho = 1.0;
    double phi0 = 0.5;
    std::vector<double> phis{0.1, 0.4};
    std::vector<double> taus{0.5, 1.5};
    std::optional<IsotropicElastic> elastic;  // identity D when empty
    DataKind data = DataKind::Manufactured;
    SolverMethod solver = SolverMethod::Cholesky;
    std::string output;

    /// Throws ConfigError on any invalid combination.
    void validate() const;
    [[nodiscard]] PronyMaterial material() const;
    /// Time steps used on an n x n mesh.
    [[nodiscard]] std::vector<double> time_steps(int n) const;
};

/// "1/2048", "0.25" or "5e-3"; throws ConfigError.
double parse_number(std::string_view text);

/// `key = value` lines with `#` comments. Unknown keys and malformed values
/// raise ConfigError naming the line. The result is validated.
StudyConfig parse_config(std::string_view text);

struct StudyRow {
    Scheme scheme = Scheme::Displacement;
    int k = 1;
    int n = 1;
    double h = 0.0;
    double dt = 0.0;
    ErrorReport errors;
    bool breakdown = false;
    std::string message;
};

struct StabilityRow {
    Scheme scheme = Scheme::Displacement;
    int k = 1;
    int n = 1;
    double h = 0.0;
    double dt = 0.0;
    double T = 0.0;
    double max_energy = 0.0;  // max over steps of rho ||W||^2 + |||U|||^2 on [0, T]
};

struct StudyResult {
    StudyKind study = StudyKind::Single;
    bool dt_equals_h = false;
    std::vector<StudyRow> rows;  // grouped so that rates run along consecutive rows
    std::vector<StabilityRow> stability;
};

/// Runs every (scheme, k, n, dt) combination. Solver breakdown throws
/// SolverError except in the penalty study, where it is recorded in the row.
/// Progress lines go to `log` when given.
StudyResult run_study(const StudyConfig& config, std::ostream* log = nullptr);

/// Rates of row i against row i-1 for each error column; empty for the first
/// row of a group or when either row broke down.
std::vector<std::optional<std::array<double, 6>>> row_rates(const StudyResult& result);

void write_csv(std::ostream& out, const StudyResult& result);
void write_rate_table(std::ostream& out, const StudyResult& result);

}  // namespace viscodg
