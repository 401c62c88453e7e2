#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "viscodg/assembly.hpp"

namespace viscodg {

enum class Scheme { Displacement, Velocity };

std::string_view scheme_name(Scheme scheme);

/// Per-step constants of the Crank-Nicolson internal-variable recurrences.
struct SchemeCoefficients {
    double dt = 0.0;
    double phi0 = 0.0;
    std::vector<double> a;  // (2 tau - dt) / (2 tau + dt)
    std::vector<double> b;  // phi dt / (2 tau + dt), displacement form
    std::vector<double> c;  // 2 tau phi / (2 tau + dt), velocity form
    double gamma_d = 0.0;   // 1 - sum b
    double gamma_v = 0.0;   // phi0 + sum c

    /// Throws std::invalid_argument unless dt > 0.
    static SchemeCoefficients compute(const PronyMaterial& material, double dt);

    [[nodiscard]] double gamma(Scheme scheme) const { return scheme == Scheme::Displacement ? gamma_d : gamma_v; }
};

struct State {
    Scheme scheme = Scheme::Displacement;
    std::size_t step = 0;
    double t = 0.0;
    std::vector<double> U;
    std::vector<double> W;
    /// Psi_q for the displacement form, S_q for the velocity form.
    std::vector<std::vector<double>> internal;
};

struct InitialData {
    std::vector<double> U0;  // elliptic projection of u0
    std::vector<double> W0;  // L2 projection of w0
};

/// a(U0, v) = a(u0, v) and (W0, v) = (w0, v) for all discrete v. With the
/// default method, throws SolverError if A is not SPD (penalty too small).
InitialData project_initial_data(const DGSpace& space, const PronyMaterial& material, const AssembledSystem& system,
                                 const VectorFunctionWithGradient& u0, const VectorFunction& w0,
                                 SolverMethod method = SolverMethod::Cholesky);

/// Step-0 state with zero internal variables.
State initial_state(Scheme scheme, const InitialData& data, std::size_t num_terms);

/// Displacement-form load vector F_d(t); an empty function means zero load.
using LoadFunction = std::function<std::vector<double>(double t)>;

/// Called after every step with the new state.
using StepObserver = std::function<void(const State&)>;

/// Crank-Nicolson stepper for one scheme and one time step. The step matrix
/// K = (2/dt^2) M + (gamma/2) A + (1/dt) J is factored once on construction.
class TimeStepper {
public:
    /// Throws SolverError if K is not SPD.
    TimeStepper(Scheme scheme, const AssembledSystem& system, const PronyMaterial& material, double dt,
                SolverMethod method = SolverMethod::Cholesky);

    [[nodiscard]] Scheme scheme() const { return scheme_; }
    [[nodiscard]] double dt() const { return coeffs_.dt; }
    [[nodiscard]] const SchemeCoefficients& coefficients() const { return coeffs_; }
    [[nodiscard]] const SparseMatrix& step_matrix() const { return k_; }

    /// One step with the averaged right-hand side (F^{n+1} + F^n)/2 of the
    /// stepper's own form (F_d or F_v).
    [[nodiscard]] State step(const State& state, std::span<const double> load_average) const;

    /// F_v(t) = F_d(t) - sum_q phi_q exp(-t/tau_q) A U0, with AU0 = A U0.
    [[nodiscard]] std::vector<double> velocity_load(std::vector<double> fd, double t,
                                                    std::span<const double> au0) const;

    /// Advances `steps` steps from a step-0 state. The velocity form takes
    /// a(u0, .) as A U0 from the initial state.
    [[nodiscard]] State run(const State& initial, const LoadFunction& load, std::size_t steps,
                            const StepObserver& observer = {}) const;

private:
    Scheme scheme_;
    const AssembledSystem* system_;
    std::vector<double> phis_;
    std::vector<double> taus_;
    SchemeCoefficients coeffs_;
    SparseMatrix k_;
    Factorization factor_;
};

/// Number of steps N with N dt = T; throws std::invalid_argument unless T/dt
/// is an integer to within 1e-9 relative.
std::size_t step_count(double T, double dt);

/// rho ||W||^2 + |||U|||^2.
double discrete_energy(const AssembledSystem& system, const State& state);

}  // namespace viscodg
