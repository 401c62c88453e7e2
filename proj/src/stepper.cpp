#include "viscodg/stepper.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace viscodg {

namespace {

SparseMatrix build_step_matrix(const AssembledSystem& sys, const SchemeCoefficients& c, Scheme scheme)
{
    const double dt = c.dt;
    const std::vector<double> w{2.0 / (dt * dt), 0.5 * c.gamma(scheme), 1.0 / dt};
    const std::vector<const SparseMatrix*> mats{&sys.mass, &sys.stiffness, &sys.jump};
    return linear_combination(w, mats);
}

void check_size(std::span<const double> v, std::size_t n, const char* what)
{
    if (v.size() != n) {
        throw std::invalid_argument(std::string("TimeStepper: ") + what + " has the wrong length");
    }
}

}  // namespace

std::string_view scheme_name(Scheme scheme)
{
    return scheme == Scheme::Displacement ? "displacement" : "velocity";
}

SchemeCoefficients SchemeCoefficients::compute(const PronyMaterial& material, double dt)
{
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("SchemeCoefficients: dt must be positive");
    }
    SchemeCoefficients s;
    s.dt = dt;
    s.phi0 = material.phi0();
    s.gamma_d = 1.0;
    s.gamma_v = material.phi0();
    for (std::size_t q = 0; q < material.num_terms(); ++q) {
        const double tau = material.taus()[q];
        const double phi = material.phis()[q];
        const double den = 2.0 * tau + dt;
        s.a.push_back((2.0 * tau - dt) / den);
        s.b.push_back(phi * dt / den);
        s.c.push_back(2.0 * tau * phi / den);
        s.gamma_d -= s.b.back();
        s.gamma_v += s.c.back();
    }
    return s;
}

InitialData project_initial_data(const DGSpace& space, const PronyMaterial& material, const AssembledSystem& system,
                                 const VectorFunctionWithGradient& u0, const VectorFunction& w0,
                                 SolverMethod method)
{
    InitialData d;
    const auto rhs_u = assemble_elliptic_rhs(space, material, system.penalty, u0);
    d.U0 = Factorization(system.stiffness, method).solve(rhs_u);
    const auto rhs_w = assemble_l2_rhs(space, w0);
    d.W0 = Factorization(system.mass0).solve(rhs_w);
    return d;
}

State initial_state(Scheme scheme, const InitialData& data, std::size_t num_terms)
{
    if (data.U0.size() != data.W0.size()) {
        throw std::invalid_argument("initial_state: U0 and W0 differ in length");
    }
    State s;
    s.scheme = scheme;
    s.U = data.U0;
    s.W = data.W0;
    s.internal.assign(num_terms, std::vector<double>(data.U0.size(), 0.0));
    return s;
}

TimeStepper::TimeStepper(Scheme scheme, const AssembledSystem& system, const PronyMaterial& material, double dt,
                         SolverMethod method)
    : scheme_(scheme),
      system_(&system),
      phis_(material.phis()),
      taus_(material.taus()),
      coeffs_(SchemeCoefficients::compute(material, dt)),
      k_(build_step_matrix(system, coeffs_, scheme)),
      factor_(k_, method)
{
}

State TimeStepper::step(const State& state, std::span<const double> load_average) const
{
    if (state.scheme != scheme_) {
        throw std::invalid_argument("TimeStepper::step: state belongs to the other scheme");
    }
    const AssembledSystem& sys = *system_;
    const std::size_t n = k_.size();
    check_size(state.U, n, "U");
    check_size(state.W, n, "W");
    check_size(load_average, n, "load");
    if (state.internal.size() != coeffs_.a.size()) {
        throw std::invalid_argument("TimeStepper::step: wrong number of internal variables");
    }
    const double dt = coeffs_.dt;

    // Collect the mass and stiffness contributions so each operator is applied once.
    std::vector<double> mv(n);
    std::vector<double> av(n);
    double u_coeff = 0.0;
    if (scheme_ == Scheme::Displacement) {
        u_coeff = -0.5 * coeffs_.gamma_d;
    } else {
        double sum_c = 0.0;
        for (double c : coeffs_.c) {
            sum_c += c;
        }
        u_coeff = -0.5 * (coeffs_.phi0 - sum_c);
    }
    const double sign = scheme_ == Scheme::Displacement ? 0.5 : -0.5;
    for (std::size_t i = 0; i < n; ++i) {
        mv[i] = (2.0 / (dt * dt)) * state.U[i] + (2.0 / dt) * state.W[i];
        double a = u_coeff * state.U[i];
        for (std::size_t q = 0; q < coeffs_.a.size(); ++q) {
            a += sign * (1.0 + coeffs_.a[q]) * state.internal[q][i];
        }
        av[i] = a;
    }
    std::vector<double> rhs(load_average.begin(), load_average.end());
    const auto m_part = sys.mass.multiply(mv);
    const auto a_part = sys.stiffness.multiply(av);
    const auto j_part = sys.jump.multiply(state.U);
    for (std::size_t i = 0; i < n; ++i) {
        rhs[i] += m_part[i] + a_part[i] + j_part[i] / dt;
    }

    State next;
    next.scheme = scheme_;
    next.step = state.step + 1;
    next.t = static_cast<double>(next.step) * dt;
    next.U = factor_.solve(rhs);
    next.W.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        next.W[i] = (2.0 / dt) * (next.U[i] - state.U[i]) - state.W[i];
    }
    next.internal.resize(state.internal.size());
    for (std::size_t q = 0; q < state.internal.size(); ++q) {
        auto& z = next.internal[q];
        z.resize(n);
        const auto& prev = state.internal[q];
        if (scheme_ == Scheme::Displacement) {
            for (std::size_t i = 0; i < n; ++i) {
                z[i] = coeffs_.a[q] * prev[i] + coeffs_.b[q] * (next.U[i] + state.U[i]);
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                z[i] = coeffs_.a[q] * prev[i] + coeffs_.c[q] * (next.U[i] - state.U[i]);
            }
        }
    }
    return next;
}

std::vector<double> TimeStepper::velocity_load(std::vector<double> fd, double t, std::span<const double> au0) const
{
    check_size(fd, au0.size(), "load");
    double s = 0.0;
    for (std::size_t q = 0; q < phis_.size(); ++q) {
        s += phis_[q] * std::exp(-t / taus_[q]);
    }
    for (std::size_t i = 0; i < fd.size(); ++i) {
        fd[i] -= s * au0[i];
    }
    return fd;
}

State TimeStepper::run(const State& initial, const LoadFunction& load, std::size_t steps,
                       const StepObserver& observer) const
{
    if (initial.step != 0) {
        throw std::invalid_argument("TimeStepper::run: expects a step-0 state");
    }
    const std::size_t n = k_.size();
    std::vector<double> au0;
    if (scheme_ == Scheme::Velocity) {
        au0 = system_->stiffness.multiply(initial.U);
    }
    auto form_load = [&](double t) {
        std::vector<double> f = load ? load(t) : std::vector<double>(n, 0.0);
        check_size(f, n, "load");
        return scheme_ == Scheme::Velocity ? velocity_load(std::move(f), t, au0) : f;
    };

    State state = initial;
    std::vector<double> f_prev = form_load(0.0);
    std::vector<double> avg(n);
    for (std::size_t s = 0; s < steps; ++s) {
        const double t_next = static_cast<double>(s + 1) * coeffs_.dt;
        std::vector<double> f_next = form_load(t_next);
        for (std::size_t i = 0; i < n; ++i) {
            avg[i] = 0.5 * (f_next[i] + f_prev[i]);
        }
        state = step(state, avg);
        f_prev = std::move(f_next);
        if (observer) {
            observer(state);
        }
    }
    return state;
}

std::size_t step_count(double T, double dt)
{
    if (!(T >= 0.0) || !(dt > 0.0)) {
        throw std::invalid_argument("step_count: need T >= 0 and dt > 0");
    }
    const double ratio = T / dt;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
        throw std::invalid_argument("step_count: T/dt is not an integer");
    }
    return static_cast<std::size_t>(rounded);
}

double discrete_energy(const AssembledSystem& system, const State& state)
{
    return system.mass.bilinear(state.W, state.W) + system.energy_norm_squared(state.U);
}

}  // namespace viscodg
