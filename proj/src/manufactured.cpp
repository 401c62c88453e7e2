#include "viscodg/manufactured.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace viscodg {

namespace {

constexpr double boundary_tol = 1e-12;

void check_time(double t)
{
    if (t < 0.0) {
        throw std::invalid_argument("ManufacturedCase: negative time");
    }
}

// Spatial factors of the two separable modes and their derivatives.
struct Modes {
    double xy;
    double s;  // sin(xy)
    double c;  // cos(xy)
};

Modes modes(const Vec2& p)
{
    const double xy = p[0] * p[1];
    return {xy, std::sin(xy), std::cos(xy)};
}

FieldSample separable_field(const Vec2& p, SeparableCoefficients k)
{
    const Modes m = modes(p);
    FieldSample f;
    f.value = {k.xy * m.xy, k.sine * m.s};
    f.gradient = {{{k.xy * p[1], k.xy * p[0]}, {k.sine * p[1] * m.c, k.sine * p[0] * m.c}}};
    return f;
}

}  // namespace

ManufacturedCase::ManufacturedCase(PronyMaterial material)
    : material_(std::move(material)), lame_(lame_parameters(material_.elastic()))
{
}

SeparableCoefficients ManufacturedCase::displacement_profile(double t) const
{
    return {std::exp(1.0 - t), std::cos(t)};
}

SeparableCoefficients ManufacturedCase::internal_profile(std::size_t q, double t) const
{
    const double phi = material_.phis()[q];
    const double tau = material_.taus()[q];
    const double a = 1.0 / tau;
    SeparableCoefficients k;
    // tau = 1 is the resonant limit phi t e^{1-t}/tau.
    if (std::abs(1.0 - tau) < 1e-12) {
        k.xy = phi * t * std::exp(1.0 - t) / tau;
    } else {
        k.xy = phi * (std::exp(1.0 - t) - std::exp(1.0 - t / tau)) / (1.0 - tau);
    }
    k.sine = phi * a * (a * std::cos(t) + std::sin(t) - a * std::exp(-a * t)) / (a * a + 1.0);
    return k;
}

SeparableCoefficients ManufacturedCase::zeta_profile(std::size_t q, double t) const
{
    const double phi = material_.phis()[q];
    const double tau = material_.taus()[q];
    const double a = 1.0 / tau;
    SeparableCoefficients k;
    k.xy = -tau * internal_profile(q, t).xy;
    k.sine = -phi * (a * std::sin(t) - std::cos(t) + std::exp(-a * t)) / (a * a + 1.0);
    return k;
}

SeparableCoefficients ManufacturedCase::effective_profile(double t) const
{
    SeparableCoefficients k = displacement_profile(t);
    for (std::size_t q = 0; q < material_.num_terms(); ++q) {
        const auto p = internal_profile(q, t);
        k.xy -= p.xy;
        k.sine -= p.sine;
    }
    return k;
}

FieldSample ManufacturedCase::displacement(const Vec2& x, double t) const
{
    check_time(t);
    return separable_field(x, displacement_profile(t));
}

FieldSample ManufacturedCase::velocity(const Vec2& x, double t) const
{
    check_time(t);
    return separable_field(x, {-std::exp(1.0 - t), -std::sin(t)});
}

Vec2 ManufacturedCase::acceleration(const Vec2& x, double t) const
{
    check_time(t);
    return separable_field(x, {std::exp(1.0 - t), -std::cos(t)}).value;
}

ManufacturedCase::Internal ManufacturedCase::internal(std::size_t q, const Vec2& x, double t) const
{
    if (q >= material_.num_terms()) {
        throw std::out_of_range("ManufacturedCase::internal: term index out of range");
    }
    check_time(t);
    return {separable_field(x, internal_profile(q, t)).value, separable_field(x, zeta_profile(q, t)).value};
}

Mat2 ManufacturedCase::separable_stress(const Vec2& x, SeparableCoefficients c) const
{
    return apply_elastic(material_, sym(separable_field(x, c).gradient));
}

// div D eps(v) = mu lap v + (lambda + mu) grad div v for v = (c.xy xy, c.sine sin(xy)).
Vec2 ManufacturedCase::separable_divergence(const Vec2& p, SeparableCoefficients c) const
{
    const Modes m = modes(p);
    const double mu = lame_.mu;
    const double lm = lame_.lambda + lame_.mu;
    const double x = p[0];
    const double y = p[1];
    const Vec2 from_xy{0.0, lm * c.xy};
    const Vec2 from_sine{lm * c.sine * (m.c - m.xy * m.s),
                         -mu * c.sine * (x * x + y * y) * m.s - lm * c.sine * x * x * m.s};
    return from_xy + from_sine;
}

Mat2 ManufacturedCase::stress(const Vec2& x, double t) const
{
    check_time(t);
    return separable_stress(x, effective_profile(t));
}

Mat2 ManufacturedCase::stress_velocity_form(const Vec2& x, double t) const
{
    check_time(t);
    const auto u = displacement_profile(t);
    const auto u0 = displacement_profile(0.0);
    SeparableCoefficients k{material_.phi0() * u.xy, material_.phi0() * u.sine};
    for (std::size_t q = 0; q < material_.num_terms(); ++q) {
        const auto z = zeta_profile(q, t);
        const double decay = material_.phis()[q] * std::exp(-t / material_.taus()[q]);
        k.xy += z.xy + decay * u0.xy;
        k.sine += z.sine + decay * u0.sine;
    }
    return separable_stress(x, k);
}

Vec2 ManufacturedCase::body_force(const Vec2& x, double t) const
{
    return material_.rho() * acceleration(x, t) - separable_divergence(x, effective_profile(t));
}

Vec2 ManufacturedCase::traction(const Vec2& x, double t, const Vec2& normal) const
{
    if (std::abs(x[0] - 1.0) > boundary_tol && std::abs(x[1] - 1.0) > boundary_tol) {
        throw std::invalid_argument("ManufacturedCase::traction: point is not on the traction boundary");
    }
    return stress(x, t) * normal;
}

std::vector<ManufacturedCase::LoadTerm> ManufacturedCase::load_terms() const
{
    const double rho = material_.rho();
    std::vector<LoadTerm> terms;
    terms.push_back({[](double t) { return std::exp(1.0 - t); },
                     [rho](const Vec2& p) { return Vec2{rho * p[0] * p[1], 0.0}; }, {}});
    terms.push_back({[](double t) { return -std::cos(t); },
                     [rho](const Vec2& p) { return Vec2{0.0, rho * std::sin(p[0] * p[1])}; }, {}});
    terms.push_back({[this](double t) { return effective_profile(t).xy; },
                     [this](const Vec2& p) { return -1.0 * separable_divergence(p, {1.0, 0.0}); },
                     [this](const Vec2& p, const Vec2& n) { return separable_stress(p, {1.0, 0.0}) * n; }});
    terms.push_back({[this](double t) { return effective_profile(t).sine; },
                     [this](const Vec2& p) { return -1.0 * separable_divergence(p, {0.0, 1.0}); },
                     [this](const Vec2& p, const Vec2& n) { return separable_stress(p, {0.0, 1.0}) * n; }});
    return terms;
}

VectorFunctionWithGradient ManufacturedCase::displacement_at(double t) const
{
    check_time(t);
    return [this, t](const Vec2& x) { return displacement(x, t); };
}

VectorFunctionWithGradient ManufacturedCase::velocity_at(double t) const
{
    check_time(t);
    return [this, t](const Vec2& x) { return velocity(x, t); };
}

SeparableLoad::SeparableLoad(const DGSpace& space, std::vector<ManufacturedCase::LoadTerm> terms)
{
    const LoadAssembler assembler(space);
    for (auto& term : terms) {
        vectors_.push_back(assembler.assemble(term.body, term.traction));
        coefficients_.push_back(std::move(term.coefficient));
    }
}

std::vector<double> SeparableLoad::operator()(double t) const
{
    std::vector<double> f(vectors_.empty() ? 0 : vectors_.front().size(), 0.0);
    for (std::size_t i = 0; i < vectors_.size(); ++i) {
        const double c = coefficients_[i](t);
        const auto& v = vectors_[i];
        for (std::size_t j = 0; j < f.size(); ++j) {
            f[j] += c * v[j];
        }
    }
    return f;
}

}  // namespace viscodg
