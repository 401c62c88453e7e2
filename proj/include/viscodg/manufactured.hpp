#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "viscodg/assembly.hpp"
#include "viscodg/material.hpp"
#include "viscodg/tensor.hpp"

namespace viscodg {

/// Time profiles of the separable field (A(t) xy, B(t) sin(xy)).
struct SeparableCoefficients {
    double xy = 0.0;
    double sine = 0.0;
};

/// Exact solution u = (x y e^{1-t}, cos(t) sin(x y)) on the unit square with
/// u = 0 on {x=0} and {y=0}, for any Prony material with isotropic or
/// identity D. Body force and traction follow from the momentum balance.
class ManufacturedCase {
public:
    explicit ManufacturedCase(PronyMaterial material = PronyMaterial::reference());

    [[nodiscard]] const PronyMaterial& material() const { return material_; }

    [[nodiscard]] FieldSample displacement(const Vec2& x, double t) const;
    [[nodiscard]] FieldSample velocity(const Vec2& x, double t) const;
    [[nodiscard]] Vec2 acceleration(const Vec2& x, double t) const;

    struct Internal {
        Vec2 psi{};   // displacement-form variable, tau psi' + psi = phi u
        Vec2 zeta{};  // velocity-form variable, tau zeta' + zeta = tau phi u'
    };
    /// Throws std::out_of_range for a bad term index and std::invalid_argument for t < 0.
    [[nodiscard]] Internal internal(std::size_t q, const Vec2& x, double t) const;

    /// D eps(u - sum psi_q).
    [[nodiscard]] Mat2 stress(const Vec2& x, double t) const;
    /// D eps(phi0 u + sum zeta_q + sum phi_q e^{-t/tau_q} u(0)); equal to stress().
    [[nodiscard]] Mat2 stress_velocity_form(const Vec2& x, double t) const;

    /// rho u'' - div D eps(u - sum psi_q).
    [[nodiscard]] Vec2 body_force(const Vec2& x, double t) const;

    /// stress . n; throws std::invalid_argument off {x=1} and {y=1}.
    [[nodiscard]] Vec2 traction(const Vec2& x, double t, const Vec2& normal) const;

    /// The load is F(t) = sum_i coefficient_i(t) (body_i, traction_i), which
    /// lets a driver assemble each spatial vector once. The terms refer to
    /// this case, which must outlive them.
    struct LoadTerm {
        std::function<double(double)> coefficient;
        VectorFunction body;
        TractionFunction traction;
    };
    [[nodiscard]] std::vector<LoadTerm> load_terms() const;

    /// Time profiles of u and of u - sum psi_q.
    [[nodiscard]] SeparableCoefficients displacement_profile(double t) const;
    [[nodiscard]] SeparableCoefficients effective_profile(double t) const;

    [[nodiscard]] VectorFunctionWithGradient displacement_at(double t) const;
    [[nodiscard]] VectorFunctionWithGradient velocity_at(double t) const;

private:
    [[nodiscard]] SeparableCoefficients internal_profile(std::size_t q, double t) const;
    [[nodiscard]] SeparableCoefficients zeta_profile(std::size_t q, double t) const;
    [[nodiscard]] Mat2 separable_stress(const Vec2& x, SeparableCoefficients c) const;
    [[nodiscard]] Vec2 separable_divergence(const Vec2& x, SeparableCoefficients c) const;

    PronyMaterial material_;
    IsotropicElastic lame_;
};

/// Displacement-form load vector sum_i c_i(t) L_i with each L_i assembled once.
class SeparableLoad {
public:
    SeparableLoad(const DGSpace& space, std::vector<ManufacturedCase::LoadTerm> terms);

    [[nodiscard]] std::vector<double> operator()(double t) const;

private:
    std::vector<std::function<double(double)>> coefficients_;
    std::vector<std::vector<double>> vectors_;
};

}  // namespace viscodg
