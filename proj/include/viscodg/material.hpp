#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "viscodg/tensor.hpp"

namespace viscodg {

/// D acts as the identity on symmetric tensors.
struct IdentityElastic {};

/// D eps = 2 mu eps + lambda tr(eps) I.
struct IsotropicElastic {
    double lambda = 0.0;
    double mu = 0.0;
};

using ElasticTensor = std::variant<IdentityElastic, IsotropicElastic>;

/// Lame pair equivalent to the elastic tensor; the identity is (0, 1/2).
IsotropicElastic lame_parameters(const ElasticTensor& elastic);

/// Generalised Maxwell solid with relaxation phi(t) = phi0 + sum_q phi_q exp(-t/tau_q).
class PronyMaterial {
public:
    /// Throws std::invalid_argument unless rho > 0, phi0 > 0, all phi_q, tau_q > 0,
    /// the lists have equal length and phi0 + sum phi_q = 1.
    PronyMaterial(double rho, double phi0, std::vector<double> phis, std::vector<double> taus,
                  ElasticTensor elastic = IdentityElastic{});

    /// rho = 1, identity D, phi0 = 0.5, (phi, tau) = (0.1, 0.5), (0.4, 1.5).
    static PronyMaterial reference();

    [[nodiscard]] double rho() const { return rho_; }
    [[nodiscard]] double phi0() const { return phi0_; }
    [[nodiscard]] const std::vector<double>& phis() const { return phis_; }
    [[nodiscard]] const std::vector<double>& taus() const { return taus_; }
    [[nodiscard]] std::size_t num_terms() const { return phis_.size(); }
    [[nodiscard]] const ElasticTensor& elastic() const { return elastic_; }

private:
    double rho_;
    double phi0_;
    std::vector<double> phis_;
    std::vector<double> taus_;
    ElasticTensor elastic_;
};

/// phi(t); rejects t < 0.
double relaxation(const PronyMaterial& m, double t);

/// D eps.
Mat2 apply_elastic(const PronyMaterial& m, const Mat2& eps);
Mat2 apply_elastic(const ElasticTensor& elastic, const Mat2& eps);

/// Internal variable of term q for the constant history u = c:
/// phi_q c (1 - exp(-t/tau_q)).
double internal_kernel_constant_history(const PronyMaterial& m, std::size_t q, double c, double t);

}  // namespace viscodg
