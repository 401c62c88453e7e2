#include "viscodg/material.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace viscodg {

IsotropicElastic lame_parameters(const ElasticTensor& elastic)
{
    if (const auto* iso = std::get_if<IsotropicElastic>(&elastic)) {
        return *iso;
    }
    return {0.0, 0.5};
}

PronyMaterial::PronyMaterial(double rho, double phi0, std::vector<double> phis, std::vector<double> taus,
                             ElasticTensor elastic)
    : rho_(rho), phi0_(phi0), phis_(std::move(phis)), taus_(std::move(taus)), elastic_(elastic)
{
    if (!(rho_ > 0.0)) {
        throw std::invalid_argument("PronyMaterial: rho must be positive");
    }
    if (!(phi0_ > 0.0)) {
        throw std::invalid_argument("PronyMaterial: phi0 must be positive");
    }
    if (phis_.size() != taus_.size()) {
        throw std::invalid_argument("PronyMaterial: phis and taus differ in length");
    }
    for (std::size_t q = 0; q < phis_.size(); ++q) {
        if (!(phis_[q] > 0.0) || !(taus_[q] > 0.0)) {
            throw std::invalid_argument("PronyMaterial: phi_q and tau_q must be positive");
        }
    }
    const double total = std::accumulate(phis_.begin(), phis_.end(), phi0_);
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("PronyMaterial: phi0 + sum(phi_q) must equal 1");
    }
    if (const auto* iso = std::get_if<IsotropicElastic>(&elastic_)) {
        if (!(iso->mu > 0.0) || !(iso->lambda + iso->mu > 0.0)) {
            throw std::invalid_argument("PronyMaterial: isotropic D must be positive definite");
        }
    }
}

PronyMaterial PronyMaterial::reference()
{
    return PronyMaterial(1.0, 0.5, {0.1, 0.4}, {0.5, 1.5}, IdentityElastic{});
}

double relaxation(const PronyMaterial& m, double t)
{
    if (t < 0.0) {
        throw std::invalid_argument("relaxation: negative time");
    }
    double phi = m.phi0();
    for (std::size_t q = 0; q < m.num_terms(); ++q) {
        phi += m.phis()[q] * std::exp(-t / m.taus()[q]);
    }
    return phi;
}

Mat2 apply_elastic(const ElasticTensor& elastic, const Mat2& eps)
{
    if (const auto* iso = std::get_if<IsotropicElastic>(&elastic)) {
        return 2.0 * iso->mu * eps + iso->lambda * trace(eps) * identity2();
    }
    return eps;
}

Mat2 apply_elastic(const PronyMaterial& m, const Mat2& eps)
{
    return apply_elastic(m.elastic(), eps);
}

double internal_kernel_constant_history(const PronyMaterial& m, std::size_t q, double c, double t)
{
    if (q >= m.num_terms()) {
        throw std::out_of_range("internal_kernel_constant_history: term index out of range");
    }
    if (t < 0.0) {
        throw std::invalid_argument("internal_kernel_constant_history: negative time");
    }
    return m.phis()[q] * c * -std::expm1(-t / m.taus()[q]);
}

}  // namespace viscodg
