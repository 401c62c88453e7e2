#include "viscodg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace viscodg {

ErrorEvaluator::ErrorEvaluator(const DGSpace& space, const PronyMaterial& material, const PenaltyParameters& penalty,
                               int order)
    : space_(&space), material_(material), order_(order > 0 ? order : std::max(2 * space.degree() + 6, 10))
{
    penalty.validate();
    rule_ = triangle_rule(order_);
    for (const auto& p : rule_.points) {
        basis_.push_back(reference_basis(space.degree(), p));
    }
    const TriMesh& mesh = space.mesh();
    const auto line = interval_rule(order_);
    for (const auto& info : mesh.edges()) {
        std::vector<EdgeSample> samples;
        if (info.tag != EdgeTag::Neumann) {
            const Vec2& a = mesh.vertices()[static_cast<std::size_t>(info.endpoints[0])];
            const Vec2& b = mesh.vertices()[static_cast<std::size_t>(info.endpoints[1])];
            const double pen = penalty.weight(info.length);
            for (std::size_t q = 0; q < line.points.size(); ++q) {
                const Vec2 x = a + line.points[q] * (b - a);
                const double w = line.weights[q] * info.length * pen;
                for (int side = 0; side < info.num_incident(); ++side) {
                    const auto t = static_cast<std::size_t>(info.incident[side]);
                    samples.push_back({t, side == 0 ? 1.0 : -1.0, x, w,
                                       reference_basis(space.degree(), space.to_reference(t, x)).values});
                }
            }
        }
        edges_.push_back(std::move(samples));
    }
}

ErrorNorms ErrorEvaluator::evaluate(std::span<const double> coeffs, const VectorFunctionWithGradient& exact) const
{
    const DGSpace& space = *space_;
    if (coeffs.size() != space.total_dofs()) {
        throw std::invalid_argument("ErrorEvaluator: coefficient vector has the wrong length");
    }
    const int nb = space.dofs_per_component();
    double l2 = 0.0;
    double grad = 0.0;
    double strain = 0.0;
    for (std::size_t t = 0; t < space.num_elements(); ++t) {
        const double det = space.jacobian_det(t);
        for (std::size_t q = 0; q < rule_.points.size(); ++q) {
            const auto grads = space.physical_gradients(t, basis_[q]);
            FieldSample uh;
            for (int c = 0; c < 2; ++c) {
                for (int j = 0; j < nb; ++j) {
                    const double v = coeffs[space.dof(t, c, j)];
                    uh.value[c] += v * basis_[q].values[j];
                    uh.gradient[c][0] += v * grads[j][0];
                    uh.gradient[c][1] += v * grads[j][1];
                }
            }
            const FieldSample ex = exact(space.to_physical(t, rule_.points[q]));
            const Vec2 e = ex.value - uh.value;
            const Mat2 ge = ex.gradient - uh.gradient;
            const double w = rule_.weights[q] * det;
            l2 += w * dot(e, e);
            grad += w * ddot(ge, ge);
            const Mat2 eps = sym(ge);
            strain += w * ddot(apply_elastic(material_, eps), eps);
        }
    }
    double jump = 0.0;
    for (const auto& samples : edges_) {
        // Samples come grouped per point: one entry per incident side.
        for (std::size_t i = 0; i < samples.size();) {
            const Vec2 x = samples[i].x;
            const Vec2 ex = exact(x).value;
            Vec2 je{};
            const double w = samples[i].weight;
            for (; i < samples.size() && samples[i].x == x; ++i) {
                const auto& s = samples[i];
                Vec2 uh{};
                for (int j = 0; j < nb; ++j) {
                    uh[0] += coeffs[space.dof(s.element, 0, j)] * s.basis[j];
                    uh[1] += coeffs[space.dof(s.element, 1, j)] * s.basis[j];
                }
                je = je + s.sign * (ex - uh);
            }
            jump += w * dot(je, je);
        }
    }
    return {std::sqrt(l2), std::sqrt(l2 + grad), std::sqrt(strain + jump)};
}

double convergence_rate(double e1, double e2, double s1, double s2)
{
    if (!(e1 > 0.0) || !(e2 > 0.0)) {
        throw std::invalid_argument("convergence_rate: errors must be positive");
    }
    if (!(s1 > 0.0) || !(s2 > 0.0) || s1 == s2) {
        throw std::invalid_argument("convergence_rate: scales must be positive and distinct");
    }
    return (std::log(e1) - std::log(e2)) / (std::log(s1) - std::log(s2));
}

std::vector<double> convergence_rates(std::span<const double> errors, std::span<const double> scales)
{
    if (errors.size() != scales.size()) {
        throw std::invalid_argument("convergence_rates: errors and scales differ in length");
    }
    std::vector<double> rates;
    for (std::size_t i = 1; i < errors.size(); ++i) {
        rates.push_back(convergence_rate(errors[i - 1], errors[i], scales[i - 1], scales[i]));
    }
    return rates;
}

}  // namespace viscodg
