#include "viscodg/dg_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace viscodg {

QuadratureRule1D gauss_legendre(int npts)
{
    if (npts < 1) {
        throw std::invalid_argument("gauss_legendre: need at least one point");
    }
    QuadratureRule1D rule;
    rule.order = 2 * npts - 1;
    rule.points.resize(static_cast<std::size_t>(npts));
    rule.weights.resize(static_cast<std::size_t>(npts));
    // Newton iteration on P_n over [-1,1], then map to [0,1].
    for (int i = 0; i < npts; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (npts + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int m = 2; m <= npts; ++m) {
                const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
                p0 = p1;
                p1 = p2;
            }
            dp = npts * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        // Recompute derivative at the converged root for the weight.
        double p0 = 1.0;
        double p1 = x;
        for (int m = 2; m <= npts; ++m) {
            const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
            p0 = p1;
            p1 = p2;
        }
        dp = npts * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Ascending order on [0,1].
        const auto slot = static_cast<std::size_t>(npts - 1 - i);
        rule.points[slot] = 0.5 * (x + 1.0);
        rule.weights[slot] = 0.5 * w;
    }
    return rule;
}

QuadratureRule1D interval_rule(int order)
{
    const int npts = std::max(1, (order + 2) / 2);
    return gauss_legendre(npts);
}

QuadratureRule2D triangle_rule(int order)
{
    // xi = u, eta = (1-u) v with Jacobian (1-u): a degree-d polynomial becomes
    // degree d+1 in u and d in v.
    const auto gu = interval_rule(order + 1);
    const auto gv = interval_rule(order);
    QuadratureRule2D rule;
    rule.order = order;
    for (std::size_t a = 0; a < gu.points.size(); ++a) {
        const double u = gu.points[a];
        for (std::size_t b = 0; b < gv.points.size(); ++b) {
            const double v = gv.points[b];
            rule.points.push_back({u, (1.0 - u) * v});
            rule.weights.push_back(gu.weights[a] * gv.weights[b] * (1.0 - u));
        }
    }
    return rule;
}

QuadratureRules quadrature_rules(int k)
{
    if (k < 1) {
        throw std::invalid_argument("quadrature_rules: degree must be >= 1");
    }
    return {triangle_rule(std::max(2 * k + 2, 6)), interval_rule(std::max(2 * k + 3, 7))};
}

namespace {

// prod_{l<a} (k*lambda - l)/(l+1) and its derivative in lambda.
void lattice_factor(int k, int a, double lambda, double& value, double& deriv)
{
    value = 1.0;
    deriv = 0.0;
    for (int l = 0; l < a; ++l) {
        const double f = (k * lambda - l) / (l + 1.0);
        const double df = k / (l + 1.0);
        deriv = deriv * f + value * df;
        value *= f;
    }
}

}  // namespace

std::vector<Vec2> reference_nodes(int k)
{
    std::vector<Vec2> nodes;
    for (int j = 0; j <= k; ++j) {
        for (int i = 0; i <= k - j; ++i) {
            nodes.push_back({static_cast<double>(i) / k, static_cast<double>(j) / k});
        }
    }
    return nodes;
}

BasisEval reference_basis(int k, const Vec2& p)
{
    if (k < 1) {
        throw std::invalid_argument("reference_basis: degree must be >= 1");
    }
    const double l1 = 1.0 - p[0] - p[1];
    const double l2 = p[0];
    const double l3 = p[1];
    BasisEval out;
    out.values.reserve(static_cast<std::size_t>(scalar_dofs(k)));
    out.gradients.reserve(static_cast<std::size_t>(scalar_dofs(k)));
    for (int j = 0; j <= k; ++j) {
        for (int i = 0; i <= k - j; ++i) {
            double f1, d1, f2, d2, f3, d3;
            lattice_factor(k, k - i - j, l1, f1, d1);
            lattice_factor(k, i, l2, f2, d2);
            lattice_factor(k, j, l3, f3, d3);
            out.values.push_back(f1 * f2 * f3);
            // grad l1 = (-1,-1), grad l2 = (1,0), grad l3 = (0,1)
            const double a = d1 * f2 * f3;
            out.gradients.push_back({-a + f1 * d2 * f3, -a + f1 * f2 * d3});
        }
    }
    return out;
}

DGSpace::DGSpace(TriMesh mesh, int degree)
    : mesh_(std::move(mesh)), degree_(degree), dofs_per_component_(scalar_dofs(degree)),
      rules_(quadrature_rules(degree))
{
    for (const auto& p : rules_.element.points) {
        element_basis_.push_back(reference_basis(degree_, p));
    }
    const auto n = mesh_.num_triangles();
    origin_.resize(n);
    jac_.resize(n);
    inv_jac_t_.resize(n);
    det_.resize(n);
    const auto& verts = mesh_.vertices();
    for (std::size_t t = 0; t < n; ++t) {
        const auto& tri = mesh_.triangles()[t];
        const Vec2 a = verts[tri[0]];
        const Vec2 e1 = verts[tri[1]] - a;
        const Vec2 e2 = verts[tri[2]] - a;
        const double det = e1[0] * e2[1] - e2[0] * e1[1];
        origin_[t] = a;
        jac_[t] = {{{e1[0], e2[0]}, {e1[1], e2[1]}}};
        // inverse = 1/det [[e2y, -e2x], [-e1y, e1x]]; store its transpose
        inv_jac_t_[t] = {{{e2[1] / det, -e1[1] / det}, {-e2[0] / det, e1[0] / det}}};
        det_[t] = std::abs(det);
    }
}

Vec2 DGSpace::to_physical(std::size_t element, const Vec2& xi) const
{
    return origin_[element] + jac_[element] * xi;
}

Vec2 DGSpace::to_reference(std::size_t element, const Vec2& x) const
{
    return transpose(inv_jac_t_[element]) * (x - origin_[element]);
}

std::vector<Vec2> DGSpace::physical_gradients(std::size_t element, const BasisEval& basis) const
{
    const Mat2& g = inv_jac_t_[element];
    std::vector<Vec2> out;
    out.reserve(basis.gradients.size());
    for (const auto& d : basis.gradients) {
        out.push_back(g * d);
    }
    return out;
}

std::vector<double> DGSpace::interpolate(const VectorFunction& f) const
{
    std::vector<double> coeffs(total_dofs(), 0.0);
    const auto nodes = reference_nodes(degree_);
    for (std::size_t t = 0; t < num_elements(); ++t) {
        for (int j = 0; j < dofs_per_component_; ++j) {
            const Vec2 v = f(to_physical(t, nodes[static_cast<std::size_t>(j)]));
            coeffs[dof(t, 0, j)] = v[0];
            coeffs[dof(t, 1, j)] = v[1];
        }
    }
    return coeffs;
}

FieldSample DGSpace::evaluate(std::span<const double> coeffs, std::size_t element, const Vec2& xi) const
{
    const auto basis = reference_basis(degree_, xi);
    const auto grads = physical_gradients(element, basis);
    FieldSample s;
    for (int c = 0; c < 2; ++c) {
        for (int j = 0; j < dofs_per_component_; ++j) {
            const double u = coeffs[dof(element, c, j)];
            const auto jj = static_cast<std::size_t>(j);
            s.value[c] += u * basis.values[jj];
            s.gradient[c][0] += u * grads[jj][0];
            s.gradient[c][1] += u * grads[jj][1];
        }
    }
    return s;
}

}  // namespace viscodg
