#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "viscodg/mesh.hpp"
#include "viscodg/tensor.hpp"

namespace viscodg {

/// Rule on the reference interval [0,1]; weights sum to 1.
struct QuadratureRule1D {
    std::vector<double> points;
    std::vector<double> weights;
    int order = 0;  // polynomial degree integrated exactly
};

/// Rule on the reference triangle {xi, eta >= 0, xi + eta <= 1}; weights sum to 1/2.
struct QuadratureRule2D {
    std::vector<Vec2> points;
    std::vector<double> weights;
    int order = 0;
};

/// Gauss-Legendre with npts points mapped to [0,1].
QuadratureRule1D gauss_legendre(int npts);

/// Smallest Gauss-Legendre rule on [0,1] exact for degree `order`.
QuadratureRule1D interval_rule(int order);

/// Collapsed (Duffy) Gauss product rule on the reference triangle, exact for
/// total degree `order`. All weights are positive.
QuadratureRule2D triangle_rule(int order);

struct QuadratureRules {
    QuadratureRule2D element;
    QuadratureRule1D edge;
};

/// Element rule exact to max(2k+2, 6), edge rule exact to max(2k+3, 7).
QuadratureRules quadrature_rules(int k);

/// Number of scalar P_k basis functions on a triangle.
constexpr int scalar_dofs(int k) { return (k + 1) * (k + 2) / 2; }

struct BasisEval {
    std::vector<double> values;
    std::vector<Vec2> gradients;  // with respect to reference coordinates
};

/// Lagrange basis on the uniform lattice of the reference triangle. Nodes are
/// ordered row by row: (i/k, j/k) for j = 0..k, i = 0..k-j, so k = 1 gives the
/// vertex ordering (0,0), (1,0), (0,1).
BasisEval reference_basis(int k, const Vec2& p);

/// Lattice node coordinates in the ordering used by reference_basis.
std::vector<Vec2> reference_nodes(int k);

using VectorFunction = std::function<Vec2(const Vec2&)>;
using VectorFunctionWithGradient = std::function<FieldSample(const Vec2&)>;

/// Fully discontinuous vector-valued P_k space. Element t owns the contiguous
/// DOF block [t*dofs_per_element, (t+1)*dofs_per_element), laid out
/// component-major: local index = component * dofs_per_component + j.
class DGSpace {
public:
    DGSpace(TriMesh mesh, int degree);

    [[nodiscard]] const TriMesh& mesh() const { return mesh_; }
    [[nodiscard]] int degree() const { return degree_; }
    [[nodiscard]] int dofs_per_component() const { return dofs_per_component_; }
    [[nodiscard]] int dofs_per_element() const { return 2 * dofs_per_component_; }
    [[nodiscard]] std::size_t num_elements() const { return mesh_.num_triangles(); }
    [[nodiscard]] std::size_t total_dofs() const { return num_elements() * static_cast<std::size_t>(dofs_per_element()); }

    [[nodiscard]] std::size_t dof(std::size_t element, int component, int j) const
    {
        return element * static_cast<std::size_t>(dofs_per_element()) +
               static_cast<std::size_t>(component * dofs_per_component_ + j);
    }
    [[nodiscard]] std::size_t element_offset(std::size_t element) const
    {
        return element * static_cast<std::size_t>(dofs_per_element());
    }

    [[nodiscard]] const QuadratureRule2D& element_rule() const { return rules_.element; }
    [[nodiscard]] const QuadratureRule1D& edge_rule() const { return rules_.edge; }

    /// Reference basis at each point of element_rule(), shared by all elements.
    [[nodiscard]] const std::vector<BasisEval>& element_basis() const { return element_basis_; }

    [[nodiscard]] Vec2 to_physical(std::size_t element, const Vec2& xi) const;
    [[nodiscard]] Vec2 to_reference(std::size_t element, const Vec2& x) const;
    /// |det| of the affine map, i.e. twice the element area.
    [[nodiscard]] double jacobian_det(std::size_t element) const { return det_[element]; }
    /// Transposed inverse Jacobian: maps reference gradients to physical ones.
    [[nodiscard]] const Mat2& inverse_jacobian_t(std::size_t element) const { return inv_jac_t_[element]; }

    [[nodiscard]] std::vector<Vec2> physical_gradients(std::size_t element, const BasisEval& basis) const;

    /// Nodal interpolant of a vector field.
    [[nodiscard]] std::vector<double> interpolate(const VectorFunction& f) const;

    /// Value and gradient of the discrete field `coeffs` at reference point xi of `element`.
    [[nodiscard]] FieldSample evaluate(std::span<const double> coeffs, std::size_t element, const Vec2& xi) const;

private:
    TriMesh mesh_;
    int degree_;
    int dofs_per_component_;
    QuadratureRules rules_;
    std::vector<BasisEval> element_basis_;
    std::vector<Vec2> origin_;
    std::vector<Mat2> jac_;
    std::vector<Mat2> inv_jac_t_;
    std::vector<double> det_;
};

}  // namespace viscodg
