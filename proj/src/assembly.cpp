#include "viscodg/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace viscodg {

namespace {

// Strain of the vector basis function psi * e_c, given grad psi.
Mat2 basis_strain(int component, const Vec2& g)
{
    if (component == 0) {
        return {{{g[0], 0.5 * g[1]}, {0.5 * g[1], 0.0}}};
    }
    return {{{0.0, 0.5 * g[0]}, {0.5 * g[0], g[1]}}};
}

Vec2 unit(int component) { return component == 0 ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0}; }

// Each element block row couples to its own block and its edge neighbours.
SparseMatrix block_pattern(const DGSpace& space, bool couple_neighbours)
{
    const TriMesh& mesh = space.mesh();
    const auto dpe = static_cast<std::size_t>(space.dofs_per_element());
    const std::size_t n = space.total_dofs();
    std::vector<int> offsets(n + 1, 0);
    std::vector<int> cols;
    std::vector<std::size_t> blocks;
    for (std::size_t t = 0; t < space.num_elements(); ++t) {
        blocks.assign(1, t);
        if (couple_neighbours) {
            for (int e : mesh.element_edges(t)) {
                const auto& edge = mesh.edges()[static_cast<std::size_t>(e)];
                if (!edge.is_boundary()) {
                    const int other = edge.incident[0] == static_cast<int>(t) ? edge.incident[1] : edge.incident[0];
                    blocks.push_back(static_cast<std::size_t>(other));
                }
            }
            std::sort(blocks.begin(), blocks.end());
        }
        for (std::size_t r = 0; r < dpe; ++r) {
            for (std::size_t b : blocks) {
                for (std::size_t c = 0; c < dpe; ++c) {
                    cols.push_back(static_cast<int>(space.element_offset(b) + c));
                }
            }
            const std::size_t row = space.element_offset(t) + r;
            offsets[row + 1] = static_cast<int>(cols.size());
        }
    }
    return SparseMatrix::with_pattern(n, std::move(offsets), std::move(cols));
}

struct EdgeSide {
    std::size_t element;
    double sign;    // contribution to the jump
    double weight;  // contribution to the average
};

std::vector<EdgeSide> edge_sides(const EdgeInfo& edge)
{
    if (edge.is_boundary()) {
        return {{static_cast<std::size_t>(edge.incident[0]), 1.0, 1.0}};
    }
    return {{static_cast<std::size_t>(edge.incident[0]), 1.0, 0.5},
            {static_cast<std::size_t>(edge.incident[1]), -1.0, 0.5}};
}

struct SideBasis {
    BasisEval basis;
    std::vector<Vec2> grads;
};

SideBasis side_basis(const DGSpace& space, std::size_t element, const Vec2& x)
{
    SideBasis sb;
    sb.basis = reference_basis(space.degree(), space.to_reference(element, x));
    sb.grads = space.physical_gradients(element, sb.basis);
    return sb;
}

}  // namespace

void PenaltyParameters::validate() const
{
    if (!(alpha0 > 0.0)) {
        throw std::invalid_argument("penalty: alpha0 must be positive");
    }
    if (!(beta0 >= 1.0)) {
        throw std::invalid_argument("penalty: beta0 must be at least 1 in two dimensions");
    }
}

double PenaltyParameters::weight(double edge_length) const { return alpha0 / std::pow(edge_length, beta0); }

double AssembledSystem::energy_norm_squared(std::span<const double> v) const
{
    return strain.bilinear(v, v) + jump.bilinear(v, v);
}

std::vector<EdgePoint> edge_points(const DGSpace& space, std::size_t edge)
{
    const auto& info = space.mesh().edges().at(edge);
    const Vec2& a = space.mesh().vertices()[static_cast<std::size_t>(info.endpoints[0])];
    const Vec2& b = space.mesh().vertices()[static_cast<std::size_t>(info.endpoints[1])];
    const auto& rule = space.edge_rule();
    std::vector<EdgePoint> pts;
    pts.reserve(rule.points.size());
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const double s = rule.points[q];
        pts.push_back({a + s * (b - a), rule.weights[q] * info.length});
    }
    return pts;
}

std::vector<EdgeTrace> average_jump(const DGSpace& space, const PronyMaterial& material,
                                    std::span<const double> coeffs, std::size_t edge)
{
    const auto& info = space.mesh().edges().at(edge);
    const auto sides = edge_sides(info);
    std::vector<EdgeTrace> out;
    for (const auto& pt : edge_points(space, edge)) {
        EdgeTrace tr;
        tr.x = pt.x;
        tr.weight = pt.weight;
        for (const auto& side : sides) {
            const FieldSample s = space.evaluate(coeffs, side.element, space.to_reference(side.element, pt.x));
            tr.average_stress = tr.average_stress + side.weight * apply_elastic(material, sym(s.gradient));
            tr.average = tr.average + side.weight * s.value;
            tr.jump = tr.jump + side.sign * s.value;
        }
        tr.jump_outer = outer(tr.jump, info.normal);
        out.push_back(tr);
    }
    return out;
}

SparseMatrix assemble_mass(const DGSpace& space, double weight)
{
    if (!(weight > 0.0)) {
        throw std::invalid_argument("assemble_mass: weight must be positive");
    }
    auto m = block_pattern(space, false);
    const int nb = space.dofs_per_component();
    const auto& rule = space.element_rule();
    const auto& basis = space.element_basis();
    // The scalar block is identical on every element up to |det|.
    std::vector<double> ref(static_cast<std::size_t>(nb * nb), 0.0);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
        for (int i = 0; i < nb; ++i) {
            for (int j = 0; j < nb; ++j) {
                ref[static_cast<std::size_t>(i * nb + j)] += rule.weights[q] * basis[q].values[i] * basis[q].values[j];
            }
        }
    }
    for (std::size_t t = 0; t < space.num_elements(); ++t) {
        const double scale = weight * space.jacobian_det(t);
        for (int c = 0; c < 2; ++c) {
            for (int i = 0; i < nb; ++i) {
                for (int j = 0; j < nb; ++j) {
                    m.coeff_ref(space.dof(t, c, i), space.dof(t, c, j)) += scale * ref[static_cast<std::size_t>(i * nb + j)];
                }
            }
        }
    }
    return m;
}

SipgMatrices assemble_sipg(const DGSpace& space, const PronyMaterial& material, const PenaltyParameters& penalty)
{
    penalty.validate();
    SipgMatrices out{block_pattern(space, true), block_pattern(space, true), block_pattern(space, false)};
    const int nb = space.dofs_per_component();
    const int dpe = space.dofs_per_element();
    const auto& rule = space.element_rule();
    const auto& basis = space.element_basis();

    std::vector<double> local(static_cast<std::size_t>(dpe * dpe));
    std::vector<Mat2> strain(static_cast<std::size_t>(dpe));
    std::vector<Mat2> stress(static_cast<std::size_t>(dpe));
    for (std::size_t t = 0; t < space.num_elements(); ++t) {
        std::fill(local.begin(), local.end(), 0.0);
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const auto grads = space.physical_gradients(t, basis[q]);
            const double w = rule.weights[q] * space.jacobian_det(t);
            for (int p = 0; p < dpe; ++p) {
                strain[p] = basis_strain(p / nb, grads[static_cast<std::size_t>(p % nb)]);
                stress[p] = apply_elastic(material, strain[p]);
            }
            for (int p = 0; p < dpe; ++p) {
                for (int r = 0; r < dpe; ++r) {
                    local[static_cast<std::size_t>(p * dpe + r)] += w * ddot(stress[p], strain[r]);
                }
            }
        }
        const std::size_t off = space.element_offset(t);
        for (int p = 0; p < dpe; ++p) {
            for (int r = 0; r < dpe; ++r) {
                const double v = local[static_cast<std::size_t>(p * dpe + r)];
                out.strain.coeff_ref(off + p, off + r) += v;
                out.stiffness.coeff_ref(off + p, off + r) += v;
            }
        }
    }

    const auto& edges = space.mesh().edges();
    std::vector<double> s_loc;
    std::vector<double> j_loc;
    std::vector<Vec2> jump;
    std::vector<Vec2> traction;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto& info = edges[e];
        if (info.tag == EdgeTag::Neumann) {
            continue;
        }
        const auto sides = edge_sides(info);
        const int nloc = static_cast<int>(sides.size()) * dpe;
        s_loc.assign(static_cast<std::size_t>(nloc * nloc), 0.0);
        j_loc.assign(static_cast<std::size_t>(nloc * nloc), 0.0);
        jump.resize(static_cast<std::size_t>(nloc));
        traction.resize(static_cast<std::size_t>(nloc));
        const double pen = penalty.weight(info.length);
        for (const auto& pt : edge_points(space, e)) {
            for (std::size_t s = 0; s < sides.size(); ++s) {
                const auto sb = side_basis(space, sides[s].element, pt.x);
                for (int p = 0; p < dpe; ++p) {
                    const int c = p / nb;
                    const auto j = static_cast<std::size_t>(p % nb);
                    const auto idx = s * static_cast<std::size_t>(dpe) + static_cast<std::size_t>(p);
                    jump[idx] = (sides[s].sign * sb.basis.values[j]) * unit(c);
                    traction[idx] = sides[s].weight * (apply_elastic(material, basis_strain(c, sb.grads[j])) * info.normal);
                }
            }
            for (int p = 0; p < nloc; ++p) {
                for (int r = 0; r < nloc; ++r) {
                    const auto idx = static_cast<std::size_t>(p * nloc + r);
                    s_loc[idx] -= pt.weight * (dot(traction[p], jump[r]) + dot(traction[r], jump[p]));
                    j_loc[idx] += pt.weight * pen * dot(jump[p], jump[r]);
                }
            }
        }
        for (int p = 0; p < nloc; ++p) {
            const std::size_t gp = space.element_offset(sides[p / dpe].element) + static_cast<std::size_t>(p % dpe);
            for (int r = 0; r < nloc; ++r) {
                const std::size_t gr = space.element_offset(sides[r / dpe].element) + static_cast<std::size_t>(r % dpe);
                const auto idx = static_cast<std::size_t>(p * nloc + r);
                out.stiffness.coeff_ref(gp, gr) += s_loc[idx] + j_loc[idx];
                out.jump.coeff_ref(gp, gr) += j_loc[idx];
            }
        }
    }
    return out;
}

AssembledSystem assemble_system(const DGSpace& space, const PronyMaterial& material, const PenaltyParameters& penalty)
{
    auto sipg = assemble_sipg(space, material, penalty);
    AssembledSystem sys;
    sys.mass0 = assemble_mass(space, 1.0);
    sys.mass = material.rho() == 1.0 ? sys.mass0 : assemble_mass(space, material.rho());
    sys.stiffness = std::move(sipg.stiffness);
    sys.jump = std::move(sipg.jump);
    sys.strain = std::move(sipg.strain);
    sys.penalty = penalty;
    return sys;
}

LoadAssembler::LoadAssembler(const DGSpace& space) : space_(&space)
{
    const auto& rule = space.element_rule();
    for (std::size_t t = 0; t < space.num_elements(); ++t) {
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            element_points_.push_back(space.to_physical(t, rule.points[q]));
            element_weights_.push_back(rule.weights[q] * space.jacobian_det(t));
        }
    }
    const auto& edges = space.mesh().edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (edges[e].tag != EdgeTag::Neumann) {
            continue;
        }
        const auto t = static_cast<std::size_t>(edges[e].incident[0]);
        for (const auto& pt : edge_points(space, e)) {
            auto b = reference_basis(space.degree(), space.to_reference(t, pt.x));
            neumann_points_.push_back({t, pt.x, edges[e].normal, pt.weight, std::move(b.values)});
        }
    }
}

std::vector<double> LoadAssembler::assemble(const VectorFunction& body_force, const TractionFunction& traction) const
{
    const DGSpace& space = *space_;
    std::vector<double> f(space.total_dofs(), 0.0);
    const int nb = space.dofs_per_component();
    if (body_force) {
        const auto& basis = space.element_basis();
        const std::size_t nq = basis.size();
        for (std::size_t t = 0; t < space.num_elements(); ++t) {
            for (std::size_t q = 0; q < nq; ++q) {
                const std::size_t k = t * nq + q;
                const Vec2 val = element_weights_[k] * body_force(element_points_[k]);
                for (int j = 0; j < nb; ++j) {
                    f[space.dof(t, 0, j)] += val[0] * basis[q].values[j];
                    f[space.dof(t, 1, j)] += val[1] * basis[q].values[j];
                }
            }
        }
    }
    if (traction) {
        for (const auto& pt : neumann_points_) {
            const Vec2 g = pt.weight * traction(pt.x, pt.normal);
            for (int j = 0; j < nb; ++j) {
                f[space.dof(pt.element, 0, j)] += g[0] * pt.basis[j];
                f[space.dof(pt.element, 1, j)] += g[1] * pt.basis[j];
            }
        }
    }
    return f;
}

std::vector<double> assemble_load(const DGSpace& space, const VectorFunction& body_force, const TractionFunction& traction)
{
    return LoadAssembler(space).assemble(body_force, traction);
}

std::vector<double> assemble_l2_rhs(const DGSpace& space, const VectorFunction& w)
{
    return LoadAssembler(space).assemble(w, {});
}

std::vector<double> assemble_elliptic_rhs(const DGSpace& space, const PronyMaterial& material,
                                          const PenaltyParameters& penalty, const VectorFunctionWithGradient& u0)
{
    penalty.validate();
    std::vector<double> rhs(space.total_dofs(), 0.0);
    const int nb = space.dofs_per_component();
    const int dpe = space.dofs_per_element();
    const auto& rule = space.element_rule();
    const auto& basis = space.element_basis();

    for (std::size_t t = 0; t < space.num_elements(); ++t) {
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const FieldSample s = u0(space.to_physical(t, rule.points[q]));
            const Mat2 sigma = apply_elastic(material, sym(s.gradient));
            const double w = rule.weights[q] * space.jacobian_det(t);
            const auto grads = space.physical_gradients(t, basis[q]);
            for (int p = 0; p < dpe; ++p) {
                rhs[space.element_offset(t) + static_cast<std::size_t>(p)] +=
                    w * ddot(sigma, basis_strain(p / nb, grads[static_cast<std::size_t>(p % nb)]));
            }
        }
    }

    const auto& edges = space.mesh().edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto& info = edges[e];
        if (info.tag == EdgeTag::Neumann) {
            continue;
        }
        const auto sides = edge_sides(info);
        const bool dirichlet = info.tag == EdgeTag::Dirichlet;
        const double pen = penalty.weight(info.length);
        for (const auto& pt : edge_points(space, e)) {
            const FieldSample s = u0(pt.x);
            const Vec2 sigma_n = apply_elastic(material, sym(s.gradient)) * info.normal;
            for (const auto& side : sides) {
                const auto sb = side_basis(space, side.element, pt.x);
                for (int p = 0; p < dpe; ++p) {
                    const int c = p / nb;
                    const auto j = static_cast<std::size_t>(p % nb);
                    double& entry = rhs[space.element_offset(side.element) + static_cast<std::size_t>(p)];
                    const double phi = sb.basis.values[j];
                    // -({D eps(u0)}, [phi (x) n])
                    entry -= pt.weight * side.sign * phi * sigma_n[c];
                    if (dirichlet) {
                        // -({D eps(phi)}, u0 (x) n) + penalty (u0, phi)
                        const Vec2 tn = apply_elastic(material, basis_strain(c, sb.grads[j])) * info.normal;
                        entry -= pt.weight * dot(tn, s.value);
                        entry += pt.weight * pen * phi * s.value[c];
                    }
                }
            }
        }
    }
    return rhs;
}

}  // namespace viscodg
