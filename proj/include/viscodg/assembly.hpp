#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "viscodg/dg_space.hpp"
#include "viscodg/material.hpp"
#include "viscodg/sparse.hpp"

namespace viscodg {

/// Jump penalty alpha0 / |e|^beta0 on interior and Dirichlet edges.
struct PenaltyParameters {
    double alpha0 = 10.0;
    double beta0 = 1.0;

    /// Throws std::invalid_argument unless alpha0 > 0 and beta0 >= 1.
    void validate() const;
    [[nodiscard]] double weight(double edge_length) const;
};

/// Traction callback: (point, outward normal) -> g_N.
using TractionFunction = std::function<Vec2(const Vec2&, const Vec2&)>;

struct AssembledSystem {
    SparseMatrix mass;       // rho-weighted mass
    SparseMatrix mass0;      // plain mass
    SparseMatrix stiffness;  // full SIPG form a(.,.)
    SparseMatrix jump;       // jump penalty J0
    SparseMatrix strain;     // volume part sum_E (D eps(v), eps(w))
    PenaltyParameters penalty;

    /// |||v|||^2 = sum_E (D eps(v), eps(v)) + J0(v, v) for a discrete field.
    [[nodiscard]] double energy_norm_squared(std::span<const double> v) const;
};

/// Edge quadrature point in physical coordinates; `weight` includes |e|.
struct EdgePoint {
    Vec2 x{};
    double weight = 0.0;
};

std::vector<EdgePoint> edge_points(const DGSpace& space, std::size_t edge);

/// Traces of a discrete field on one edge, at each edge quadrature point.
struct EdgeTrace {
    Vec2 x{};
    double weight = 0.0;
    Mat2 average_stress{};  // {D eps(v)}
    Vec2 average{};         // {v}
    Vec2 jump{};            // [v], the full trace on boundary edges
    Mat2 jump_outer{};      // [v (x) n_e]
};

std::vector<EdgeTrace> average_jump(const DGSpace& space, const PronyMaterial& material,
                                    std::span<const double> coeffs, std::size_t edge);

/// Block-diagonal weighted mass matrix.
SparseMatrix assemble_mass(const DGSpace& space, double weight);

struct SipgMatrices {
    SparseMatrix stiffness;  // A
    SparseMatrix jump;       // J
    SparseMatrix strain;     // volume term only
};

/// Symmetric interior penalty form. Neumann edges contribute nothing.
SipgMatrices assemble_sipg(const DGSpace& space, const PronyMaterial& material, const PenaltyParameters& penalty);

AssembledSystem assemble_system(const DGSpace& space, const PronyMaterial& material, const PenaltyParameters& penalty);

/// Precomputed quadrature geometry for repeated load assembly.
class LoadAssembler {
public:
    explicit LoadAssembler(const DGSpace& space);

    /// F_i = (f, phi_i) + (g_N, phi_i)_{Gamma_N}. Either callback may be empty.
    [[nodiscard]] std::vector<double> assemble(const VectorFunction& body_force, const TractionFunction& traction) const;

private:
    struct NeumannPoint {
        std::size_t element;
        Vec2 x;
        Vec2 normal;
        double weight;
        std::vector<double> basis;
    };

    const DGSpace* space_;
    std::vector<Vec2> element_points_;  // element-major
    std::vector<double> element_weights_;
    std::vector<NeumannPoint> neumann_points_;
};

std::vector<double> assemble_load(const DGSpace& space, const VectorFunction& body_force, const TractionFunction& traction);

/// (w, phi_i) for every basis function.
std::vector<double> assemble_l2_rhs(const DGSpace& space, const VectorFunction& w);

/// a(u0, phi_i) for a continuous u0, so that interior jumps of u0 vanish.
std::vector<double> assemble_elliptic_rhs(const DGSpace& space, const PronyMaterial& material,
                                          const PenaltyParameters& penalty, const VectorFunctionWithGradient& u0);

}  // namespace viscodg
