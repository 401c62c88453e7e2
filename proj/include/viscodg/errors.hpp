#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "viscodg/assembly.hpp"

namespace viscodg {

struct ErrorNorms {
    double l2 = 0.0;
    double h1 = 0.0;      // full broken H1 norm: value and gradient
    double energy = 0.0;  // sqrt(sum_E (D eps(e), eps(e)) + J0(e, e))
};

struct ErrorReport {
    ErrorNorms u;
    ErrorNorms w;
    double t = 0.0;
};

/// Errors between discrete fields and a continuous exact field, by element
/// and edge quadrature more accurate than the assembly rules. The exact field
/// is taken to have no interior jumps.
class ErrorEvaluator {
public:
    /// `order` is the polynomial degree integrated exactly; 0 selects
    /// max(2k + 6, 10).
    ErrorEvaluator(const DGSpace& space, const PronyMaterial& material, const PenaltyParameters& penalty, int order = 0);

    [[nodiscard]] int order() const { return order_; }

    [[nodiscard]] ErrorNorms evaluate(std::span<const double> coeffs, const VectorFunctionWithGradient& exact) const;

private:
    struct EdgeSample {
        std::size_t element;
        double sign;
        Vec2 x;
        double weight;  // quadrature weight times |e| times penalty
        std::vector<double> basis;
    };

    const DGSpace* space_;
    PronyMaterial material_;
    int order_;
    QuadratureRule2D rule_;
    std::vector<BasisEval> basis_;
    // Edge points of interior edges appear once per side; exact traces cancel there.
    std::vector<std::vector<EdgeSample>> edges_;
};

/// d_c = (log e1 - log e2) / (log s1 - log s2). Throws std::invalid_argument
/// for nonpositive errors or scales, or equal scales.
double convergence_rate(double e1, double e2, double s1, double s2);

/// One rate per adjacent pair.
std::vector<double> convergence_rates(std::span<const double> errors, std::span<const double> scales);

}  // namespace viscodg
