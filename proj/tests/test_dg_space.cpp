#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "viscodg/dg_space.hpp"

using namespace viscodg;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

// Exact integral of xi^a eta^b over the reference triangle.
double monomial_integral(int a, int b) { return factorial(a) * factorial(b) / factorial(a + b + 2); }

}  // namespace

TEST(Quadrature, GaussLegendreIntegratesUpToDegree2nMinus1)
{
    for (int npts = 1; npts <= 8; ++npts) {
        const auto rule = gauss_legendre(npts);
        ASSERT_EQ(rule.points.size(), static_cast<std::size_t>(npts));
        for (int p = 0; p <= 2 * npts - 1; ++p) {
            double sum = 0.0;
            for (int i = 0; i < npts; ++i) {
                sum += rule.weights[i] * std::pow(rule.points[i], p);
            }
            EXPECT_NEAR(sum, 1.0 / (p + 1), 1e-14) << "npts=" << npts << " p=" << p;
        }
    }
}

TEST(Quadrature, TriangleRuleIsExactForItsOrder)
{
    for (int order = 1; order <= 12; ++order) {
        const auto rule = triangle_rule(order);
        EXPECT_GE(rule.order, order);
        for (double w : rule.weights) {
            EXPECT_GT(w, 0.0);
        }
        for (int a = 0; a <= order; ++a) {
            for (int b = 0; a + b <= order; ++b) {
                double sum = 0.0;
                for (std::size_t q = 0; q < rule.points.size(); ++q) {
                    sum += rule.weights[q] * std::pow(rule.points[q][0], a) * std::pow(rule.points[q][1], b);
                }
                EXPECT_NEAR(sum, monomial_integral(a, b), 1e-15) << "order=" << order << " a=" << a << " b=" << b;
            }
        }
    }
}

TEST(Quadrature, RulesForDegreeMeetMinimumOrders)
{
    for (int k = 1; k <= 4; ++k) {
        const auto rules = quadrature_rules(k);
        EXPECT_GE(rules.element.order, std::max(2 * k + 2, 6));
        EXPECT_GE(rules.edge.order, std::max(2 * k + 3, 7));
    }
    EXPECT_THROW(quadrature_rules(0), std::invalid_argument);
}

class BasisTest : public ::testing::TestWithParam<int> {};

TEST_P(BasisTest, KroneckerAtNodes)
{
    const int k = GetParam();
    const auto nodes = reference_nodes(k);
    ASSERT_EQ(nodes.size(), static_cast<std::size_t>(scalar_dofs(k)));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto b = reference_basis(k, nodes[i]);
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            EXPECT_NEAR(b.values[j], i == j ? 1.0 : 0.0, 1e-13);
        }
    }
}

TEST_P(BasisTest, PartitionOfUnityAndGradientsMatchFiniteDifferences)
{
    const int k = GetParam();
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double h = 1e-6;
    for (int trial = 0; trial < 10; ++trial) {
        double x = u(gen);
        double y = u(gen);
        if (x + y > 1.0) {
            x = 1.0 - x;
            y = 1.0 - y;
        }
        const auto b = reference_basis(k, {x, y});
        double sum = 0.0;
        Vec2 gsum{};
        for (std::size_t j = 0; j < b.values.size(); ++j) {
            sum += b.values[j];
            gsum = gsum + b.gradients[j];
        }
        EXPECT_NEAR(sum, 1.0, 1e-13);
        EXPECT_NEAR(gsum[0], 0.0, 1e-12);
        EXPECT_NEAR(gsum[1], 0.0, 1e-12);
        const auto bx = reference_basis(k, {x + h, y});
        const auto bxm = reference_basis(k, {x - h, y});
        const auto by = reference_basis(k, {x, y + h});
        const auto bym = reference_basis(k, {x, y - h});
        for (std::size_t j = 0; j < b.values.size(); ++j) {
            EXPECT_NEAR(b.gradients[j][0], (bx.values[j] - bxm.values[j]) / (2 * h), 1e-7);
            EXPECT_NEAR(b.gradients[j][1], (by.values[j] - bym.values[j]) / (2 * h), 1e-7);
        }
    }
}

TEST_P(BasisTest, InterpolationReproducesPolynomialsOfDegreeK)
{
    const int k = GetParam();
    const DGSpace space(build_structured_mesh(3), k);
    // Both components are full degree-k polynomials.
    auto f = [k](const Vec2& p) {
        return Vec2{std::pow(p[0] + 0.3 * p[1], k) + 1.0, std::pow(p[1] - 0.7 * p[0], k) - p[0]};
    };
    auto grad = [k](const Vec2& p) {
        const double a = k * std::pow(p[0] + 0.3 * p[1], k - 1);
        const double b = k * std::pow(p[1] - 0.7 * p[0], k - 1);
        return Mat2{{{a, 0.3 * a}, {-0.7 * b - 1.0, b}}};
    };
    const auto coeffs = space.interpolate(f);
    ASSERT_EQ(coeffs.size(), space.total_dofs());
    for (std::size_t t = 0; t < space.num_elements(); ++t) {
        const Vec2 xi{0.21, 0.33};
        const Vec2 x = space.to_physical(t, xi);
        const auto s = space.evaluate(coeffs, t, xi);
        EXPECT_NEAR(s.value[0], f(x)[0], 1e-12);
        EXPECT_NEAR(s.value[1], f(x)[1], 1e-12);
        const Mat2 g = grad(x);
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                EXPECT_NEAR(s.gradient[i][j], g[i][j], 1e-10);
            }
        }
        const Vec2 back = space.to_reference(t, x);
        EXPECT_NEAR(back[0], xi[0], 1e-13);
        EXPECT_NEAR(back[1], xi[1], 1e-13);
    }
}

INSTANTIATE_TEST_SUITE_P(Degrees, BasisTest, ::testing::Values(1, 2, 3));

TEST(DGSpaceLayout, DofsAreElementBlockedComponentMajor)
{
    const DGSpace space(build_structured_mesh(2), 2);
    EXPECT_EQ(space.dofs_per_component(), 6);
    EXPECT_EQ(space.dofs_per_element(), 12);
    EXPECT_EQ(space.total_dofs(), 8u * 12u);
    EXPECT_EQ(space.dof(3, 1, 2), 3u * 12u + 6u + 2u);
    EXPECT_EQ(space.element_offset(5), 60u);
    for (std::size_t t = 0; t < space.num_elements(); ++t) {
        EXPECT_NEAR(space.jacobian_det(t), 2.0 * space.mesh().element_geometry(t).area, 1e-15);
    }
    EXPECT_THROW(DGSpace(build_structured_mesh(2), 0), std::invalid_argument);
}
