#pragma once

// Independent references for the discrete operators and the exact solution,
// shared by the unit tests and the acceptance gate.

#include <cmath>
#include <functional>

#include "oracles.hpp"
#include "viscodg/assembly.hpp"
#include "viscodg/stepper.hpp"

namespace oracle {

using namespace viscodg;

// The exact solution written out independently of the library.
inline Vec2 u_exact(const Vec2& p, double t) { return {p[0] * p[1] * std::exp(1.0 - t), std::cos(t) * std::sin(p[0] * p[1])}; }
inline Vec2 u_dot(const Vec2& p, double t) { return {-p[0] * p[1] * std::exp(1.0 - t), -std::sin(t) * std::sin(p[0] * p[1])}; }

// grad u_dot, rows are components.
inline Mat2 grad_u_dot(const Vec2& p, double t)
{
    const double e = -std::exp(1.0 - t);
    const double s = -std::sin(t) * std::cos(p[0] * p[1]);
    return {{{e * p[1], e * p[0]}, {s * p[1], s * p[0]}}};
}

inline Mat2 grad_u(const Vec2& p, double t)
{
    const double e = std::exp(1.0 - t);
    const double s = std::cos(t) * std::cos(p[0] * p[1]);
    return {{{e * p[1], e * p[0]}, {s * p[1], s * p[0]}}};
}

// div D eps(v) = mu lap v + (lambda + mu) grad div v, from the Hessians of
// v = (a xy, b sin xy).
inline Vec2 div_stress(const Vec2& p, double a, double b, double lambda, double mu)
{
    const double x = p[0];
    const double y = p[1];
    const double sn = std::sin(x * y);
    const double cs = std::cos(x * y);
    // Hessian entries of v1 = a x y and v2 = b sin(x y).
    const double v1_xx = 0.0, v1_yy = 0.0, v1_xy = a;
    const double v2_xx = -b * y * y * sn, v2_yy = -b * x * x * sn, v2_xy = b * (cs - x * y * sn);
    const Vec2 lap{v1_xx + v1_yy, v2_xx + v2_yy};
    const Vec2 grad_div{v1_xx + v2_xy, v1_xy + v2_yy};
    return mu * lap + (lambda + mu) * grad_div;
}

constexpr double quad_tol = 1e-13;

// Component of the hereditary integral int_0^t kernel(t - s) g(s) ds.
inline double convolve(const std::function<double(double)>& kernel, const std::function<double(double)>& g, double t)
{
    if (t == 0.0) {
        return 0.0;
    }
    return oracle::adaptive_simpson([&](double s) { return kernel(t - s) * g(s); }, 0.0, t, quad_tol);
}

inline double relaxation_oracle(const PronyMaterial& m, double t)
{
    double phi = m.phi0();
    for (std::size_t q = 0; q < m.num_terms(); ++q) {
        phi += m.phis()[q] * std::exp(-t / m.taus()[q]);
    }
    return phi;
}

// sigma(t) = phi(t) D eps(u(0)) + int_0^t phi(t-s) D eps(u_dot(s)) ds.
inline Mat2 stress_oracle(const PronyMaterial& m, const Vec2& p, double t)
{
    const auto kernel = [&](double r) { return relaxation_oracle(m, r); };
    Mat2 g0 = grad_u(p, 0.0);
    Mat2 hist{};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            hist[i][j] = convolve(kernel, [&](double s) { return grad_u_dot(p, s)[i][j]; }, t);
        }
    }
    return apply_elastic(m, sym(relaxation_oracle(m, t) * g0 + hist));
}

inline Vec2 body_force_oracle(const PronyMaterial& m, const Vec2& p, double t)
{
    const auto lame = lame_parameters(m.elastic());
    const auto kernel = [&](double r) { return relaxation_oracle(m, r); };
    const double phi_t = relaxation_oracle(m, t);
    Vec2 div = phi_t * div_stress(p, std::exp(1.0), 1.0, lame.lambda, lame.mu);
    for (int i = 0; i < 2; ++i) {
        div[i] += convolve(kernel, [&](double s) {
            return div_stress(p, -std::exp(1.0 - s), -std::sin(s), lame.lambda, lame.mu)[i];
        }, t);
    }
    const Vec2 acc{p[0] * p[1] * std::exp(1.0 - t), -std::cos(t) * std::sin(p[0] * p[1])};
    return m.rho() * acc - div;
}

// Visits every interior and Dirichlet edge once, from its lower-numbered
// side, calling f(weight, jump_u, jump_v, avg_stress_u, avg_stress_v, normal)
// at each point of a Gauss rule. Jumps, averages and normals are rebuilt from
// the element geometry.
inline void for_each_penalised_edge_point(
    const DGSpace& space, const PronyMaterial& m, const std::vector<double>& u, const std::vector<double>& v,
    const std::function<void(double, double, const Vec2&, const Vec2&, const Mat2&, const Mat2&, const Vec2&)>& f)
{
    const auto& mesh = space.mesh();
    const auto line = gauss_legendre(6);
    for (std::size_t t = 0; t < space.num_elements(); ++t) {
        const auto geom = mesh.element_geometry(t);
        const auto& tri = mesh.triangles()[t];
        for (int le = 0; le < 3; ++le) {
            const auto& edge = mesh.edges()[mesh.element_edges(t)[le]];
            if (edge.tag == EdgeTag::Neumann) {
                continue;
            }
            if (!edge.is_boundary() && edge.incident[0] != static_cast<int>(t)) {
                continue;
            }
            const Vec2 a = mesh.vertices()[tri[le]];
            const Vec2 b = mesh.vertices()[tri[(le + 1) % 3]];
            const Vec2 n = geom.outward_normals[le];
            const double len = geom.edge_lengths[le];
            const int other = edge.is_boundary() ? -1 : edge.incident[1];
            for (std::size_t q = 0; q < line.points.size(); ++q) {
                const Vec2 x = a + line.points[q] * (b - a);
                const double w = line.weights[q] * len;
                auto su = space.evaluate(u, t, space.to_reference(t, x));
                auto sv = space.evaluate(v, t, space.to_reference(t, x));
                Vec2 ju = su.value;
                Vec2 jv = sv.value;
                Mat2 au = apply_elastic(m, sym(su.gradient));
                Mat2 av = apply_elastic(m, sym(sv.gradient));
                if (other >= 0) {
                    const auto o = static_cast<std::size_t>(other);
                    const auto ou = space.evaluate(u, o, space.to_reference(o, x));
                    const auto ov = space.evaluate(v, o, space.to_reference(o, x));
                    ju = ju - ou.value;
                    jv = jv - ov.value;
                    au = 0.5 * (au + apply_elastic(m, sym(ou.gradient)));
                    av = 0.5 * (av + apply_elastic(m, sym(ov.gradient)));
                }
                f(w, len, ju, jv, au, av, n);
            }
        }
    }
}

inline double strain_form(const DGSpace& space, const PronyMaterial& m, const std::vector<double>& u,
                          const std::vector<double>& v)
{
    const auto& rule = space.element_rule();
    double total = 0.0;
    for (std::size_t t = 0; t < space.num_elements(); ++t) {
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const auto su = space.evaluate(u, t, rule.points[q]);
            const auto sv = space.evaluate(v, t, rule.points[q]);
            total += rule.weights[q] * space.jacobian_det(t) *
                     ddot(apply_elastic(m, sym(su.gradient)), sym(sv.gradient));
        }
    }
    return total;
}

// a(u, v) = (D eps u, eps v) - sum_e ({D eps u} : [v n] + {D eps v} : [u n]) + J(u, v).
inline double brute_force_form(const DGSpace& space, const PronyMaterial& m, const PenaltyParameters& pen,
                               const std::vector<double>& u, const std::vector<double>& v)
{
    double total = strain_form(space, m, u, v);
    for_each_penalised_edge_point(space, m, u, v,
                                  [&](double w, double len, const Vec2& ju, const Vec2& jv, const Mat2& au,
                                      const Mat2& av, const Vec2& n) {
                                      total -= w * (ddot(au, outer(jv, n)) + ddot(av, outer(ju, n)));
                                      total += w * pen.alpha0 / std::pow(len, pen.beta0) * dot(ju, jv);
                                  });
    return total;
}

// sum_e int_e {D eps u} : [v n].
inline double edge_consistency(const DGSpace& space, const PronyMaterial& m, const std::vector<double>& u,
                               const std::vector<double>& v)
{
    double total = 0.0;
    for_each_penalised_edge_point(space, m, u, v,
                                  [&](double w, double, const Vec2&, const Vec2& jv, const Mat2& au, const Mat2&,
                                      const Vec2& n) { total += w * ddot(au, outer(jv, n)); });
    return total;
}

// Dense system for (W', U', Z'_1..Z'_N) built directly from the unreduced
// update equations, rows ordered as: momentum, velocity relation, one block
// per internal variable.
inline std::vector<double> block_oracle_step(Scheme scheme, const AssembledSystem& sys, const PronyMaterial& m, double dt,
                                      const State& s, const std::vector<double>& load)
{
    const std::size_t n = s.U.size();
    const std::size_t nq = m.num_terms();
    const std::size_t nb = 2 + nq;
    const std::size_t dim = nb * n;
    const auto M = sys.mass.to_dense();
    const auto A = sys.stiffness.to_dense();
    const auto J = sys.jump.to_dense();
    std::vector<double> K(dim * dim, 0.0);
    std::vector<double> r(dim, 0.0);
    auto at = [&](std::size_t br, std::size_t i, std::size_t bc, std::size_t j) -> double& {
        return K[(br * n + i) * dim + bc * n + j];
    };
    const double phi0 = m.phi0();
    const double u_weight = scheme == Scheme::Displacement ? 0.5 : 0.5 * phi0;
    const double z_weight = scheme == Scheme::Displacement ? -0.5 : 0.5;
    for (std::size_t i = 0; i < n; ++i) {
        // momentum
        double rhs = load[i];
        for (std::size_t j = 0; j < n; ++j) {
            at(0, i, 0, j) += M[i * n + j] / dt + 0.5 * J[i * n + j];
            at(0, i, 1, j) += u_weight * A[i * n + j];
            rhs += M[i * n + j] * s.W[j] / dt - 0.5 * J[i * n + j] * s.W[j] - u_weight * A[i * n + j] * s.U[j];
            for (std::size_t q = 0; q < nq; ++q) {
                at(0, i, 2 + q, j) += z_weight * A[i * n + j];
                rhs -= z_weight * A[i * n + j] * s.internal[q][j];
            }
        }
        r[i] = rhs;
        // (W' + W)/2 = (U' - U)/dt
        at(1, i, 0, i) = 0.5;
        at(1, i, 1, i) = -1.0 / dt;
        r[n + i] = -0.5 * s.W[i] - s.U[i] / dt;
        // internal variables, tested against A
        for (std::size_t q = 0; q < nq; ++q) {
            const double tau = m.taus()[q];
            const double phi = m.phis()[q];
            double rz = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double a = A[i * n + j];
                at(2 + q, i, 2 + q, j) += a * (tau / dt + 0.5);
                rz += a * (tau / dt - 0.5) * s.internal[q][j];
                if (scheme == Scheme::Displacement) {
                    at(2 + q, i, 1, j) -= a * 0.5 * phi;
                    rz += a * 0.5 * phi * s.U[j];
                } else {
                    at(2 + q, i, 0, j) -= a * 0.5 * tau * phi;
                    rz += a * 0.5 * tau * phi * s.W[j];
                }
            }
            r[(2 + q) * n + i] = rz;
        }
    }
    return oracle::dense_solve(K, r);
}

}  // namespace oracle
