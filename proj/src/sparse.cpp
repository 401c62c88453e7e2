#include "viscodg/sparse.hpp"

#include <Eigen/Sparse>
#include <Eigen/CholmodSupport>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace viscodg {

namespace {

void check_int_range(std::size_t value, const char* what)
{
    if (value > static_cast<std::size_t>(std::numeric_limits<int>::max())) {
        throw std::length_error(std::string("SparseMatrix: ") + what + " exceeds 32-bit index range");
    }
}

double norm2(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

}  // namespace

SparseMatrix::SparseMatrix(std::size_t n) : n_(n), row_offsets_(n + 1, 0)
{
    check_int_range(n, "dimension");
}

SparseMatrix SparseMatrix::from_triplets(std::size_t n, std::span<const Triplet> entries)
{
    check_int_range(n, "dimension");
    for (const auto& e : entries) {
        if (e.row >= n || e.col >= n) {
            throw std::out_of_range("SparseMatrix::from_triplets: index out of range");
        }
    }
    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ea = entries[a];
        const auto& eb = entries[b];
        return ea.row != eb.row ? ea.row < eb.row : ea.col < eb.col;
    });

    SparseMatrix m(n);
    std::vector<std::size_t> counts(n, 0);
    for (std::size_t idx = 0; idx < order.size();) {
        const auto& first = entries[order[idx]];
        double sum = 0.0;
        while (idx < order.size() && entries[order[idx]].row == first.row && entries[order[idx]].col == first.col) {
            sum += entries[order[idx]].value;
            ++idx;
        }
        m.col_indices_.push_back(static_cast<int>(first.col));
        m.values_.push_back(sum);
        ++counts[first.row];
    }
    check_int_range(m.values_.size(), "nonzero count");
    for (std::size_t i = 0; i < n; ++i) {
        m.row_offsets_[i + 1] = m.row_offsets_[i] + static_cast<int>(counts[i]);
    }
    return m;
}

SparseMatrix SparseMatrix::from_csr(std::size_t n, std::vector<int> row_offsets, std::vector<int> cols,
                                    std::vector<double> values)
{
    if (values.size() != cols.size()) {
        throw std::invalid_argument("SparseMatrix::from_csr: value count mismatch");
    }
    auto m = with_pattern(n, std::move(row_offsets), std::move(cols));
    m.values_ = std::move(values);
    return m;
}

SparseMatrix SparseMatrix::with_pattern(std::size_t n, std::vector<int> row_offsets, std::vector<int> cols)
{
    check_int_range(n, "dimension");
    check_int_range(cols.size(), "nonzero count");
    if (row_offsets.size() != n + 1 || row_offsets.front() != 0 ||
        static_cast<std::size_t>(row_offsets.back()) != cols.size()) {
        throw std::invalid_argument("SparseMatrix::with_pattern: inconsistent row offsets");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (int p = row_offsets[i]; p < row_offsets[i + 1]; ++p) {
            if (cols[p] < 0 || static_cast<std::size_t>(cols[p]) >= n ||
                (p > row_offsets[i] && cols[p] <= cols[p - 1])) {
                throw std::invalid_argument("SparseMatrix::with_pattern: columns must be sorted and in range");
            }
        }
    }
    SparseMatrix m;
    m.n_ = n;
    m.row_offsets_ = std::move(row_offsets);
    m.col_indices_ = std::move(cols);
    m.values_.assign(m.col_indices_.size(), 0.0);
    return m;
}

double SparseMatrix::at(std::size_t i, std::size_t j) const
{
    if (i >= n_ || j >= n_) {
        throw std::out_of_range("SparseMatrix::at: index out of range");
    }
    const auto begin = col_indices_.begin() + row_offsets_[i];
    const auto end = col_indices_.begin() + row_offsets_[i + 1];
    const auto it = std::lower_bound(begin, end, static_cast<int>(j));
    if (it == end || *it != static_cast<int>(j)) {
        return 0.0;
    }
    return values_[static_cast<std::size_t>(it - col_indices_.begin())];
}

double& SparseMatrix::coeff_ref(std::size_t i, std::size_t j)
{
    if (i < n_) {
        const auto begin = col_indices_.begin() + row_offsets_[i];
        const auto end = col_indices_.begin() + row_offsets_[i + 1];
        const auto it = std::lower_bound(begin, end, static_cast<int>(j));
        if (it != end && *it == static_cast<int>(j)) {
            return values_[static_cast<std::size_t>(it - col_indices_.begin())];
        }
    }
    throw std::out_of_range("SparseMatrix::coeff_ref: entry not in pattern");
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const
{
    if (x.size() != n_ || y.size() != n_) {
        throw std::invalid_argument("SparseMatrix::multiply: size mismatch");
    }
    for (std::size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
            s += values_[p] * x[col_indices_[p]];
        }
        y[i] = s;
    }
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const
{
    std::vector<double> y(n_, 0.0);
    multiply(x, y);
    return y;
}

double SparseMatrix::bilinear(std::span<const double> x, std::span<const double> y) const
{
    const auto ky = multiply(y);
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        s += x[i] * ky[i];
    }
    return s;
}

double SparseMatrix::max_abs() const
{
    double m = 0.0;
    for (double v : values_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double SparseMatrix::asymmetry() const
{
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (int p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
            worst = std::max(worst, std::abs(values_[p] - at(static_cast<std::size_t>(col_indices_[p]), i)));
        }
    }
    return worst;
}

std::vector<double> SparseMatrix::diagonal() const
{
    std::vector<double> d(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        d[i] = at(i, i);
    }
    return d;
}

std::vector<double> SparseMatrix::to_dense() const
{
    std::vector<double> dense(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        for (int p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
            dense[i * n_ + static_cast<std::size_t>(col_indices_[p])] = values_[p];
        }
    }
    return dense;
}

SparseMatrix linear_combination(std::span<const double> coeffs, std::span<const SparseMatrix* const> mats)
{
    if (coeffs.size() != mats.size() || mats.empty()) {
        throw std::invalid_argument("linear_combination: need one coefficient per matrix");
    }
    const std::size_t n = mats.front()->size();
    for (const auto* m : mats) {
        if (m->size() != n) {
            throw std::invalid_argument("linear_combination: dimension mismatch");
        }
    }
    std::vector<int> offsets(n + 1, 0);
    std::vector<int> cols;
    std::vector<double> vals;
    std::vector<std::pair<int, double>> row;
    for (std::size_t i = 0; i < n; ++i) {
        row.clear();
        for (std::size_t m = 0; m < mats.size(); ++m) {
            const auto& mat = *mats[m];
            for (int p = mat.row_offsets()[i]; p < mat.row_offsets()[i + 1]; ++p) {
                row.emplace_back(mat.col_indices()[p], coeffs[m] * mat.values()[p]);
            }
        }
        std::stable_sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t p = 0; p < row.size();) {
            const int c = row[p].first;
            double s = 0.0;
            while (p < row.size() && row[p].first == c) {
                s += row[p].second;
                ++p;
            }
            cols.push_back(c);
            vals.push_back(s);
        }
        check_int_range(cols.size(), "nonzero count");
        offsets[i + 1] = static_cast<int>(cols.size());
    }
    return SparseMatrix::from_csr(n, std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix linear_combination(double alpha, const SparseMatrix& a, double beta, const SparseMatrix& b)
{
    const double coeffs[] = {alpha, beta};
    const SparseMatrix* mats[] = {&a, &b};
    return linear_combination(coeffs, mats);
}

double relative_residual(const SparseMatrix& k, std::span<const double> x, std::span<const double> b)
{
    auto r = k.multiply(x);
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] -= b[i];
    }
    const double nb = norm2(b);
    return nb > 0.0 ? norm2(r) / nb : norm2(r);
}

CgResult conjugate_gradient(const SparseMatrix& k, std::span<const double> b, double rtol, int max_iterations)
{
    const std::size_t n = k.size();
    CgResult res;
    res.x.assign(n, 0.0);
    const double nb = norm2(b);
    if (nb == 0.0) {
        res.converged = true;
        return res;
    }
    auto diag = k.diagonal();
    for (double& d : diag) {
        if (!(d > 0.0)) {
            return res;  // Jacobi needs a positive diagonal; an SPD matrix has one
        }
    }
    std::vector<double> r(b.begin(), b.end());
    std::vector<double> z(n), p(n), q(n);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = r[i] / diag[i];
    }
    p = z;
    double rz = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
    for (int it = 1; it <= max_iterations; ++it) {
        k.multiply(p, q);
        const double pq = std::inner_product(p.begin(), p.end(), q.begin(), 0.0);
        if (!(pq > 0.0)) {
            res.iterations = it;
            return res;
        }
        const double alpha = rz / pq;
        for (std::size_t i = 0; i < n; ++i) {
            res.x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        res.iterations = it;
        res.relative_residual = norm2(r) / nb;
        if (res.relative_residual <= rtol) {
            // Confirm against the true residual; recursion drift can mislead.
            res.relative_residual = relative_residual(k, res.x, b);
            if (res.relative_residual <= rtol) {
                res.converged = true;
                return res;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            z[i] = r[i] / diag[i];
        }
        const double rz_new = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = z[i] + beta * p[i];
        }
    }
    return res;
}

struct Factorization::Impl {
    using EigenSparse = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
    SolverMethod method = SolverMethod::Cholesky;
    std::size_t n = 0;
    Eigen::CholmodSupernodalLLT<EigenSparse, Eigen::Lower> llt;
    Eigen::SparseLU<EigenSparse, Eigen::COLAMDOrdering<int>> lu;
    SparseMatrix cg_matrix;
};

Factorization::Factorization(const SparseMatrix& k, SolverMethod method) : impl_(std::make_unique<Impl>())
{
    impl_->method = method;
    impl_->n = k.size();
    if (method == SolverMethod::ConjugateGradient) {
        impl_->cg_matrix = k;
        return;
    }
    // CSR read as CSC is the transpose, which is the same matrix when symmetric.
    const Eigen::Map<const Impl::EigenSparse> view(static_cast<Eigen::Index>(k.size()), static_cast<Eigen::Index>(k.size()),
                                                   static_cast<Eigen::Index>(k.nnz()), k.row_offsets().data(),
                                                   k.col_indices().data(), k.values().data());
    if (method == SolverMethod::LU) {
        const Impl::EigenSparse a = view.transpose();
        impl_->lu.compute(a);
        if (impl_->lu.info() != Eigen::Success) {
            throw SolverError("LU factorization failed: matrix is singular");
        }
        return;
    }
    // Failure is reported through SolverError, not CHOLMOD's own printing.
    impl_->llt.cholmod().print = 0;
    {
        Impl::EigenSparse lower = view.triangularView<Eigen::Lower>();
        impl_->llt.compute(lower);
    }
    if (impl_->llt.info() != Eigen::Success) {
        throw SolverError("Cholesky factorization failed: matrix is not symmetric positive definite");
    }
}

Factorization::~Factorization() = default;
Factorization::Factorization(Factorization&&) noexcept = default;
Factorization& Factorization::operator=(Factorization&&) noexcept = default;

std::size_t Factorization::size() const { return impl_->n; }
SolverMethod Factorization::method() const { return impl_->method; }

std::vector<double> Factorization::solve(std::span<const double> b) const
{
    if (b.size() != impl_->n) {
        throw std::invalid_argument("Factorization::solve: size mismatch");
    }
    if (impl_->method == SolverMethod::ConjugateGradient) {
        const int max_it = static_cast<int>(std::min<std::size_t>(10 * impl_->n, std::numeric_limits<int>::max()));
        auto res = conjugate_gradient(impl_->cg_matrix, b, tolerance(), max_it);
        if (!res.converged) {
            throw SolverError("conjugate gradients did not converge: matrix may not be SPD");
        }
        return std::move(res.x);
    }
    const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
    const Eigen::VectorXd x = impl_->method == SolverMethod::LU ? Eigen::VectorXd(impl_->lu.solve(rhs))
                                                                : Eigen::VectorXd(impl_->llt.solve(rhs));
    return {x.data(), x.data() + x.size()};
}

std::vector<double> spd_solve(const SparseMatrix& k, std::span<const double> b)
{
    return Factorization(k).solve(b);
}

}  // namespace viscodg
