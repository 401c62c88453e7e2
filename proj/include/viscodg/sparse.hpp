#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace viscodg {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Triplet {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
};

/// Square CSR matrix. Column indices are strictly increasing within a row.
/// Indices are 32-bit so the storage maps directly onto Eigen's.
class SparseMatrix {
public:
    SparseMatrix() = default;
    explicit SparseMatrix(std::size_t n);  // zero matrix

    /// Duplicates are summed in (row, col, insertion order), so the result is
    /// reproducible bit for bit. Throws std::out_of_range on bad indices.
    static SparseMatrix from_triplets(std::size_t n, std::span<const Triplet> entries);

    /// Zero-valued matrix with a fixed pattern; `cols` sorted within each row.
    static SparseMatrix with_pattern(std::size_t n, std::vector<int> row_offsets, std::vector<int> cols);
    static SparseMatrix from_csr(std::size_t n, std::vector<int> row_offsets, std::vector<int> cols,
                                 std::vector<double> values);

    [[nodiscard]] std::size_t size() const { return n_; }
    [[nodiscard]] std::size_t nnz() const { return values_.size(); }
    [[nodiscard]] const std::vector<int>& row_offsets() const { return row_offsets_; }
    [[nodiscard]] const std::vector<int>& col_indices() const { return col_indices_; }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }

    /// Entry (i, j), zero when not stored.
    [[nodiscard]] double at(std::size_t i, std::size_t j) const;

    /// Reference to a stored entry; throws std::out_of_range outside the pattern.
    [[nodiscard]] double& coeff_ref(std::size_t i, std::size_t j);

    /// y = K x
    void multiply(std::span<const double> x, std::span<double> y) const;
    [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;

    /// x^T K y
    [[nodiscard]] double bilinear(std::span<const double> x, std::span<const double> y) const;

    [[nodiscard]] double max_abs() const;
    /// max |a_ij - a_ji| over stored entries.
    [[nodiscard]] double asymmetry() const;

    [[nodiscard]] std::vector<double> diagonal() const;

    /// Dense row-major copy, for small test systems.
    [[nodiscard]] std::vector<double> to_dense() const;

private:
    std::size_t n_ = 0;
    std::vector<int> row_offsets_{0};
    std::vector<int> col_indices_;
    std::vector<double> values_;
};

/// alpha * a + beta * b on the union of the two sparsity patterns.
SparseMatrix linear_combination(double alpha, const SparseMatrix& a, double beta, const SparseMatrix& b);

/// Sum of scaled matrices, all of the same dimension.
SparseMatrix linear_combination(std::span<const double> coeffs, std::span<const SparseMatrix* const> mats);

/// ||K x - b|| / ||b|| (or ||K x|| when b = 0).
double relative_residual(const SparseMatrix& k, std::span<const double> x, std::span<const double> b);

/// Cholesky and CG require an SPD matrix. LU accepts any nonsingular matrix
/// and exists to run schemes past the loss of coercivity.
enum class SolverMethod { Cholesky, ConjugateGradient, LU };

/// Factor of an SPD matrix, computed once and reused for any number of
/// right-hand sides. Solves are const and reentrant.
class Factorization {
public:
    /// Throws SolverError when the matrix is not numerically SPD (singular for LU).
    explicit Factorization(const SparseMatrix& k, SolverMethod method = SolverMethod::Cholesky);
    ~Factorization();
    Factorization(Factorization&&) noexcept;
    Factorization& operator=(Factorization&&) noexcept;
    Factorization(const Factorization&) = delete;
    Factorization& operator=(const Factorization&) = delete;

    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] SolverMethod method() const;

    /// Relative residual target; also the CG stopping tolerance.
    [[nodiscard]] static constexpr double tolerance() { return 1e-10; }

    [[nodiscard]] std::vector<double> solve(std::span<const double> b) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

inline Factorization factor(const SparseMatrix& k) { return Factorization(k); }

/// One-shot SPD solve.
std::vector<double> spd_solve(const SparseMatrix& k, std::span<const double> b);

struct CgResult {
    std::vector<double> x;
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

/// Jacobi-preconditioned conjugate gradients from x = 0.
CgResult conjugate_gradient(const SparseMatrix& k, std::span<const double> b, double rtol, int max_iterations);

}  // namespace viscodg
