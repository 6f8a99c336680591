#pragma once

// Small dense complex linear algebra for two-qubit open-system work.
//
// Two-qubit basis order is |11>, |10>, |01>, |00> throughout: qubit A is the
// left tensor factor and the single-qubit basis is (|1>, |0>), so sigma_z is
// diag(+1, -1).

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace heomcorr {

using Complex = std::complex<double>;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
    /// Row-major nested initializer, e.g. {{0, 1}, {1, 0}}.
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
    static ComplexMatrix diagonal(std::span<const double> values);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<Complex> entries() { return data_; }
    std::span<const Complex> entries() const { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conj() const;
    Complex trace() const;

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(Complex s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

/// Largest entry modulus.
double max_abs(const ComplexMatrix& m);
double frobenius_norm(const ComplexMatrix& m);
/// max |h - h^dagger|; zero for Hermitian input.
double hermiticity_defect(const ComplexMatrix& h);

namespace pauli {
ComplexMatrix identity2();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
/// sigma_+ = |1><0| (raises |0> to |1>).
ComplexMatrix plus();
ComplexMatrix minus();
}  // namespace pauli

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Subsystem { A, B };

/// Reduced state of the kept qubit from a 4x4 two-qubit operator.
ComplexMatrix partial_trace(const ComplexMatrix& rho, Subsystem keep);

struct HermitianEigenDecomposition {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // columns, matching eigenvalues
};

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kNegativeClamp = 1e-10;
inline constexpr double kNegativeReject = 1e-8;

/// Cyclic Jacobi diagonalization. Throws DimensionError for non-square
/// input and NumericalError when h deviates from Hermitian beyond 1e-10.
HermitianEigenDecomposition hermitian_eig(const ComplexMatrix& h);

/// Eigenvalues only, ascending.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h);

/// Positive square root of a PSD Hermitian matrix. Eigenvalues in
/// [-1e-8, 1e-10) are treated as zero; anything below -1e-8 throws.
ComplexMatrix psd_sqrt(const ComplexMatrix& rho);

}  // namespace heomcorr
