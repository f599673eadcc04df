#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <string>
#include <vector>

#include "qgseg/errors.hpp"
#include "qgseg/infodiv.hpp"

namespace qgseg {

using Complex = std::complex<double>;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kProjectorTol = 1e-9;
inline constexpr double kReconstructionTol = 1e-8;
inline constexpr double kDefaultGroupTol = 1e-9;

/// Dense square complex matrix, row-major.
class ComplexMatrix {
   public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim);
    ComplexMatrix(std::size_t dim, std::vector<Complex> row_major);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix from_rows(const std::vector<std::vector<Complex>> &rows);
    /// |v><v| for an arbitrary (not necessarily normalized) vector.
    static ComplexMatrix outer(std::span<const Complex> v);

    std::size_t dim() const {
        return dim_;
    }
    Complex &operator()(std::size_t row, std::size_t col) {
        return data_[row * dim_ + col];
    }
    const Complex &operator()(std::size_t row, std::size_t col) const {
        return data_[row * dim_ + col];
    }
    std::span<const Complex> data() const {
        return data_;
    }

    ComplexMatrix adjoint() const;
    Complex trace() const;
    bool is_finite() const;
    bool is_hermitian(double tol = kHermitianTol) const;

    ComplexMatrix operator*(const ComplexMatrix &rhs) const;
    ComplexMatrix operator+(const ComplexMatrix &rhs) const;
    ComplexMatrix operator-(const ComplexMatrix &rhs) const;
    ComplexMatrix scaled(Complex factor) const;

    bool operator==(const ComplexMatrix &) const = default;

   private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

/// Largest absolute entry of (a - b). Dimensions must agree.
double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);

struct SpectralComponent {
    double eigenvalue;
    ComplexMatrix projector;
};

/// Eigenvalues and eigenvectors of a Hermitian matrix, eigenvalues ascending.
/// Eigenvector j is column j of `vectors`.
struct HermitianEigensystem {
    std::vector<double> values;
    ComplexMatrix vectors;
};

/// Cyclic complex Jacobi diagonalisation. Throws ValidationError on a
/// non-Hermitian or non-finite input.
HermitianEigensystem hermitian_eigensystem(const ComplexMatrix &m);

/// Spectral decomposition O = sum_j a_j P_j with eigenvalues closer than
/// `group_tol` merged into one eigenspace. Components are ordered by
/// strictly increasing eigenvalue.
std::vector<SpectralComponent> spectral_decomposition(const ComplexMatrix &m, double group_tol = kDefaultGroupTol);

/// A labeled Hermitian operator together with its spectral decomposition.
/// The outcome alphabet is the list of distinct eigenvalues in ascending
/// order; outcome index j refers to spectrum()[j].
class HermitianObservable {
   public:
    HermitianObservable(std::string label, ComplexMatrix matrix, double group_tol = kDefaultGroupTol);

    const std::string &label() const {
        return label_;
    }
    const ComplexMatrix &matrix() const {
        return matrix_;
    }
    const std::vector<SpectralComponent> &spectrum() const {
        return spectrum_;
    }
    std::size_t dim() const {
        return matrix_.dim();
    }
    std::size_t outcome_count() const {
        return spectrum_.size();
    }
    std::vector<double> alphabet() const;

   private:
    std::string label_;
    ComplexMatrix matrix_;
    std::vector<SpectralComponent> spectrum_;
};

enum class Pauli { X, Y, Z };

HermitianObservable pauli(Pauli name);
/// Kronecker product a⊗b, labeled "A⊗B", spectrum recomputed with grouping.
HermitianObservable tensor(const HermitianObservable &a, const HermitianObservable &b);
/// Parses "X", "Z*Z", "X⊗Y", "XY" (one Pauli letter per qubit).
HermitianObservable parse_observable(std::string_view text);

/// Density matrix: Hermitian, unit trace, positive semidefinite.
class QuantumState {
   public:
    /// Validates the invariants and throws ValidationError on violation.
    explicit QuantumState(ComplexMatrix rho);

    std::size_t dim() const {
        return rho_.dim();
    }
    const ComplexMatrix &rho() const {
        return rho_;
    }

   private:
    ComplexMatrix rho_;
};

/// Builds |psi><psi|. With `normalize`, the amplitudes are divided by their
/// Euclidean norm first and a warning is appended to `warnings` (or written
/// to stderr when `warnings` is null) if the norm is off by more than 1e-6.
QuantumState pure_to_density(std::span<const Complex> amplitudes, bool normalize = true,
                             std::vector<std::string> *warnings = nullptr);

/// Born-rule probabilities tr(rho P_j) in alphabet order, renormalized to sum to 1.
ProbDist born_distribution(const QuantumState &state, const HermitianObservable &obs);

}  // namespace qgseg
