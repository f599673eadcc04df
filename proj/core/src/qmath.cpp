#include "qgseg/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <sstream>

namespace qgseg {

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, Complex{0.0, 0.0}) {
    if (dim == 0) {
        throw ValidationError("matrix dimension must be positive");
    }
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> row_major)
    : dim_(dim), data_(std::move(row_major)) {
    if (dim == 0 || data_.size() != dim * dim) {
        throw ValidationError("matrix data does not describe a non-empty square matrix");
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(const std::vector<std::vector<Complex>> &rows) {
    std::vector<Complex> data;
    data.reserve(rows.size() * rows.size());
    for (const auto &row : rows) {
        if (row.size() != rows.size()) {
            throw ValidationError("matrix is not square");
        }
        data.insert(data.end(), row.begin(), row.end());
    }
    return ComplexMatrix(rows.size(), std::move(data));
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> v) {
    ComplexMatrix m(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = 0; j < v.size(); ++j) {
            m(i, j) = v[i] * std::conj(v[j]);
        }
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            out(i, j) = std::conj((*this)(j, i));
        }
    }
    return out;
}

Complex ComplexMatrix::trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

bool ComplexMatrix::is_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

bool ComplexMatrix::is_hermitian(double tol) const {
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = i; j < dim_; ++j) {
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) {
                return false;
            }
        }
    }
    return true;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix &rhs) const {
    if (rhs.dim_ != dim_) {
        throw ValidationError("matrix dimension mismatch in product");
    }
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t k = 0; k < dim_; ++k) {
            Complex a = (*this)(i, k);
            if (a == Complex{}) {
                continue;
            }
            for (std::size_t j = 0; j < dim_; ++j) {
                out(i, j) += a * rhs(k, j);
            }
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix &rhs) const {
    if (rhs.dim_ != dim_) {
        throw ValidationError("matrix dimension mismatch in sum");
    }
    ComplexMatrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) {
        out.data_[i] += rhs.data_[i];
    }
    return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix &rhs) const {
    return *this + rhs.scaled(-1.0);
}

ComplexMatrix ComplexMatrix::scaled(Complex factor) const {
    ComplexMatrix out = *this;
    for (auto &z : out.data_) {
        z *= factor;
    }
    return out;
}

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.dim() != b.dim()) {
        throw ValidationError("matrix dimension mismatch");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
    }
    return worst;
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    std::size_t da = a.dim();
    std::size_t db = b.dim();
    ComplexMatrix out(da * db);
    for (std::size_t i = 0; i < da; ++i) {
        for (std::size_t j = 0; j < da; ++j) {
            for (std::size_t k = 0; k < db; ++k) {
                for (std::size_t l = 0; l < db; ++l) {
                    out(i * db + k, j * db + l) = a(i, j) * b(k, l);
                }
            }
        }
    }
    return out;
}

namespace {

double off_diagonal_norm(const ComplexMatrix &a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
            if (i != j) {
                s += std::norm(a(i, j));
            }
        }
    }
    return std::sqrt(s);
}

double frobenius_norm(const ComplexMatrix &a) {
    double s = 0.0;
    for (Complex z : a.data()) {
        s += std::norm(z);
    }
    return std::sqrt(s);
}

// Applies A <- G^H A G and V <- V G for the unitary G that acts on the (p,q)
// plane as diag(1, e^{-i phi}) followed by a real rotation [[c, s], [-s, c]].
void rotate(ComplexMatrix &a, ComplexMatrix &v, std::size_t p, std::size_t q, double c, double s, Complex phase) {
    std::size_t d = a.dim();
    // Columns: A <- A G
    for (std::size_t i = 0; i < d; ++i) {
        Complex aip = a(i, p);
        Complex aiq = a(i, q) * std::conj(phase);
        a(i, p) = c * aip - s * aiq;
        a(i, q) = s * aip + c * aiq;
        Complex vip = v(i, p);
        Complex viq = v(i, q) * std::conj(phase);
        v(i, p) = c * vip - s * viq;
        v(i, q) = s * vip + c * viq;
    }
    // Rows: A <- G^H A
    for (std::size_t j = 0; j < d; ++j) {
        Complex apj = a(p, j);
        Complex aqj = a(q, j) * phase;
        a(p, j) = c * apj - s * aqj;
        a(q, j) = s * apj + c * aqj;
    }
}

}  // namespace

HermitianEigensystem hermitian_eigensystem(const ComplexMatrix &m) {
    if (!m.is_finite()) {
        throw ValidationError("matrix has non-finite entries");
    }
    if (!m.is_hermitian()) {
        throw ValidationError("matrix is not Hermitian within 1e-10");
    }
    std::size_t d = m.dim();
    // Symmetrize exactly so the rotations see a Hermitian input.
    ComplexMatrix a = (m + m.adjoint()).scaled(0.5);
    ComplexMatrix v = ComplexMatrix::identity(d);

    double scale = std::max(frobenius_norm(a), 1e-300);
    for (int sweep = 0; sweep < 64 && off_diagonal_norm(a) > 1e-15 * scale; ++sweep) {
        for (std::size_t p = 0; p + 1 < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                double b = std::abs(a(p, q));
                if (b <= 1e-300) {
                    continue;
                }
                Complex phase = a(p, q) / b;
                double app = a(p, p).real();
                double aqq = a(q, q).real();
                double tau = (aqq - app) / (2.0 * b);
                double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;
                rotate(a, v, p, q, c, s, phase);
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

    HermitianEigensystem out{std::vector<double>(d), ComplexMatrix(d)};
    for (std::size_t col = 0; col < d; ++col) {
        out.values[col] = a(order[col], order[col]).real();
        for (std::size_t row = 0; row < d; ++row) {
            out.vectors(row, col) = v(row, order[col]);
        }
    }
    return out;
}

std::vector<SpectralComponent> spectral_decomposition(const ComplexMatrix &m, double group_tol) {
    if (!(group_tol > 0.0)) {
        throw ValidationError("eigenvalue grouping tolerance must be positive");
    }
    HermitianEigensystem eig = hermitian_eigensystem(m);
    std::size_t d = m.dim();

    std::vector<SpectralComponent> spectrum;
    std::size_t start = 0;
    while (start < d) {
        std::size_t end = start + 1;
        while (end < d && eig.values[end] - eig.values[end - 1] <= group_tol) {
            ++end;
        }
        double sum = 0.0;
        ComplexMatrix projector(d);
        for (std::size_t col = start; col < end; ++col) {
            sum += eig.values[col];
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    projector(i, j) += eig.vectors(i, col) * std::conj(eig.vectors(j, col));
                }
            }
        }
        double eigenvalue = sum / static_cast<double>(end - start);
        // Rotation round-off turns exact integer spectra (Pauli products)
        // into 0.9999999999999998; snap so outcome values print cleanly.
        if (std::abs(eigenvalue - std::round(eigenvalue)) <= 1e-12) {
            eigenvalue = std::round(eigenvalue);
        }
        spectrum.push_back({eigenvalue, std::move(projector)});
        start = end;
    }
    return spectrum;
}

HermitianObservable::HermitianObservable(std::string label, ComplexMatrix matrix, double group_tol)
    : label_(std::move(label)), matrix_(std::move(matrix)) {
    if (!matrix_.is_hermitian()) {
        throw ValidationError("observable '" + label_ + "' is not Hermitian within 1e-10");
    }
    spectrum_ = spectral_decomposition(matrix_, group_tol);
}

std::vector<double> HermitianObservable::alphabet() const {
    std::vector<double> values;
    values.reserve(spectrum_.size());
    for (const auto &c : spectrum_) {
        values.push_back(c.eigenvalue);
    }
    return values;
}

HermitianObservable pauli(Pauli name) {
    using namespace std::complex_literals;
    switch (name) {
        case Pauli::X:
            return {"X", ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}})};
        case Pauli::Y:
            return {"Y", ComplexMatrix::from_rows({{0.0, -1.0i}, {1.0i, 0.0}})};
        case Pauli::Z:
            return {"Z", ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}})};
    }
    throw ValidationError("unknown Pauli name");
}

HermitianObservable tensor(const HermitianObservable &a, const HermitianObservable &b) {
    return {a.label() + "⊗" + b.label(), kron(a.matrix(), b.matrix())};
}

HermitianObservable parse_observable(std::string_view text) {
    std::vector<Pauli> factors;
    std::size_t i = 0;
    while (i < text.size()) {
        char ch = text[i];
        if (ch == 'X' || ch == 'x') {
            factors.push_back(Pauli::X);
        } else if (ch == 'Y' || ch == 'y') {
            factors.push_back(Pauli::Y);
        } else if (ch == 'Z' || ch == 'z') {
            factors.push_back(Pauli::Z);
        } else if (ch == '*' || ch == ' ') {
            // separator
        } else if (text.substr(i, 3) == "⊗") {
            i += 3;
            continue;
        } else {
            throw ValidationError("cannot parse observable '" + std::string(text) +
                                  "': expected Pauli letters X, Y, Z joined by '*'");
        }
        ++i;
    }
    if (factors.empty()) {
        throw ValidationError("empty observable description");
    }
    HermitianObservable obs = pauli(factors.front());
    for (std::size_t f = 1; f < factors.size(); ++f) {
        obs = tensor(obs, pauli(factors[f]));
    }
    return obs;
}

QuantumState::QuantumState(ComplexMatrix rho) : rho_(std::move(rho)) {
    if (!rho_.is_finite()) {
        throw ValidationError("density matrix has non-finite entries");
    }
    if (!rho_.is_hermitian()) {
        throw ValidationError("density matrix is not Hermitian within 1e-10");
    }
    Complex tr = rho_.trace();
    if (std::abs(tr - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "density matrix trace is " << tr.real() << ", expected 1";
        throw ValidationError(msg.str());
    }
    HermitianEigensystem eig = hermitian_eigensystem(rho_);
    if (eig.values.front() < -1e-9) {
        std::ostringstream msg;
        msg << "density matrix has negative eigenvalue " << eig.values.front();
        throw ValidationError(msg.str());
    }
}

QuantumState pure_to_density(std::span<const Complex> amplitudes, bool normalize,
                             std::vector<std::string> *warnings) {
    double norm2 = 0.0;
    for (Complex z : amplitudes) {
        norm2 += std::norm(z);
    }
    if (amplitudes.empty() || !(norm2 > 0.0)) {
        throw ValidationError("state vector must be non-zero");
    }
    if (!normalize) {
        return QuantumState(ComplexMatrix::outer(amplitudes));
    }
    double norm = std::sqrt(norm2);
    if (std::abs(norm - 1.0) > 1e-6) {
        std::ostringstream msg;
        msg.precision(10);
        msg << "state vector has norm " << norm << " (squared norm " << norm2 << "); normalizing";
        if (warnings != nullptr) {
            warnings->push_back(msg.str());
        } else {
            std::cerr << "warning: " << msg.str() << "\n";
        }
    }
    std::vector<Complex> unit(amplitudes.begin(), amplitudes.end());
    for (auto &z : unit) {
        z /= norm;
    }
    return QuantumState(ComplexMatrix::outer(unit));
}

ProbDist born_distribution(const QuantumState &state, const HermitianObservable &obs) {
    if (state.dim() != obs.dim()) {
        std::ostringstream msg;
        msg << "state dimension " << state.dim() << " does not match observable '" << obs.label()
            << "' dimension " << obs.dim();
        throw ValidationError(msg.str());
    }
    std::vector<double> probs;
    probs.reserve(obs.outcome_count());
    double total = 0.0;
    for (const auto &component : obs.spectrum()) {
        // tr(rho P) = sum_ij rho_ij P_ji
        Complex tr = 0.0;
        for (std::size_t i = 0; i < state.dim(); ++i) {
            for (std::size_t j = 0; j < state.dim(); ++j) {
                tr += state.rho()(i, j) * component.projector(j, i);
            }
        }
        double p = tr.real();
        if (p < -1e-9) {
            throw ValidationError("Born probability below -1e-9; state or projector is invalid");
        }
        p = std::clamp(p, 0.0, 1.0);
        probs.push_back(p);
        total += p;
    }
    for (auto &p : probs) {
        p /= total;
    }
    return ProbDist(std::move(probs), obs.label());
}

}  // namespace qgseg
