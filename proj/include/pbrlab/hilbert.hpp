#pragma once

// Finite-dimensional statevector algebra: pure states, orthonormal bases,
// Born probabilities, global-phase equivalence and gridded two-particle
// wavefunctions. Every type is immutable once constructed.

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace pbrlab {

using Complex = std::complex<double>;

/// Normalized pure state. Construction rejects non-finite amplitudes and
/// vectors whose squared norm is off by more than tol::kNorm.
class QuantumState {
public:
    explicit QuantumState(std::vector<Complex> amplitudes, std::string label = {});

    /// Rescales `amplitudes` to unit norm. Throws InvalidArgument on the zero vector.
    static QuantumState normalized(std::vector<Complex> amplitudes, std::string label = {});
    static QuantumState basis_state(std::size_t dim, std::size_t index, std::string label = {});

    std::size_t dim() const noexcept { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
    const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }
    const std::string& label() const noexcept { return label_; }

    QuantumState with_label(std::string label) const;

    /// Representative of the global-phase class: the first amplitude with
    /// magnitude above tol::kPhasePivot is rotated onto the positive real axis.
    QuantumState canonical() const;

private:
    std::vector<Complex> amplitudes_;
    std::string label_;
};

/// Orthonormal basis; vector k is measurement outcome k.
class Basis {
public:
    explicit Basis(std::vector<QuantumState> vectors, std::string label = {});

    static Basis computational(std::size_t dim, std::string label = {});

    std::size_t dim() const noexcept { return vectors_.size(); }
    std::span<const QuantumState> vectors() const noexcept { return vectors_; }
    const QuantumState& operator[](std::size_t k) const { return vectors_[k]; }
    const std::string& label() const noexcept { return label_; }

    Basis with_label(std::string label) const;

private:
    std::vector<QuantumState> vectors_;
    std::string label_;
};

/// <a|b>, conjugate-linear in the first argument.
Complex inner_product(const QuantumState& a, const QuantumState& b);

/// Normalized linear combination sum_i coeffs[i] * states[i].
QuantumState superpose(std::span<const Complex> coeffs, std::span<const QuantumState> states,
                       std::string label = {});

/// Kronecker product, first factor major: index = i_a * b.dim() + i_b.
QuantumState tensor(const QuantumState& a, const QuantumState& b, std::string label = {});

/// |<target|state>|^2
double born_probability(const QuantumState& state, const QuantumState& target);

/// Outcome distribution of a projective measurement in `basis`.
std::vector<double> born_distribution(const QuantumState& state, const Basis& basis);

bool phase_equivalent(const QuantumState& a, const QuantumState& b, double tol);

/// Multiplies the component of `state` along basis[index] by exp(i*phase).
QuantumState apply_relative_phase(const QuantumState& state, const Basis& basis,
                                  std::size_t index, double phase);

namespace states {
QuantumState zero();
QuantumState one();
QuantumState plus();
QuantumState minus();
}  // namespace states

/// The three mutually unbiased qubit bases, in the order +z, -z, +x, -x, +y, -y.
std::array<QuantumState, 6> mub_family();

Basis z_basis();
Basis x_basis();
Basis y_basis();

// ---------------------------------------------------------------------------
// Gridded wavefunctions

/// Sample points with trapezoidal quadrature weights.
class Grid {
public:
    explicit Grid(std::vector<double> points);
    static Grid uniform(double lo, double hi, std::size_t n);

    std::size_t size() const noexcept { return points_.size(); }
    std::span<const double> points() const noexcept { return points_; }
    std::span<const double> weights() const noexcept { return weights_; }
    double operator[](std::size_t i) const { return points_[i]; }

private:
    std::vector<double> points_;
    std::vector<double> weights_;
};

/// sum_i |f_i|^2 w_i
double grid_norm2(const Grid& grid, std::span<const Complex> f);
std::vector<Complex> grid_normalize(const Grid& grid, std::span<const Complex> f);

/// Psi(x_i, x_j) on a G x G grid, normalized against the product
/// trapezoidal weights w_i * w_j.
class TwoParticleWavefunction {
public:
    TwoParticleWavefunction(Grid grid, std::vector<Complex> values);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return grid_.size(); }
    const Complex& operator()(std::size_t i, std::size_t j) const { return values_[i * size() + j]; }
    std::span<const Complex> values() const noexcept { return values_; }

    double weight(std::size_t i, std::size_t j) const;
    double norm2() const;
    /// Probability mass on the coincident cells: sum_i |Psi(x_i,x_i)|^2 w_i^2.
    double diagonal_mass() const;
    double max_abs_diagonal() const;

private:
    Grid grid_;
    std::vector<Complex> values_;
};

/// (psi1(x1) psi2(x2) + psi1(x2) psi2(x1)) / N
TwoParticleWavefunction symmetrize(std::span<const Complex> psi1, std::span<const Complex> psi2,
                                   const Grid& grid);
/// (psi1(x1) psi2(x2) - psi1(x2) psi2(x1)) / N; diagonal is exactly zero.
/// Throws DegenerateAntisymmetrization when psi1 and psi2 agree up to phase.
TwoParticleWavefunction antisymmetrize(std::span<const Complex> psi1, std::span<const Complex> psi2,
                                       const Grid& grid);

}  // namespace pbrlab
