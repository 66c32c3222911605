#include "pbrlab/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "pbrlab/errors.hpp"
#include "pbrlab/tolerances.hpp"

namespace pbrlab {

namespace {

double squared_norm(std::span<const Complex> v) {
    double s = 0.0;
    for (const auto& a : v) s += std::norm(a);
    return s;
}

void require_same_dim(const QuantumState& a, const QuantumState& b, const char* what) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatch(std::string(what) + ": dimensions " + std::to_string(a.dim()) +
                                " and " + std::to_string(b.dim()));
    }
}

}  // namespace

QuantumState::QuantumState(std::vector<Complex> amplitudes, std::string label)
    : amplitudes_(std::move(amplitudes)), label_(std::move(label)) {
    if (amplitudes_.empty()) throw InvalidArgument("quantum state must have dimension >= 1");
    for (const auto& a : amplitudes_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw InvalidArgument("non-finite amplitude in state '" + label_ + "'");
        }
    }
    const double n2 = squared_norm(amplitudes_);
    if (std::abs(n2 - 1.0) > tol::kNorm) {
        throw NotNormalized("state '" + label_ + "' has squared norm " + std::to_string(n2));
    }
}

QuantumState QuantumState::normalized(std::vector<Complex> amplitudes, std::string label) {
    const double n2 = squared_norm(amplitudes);
    if (!(n2 > 0.0) || !std::isfinite(n2)) {
        throw InvalidArgument("cannot normalize a zero or non-finite vector");
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : amplitudes) a *= inv;
    return QuantumState(std::move(amplitudes), std::move(label));
}

QuantumState QuantumState::basis_state(std::size_t dim, std::size_t index, std::string label) {
    if (index >= dim) throw InvalidArgument("basis index out of range");
    std::vector<Complex> amps(dim, Complex{0.0, 0.0});
    amps[index] = 1.0;
    return QuantumState(std::move(amps), std::move(label));
}

QuantumState QuantumState::with_label(std::string label) const {
    QuantumState copy = *this;
    copy.label_ = std::move(label);
    return copy;
}

QuantumState QuantumState::canonical() const {
    QuantumState copy = *this;
    for (const auto& a : amplitudes_) {
        const double mag = std::abs(a);
        if (mag > tol::kPhasePivot) {
            const Complex rot = std::conj(a) / mag;
            for (auto& x : copy.amplitudes_) x *= rot;
            break;
        }
    }
    return copy;
}

Basis::Basis(std::vector<QuantumState> vectors, std::string label)
    : vectors_(std::move(vectors)), label_(std::move(label)) {
    if (vectors_.empty()) throw InvalidArgument("basis must contain at least one vector");
    const std::size_t d = vectors_.size();
    for (const auto& v : vectors_) {
        if (v.dim() != d) {
            throw DimensionMismatch("basis '" + label_ + "' has " + std::to_string(d) +
                                    " vectors of dimension " + std::to_string(v.dim()));
        }
    }
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            if (std::abs(inner_product(vectors_[i], vectors_[j])) > tol::kNorm) {
                throw InvalidArgument("basis '" + label_ + "' vectors " + std::to_string(i) +
                                      " and " + std::to_string(j) + " are not orthogonal");
            }
        }
    }
}

Basis Basis::computational(std::size_t dim, std::string label) {
    std::vector<QuantumState> v;
    v.reserve(dim);
    for (std::size_t k = 0; k < dim; ++k) v.push_back(QuantumState::basis_state(dim, k, std::to_string(k)));
    return Basis(std::move(v), std::move(label));
}

Basis Basis::with_label(std::string label) const {
    Basis copy = *this;
    copy.label_ = std::move(label);
    return copy;
}

Complex inner_product(const QuantumState& a, const QuantumState& b) {
    require_same_dim(a, b, "inner_product");
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

QuantumState superpose(std::span<const Complex> coeffs, std::span<const QuantumState> states,
                       std::string label) {
    if (coeffs.size() != states.size() || states.empty()) {
        throw InvalidArgument("superpose: need one coefficient per state and at least one state");
    }
    const std::size_t d = states.front().dim();
    for (const auto& s : states) require_same_dim(states.front(), s, "superpose");
    if (std::all_of(coeffs.begin(), coeffs.end(), [](const Complex& c) { return c == Complex{}; })) {
        throw InvalidArgument("superpose: all coefficients are zero");
    }
    std::vector<Complex> out(d, Complex{0.0, 0.0});
    for (std::size_t s = 0; s < states.size(); ++s) {
        for (std::size_t i = 0; i < d; ++i) out[i] += coeffs[s] * states[s][i];
    }
    if (squared_norm(out) <= tol::kNorm * tol::kNorm) {
        throw InvalidArgument("superpose: combination cancels to the zero vector");
    }
    return QuantumState::normalized(std::move(out), std::move(label));
}

QuantumState tensor(const QuantumState& a, const QuantumState& b, std::string label) {
    std::vector<Complex> out;
    out.reserve(a.dim() * b.dim());
    for (const auto& x : a.amplitudes()) {
        for (const auto& y : b.amplitudes()) out.push_back(x * y);
    }
    if (label.empty() && !a.label().empty() && !b.label().empty()) label = a.label() + b.label();
    return QuantumState(std::move(out), std::move(label));
}

double born_probability(const QuantumState& state, const QuantumState& target) {
    require_same_dim(state, target, "born_probability");
    return std::min(1.0, std::norm(inner_product(target, state)));
}

std::vector<double> born_distribution(const QuantumState& state, const Basis& basis) {
    std::vector<double> p;
    p.reserve(basis.dim());
    for (const auto& v : basis.vectors()) p.push_back(born_probability(state, v));
    return p;
}

bool phase_equivalent(const QuantumState& a, const QuantumState& b, double tol) {
    if (a.dim() != b.dim()) return false;
    const auto ca = a.canonical();
    const auto cb = b.canonical();
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) d2 += std::norm(ca[i] - cb[i]);
    return std::sqrt(d2) <= tol;
}

QuantumState apply_relative_phase(const QuantumState& state, const Basis& basis,
                                  std::size_t index, double phase) {
    if (index >= basis.dim()) {
        throw InvalidArgument("apply_relative_phase: index " + std::to_string(index) +
                              " out of range for basis of dimension " + std::to_string(basis.dim()));
    }
    if (state.dim() != basis.dim()) throw DimensionMismatch("apply_relative_phase: state/basis dimension");
    std::vector<Complex> out(state.dim(), Complex{0.0, 0.0});
    const Complex kick = std::polar(1.0, phase);
    for (std::size_t k = 0; k < basis.dim(); ++k) {
        Complex c = inner_product(basis[k], state);
        if (k == index) c *= kick;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * basis[k][i];
    }
    return QuantumState(std::move(out), state.label());
}

namespace states {

QuantumState zero() { return QuantumState({1.0, 0.0}, "0"); }
QuantumState one() { return QuantumState({0.0, 1.0}, "1"); }
QuantumState plus() {
    const double r = std::numbers::sqrt2 / 2.0;
    return QuantumState({r, r}, "+");
}
QuantumState minus() {
    const double r = std::numbers::sqrt2 / 2.0;
    return QuantumState({r, -r}, "-");
}

}  // namespace states

std::array<QuantumState, 6> mub_family() {
    const double r = std::numbers::sqrt2 / 2.0;
    const Complex i{0.0, 1.0};
    return {
        QuantumState({1.0, 0.0}, "+z"),   QuantumState({0.0, 1.0}, "-z"),
        QuantumState({r, r}, "+x"),       QuantumState({r, -r}, "-x"),
        QuantumState({r, i * r}, "+y"),   QuantumState({r, -i * r}, "-y"),
    };
}

Basis z_basis() {
    const auto f = mub_family();
    return Basis({f[0], f[1]}, "Z");
}

Basis x_basis() {
    const auto f = mub_family();
    return Basis({f[2], f[3]}, "X");
}

Basis y_basis() {
    const auto f = mub_family();
    return Basis({f[4], f[5]}, "Y");
}

// ---------------------------------------------------------------------------

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 2) throw InvalidArgument("grid needs at least two points");
    for (std::size_t i = 1; i < points_.size(); ++i) {
        if (!(points_[i] > points_[i - 1])) throw InvalidArgument("grid points must be strictly increasing");
    }
    const std::size_t n = points_.size();
    weights_.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = points_[i + 1] - points_[i];
        weights_[i] += 0.5 * h;
        weights_[i + 1] += 0.5 * h;
    }
}

Grid Grid::uniform(double lo, double hi, std::size_t n) {
    if (n < 2 || !(hi > lo)) throw InvalidArgument("uniform grid needs n >= 2 and hi > lo");
    std::vector<double> pts(n);
    const double h = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) pts[i] = lo + h * static_cast<double>(i);
    pts.back() = hi;
    return Grid(std::move(pts));
}

double grid_norm2(const Grid& grid, std::span<const Complex> f) {
    if (f.size() != grid.size()) throw DimensionMismatch("sampled function length differs from grid size");
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += std::norm(f[i]) * grid.weights()[i];
    return s;
}

std::vector<Complex> grid_normalize(const Grid& grid, std::span<const Complex> f) {
    const double n2 = grid_norm2(grid, f);
    if (!(n2 > 0.0)) throw InvalidArgument("cannot grid-normalize the zero function");
    const double inv = 1.0 / std::sqrt(n2);
    std::vector<Complex> out(f.begin(), f.end());
    for (auto& v : out) v *= inv;
    return out;
}

TwoParticleWavefunction::TwoParticleWavefunction(Grid grid, std::vector<Complex> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size() * grid_.size()) {
        throw DimensionMismatch("two-particle values must be G x G");
    }
    if (std::abs(norm2() - 1.0) > tol::kGrid) {
        throw NotNormalized("two-particle wavefunction grid norm " + std::to_string(norm2()));
    }
}

double TwoParticleWavefunction::weight(std::size_t i, std::size_t j) const {
    return grid_.weights()[i] * grid_.weights()[j];
}

double TwoParticleWavefunction::norm2() const {
    const std::size_t g = size();
    double s = 0.0;
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = 0; j < g; ++j) s += std::norm(values_[i * g + j]) * weight(i, j);
    }
    return s;
}

double TwoParticleWavefunction::diagonal_mass() const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) s += std::norm((*this)(i, i)) * weight(i, i);
    return s;
}

double TwoParticleWavefunction::max_abs_diagonal() const {
    double m = 0.0;
    for (std::size_t i = 0; i < size(); ++i) m = std::max(m, std::abs((*this)(i, i)));
    return m;
}

namespace {

enum class Exchange { kSymmetric, kAntisymmetric };

TwoParticleWavefunction exchange_combination(std::span<const Complex> psi1, std::span<const Complex> psi2,
                                             const Grid& grid, Exchange kind) {
    for (auto f : {psi1, psi2}) {
        if (std::abs(grid_norm2(grid, f) - 1.0) > tol::kGrid) {
            throw NotNormalized("single-particle input is not grid-normalized");
        }
    }
    const std::size_t g = grid.size();
    // Products are formed once so that raw(i,j) and raw(j,i) use the same
    // two operands; exchange (anti)symmetry is then exact in floating point.
    std::vector<Complex> prod(g * g);
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = 0; j < g; ++j) prod[i * g + j] = psi1[i] * psi2[j];
    }
    std::vector<Complex> raw(g * g);
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = 0; j < g; ++j) {
            raw[i * g + j] = kind == Exchange::kSymmetric ? prod[i * g + j] + prod[j * g + i]
                                                          : prod[i * g + j] - prod[j * g + i];
        }
    }
    double n2 = 0.0;
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = 0; j < g; ++j) n2 += std::norm(raw[i * g + j]) * grid.weights()[i] * grid.weights()[j];
    }
    if (n2 <= tol::kGrid) {
        if (kind == Exchange::kAntisymmetric) {
            throw DegenerateAntisymmetrization(
                "antisymmetrizing a function with itself (up to phase) gives the zero function");
        }
        throw InvalidArgument("symmetrized function vanishes on the grid");
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& v : raw) v *= inv;
    return TwoParticleWavefunction(grid, std::move(raw));
}

}  // namespace

TwoParticleWavefunction symmetrize(std::span<const Complex> psi1, std::span<const Complex> psi2,
                                   const Grid& grid) {
    return exchange_combination(psi1, psi2, grid, Exchange::kSymmetric);
}

TwoParticleWavefunction antisymmetrize(std::span<const Complex> psi1, std::span<const Complex> psi2,
                                       const Grid& grid) {
    return exchange_combination(psi1, psi2, grid, Exchange::kAntisymmetric);
}

}  // namespace pbrlab
