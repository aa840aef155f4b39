#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "cvchar/fock_oracle.hpp"
#include "cvchar/grid.hpp"
#include "cvchar/phase_point.hpp"

namespace cvchar {

using Complex = std::complex<double>;

// Fixed quadrature convention used everywhere in this library:
//   x = (a + a^dag)/sqrt(2),  p = (a - a^dag)/(sqrt(2) i)
// so the vacuum quadrature variance is 1/2. The characteristic function is
//   C_rho(alpha) = tr(rho e^{-i alpha a^dag - i conj(alpha) a}),
// which in coordinates alpha = (x + i p)/sqrt(2) reads <e^{-i(x X + p P)}>.
struct QuadratureConvention {
    static constexpr double vacuum_quadrature_variance = 0.5;
};

// Zero-mean Gaussian state, covariance in (x1,p1,...,xk,pk) ordering.
struct GaussianStateSpec {
    int modes = 1;
    Eigen::MatrixXd cov;

    static GaussianStateSpec vacuum(int k = 1);
    // Squeezing parameter r in main-text units: the quadrature at phase
    // `theta` has variance e^{-2r}/2 (maps to the appendix parameterization
    // via r_appendix = e^r).
    static GaussianStateSpec squeezed_vacuum(double r, double theta);

    void validate() const;
};

struct FockStateSpec {
    int n = 0;
    static constexpr int max_n = 64;
};

// (|beta> + parity |-beta>)/sqrt(norm), parity in {+1, -1}.
struct CatStateSpec {
    Complex beta;
    int parity = +1;
    double norm() const;
};

// Pure state with explicit Fock-basis amplitudes.
struct BinomialCodeSpec {
    Eigen::VectorXcd coeffs;
    void validate() const;
};

// Delta-regularized GKP logical state, represented only through its finite
// Fock truncation (renormalized).
struct GkpSpec {
    double delta = 0.3;
    int logical = 0;
    int truncation_dim = 48;
};

// Explicit single-mode density matrix in the Fock basis.
struct RawFockSpec {
    Eigen::MatrixXcd rho;
};

struct StateModel;

struct MixtureComponent {
    double weight = 0.0;
    std::shared_ptr<const StateModel> state;
};

struct MixtureSpec {
    std::vector<MixtureComponent> components;
    void validate() const;
};

using StateVariant = std::variant<GaussianStateSpec, FockStateSpec, CatStateSpec,
                                  BinomialCodeSpec, GkpSpec, MixtureSpec, RawFockSpec>;

// Immutable after construction; safe to share across workers.
struct StateModel {
    StateVariant spec;

    StateModel() : spec(GaussianStateSpec::vacuum()) {}
    StateModel(StateVariant s) : spec(std::move(s)) {}

    int modes() const;
    std::string family() const;

    template <typename T> const T* as() const { return std::get_if<T>(&spec); }
};

// The k x k unitary U with C_rho(alpha) = C_rho(conj(alpha) U).
struct ReflectionSymmetry {
    Eigen::MatrixXcd unitary;

    // phase angle for a single-mode (scalar) U
    double phase() const;
    bool is_identity(double tol = 1e-12) const;
};

// --- operations -----------------------------------------------------------

// C_rho(alpha) under the convention above.
Complex characteristic(const StateModel& state, const PhasePoint& alpha);

// Homodyne outcome density at quadrature phase theta (single-mode states).
DensityTable1D quadrature_pdf(const StateModel& state, double theta, const AxisSpec& axis);

// Declared reflection symmetry, or nullopt when the family has none.
std::optional<ReflectionSymmetry> symmetry_of(const StateModel& state);

// Truncated Fock representation (single-mode states; dim >= 2).
fock::TruncatedDensityMatrix to_fock(const StateModel& state, int dim, double tail_tol = 1e-6);

// max over a deterministic probe grid of |C(alpha) - C(conj(alpha) U)|.
double symmetry_residual(const StateModel& state, const ReflectionSymmetry& sym,
                         int probe_points = 64, double radius = 2.5);

// Closed-form <m|D(beta)|n> (Laguerre form); independent of the matrix
// exponential route in fock_oracle.
Complex displacement_matrix_element(int m, int n, Complex beta);

// Fock-basis amplitudes for pure families (fock, cat, binomial, gkp).
Eigen::VectorXcd fock_amplitudes(const StateModel& state, int dim);

// serialization: documented key/value schema, exact round-trip
std::string state_to_json(const StateModel& state);
StateModel state_from_json(const std::string& text);
std::string state_hash(const StateModel& state);

} // namespace cvchar
