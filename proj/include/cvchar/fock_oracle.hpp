#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "cvchar/grid.hpp"
#include "cvchar/phase_point.hpp"

// Brute-force truncated Fock-space backend. Everything here is built from
// dense matrices and matrix exponentials; it is deliberately independent of
// the closed-form expressions in states.hpp so the two can cross-check each
// other.
namespace cvchar::fock {

using Matrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

struct TruncatedDensityMatrix {
    int dim = 0;
    int modes = 1;
    Matrix rho;

    // 1 - trace, the mass lost to truncation
    double tail() const { return 1.0 - rho.trace().real(); }
    void validate(double tail_tol = 1e-6) const;
};

struct OperatorMatrix {
    int dim = 0;
    int modes = 1;
    Matrix mat;
    bool unitary = false;

    // ||U^dag U - I||_max on the retained subspace
    double unitarity_leakage() const;
};

OperatorMatrix annihilation(int dim);
OperatorMatrix creation(int dim);
OperatorMatrix number_operator(int dim);

// D(beta) = exp(beta a^dag - conj(beta) a), dense matrix exponential.
OperatorMatrix displacement(Complex beta, int dim);

// Two-mode balanced beam splitter exp(pi/4 (a1^dag a2 - a1 a2^dag)), dim^2 x dim^2.
OperatorMatrix beam_splitter(int dim);

// exp(i theta n), diagonal.
OperatorMatrix phase_rotation(double theta, int dim);

// Squeeze operator exp(r/2 (a^2 - a^dag^2)); squeezes the position quadrature
// for r > 0 under the vacuum-variance-1/2 convention.
OperatorMatrix squeeze(double r, int dim);

Matrix kron(const Matrix& a, const Matrix& b);

// C_rho(alpha) = tr(rho D(-i alpha)); supports 1- and 2-mode rho.
Complex characteristic_trace(const TruncatedDensityMatrix& rho, const PhasePoint& alpha);

// Hermite functions psi_n(q) for n = 0..nmax-1 under the convention
// psi_0(q) = pi^{-1/4} exp(-q^2/2)  (vacuum quadrature variance 1/2).
Eigen::VectorXd hermite_functions(double q, int nmax);

// Outcome density of a homodyne measurement at quadrature phase theta.
DensityTable1D homodyne_pdf(const TruncatedDensityMatrix& rho, double theta, const AxisSpec& axis);

// Joint quadrature density of a 2-mode state: mode 1 measured at phase
// theta1, mode 2 at phase theta2.
Field2D joint_quadrature_pdf(const TruncatedDensityMatrix& rho2, double theta1, double theta2,
                             const GridSpec& grid);

// Two-copy protocol density: (1 (x) R) rho (x) rho (1 (x) R^dag), conjugated by
// the balanced beam splitter, then position on mode 1 and momentum on mode 2.
// `rotation` is the phase angle of the single-mode symmetry unitary U; the
// applied rotation realizes C(alpha) C(conj(alpha) e^{i rotation}) as the
// Fourier statistic of the returned density.
Field2D joint_bs_pdf(const TruncatedDensityMatrix& rho_single, double rotation,
                     const GridSpec& grid);

// tr(rho O)
Complex expectation(const TruncatedDensityMatrix& rho, const Matrix& obs);

// Fourier-Weyl reconstruction of rho from characteristic values sampled on a
// square grid |Re|,|Im| <= half_width. Used as a sanity property, dim <= 10.
Matrix reconstruct_from_characteristic(const TruncatedDensityMatrix& rho, double half_width,
                                       int points_per_axis);

} // namespace cvchar::fock
