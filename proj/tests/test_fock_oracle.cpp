#include <doctest.h>

#include <cmath>

#include "cvchar/fock_oracle.hpp"
#include "cvchar/states.hpp"

using namespace cvchar;
using fock::Matrix;

namespace {
Matrix x_op(int dim) {
    return (fock::annihilation(dim).mat + fock::creation(dim).mat) / std::sqrt(2.0);
}
} // namespace

TEST_CASE("ladder operator algebra on the retained subspace") {
    const int dim = 24;
    const auto a = fock::annihilation(dim).mat;
    const auto ad = fock::creation(dim).mat;
    const Matrix comm = a * ad - ad * a;
    // [a, a^dag] = 1 except the truncation corner
    for (int i = 0; i < dim - 1; ++i)
        for (int j = 0; j < dim - 1; ++j)
            CHECK(std::abs(comm(i, j) - (i == j ? 1.0 : 0.0)) < 1e-13);
    CHECK((fock::number_operator(dim).mat - ad * a).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("displacement produces coherent amplitudes") {
    const int dim = 40;
    const fock::Complex beta{0.8, -0.5};
    const auto d = fock::displacement(beta, dim);
    CHECK(d.unitarity_leakage() < 1e-9);
    fock::Complex amp = std::exp(-0.5 * std::norm(beta));
    for (int n = 0; n < 12; ++n) {
        CHECK(std::abs(d.mat(n, 0) - amp) < 1e-10);
        amp *= beta / std::sqrt(double(n + 1));
    }
}

TEST_CASE("vacuum characteristic trace") {
    const int dim = 32;
    fock::TruncatedDensityMatrix vac{dim, 1, Matrix::Zero(dim, dim)};
    vac.rho(0, 0) = 1.0;
    for (auto a : {Complex(0.3, 0.0), Complex(0.0, 0.7), Complex(-0.4, 0.9)}) {
        const auto c = fock::characteristic_trace(vac, PhasePoint{a});
        CHECK(std::abs(c - std::exp(-0.5 * std::norm(a))) < 1e-10);
    }
}

TEST_CASE("squeeze operator squeezes the position quadrature") {
    const int dim = 48;
    const double r = 0.5;
    const auto s = fock::squeeze(r, dim);
    CHECK(s.unitarity_leakage() < 1e-9);
    Matrix rho = Matrix::Zero(dim, dim);
    rho(0, 0) = 1.0;
    rho = s.mat * rho * s.mat.adjoint();
    const Matrix x = x_op(dim);
    const auto var = fock::expectation({dim, 1, rho}, x * x);
    CHECK(std::abs(var.real() - 0.5 * std::exp(-2.0 * r)) < 1e-9);
    CHECK(std::abs(var.imag()) < 1e-12);
}

TEST_CASE("phase rotation is diagonal e^{i theta n}") {
    const auto u = fock::phase_rotation(0.37, 16);
    for (int n = 0; n < 16; ++n)
        CHECK(std::abs(u.mat(n, n) - std::exp(Complex(0.0, 0.37 * n))) < 1e-12);
    CHECK(u.mat.cwiseAbs().sum() - u.mat.diagonal().cwiseAbs().sum() < 1e-14);
}

TEST_CASE("hermite functions are orthonormal under grid quadrature") {
    const AxisSpec axis{0.0, 10.0, 2000};
    const int nmax = 12;
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(nmax, nmax);
    for (int i = 0; i < axis.points; ++i) {
        const Eigen::VectorXd h = fock::hermite_functions(axis.coord(i), nmax);
        gram += h * h.transpose() * axis.step();
    }
    CHECK((gram - Eigen::MatrixXd::Identity(nmax, nmax)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(fock::hermite_functions(0.0, 1)(0) == doctest::Approx(std::pow(M_PI, -0.25)).epsilon(1e-12));
}

TEST_CASE("homodyne density of the vacuum is a centered normal") {
    const int dim = 8;
    fock::TruncatedDensityMatrix vac{dim, 1, Matrix::Zero(dim, dim)};
    vac.rho(0, 0) = 1.0;
    const AxisSpec axis{0.0, 8.0, 512};
    const auto pdf = fock::homodyne_pdf(vac, 1.234, axis);
    for (int i = 0; i < axis.points; i += 13) {
        const double q = axis.coord(i);
        CHECK(std::abs(pdf.values(i) - std::exp(-q * q) / std::sqrt(M_PI)) < 1e-12);
    }
}

TEST_CASE("homodyne density of |2> matches its frozen value") {
    auto rho = to_fock(StateModel{FockStateSpec{2}}, 16);
    const AxisSpec axis{0.0, 8.0, 512};
    const auto pdf = fock::homodyne_pdf(rho, 0.4, axis);
    const int i = int((0.7 + 8.0) / axis.step());
    CHECK(axis.coord(i) == doctest::Approx(0.6875).epsilon(1e-12));
    CHECK(pdf.values(i) == doctest::Approx(5.258952007403913e-04).epsilon(1e-9));
}

TEST_CASE("balanced beam splitter splits a single photon evenly") {
    const int dim = 6;
    const auto bs = fock::beam_splitter(dim);
    CHECK(bs.unitarity_leakage() < 1e-10);
    Eigen::VectorXcd in = Eigen::VectorXcd::Zero(dim * dim);
    in(1 * dim + 0) = 1.0; // |1,0>
    const Eigen::VectorXcd out = bs.mat * in;
    CHECK(std::norm(out(1 * dim + 0)) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(std::norm(out(0 * dim + 1)) == doctest::Approx(0.5).epsilon(1e-10));
    // photon number is conserved
    double off = 0.0;
    for (int m = 0; m < dim; ++m)
        for (int n = 0; n < dim; ++n)
            if (m + n != 1) off += std::norm(out(m * dim + n));
    CHECK(off < 1e-20);
}

TEST_CASE("two-copy interference density realizes C(alpha) C(conj(alpha) U)") {
    const double r = 0.5, theta = 0.4;
    const StateModel sq{GaussianStateSpec::squeezed_vacuum(r, theta)};
    const double rotation = 2.0 * theta; // phase of the symmetry unitary
    const auto rho = to_fock(sq, 32, 1e-9);
    const GridSpec grid{{0.0, 8.0, 256}, {0.0, 8.0, 256}};
    const auto f = fock::joint_bs_pdf(rho, rotation, grid);

    for (auto alpha : {Complex(0.3, 0.2), Complex(-0.5, 0.1), Complex(0.0, 0.45)}) {
        // Fourier statistic of the joint density at frequency 2 alpha
        Complex acc{0.0, 0.0};
        for (int ix = 0; ix < grid.x.points; ++ix)
            for (int ip = 0; ip < grid.p.points; ++ip) {
                const double x = grid.x.coord(ix), p = grid.p.coord(ip);
                acc += f.values(ix, ip) *
                       std::exp(Complex(0.0, -2.0 * (alpha.real() * x + alpha.imag() * p)));
            }
        acc *= grid.x.step() * grid.p.step();

        const Complex lhs = characteristic(sq, PhasePoint{alpha});
        const Complex rhs = characteristic(
            sq, PhasePoint{std::conj(alpha) * std::exp(Complex(0.0, rotation))});
        CHECK(std::abs(acc - lhs * rhs) < 1e-6);
    }
}

TEST_CASE("joint quadrature density of a product state factorizes") {
    const int dim = 10;
    Matrix single = Matrix::Zero(dim, dim);
    single(1, 1) = 1.0; // |1><1|
    fock::TruncatedDensityMatrix rho2{dim, 2, fock::kron(single, single)};
    const GridSpec grid{{0.0, 6.0, 128}, {0.0, 6.0, 128}};
    const auto f = fock::joint_quadrature_pdf(rho2, 0.0, M_PI / 2, grid);
    const auto m1 = fock::homodyne_pdf({dim, 1, single}, 0.0, grid.x);
    const auto m2 = fock::homodyne_pdf({dim, 1, single}, M_PI / 2, grid.p);
    double worst = 0.0;
    for (int ix = 0; ix < 128; ix += 7)
        for (int ip = 0; ip < 128; ip += 7)
            worst = std::max(worst,
                             std::abs(f.values(ix, ip).real() - m1.values(ix) * m2.values(ip)));
    CHECK(worst < 1e-10);
}

TEST_CASE("Fourier-Weyl reconstruction recovers a small density matrix") {
    auto rho = to_fock(StateModel{FockStateSpec{1}}, 6);
    const Matrix rec = fock::reconstruct_from_characteristic(rho, 6.0, 96);
    CHECK((rec - rho.rho).cwiseAbs().maxCoeff() < 1e-6);
}
