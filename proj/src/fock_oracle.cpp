#include "cvchar/fock_oracle.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace cvchar::fock {

namespace {
constexpr Complex kI{0.0, 1.0};
}

void TruncatedDensityMatrix::validate(double tail_tol) const {
    if (dim < 1 || rho.rows() != rho.cols())
        throw std::invalid_argument("TruncatedDensityMatrix: bad shape");
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-10) throw std::invalid_argument("TruncatedDensityMatrix: not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9)
        throw std::invalid_argument("TruncatedDensityMatrix: negative eigenvalue");
    const double tr = rho.trace().real();
    if (tr > 1.0 + 1e-10 || tr < 1.0 - tail_tol)
        throw std::invalid_argument("TruncatedDensityMatrix: trace outside [1 - tail_tol, 1]");
}

double OperatorMatrix::unitarity_leakage() const {
    const Matrix d = mat.adjoint() * mat - Matrix::Identity(mat.rows(), mat.cols());
    return d.cwiseAbs().maxCoeff();
}

OperatorMatrix annihilation(int dim) {
    if (dim < 2) throw std::invalid_argument("annihilation: dim must be >= 2");
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    return {dim, 1, std::move(a), false};
}

OperatorMatrix creation(int dim) {
    OperatorMatrix a = annihilation(dim);
    return {dim, 1, a.mat.adjoint(), false};
}

OperatorMatrix number_operator(int dim) {
    Matrix n = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) n(i, i) = double(i);
    return {dim, 1, std::move(n), false};
}

OperatorMatrix displacement(Complex beta, int dim) {
    if (std::abs(beta) > dim / 8.0)
        throw std::invalid_argument("displacement: |beta| exceeds dim/8 convergence guard");
    const Matrix a = annihilation(dim).mat;
    const Matrix gen = beta * a.adjoint() - std::conj(beta) * a;
    return {dim, 1, gen.exp(), true};
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

OperatorMatrix beam_splitter(int dim) {
    if (double(dim) * dim > 1 << 21)
        throw std::invalid_argument("beam_splitter: dim^2 exceeds memory budget");
    // exp((pi/4)(a1^dag a2 - a1 a2^dag)) conserves n1 + n2, so exponentiate one
    // total-photon-number block at a time instead of the dense dim^2 generator
    Matrix u = Matrix::Zero(dim * dim, dim * dim);
    for (int total = 0; total <= 2 * (dim - 1); ++total) {
        const int lo = std::max(0, total - dim + 1);
        const int b = std::min(total, dim - 1) - lo + 1;
        Matrix gen = Matrix::Zero(b, b);
        for (int k = 0; k + 1 < b; ++k) {
            const int n1 = lo + k, n2 = total - n1;
            // <n1+1, n2-1| a1^dag a2 |n1, n2> = sqrt((n1+1) n2)
            gen(k + 1, k) = (M_PI / 4.0) * std::sqrt(double(n1 + 1) * n2);
            gen(k, k + 1) = -gen(k + 1, k);
        }
        const Matrix ub = gen.exp();
        for (int r = 0; r < b; ++r)
            for (int c = 0; c < b; ++c)
                u((lo + r) * dim + (total - lo - r), (lo + c) * dim + (total - lo - c)) =
                    ub(r, c);
    }
    return {dim, 2, std::move(u), true};
}

OperatorMatrix phase_rotation(double theta, int dim) {
    Matrix r = Matrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) r(n, n) = std::exp(kI * (theta * n));
    return {dim, 1, std::move(r), true};
}

OperatorMatrix squeeze(double r, int dim) {
    const Matrix a = annihilation(dim).mat;
    const Matrix gen = 0.5 * r * (a * a - (a * a).adjoint());
    return {dim, 1, gen.exp(), true};
}

Complex characteristic_trace(const TruncatedDensityMatrix& rho, const PhasePoint& alpha) {
    if (alpha.k() != rho.modes)
        throw std::invalid_argument("characteristic_trace: mode count mismatch");
    Matrix d = displacement(-kI * alpha[0], rho.dim).mat;
    if (rho.modes == 2) d = kron(d, displacement(-kI * alpha[1], rho.dim).mat);
    return (rho.rho * d).trace();
}

Eigen::VectorXd hermite_functions(double q, int nmax) {
    Eigen::VectorXd psi(nmax);
    psi(0) = std::pow(M_PI, -0.25) * std::exp(-0.5 * q * q);
    if (nmax > 1) psi(1) = std::sqrt(2.0) * q * psi(0);
    for (int n = 1; n + 1 < nmax; ++n)
        psi(n + 1) = std::sqrt(2.0 / (n + 1)) * q * psi(n) - std::sqrt(double(n) / (n + 1)) * psi(n - 1);
    return psi;
}

namespace {

// u_m(q) = e^{-i theta m} psi_m(q); the homodyne density at phase theta is
// u^T rho conj(u).
Eigen::VectorXcd rotated_basis(double q, double theta, int dim) {
    const Eigen::VectorXd psi = hermite_functions(q, dim);
    Eigen::VectorXcd u(dim);
    for (int m = 0; m < dim; ++m) u(m) = std::exp(-kI * (theta * m)) * psi(m);
    return u;
}

} // namespace

DensityTable1D homodyne_pdf(const TruncatedDensityMatrix& rho, double theta, const AxisSpec& axis) {
    if (rho.modes != 1) throw std::invalid_argument("homodyne_pdf: single-mode only");
    DensityTable1D out{axis, Eigen::VectorXd::Zero(axis.points)};
    for (int i = 0; i < axis.points; ++i) {
        const Eigen::VectorXcd u = rotated_basis(axis.coord(i), theta, rho.dim);
        out.values(i) = (u.transpose() * rho.rho * u.conjugate()).value().real();
    }
    if (rho.rho.trace().real() - out.integral() > 1e-6)
        throw std::runtime_error("homodyne_pdf: grid tail mass above tolerance");
    return out;
}

Field2D joint_quadrature_pdf(const TruncatedDensityMatrix& rho2, double theta1, double theta2,
                             const GridSpec& grid) {
    if (rho2.modes != 2) throw std::invalid_argument("joint_quadrature_pdf: two-mode state required");
    const int d = rho2.dim;
    Field2D out(grid);

    // p(q1, q2) = sum_{m1,n1,m2,n2} rho[(m1 d + m2),(n1 d + n2)]
    //             u1[m1] conj(u1[n1]) u2[m2] conj(u2[n2]),
    // evaluated as two matrix products over the flattened (m,n) index
    Matrix a(d * d, d * d);
    for (int m1 = 0; m1 < d; ++m1)
        for (int n1 = 0; n1 < d; ++n1)
            for (int m2 = 0; m2 < d; ++m2)
                for (int n2 = 0; n2 < d; ++n2)
                    a(m1 * d + n1, m2 * d + n2) = rho2.rho(m1 * d + m2, n1 * d + n2);

    const auto outer_cols = [d](const AxisSpec& axis, double theta) {
        Matrix w(d * d, axis.points);
        for (int i = 0; i < axis.points; ++i) {
            const Eigen::VectorXcd u = rotated_basis(axis.coord(i), theta, d);
            for (int m = 0; m < d; ++m)
                for (int n = 0; n < d; ++n) w(m * d + n, i) = u(m) * std::conj(u(n));
        }
        return w;
    };
    const Matrix t_all = a * outer_cols(grid.p, theta2); // (d^2 x Np)
    out.values = (outer_cols(grid.x, theta1).transpose() * t_all).real().cast<Complex>();
    return out;
}

Field2D joint_bs_pdf(const TruncatedDensityMatrix& rho_single, double rotation,
                     const GridSpec& grid) {
    if (rho_single.modes != 1) throw std::invalid_argument("joint_bs_pdf: single-mode input");
    const int d = rho_single.dim;
    Matrix second = rho_single.rho;
    if (rotation != 0.0) {
        // R = e^{-i rotation n} conjugation realizes C(conj(alpha) e^{i rotation})
        // on the second copy.
        const Matrix r = phase_rotation(-rotation, d).mat;
        second = r * second * r.adjoint();
    }
    const Matrix bs = beam_splitter(d).mat;
    TruncatedDensityMatrix joint{d, 2, bs * kron(rho_single.rho, second) * bs.adjoint()};
    // Heisenberg images under this beam splitter are x_1 -> (x_1 + x_2)/sqrt(2)
    // and p_2 -> (p_2 - p_1)/sqrt(2); reading the second port at phase -pi/2
    // (the -p quadrature) makes e^{-2i(u x + v p)} average to
    // C(alpha) C(conj(alpha) e^{i rotation}) with alpha = u + i v.
    return joint_quadrature_pdf(joint, 0.0, -M_PI / 2.0, grid);
}

Complex expectation(const TruncatedDensityMatrix& rho, const Matrix& obs) {
    return (rho.rho * obs).trace();
}

Matrix reconstruct_from_characteristic(const TruncatedDensityMatrix& rho, double half_width,
                                       int points_per_axis) {
    const int d = rho.dim;
    // headroom so the displacement guard admits the grid corners
    const int dwork = std::max(d + 14, int(std::ceil(8.0 * std::sqrt(2.0) * half_width)) + 2);
    Matrix embedded = Matrix::Zero(dwork, dwork);
    embedded.topLeftCorner(d, d) = rho.rho;

    const double step = 2.0 * half_width / points_per_axis;
    Matrix acc = Matrix::Zero(dwork, dwork);
    for (int i = 0; i < points_per_axis; ++i) {
        const double u = -half_width + (i + 0.5) * step;
        for (int j = 0; j < points_per_axis; ++j) {
            const double v = -half_width + (j + 0.5) * step;
            const Complex alpha{u, v};
            const Matrix disp = displacement(alpha, dwork).mat;
            acc += (embedded * disp).trace() * displacement(-alpha, dwork).mat;
        }
    }
    acc *= step * step / M_PI;
    return acc.topLeftCorner(d, d);
}

} // namespace cvchar::fock
