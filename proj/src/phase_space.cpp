#include "cvchar/phase_space.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace cvchar {

namespace {

std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

// in-place DFT, fftw_sign is FFTW_FORWARD (-1) or FFTW_BACKWARD (+1)
void dft_1d(Eigen::VectorXcd& v, int fftw_sign) {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_plan plan = fftw_plan_dft_1d(int(v.size()), reinterpret_cast<fftw_complex*>(v.data()),
                                      reinterpret_cast<fftw_complex*>(v.data()), fftw_sign,
                                      FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

void require_centered(const AxisSpec& axis) {
    axis.validate(true);
    if (axis.center != 0.0)
        throw std::invalid_argument("fourier transforms require a zero-centered axis");
}

} // namespace

AxisSpec conjugate_axis(const AxisSpec& axis) {
    require_centered(axis);
    const double conj_step = 2.0 * M_PI / (axis.points * axis.step());
    return AxisSpec{0.0, 0.5 * axis.points * conj_step, axis.points};
}

Eigen::VectorXcd fourier_line(const Eigen::VectorXcd& g, const AxisSpec& axis, int sign) {
    require_centered(axis);
    if (g.size() != axis.points) throw std::invalid_argument("fourier_line: size mismatch");
    if (sign != 1 && sign != -1) throw std::invalid_argument("fourier_line: sign must be +-1");
    const int n = axis.points;

    // e^{i s u_j x_k} with u_j = -L + j step, x_k = -X + k cstep factors into
    // the plain DFT kernel e^{2 pi i s jk/n} and alternating-sign shifts.
    Eigen::VectorXcd work(n);
    for (int j = 0; j < n; ++j) work(j) = (j % 2 == 0 ? 1.0 : -1.0) * g(j);
    dft_1d(work, sign == 1 ? FFTW_BACKWARD : FFTW_FORWARD);
    // e^{i s L X} = e^{i s n pi / 2}
    const Complex corner = std::exp(Complex(0.0, sign * n * M_PI / 2.0));
    for (int k = 0; k < n; ++k)
        work(k) *= axis.step() * corner * (k % 2 == 0 ? 1.0 : -1.0);
    return work;
}

Field2D fourier_plane(const Field2D& f, int sign) {
    f.check_shape();
    Field2D out;
    out.grid = GridSpec{conjugate_axis(f.grid.x), conjugate_axis(f.grid.p)};
    out.values.resize(f.values.rows(), f.values.cols());

    Eigen::MatrixXcd tmp(f.values.rows(), f.values.cols());
    for (int ip = 0; ip < f.grid.p.points; ++ip) {
        Eigen::VectorXcd col = f.values.col(ip);
        tmp.col(ip) = fourier_line(col, f.grid.x, sign);
    }
    for (int ix = 0; ix < f.grid.x.points; ++ix) {
        Eigen::VectorXcd row = tmp.row(ix);
        out.values.row(ix) = fourier_line(row, f.grid.p, sign).transpose();
    }
    return out;
}

Field2D characteristic_table(const StateModel& state, const GridSpec& ugrid) {
    Field2D out(ugrid);
    const double s = 1.0 / std::sqrt(2.0);
    for (int ix = 0; ix < ugrid.x.points; ++ix)
        for (int ip = 0; ip < ugrid.p.points; ++ip)
            out.values(ix, ip) = characteristic(
                state, PhasePoint{Complex(ugrid.x.coord(ix) * s, ugrid.p.coord(ip) * s)});
    return out;
}

Field2D wigner(const StateModel& state, const GridSpec& ugrid) {
    Field2D chi = characteristic_table(state, ugrid);
    Field2D w = fourier_plane(chi, +1);
    w.values /= 4.0 * M_PI * M_PI;
    return w;
}

namespace {

void clip_and_renormalize(Eigen::VectorXd& v, double cell, double neg_tol, const char* what) {
    const double scale = std::max(v.maxCoeff(), 1e-300);
    if (v.minCoeff() < -neg_tol * scale)
        throw std::runtime_error(std::string(what) + ": density has a significant negative part; "
                                                     "enlarge or refine the transform grid");
    v = v.cwiseMax(0.0);
    const double mass = v.sum() * cell;
    if (std::abs(mass - 1.0) > 1e-3)
        throw std::runtime_error(std::string(what) + ": density mass " + std::to_string(mass) +
                                 " is far from 1; enlarge the transform grid");
    v /= mass;
}

} // namespace

DensityTable1D homodyne_from_characteristic(const std::function<Complex(double)>& chi_ray,
                                            const AxisSpec& zeta_axis, double neg_tol) {
    require_centered(zeta_axis);
    Eigen::VectorXcd g(zeta_axis.points);
    for (int j = 0; j < zeta_axis.points; ++j) g(j) = chi_ray(zeta_axis.coord(j));
    const Eigen::VectorXcd h = fourier_line(g, zeta_axis, +1) / (2.0 * M_PI);

    DensityTable1D out{conjugate_axis(zeta_axis), h.real()};
    clip_and_renormalize(out.values, out.axis.step(), neg_tol, "homodyne_from_characteristic");
    return out;
}

DensityTable1D homodyne_from_characteristic(const StateModel& state, double theta,
                                            const AxisSpec& zeta_axis, double neg_tol) {
    const Complex dir = std::exp(Complex(0.0, theta)) / std::sqrt(2.0);
    return homodyne_from_characteristic(
        [&](double zeta) { return characteristic(state, PhasePoint{zeta * dir}); }, zeta_axis,
        neg_tol);
}

Field2D pair_outcome_density(const StateModel& state, double symmetry_phase,
                             const GridSpec& sgrid, double neg_tol) {
    Field2D g(sgrid);
    const Complex u = std::exp(Complex(0.0, symmetry_phase));
    for (int is = 0; is < sgrid.x.points; ++is)
        for (int it = 0; it < sgrid.p.points; ++it) {
            const Complex beta{0.5 * sgrid.x.coord(is), 0.5 * sgrid.p.coord(it)};
            g.values(is, it) = characteristic(state, PhasePoint{beta}) *
                               characteristic(state, PhasePoint{std::conj(beta) * u});
        }
    Field2D f = fourier_plane(g, +1);
    f.values /= 4.0 * M_PI * M_PI;

    Eigen::VectorXd flat = f.values.real().reshaped();
    clip_and_renormalize(flat, f.grid.x.step() * f.grid.p.step(), neg_tol,
                         "pair_outcome_density");
    f.values = flat.reshaped(f.values.rows(), f.values.cols()).cast<Complex>();
    return f;
}

double field_integral(const Field2D& f) {
    f.check_shape();
    return f.values.real().sum() * f.grid.x.step() * f.grid.p.step();
}

} // namespace cvchar
