#include <doctest.h>

#include <cmath>
#include <memory>

#include "cvchar/fock_oracle.hpp"
#include "cvchar/phase_space.hpp"

using namespace cvchar;

TEST_CASE("fourier_line reproduces the Gaussian transform pair") {
    // Int e^{-u^2/2} e^{i u x} du = sqrt(2 pi) e^{-x^2/2}
    const AxisSpec axis{0.0, 16.0, 512};
    Eigen::VectorXcd g(axis.points);
    for (int j = 0; j < axis.points; ++j)
        g(j) = std::exp(-0.5 * axis.coord(j) * axis.coord(j));
    const auto h = fourier_line(g, axis, +1);
    const AxisSpec conj = conjugate_axis(axis);
    for (int k = 0; k < conj.points; k += 5) {
        const double x = conj.coord(k);
        CHECK(std::abs(h(k) - std::sqrt(2.0 * M_PI) * std::exp(-0.5 * x * x)) < 1e-12);
    }
}

TEST_CASE("forward and inverse transforms compose to n * identity scaling") {
    const AxisSpec axis{0.0, 10.0, 256};
    Eigen::VectorXcd g(axis.points);
    for (int j = 0; j < axis.points; ++j)
        g(j) = std::exp(Complex(-0.3 * std::abs(axis.coord(j)), 0.8 * axis.coord(j)));
    const Eigen::VectorXcd h = fourier_line(g, axis, +1);
    const Eigen::VectorXcd back = fourier_line(h, conjugate_axis(axis), -1) / (2.0 * M_PI);
    CHECK((back - g).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("wigner function of the vacuum is the symmetric Gaussian") {
    const GridSpec ugrid{{0.0, 12.0, 128}, {0.0, 12.0, 128}};
    const auto w = wigner(StateModel{GaussianStateSpec::vacuum()}, ugrid);
    CHECK(field_integral(w) == doctest::Approx(1.0).epsilon(1e-9));
    for (int ix = 0; ix < w.grid.x.points; ix += 11)
        for (int ip = 0; ip < w.grid.p.points; ip += 11) {
            const double x = w.grid.x.coord(ix), p = w.grid.p.coord(ip);
            CHECK(std::abs(w.values(ix, ip) - std::exp(-(x * x + p * p)) / M_PI) < 1e-9);
        }
}

TEST_CASE("wigner function of |1> is negative at the origin") {
    const GridSpec ugrid{{0.0, 12.0, 128}, {0.0, 12.0, 128}};
    const auto w = wigner(StateModel{FockStateSpec{1}}, ugrid);
    const int i0 = 64; // coord(64) = 0
    CHECK(w.grid.x.coord(i0) == doctest::Approx(0.0));
    CHECK(w.values(i0, i0).real() == doctest::Approx(-1.0 / M_PI).epsilon(1e-6));
}

TEST_CASE("homodyne density from the characteristic matches the Fock route") {
    const AxisSpec zeta{0.0, 24.0, 1024};
    const std::vector<std::pair<StateModel, int>> cases = {
        {StateModel{CatStateSpec{Complex(1.6, 0.4), +1}}, 64},
        {StateModel{FockStateSpec{2}}, 16},
        {StateModel{GaussianStateSpec::squeezed_vacuum(0.8, 0.5)}, 80},
    };
    for (const auto& [s, dim] : cases)
        for (double theta : {0.0, 1.2}) {
            const auto fast = homodyne_from_characteristic(s, theta, zeta);
            const auto slow = fock::homodyne_pdf(to_fock(s, dim, 1e-7), theta, fast.axis);
            CHECK((fast.values - slow.values).cwiseAbs().maxCoeff() < 1e-7);
        }
}

TEST_CASE("pair outcome density matches the beam-splitter oracle") {
    const double r = 0.5, theta = 0.4;
    const StateModel sq{GaussianStateSpec::squeezed_vacuum(r, theta)};
    const GridSpec sgrid{{0.0, 16.0, 256}, {0.0, 16.0, 256}};
    const auto fast = pair_outcome_density(sq, 2.0 * theta, sgrid);
    CHECK(field_integral(fast) == doctest::Approx(1.0).epsilon(1e-9));

    const auto rho = to_fock(sq, 32, 1e-9);
    const auto slow = fock::joint_bs_pdf(rho, 2.0 * theta, fast.grid);
    double worst = 0.0;
    for (int ix = 0; ix < fast.grid.x.points; ix += 5)
        for (int ip = 0; ip < fast.grid.p.points; ip += 5)
            worst = std::max(worst,
                             std::abs(fast.values(ix, ip).real() - slow.values(ix, ip).real()));
    CHECK(worst < 1e-7);
}

TEST_CASE("pair outcome density Fourier statistic for a mixture with identity symmetry") {
    MixtureSpec mix;
    mix.components.push_back(
        {0.5, std::make_shared<StateModel>(GaussianStateSpec::squeezed_vacuum(0.5, 0.4))});
    mix.components.push_back(
        {0.5, std::make_shared<StateModel>(GaussianStateSpec::squeezed_vacuum(0.5, -0.4))});
    const StateModel s{std::move(mix)};
    const GridSpec sgrid{{0.0, 16.0, 256}, {0.0, 16.0, 256}};
    const auto f = pair_outcome_density(s, 0.0, sgrid);

    for (auto alpha : {Complex(0.4, 0.1), Complex(-0.2, 0.5)}) {
        Complex acc{0.0, 0.0};
        for (int ix = 0; ix < f.grid.x.points; ++ix)
            for (int ip = 0; ip < f.grid.p.points; ++ip)
                acc += f.values(ix, ip) * std::exp(Complex(0.0, -2.0 * (alpha.real() * f.grid.x.coord(ix) +
                                                                        alpha.imag() * f.grid.p.coord(ip))));
        acc *= f.grid.x.step() * f.grid.p.step();
        const Complex expect = characteristic(s, PhasePoint{alpha}) *
                               characteristic(s, PhasePoint{std::conj(alpha)});
        CHECK(std::abs(acc - expect) < 1e-8);
    }
}

TEST_CASE("transforms reject off-center or non-power-of-two axes") {
    CHECK_THROWS(conjugate_axis(AxisSpec{1.0, 8.0, 256}));
    CHECK_THROWS(conjugate_axis(AxisSpec{0.0, 8.0, 200}));
    CHECK_THROWS(fourier_line(Eigen::VectorXcd::Zero(128), AxisSpec{0.0, 8.0, 256}, +1));
}
