#include <doctest.h>

#include <cmath>
#include <memory>

#include "cvchar/fock_oracle.hpp"
#include "cvchar/states.hpp"

using namespace cvchar;

namespace {

const std::vector<Complex> kProbes = {
    {0.2, 0.0}, {0.0, 0.3}, {0.5, -0.4}, {-0.7, 0.6}, {1.1, 0.2},
    {-0.3, -0.9}, {0.05, 1.3}, {0.9, 0.9}, {-1.2, 0.4}, {0.6, -1.0},
};

void check_against_oracle(const StateModel& s, int dim, double tol = 1e-6) {
    const auto rho = to_fock(s, dim, 1e-7);
    for (auto a : kProbes) {
        const Complex lhs = characteristic(s, PhasePoint{a});
        const Complex rhs = fock::characteristic_trace(rho, PhasePoint{a});
        CHECK(std::abs(lhs - rhs) < tol);
    }
}

} // namespace

TEST_CASE("vacuum characteristic is the Gaussian e^{-|alpha|^2/2}") {
    const StateModel vac{GaussianStateSpec::vacuum()};
    for (auto a : kProbes)
        CHECK(std::abs(characteristic(vac, PhasePoint{a}) - std::exp(-0.5 * std::norm(a))) < 1e-14);
}

TEST_CASE("Fock characteristic is the Laguerre form") {
    const StateModel f2{FockStateSpec{2}};
    for (auto a : kProbes) {
        const double x = std::norm(a);
        const double l2 = 1.0 - 2.0 * x + 0.5 * x * x;
        CHECK(std::abs(characteristic(f2, PhasePoint{a}) - std::exp(-0.5 * x) * l2) < 1e-13);
    }
}

TEST_CASE("squeezed vacuum characteristic matches the angular closed form") {
    const double r = 0.8, theta = 1.1;
    const StateModel sq{GaussianStateSpec::squeezed_vacuum(r, theta)};
    for (auto a : kProbes) {
        const double phi = std::arg(a);
        const double c2 = std::cos(phi - theta) * std::cos(phi - theta);
        const double expected = std::exp(
            -std::norm(a) * (std::exp(-2.0 * r) * c2 + std::exp(2.0 * r) * (1.0 - c2)));
        // exponent is -|alpha|^2 (e^{-2r} cos^2 + e^{2r} sin^2), variance 1/2 units
        CHECK(characteristic(sq, PhasePoint{a}).real() ==
              doctest::Approx(std::sqrt(expected)).epsilon(1e-12));
        CHECK(std::abs(characteristic(sq, PhasePoint{a}).imag()) < 1e-15);
    }
}

TEST_CASE("frozen oracle values") {
    const StateModel cat{CatStateSpec{Complex(2.0, 0.0), +1}};
    CHECK(std::abs(characteristic(cat, PhasePoint{Complex(0.35, 0.15)}) -
                   Complex(1.583973491522925e-01, 0.0)) < 1e-9);

    const StateModel gkp{GkpSpec{0.3, 0, 48}};
    CHECK(std::abs(characteristic(gkp, PhasePoint{Complex(0.5, 0.0)}) -
                   Complex(2.887390936796054e-01, 0.0)) < 1e-9);

    Eigen::VectorXcd c(2);
    c << Complex(1 / std::sqrt(2.0), 0), Complex(0, 1 / std::sqrt(2.0));
    const StateModel bin{BinomialCodeSpec{c}};
    CHECK(std::abs(characteristic(bin, PhasePoint{Complex(0.4, -0.2)}) -
                   Complex(8.143536762323634e-01, 1.809674836071919e-01)) < 1e-9);

    const StateModel sq{GaussianStateSpec::squeezed_vacuum(0.6, 0.7)};
    CHECK(std::abs(characteristic(sq, PhasePoint{Complex(0.3, 0.4)}) -
                   Complex(9.447719428906342e-01, 0.0)) < 1e-9);
}

TEST_CASE("analytic characteristics agree with the truncated-Fock oracle") {
    check_against_oracle(StateModel{GaussianStateSpec::vacuum()}, 24);
    check_against_oracle(StateModel{GaussianStateSpec::squeezed_vacuum(0.6, 0.7)}, 56);
    check_against_oracle(StateModel{FockStateSpec{3}}, 24);
    check_against_oracle(StateModel{CatStateSpec{Complex(1.4, 0.8), +1}}, 48);
    check_against_oracle(StateModel{CatStateSpec{Complex(1.2, 0.0), -1}}, 48);
    Eigen::VectorXcd c(3);
    c << Complex(0.6, 0.0), Complex(0.0, 0.48), Complex(-0.64, 0.0);
    check_against_oracle(StateModel{BinomialCodeSpec{c}}, 24);
    check_against_oracle(StateModel{GkpSpec{0.35, 1, 48}}, 64);

    MixtureSpec mix;
    mix.components.push_back(
        {0.5, std::make_shared<StateModel>(GaussianStateSpec::squeezed_vacuum(0.5, 0.4))});
    mix.components.push_back(
        {0.5, std::make_shared<StateModel>(GaussianStateSpec::squeezed_vacuum(0.5, -0.4))});
    check_against_oracle(StateModel{std::move(mix)}, 56);
}

TEST_CASE("to_fock of a thermal-like Gaussian matches the analytic characteristic") {
    GaussianStateSpec g;
    g.modes = 1;
    Eigen::Matrix2d d = Eigen::Matrix2d::Zero();
    d(0, 0) = 0.9;
    d(1, 1) = 0.35;
    const double th = 0.7;
    Eigen::Matrix2d rot;
    rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    g.cov = rot * d * rot.transpose();
    g.validate();
    check_against_oracle(StateModel{g}, 48);
}

TEST_CASE("closed-form displacement matrix elements match the exponential route") {
    const int dim = 40;
    const Complex beta{0.7, 0.3};
    const auto d = fock::displacement(beta, dim);
    for (int m = 0; m < 20; ++m)
        for (int n = 0; n < 20; ++n)
            CHECK(std::abs(displacement_matrix_element(m, n, beta) - d.mat(m, n)) < 1e-8);
}

TEST_CASE("cat amplitudes carry the right parity structure") {
    const CatStateSpec spec{Complex(1.5, 0.0), -1};
    const auto c = fock_amplitudes(StateModel{spec}, 40);
    CHECK(std::abs(c.norm() - 1.0) < 1e-12);
    for (int n = 0; n < 40; n += 2) CHECK(std::abs(c(n)) < 1e-15); // odd cat: even terms vanish
    CHECK(std::abs(c(1)) > 0.1);
}

TEST_CASE("homodyne densities agree with the oracle") {
    const AxisSpec axis{0.0, 8.0, 512};
    const std::vector<std::pair<StateModel, int>> cases = {
        {StateModel{CatStateSpec{Complex(1.5, 0.0), -1}}, 40},
        {StateModel{GaussianStateSpec::squeezed_vacuum(0.5, 1.1)}, 48},
        {StateModel{FockStateSpec{3}}, 16},
    };
    for (const auto& [s, dim] : cases) {
        for (double theta : {0.0, 0.9, M_PI / 2}) {
            const auto direct = quadrature_pdf(s, theta, axis);
            const auto oracle = fock::homodyne_pdf(to_fock(s, dim, 1e-7), theta, axis);
            CHECK((direct.values - oracle.values).cwiseAbs().maxCoeff() < 1e-8);
        }
    }
}

TEST_CASE("gaussian quadrature density has the projected variance") {
    const StateModel sq{GaussianStateSpec::squeezed_vacuum(0.7, 0.3)};
    const AxisSpec axis{0.0, 10.0, 1024};
    for (double theta : {0.0, 0.3, 1.0}) {
        const auto pdf = quadrature_pdf(sq, theta, axis);
        double m2 = 0.0;
        for (int i = 0; i < axis.points; ++i)
            m2 += pdf.values(i) * axis.coord(i) * axis.coord(i) * axis.step();
        const double c2 = std::cos(theta - 0.3) * std::cos(theta - 0.3);
        const double var = 0.5 * (std::exp(-1.4) * c2 + std::exp(1.4) * (1.0 - c2));
        CHECK(m2 == doctest::Approx(var).epsilon(1e-8));
    }
}

TEST_CASE("declared symmetries hold on the probe grid") {
    std::vector<StateModel> states;
    states.emplace_back(GaussianStateSpec::vacuum());
    states.emplace_back(GaussianStateSpec::squeezed_vacuum(0.6, 0.9));
    states.emplace_back(FockStateSpec{4});
    states.emplace_back(CatStateSpec{Complex(1.0, 1.0), +1});
    states.emplace_back(GkpSpec{0.4, 0, 40});
    MixtureSpec mix;
    mix.components.push_back(
        {0.5, std::make_shared<StateModel>(GaussianStateSpec::squeezed_vacuum(0.5, 0.4))});
    mix.components.push_back(
        {0.5, std::make_shared<StateModel>(GaussianStateSpec::squeezed_vacuum(0.5, -0.4))});
    states.emplace_back(std::move(mix));

    for (const auto& s : states) {
        const auto sym = symmetry_of(s);
        REQUIRE(sym.has_value());
        CHECK(symmetry_residual(s, *sym) < 1e-8);
    }

    // cat along beta's axis: U = e^{2i arg beta}
    const auto cat_sym = symmetry_of(StateModel{CatStateSpec{Complex(1.0, 1.0), +1}});
    CHECK(cat_sym->phase() == doctest::Approx(M_PI / 2).epsilon(1e-12));

    // the +-theta squeezed mixture is symmetric under the identity
    CHECK(symmetry_of(states.back())->is_identity(1e-12));

    // a state with no reflection axis reports none
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
    rho(0, 0) = 0.5;
    rho(1, 1) = 0.5;
    rho(0, 1) = Complex(0.2, 0.3);
    rho(1, 0) = std::conj(rho(0, 1));
    CHECK(!symmetry_of(StateModel{RawFockSpec{rho}}).has_value());
}

TEST_CASE("wrong symmetry candidates leave a visible residual") {
    const StateModel sq{GaussianStateSpec::squeezed_vacuum(0.6, 0.9)};
    ReflectionSymmetry wrong;
    wrong.unitary = Eigen::MatrixXcd::Constant(1, 1, Complex(1.0, 0.0));
    CHECK(symmetry_residual(sq, wrong) > 1e-3);
}

TEST_CASE("json round trip is exact and rejects unknown keys") {
    std::vector<StateModel> states;
    states.emplace_back(GaussianStateSpec::squeezed_vacuum(0.6, 0.9));
    states.emplace_back(FockStateSpec{4});
    states.emplace_back(CatStateSpec{Complex(1.0, -0.5), -1});
    Eigen::VectorXcd c(2);
    c << Complex(1 / std::sqrt(2.0), 0), Complex(0, 1 / std::sqrt(2.0));
    states.emplace_back(BinomialCodeSpec{c});
    states.emplace_back(GkpSpec{0.3, 1, 48});
    MixtureSpec mix;
    mix.components.push_back({0.25, std::make_shared<StateModel>(FockStateSpec{1})});
    mix.components.push_back({0.75, std::make_shared<StateModel>(GaussianStateSpec::vacuum())});
    states.emplace_back(std::move(mix));

    for (const auto& s : states) {
        const std::string text = state_to_json(s);
        CHECK(state_to_json(state_from_json(text)) == text);
        CHECK(state_hash(s) == state_hash(state_from_json(text)));
    }
    CHECK(state_hash(states[0]) != state_hash(states[1]));

    CHECK_THROWS(state_from_json(R"({"family":"fock","n":2,"bogus":1})"));
    CHECK_THROWS(state_from_json(R"({"family":"sombrero"})"));
    CHECK_THROWS(state_from_json(R"({"family":"cat","beta":[1,0],"parity":2})"));
}

TEST_CASE("invalid specs are rejected") {
    GaussianStateSpec bad;
    bad.modes = 1;
    bad.cov = 0.2 * Eigen::MatrixXd::Identity(2, 2); // below the uncertainty bound
    CHECK_THROWS(bad.validate());

    MixtureSpec mix;
    mix.components.push_back({0.7, std::make_shared<StateModel>(FockStateSpec{0})});
    CHECK_THROWS(mix.validate());

    BinomialCodeSpec b;
    b.coeffs = Eigen::VectorXcd::Ones(3);
    CHECK_THROWS(b.validate());

    CHECK_THROWS(to_fock(StateModel{FockStateSpec{5}}, 4));
}
