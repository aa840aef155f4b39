#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "cvchar/baselines.hpp"

using namespace cvchar;

TEST_CASE("lower-bound family meets the characteristic-table structure gates") {
    const int m = 8;
    const double r = lowerbound_squeezing(m, 1.0);
    const LowerBoundFamily fam = build_lowerbound_family(m, r, 1.0);

    REQUIRE(fam.states.size() == size_t(m));
    REQUIRE(fam.points.size() == size_t(m));
    CHECK(fam.diagonal_min >= 0.49);
    CHECK(fam.diagonal_max <= 0.5);
    CHECK(fam.offdiag_max <= 0.01);
    CHECK(fam.diagonal_min - fam.offdiag_max >= 0.48);

    // every family member keeps the conjugation symmetry the estimator needs
    for (const auto& state : fam.states) {
        const auto sym = symmetry_of(state);
        REQUIRE(sym.has_value());
        CHECK(sym->is_identity());
        for (double t = 0.3; t < 1.5; t += 0.4) {
            const Complex a(std::cos(t), 0.3 * std::sin(t));
            const Complex lhs = characteristic(state, PhasePoint{a});
            const Complex rhs = characteristic(state, PhasePoint{std::conj(a)});
            CHECK(std::abs(lhs - rhs) < 1e-12);
        }
    }

    CHECK_THROWS(build_lowerbound_family(8, 1.5, 1.0)); // squeezing far too weak
    CHECK_THROWS(build_lowerbound_family(0, 20.0, 1.0));
}

TEST_CASE("restricted estimator concentrates with enough copies") {
    RngStream rng(3);
    const StateModel vac{GaussianStateSpec::vacuum()};

    SUBCASE("vacuum, single point") {
        const auto recs = restricted_estimate(vac, {PhasePoint{Complex(1.0, 0.0)}}, 100000,
                                              Backend::gaussian_analytic, rng);
        REQUIRE(recs.size() == 1);
        CHECK(recs[0].copies == 100000);
        CHECK(std::abs(recs[0].value - std::exp(-0.5)) < 0.02);
    }
    SUBCASE("family points against analytic truth") {
        const int m = 16;
        const LowerBoundFamily fam = build_lowerbound_family(m, lowerbound_squeezing(m, 1.0), 1.0);
        const StateModel& hidden = fam.states[3];
        const auto recs = restricted_estimate(hidden, fam.points, 16 * 10000,
                                              Backend::gaussian_analytic, rng);
        for (int j = 0; j < m; ++j) {
            REQUIRE(recs[j].copies > 0);
            CHECK(std::abs(recs[j].value - characteristic(hidden, fam.points[j])) < 0.05);
        }
    }
    SUBCASE("budget below the point count leaves gaps") {
        std::vector<PhasePoint> pts;
        for (int j = 0; j < 8; ++j) pts.emplace_back(Complex(0.1 * (j + 1), 0.0));
        const auto recs = restricted_estimate(vac, pts, 4, Backend::gaussian_analytic, rng);
        int unestimated = 0;
        long long assigned = 0;
        for (const auto& r : recs) {
            unestimated += r.copies == 0 ? 1 : 0;
            assigned += r.copies;
        }
        CHECK(unestimated >= 1);
        CHECK(assigned == 4);
    }
}

TEST_CASE("point-function experiment separates the two strategies at m = 8") {
    const int m = 8;
    const LowerBoundFamily fam = build_lowerbound_family(m, lowerbound_squeezing(m, 1.0), 1.0);
    ScalingOptions opts;
    opts.trials = 6;
    opts.workers = 4;
    RngStream rng(41);
    const auto rows = point_function_experiment(fam, {4 * m, 256 * m}, opts.trials, rng, opts);

    REQUIRE(rows.size() == 3);
    CHECK(rows[0].strategy == "restricted");
    CHECK(3 * rows[0].successes < 2 * rows[0].trials); // starved budget fails
    CHECK(3 * rows[1].successes >= 2 * rows[1].trials); // ample budget succeeds
    CHECK(rows[2].strategy == "quantum-enhanced");
    CHECK(3 * rows[2].successes >= 2 * rows[2].trials);
    CHECK(rows[2].budget ==
          plan_learn_points(opts.quantum_epsilon, opts.quantum_delta, m).quantum_copies());
}

TEST_CASE("line fitting recovers exact coefficients") {
    const LineFit f = fit_line({1.0, 2.0, 3.0, 4.0}, {5.0, 8.0, 11.0, 14.0});
    CHECK(f.intercept == doctest::Approx(2.0));
    CHECK(f.slope == doctest::Approx(3.0));
    CHECK(f.r2 == doctest::Approx(1.0));
    CHECK_THROWS(fit_line({1.0}, {2.0}));
    CHECK_THROWS(fit_line({1.0, 1.0}, {2.0, 3.0}));
}

TEST_CASE("scaling sweep emits rows, fits, and serializations") {
    ScalingOptions opts;
    opts.trials = 4;
    opts.workers = 4;
    RngStream rng(9);
    const ScalingReport rep = scaling_experiment({2, 4}, 1.0, {8, 512}, opts.trials, rng, opts);

    CHECK(rep.rows.size() == 6); // (2 budgets + 1 quantum row) per m
    REQUIRE(rep.quantum_copies.size() == 2);
    CHECK(rep.quantum_copies[0].second < rep.quantum_copies[1].second);
    REQUIRE(rep.restricted_copies_to_success.size() == 2);

    std::ostringstream csv;
    write_scaling_csv(csv, rep, 9);
    CHECK(csv.str().find("strategy,m,budget,trials,successes,seed") == 0);
    CHECK(csv.str().find("quantum-enhanced") != std::string::npos);

    const auto j = nlohmann::json::parse(scaling_fit_json(rep));
    CHECK(j.contains("restricted"));
    CHECK(j["quantum_enhanced"]["copies"].size() == 2);
}
