#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cvchar/protocols.hpp"

namespace cvchar {

// Hard family for the restricted scenario: M equal mixtures of two
// squeezed-vacuum states at orientations +-theta_i, theta_i = i pi/(2(M+1)),
// queried at alpha_i = |alpha| e^{i theta_i}. C_{rho_i}(alpha_i) ~ 1/2 while
// |C_{rho_i}(alpha_j)| ~ 0 off the diagonal.
struct LowerBoundFamily {
    int m = 0;
    double r = 0.0; // squeezing as a linear scale factor (exp of the usual parameter)
    double alpha_mag = 0.0;
    std::vector<StateModel> states;
    std::vector<PhasePoint> points;
    // verified structure of the M x M characteristic table
    double diagonal_min = 0.0;
    double diagonal_max = 0.0;
    double offdiag_max = 0.0;
};

// smallest scale-factor squeezing meeting the separation condition with a
// comfortable margin: max(16 |alpha|, 4 / (|alpha| sin(pi / (2(M+1)))))
double lowerbound_squeezing(int m, double alpha_mag);

// Throws if the requested (m, r, alpha_mag) cannot meet the structure gates
// (diagonal in [0.49, 0.5], off-diagonal <= 0.01).
LowerBoundFamily build_lowerbound_family(int m, double r, double alpha_mag);

// Conventional single-copy scenario: each of copy_budget copies is assigned to
// a uniformly random point and homodyned at phase arg(alpha); the per-point
// estimate is the empirical mean of e^{-i sqrt(2) |alpha| q}. Points that
// receive no copies come back with copies == 0 (unestimated).
std::vector<EstimateRecord> restricted_estimate(const StateModel& state,
                                                const std::vector<PhasePoint>& points,
                                                long long copy_budget, Backend backend,
                                                RngStream& rng);

struct ScalingOptions {
    int trials = 24;
    int workers = 1;
    double success_threshold = 0.25; // half the diagonal/off-diagonal gap
    double quantum_epsilon = 0.22; // learn_points accuracy, kept under the threshold
    double quantum_delta = 1.0 / 3.0;
};

struct ScalingRow {
    std::string strategy; // "restricted" | "quantum-enhanced"
    int m = 0;
    long long budget = 0; // copies per trial; quantum rows report accounted copies
    int trials = 0;
    int successes = 0;
};

// One family, one budget schedule: per-budget restricted success counts plus a
// single quantum-enhanced row at the planner-determined copy count. A trial
// succeeds when every one of the M point values is recovered within
// success_threshold of the analytic truth for a uniformly hidden index.
std::vector<ScalingRow> point_function_experiment(const LowerBoundFamily& family,
                                                  const std::vector<long long>& restricted_budgets,
                                                  int trials, RngStream& rng,
                                                  const ScalingOptions& opts = {});

struct ScalingReport {
    std::vector<ScalingRow> rows;
    // per M: smallest scheduled restricted budget reaching 2/3 success (-1 if none)
    std::vector<std::pair<int, long long>> restricted_copies_to_success;
    // per M: quantum-accounted copies of the enhanced strategy
    std::vector<std::pair<int, long long>> quantum_copies;
    std::vector<std::pair<int, int>> quantum_successes; // per M: (successes, trials)
    double restricted_loglog_slope = 0.0;
    double quantum_log_intercept = 0.0;
    double quantum_log_slope = 0.0;
    double quantum_log_r2 = 0.0;
};

// Full scaling sweep over m_values at |alpha| = alpha_mag. The restricted
// budget schedule per M is {mult * M : mult in budget_multipliers}.
ScalingReport scaling_experiment(const std::vector<int>& m_values, double alpha_mag,
                                 const std::vector<long long>& budget_multipliers, int trials,
                                 RngStream& rng, const ScalingOptions& opts = {});

// least-squares y = a + b x with coefficient of determination
struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double r2 = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

void write_scaling_csv(std::ostream& out, const ScalingReport& report, std::uint64_t seed);
std::string scaling_fit_json(const ScalingReport& report);

} // namespace cvchar
