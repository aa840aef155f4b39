#include "cvchar/baselines.hpp"

#include <cmath>
#include <memory>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "cvchar/parallel.hpp"

namespace cvchar {

double lowerbound_squeezing(int m, double alpha_mag) {
    if (m < 1 || !(alpha_mag > 0.0))
        throw std::invalid_argument("lowerbound_squeezing: need m >= 1, |alpha| > 0");
    const double theta_min = M_PI / (2.0 * (m + 1));
    return std::max(16.0 * alpha_mag, 4.0 / (alpha_mag * std::sin(theta_min)));
}

LowerBoundFamily build_lowerbound_family(int m, double r, double alpha_mag) {
    if (m < 1 || m > 64)
        throw std::invalid_argument("build_lowerbound_family: m must be in [1, 64]");
    if (!(r > 1.0) || !(alpha_mag > 0.0))
        throw std::invalid_argument("build_lowerbound_family: need r > 1 and |alpha| > 0");

    LowerBoundFamily fam;
    fam.m = m;
    fam.r = r;
    fam.alpha_mag = alpha_mag;
    const double r_log = std::log(r); // squeezed_vacuum takes the exponent form

    for (int i = 1; i <= m; ++i) {
        const double theta = i * M_PI / (2.0 * (m + 1));
        MixtureSpec mix;
        mix.components.push_back(
            {0.5, std::make_shared<StateModel>(GaussianStateSpec::squeezed_vacuum(r_log, theta))});
        mix.components.push_back(
            {0.5, std::make_shared<StateModel>(GaussianStateSpec::squeezed_vacuum(r_log, -theta))});
        fam.states.emplace_back(StateVariant{std::move(mix)});
        fam.points.emplace_back(Complex(alpha_mag * std::cos(theta), alpha_mag * std::sin(theta)));
    }

    fam.diagonal_min = 1.0;
    fam.diagonal_max = 0.0;
    fam.offdiag_max = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const Complex c = characteristic(fam.states[i], fam.points[j]);
            if (i == j) {
                fam.diagonal_min = std::min(fam.diagonal_min, c.real());
                fam.diagonal_max = std::max(fam.diagonal_max, c.real());
                if (std::abs(c.imag()) > 1e-9)
                    throw std::runtime_error("build_lowerbound_family: diagonal value not real");
            } else {
                fam.offdiag_max = std::max(fam.offdiag_max, std::abs(c));
            }
        }
    }
    if (fam.diagonal_min < 0.49 || fam.diagonal_max > 0.5 ||
        (m > 1 && fam.offdiag_max > 0.01))
        throw std::runtime_error("build_lowerbound_family: separation unattainable at the "
                                 "requested (m, r, |alpha|)");
    return fam;
}

std::vector<EstimateRecord> restricted_estimate(const StateModel& state,
                                                const std::vector<PhasePoint>& points,
                                                long long copy_budget, Backend backend,
                                                RngStream& rng) {
    if (copy_budget < 1) throw std::invalid_argument("restricted_estimate: copy_budget >= 1");
    if (points.empty()) throw std::invalid_argument("restricted_estimate: no points");
    for (const auto& a : points)
        if (a.k() != 1)
            throw std::invalid_argument("restricted_estimate: single-mode points only");

    const int m = int(points.size());
    std::vector<long long> counts(m, 0);
    for (long long c = 0; c < copy_budget; ++c) counts[rng.index(m)] += 1;

    std::vector<EstimateRecord> out(m);
    for (int j = 0; j < m; ++j) {
        Complex mean{0.0, 0.0};
        if (counts[j] > 0) {
            const double freq = std::sqrt(2.0) * std::abs(points[j][0]);
            HomodyneSampler sampler(state, std::arg(points[j][0]), backend);
            for (long long c = 0; c < counts[j]; ++c) {
                const double q = sampler.sample(rng);
                mean += std::exp(Complex(0.0, -freq * q));
            }
            mean /= double(counts[j]);
        }
        out[j] = {points[j], mean, TargetKind::point, 0.0, 0.0, counts[j], Branch::none};
    }
    return out;
}

namespace {

Eigen::MatrixXcd truth_table(const LowerBoundFamily& fam) {
    Eigen::MatrixXcd t(fam.m, fam.m);
    for (int i = 0; i < fam.m; ++i)
        for (int j = 0; j < fam.m; ++j) t(i, j) = characteristic(fam.states[i], fam.points[j]);
    return t;
}

bool all_within(const std::vector<EstimateRecord>& recs, const Eigen::MatrixXcd& truth, int row,
                double tol) {
    for (size_t j = 0; j < recs.size(); ++j) {
        if (recs[j].copies == 0) return false; // unestimated point
        if (std::abs(recs[j].value - truth(row, int(j))) > tol) return false;
    }
    return true;
}

} // namespace

std::vector<ScalingRow> point_function_experiment(const LowerBoundFamily& family,
                                                  const std::vector<long long>& restricted_budgets,
                                                  int trials, RngStream& rng,
                                                  const ScalingOptions& opts) {
    if (trials < 1) throw std::invalid_argument("point_function_experiment: trials >= 1");
    const Eigen::MatrixXcd truth = truth_table(family);
    const Backend backend = Backend::gaussian_analytic;

    std::vector<ScalingRow> rows;

    // restricted scenario: cheap, parallel over trials
    for (size_t bi = 0; bi < restricted_budgets.size(); ++bi) {
        const long long budget = restricted_budgets[bi];
        std::vector<int> ok(trials, 0);
        const RngStream base = rng.substream(1000 + bi);
        parallel_for(trials, opts.workers, [&](int t) {
            RngStream tr = base.substream(t);
            const int hidden = int(tr.index(family.m));
            const auto recs =
                restricted_estimate(family.states[hidden], family.points, budget, backend, tr);
            ok[t] = all_within(recs, truth, hidden, opts.success_threshold) ? 1 : 0;
        });
        int successes = 0;
        for (const int s : ok) successes += s;
        rows.push_back({"restricted", family.m, budget, trials, successes});
    }

    // quantum-enhanced: one planner-determined copy count; trials sequential,
    // parallelism inside learn_points (the product bank dominates memory)
    LearnOptions lopts;
    lopts.workers = opts.workers;
    const LearnPlan plan =
        plan_learn_points(opts.quantum_epsilon, opts.quantum_delta, family.m);
    int successes = 0;
    const RngStream qbase = rng.substream(2000);
    for (int t = 0; t < trials; ++t) {
        RngStream tr = qbase.substream(t);
        const int hidden = int(tr.index(family.m));
        const LearnResult res = learn_points(family.states[hidden], family.points,
                                             opts.quantum_epsilon, opts.quantum_delta, backend,
                                             tr, lopts);
        bool ok = true;
        for (int j = 0; j < family.m; ++j)
            ok = ok && std::abs(res.records[j].value - truth(hidden, j)) <= opts.success_threshold;
        successes += ok ? 1 : 0;
    }
    rows.push_back({"quantum-enhanced", family.m, plan.quantum_copies(), trials, successes});
    return rows;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need matching vectors of size >= 2");
    const int n = int(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LineFit fit;
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-300) throw std::invalid_argument("fit_line: degenerate abscissae");
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double ybar = sy / n;
    for (int i = 0; i < n; ++i) {
        const double pred = fit.intercept + fit.slope * x[i];
        ss_res += (y[i] - pred) * (y[i] - pred);
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
    }
    fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

ScalingReport scaling_experiment(const std::vector<int>& m_values, double alpha_mag,
                                 const std::vector<long long>& budget_multipliers, int trials,
                                 RngStream& rng, const ScalingOptions& opts) {
    if (m_values.empty() || budget_multipliers.empty())
        throw std::invalid_argument("scaling_experiment: empty sweep");
    ScalingReport report;

    for (size_t mi = 0; mi < m_values.size(); ++mi) {
        const int m = m_values[mi];
        const LowerBoundFamily fam =
            build_lowerbound_family(m, lowerbound_squeezing(m, alpha_mag), alpha_mag);
        std::vector<long long> budgets;
        for (const long long mult : budget_multipliers) budgets.push_back(mult * m);
        RngStream mrng = rng.substream(mi);
        const auto rows = point_function_experiment(fam, budgets, trials, mrng, opts);

        long long to_success = -1;
        for (const auto& row : rows) {
            report.rows.push_back(row);
            if (row.strategy == "restricted" && to_success < 0 &&
                3 * row.successes >= 2 * row.trials)
                to_success = row.budget;
            if (row.strategy == "quantum-enhanced") {
                report.quantum_copies.emplace_back(m, row.budget);
                report.quantum_successes.emplace_back(row.successes, row.trials);
            }
        }
        report.restricted_copies_to_success.emplace_back(m, to_success);
    }

    if (m_values.size() >= 2) {
        std::vector<double> lx, ly, qx, qy;
        for (const auto& [m, copies] : report.restricted_copies_to_success) {
            if (copies > 0) {
                lx.push_back(std::log(double(m)));
                ly.push_back(std::log(double(copies)));
            }
        }
        for (const auto& [m, copies] : report.quantum_copies) {
            qx.push_back(std::log(double(m)));
            qy.push_back(double(copies));
        }
        if (lx.size() >= 2) report.restricted_loglog_slope = fit_line(lx, ly).slope;
        if (qx.size() >= 2) {
            const LineFit qfit = fit_line(qx, qy);
            report.quantum_log_intercept = qfit.intercept;
            report.quantum_log_slope = qfit.slope;
            report.quantum_log_r2 = qfit.r2;
        }
    }
    return report;
}

void write_scaling_csv(std::ostream& out, const ScalingReport& report, std::uint64_t seed) {
    out << "strategy,m,budget,trials,successes,seed\n";
    for (const auto& row : report.rows)
        out << row.strategy << ',' << row.m << ',' << row.budget << ',' << row.trials << ','
            << row.successes << ',' << seed << '\n';
}

std::string scaling_fit_json(const ScalingReport& report) {
    nlohmann::json j;
    auto& restricted = j["restricted"];
    restricted["loglog_slope"] = report.restricted_loglog_slope;
    for (const auto& [m, copies] : report.restricted_copies_to_success)
        restricted["copies_to_success"].push_back({{"m", m}, {"copies", copies}});
    auto& quantum = j["quantum_enhanced"];
    quantum["log_fit"] = {{"intercept", report.quantum_log_intercept},
                          {"slope", report.quantum_log_slope},
                          {"r2", report.quantum_log_r2}};
    for (size_t i = 0; i < report.quantum_copies.size(); ++i)
        quantum["copies"].push_back({{"m", report.quantum_copies[i].first},
                                     {"accounted", report.quantum_copies[i].second},
                                     {"successes", report.quantum_successes[i].first},
                                     {"trials", report.quantum_successes[i].second}});
    return j.dump(2);
}

} // namespace cvchar
