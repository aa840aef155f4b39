#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cvchar/baselines.hpp"
#include "cvchar/protocols.hpp"

using json = nlohmann::json;
using namespace cvchar;

namespace {

constexpr const char* kVersion = "1.0.0";

struct CliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return buf;
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    if (!j.is_object()) throw CliError(where + ": expected an object");
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw CliError(where + ": unknown key '" + key + "'");
    }
}

json load_config(const std::string& path, std::string& raw_text) {
    std::ifstream in(path);
    if (!in) throw CliError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    raw_text = ss.str();
    try {
        return json::parse(raw_text);
    } catch (const std::exception& e) {
        throw CliError(std::string("config is not valid JSON: ") + e.what());
    }
}

// Everything a run command resolves from config + flag overrides.
struct RunContext {
    json config;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    int workers = 1;
    std::optional<std::string> backend_flag;
    std::string command;

    std::uint64_t require_seed() const { return seed; }

    Backend backend_for(const StateModel& state) const {
        std::string name;
        if (backend_flag) name = *backend_flag;
        else if (config.contains("backend")) name = config["backend"].get<std::string>();
        else name = "auto";
        if (name == "auto") return pick_backend(state);
        return backend_from_name(name);
    }

    std::filesystem::path out_path(const std::string& file) const {
        std::filesystem::create_directories(out_dir);
        return std::filesystem::path(out_dir) / file;
    }

    void write_manifest(const StateModel* state, Backend backend) const {
        json m;
        m["command"] = command;
        m["version"] = kVersion;
        m["config_hash"] = config_hash;
        m["seed"] = seed;
        m["workers"] = workers;
        m["backend"] = backend_name(backend);
        if (state) m["state_hash"] = state_hash(*state);
        std::ofstream out(out_path("manifest.json"));
        out << m.dump(2) << '\n';
    }
};

StateModel state_from_config(const json& config) {
    if (!config.contains("state")) throw CliError("config: missing 'state'");
    return state_from_json(config["state"].dump());
}

std::vector<PhasePoint> points_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError("cannot open points file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw CliError("points file is empty");
    // header: re_1,im_1,...,re_k,im_k
    int cols = 1;
    for (const char c : line) cols += c == ',' ? 1 : 0;
    if (cols % 2 != 0 || line.rfind("re_1,im_1", 0) != 0)
        throw CliError("points file needs a 're_1,im_1,...' header with 2k columns");
    std::vector<PhasePoint> pts;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<Complex> comps;
        std::stringstream row(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
        if (int(vals.size()) != cols) throw CliError("points file row has wrong column count");
        for (size_t i = 0; i + 1 < vals.size(); i += 2) comps.emplace_back(vals[i], vals[i + 1]);
        pts.emplace_back(std::move(comps));
    }
    if (pts.empty()) throw CliError("points file has no rows");
    return pts;
}

std::vector<PhasePoint> points_from_config(const json& config) {
    if (!config.contains("points")) throw CliError("config: missing 'points'");
    const json& p = config["points"];
    reject_unknown_keys(p, {"inline", "file", "grid"}, "points");
    if (p.size() != 1) throw CliError("points: give exactly one of inline/file/grid");
    std::vector<PhasePoint> pts;
    if (p.contains("inline")) {
        for (const auto& entry : p["inline"]) {
            if (!entry.is_array() || entry.size() % 2 != 0 || entry.empty())
                throw CliError("points.inline entries are flat [re_1, im_1, ...] arrays");
            std::vector<Complex> comps;
            for (size_t i = 0; i + 1 < entry.size(); i += 2)
                comps.emplace_back(entry[i].get<double>(), entry[i + 1].get<double>());
            pts.emplace_back(std::move(comps));
        }
    } else if (p.contains("file")) {
        pts = points_from_csv(p["file"].get<std::string>());
    } else {
        const json& g = p["grid"];
        reject_unknown_keys(g, {"re_min", "re_max", "re_count", "im_min", "im_max", "im_count"},
                            "points.grid");
        const int nr = g["re_count"].get<int>(), ni = g["im_count"].get<int>();
        if (nr < 1 || ni < 1) throw CliError("points.grid: counts must be >= 1");
        const double r0 = g["re_min"].get<double>(), r1 = g["re_max"].get<double>();
        const double i0 = g["im_min"].get<double>(), i1 = g["im_max"].get<double>();
        for (int a = 0; a < nr; ++a)
            for (int b = 0; b < ni; ++b)
                pts.emplace_back(Complex(nr == 1 ? r0 : r0 + (r1 - r0) * a / (nr - 1),
                                         ni == 1 ? i0 : i0 + (i1 - i0) * b / (ni - 1)));
    }
    if (pts.empty()) throw CliError("points: empty set");
    return pts;
}

double get_in_unit(const json& config, const char* key) {
    if (!config.contains(key)) throw CliError(std::string("config: missing '") + key + "'");
    const double v = config[key].get<double>();
    if (!(v > 0.0 && v < 1.0))
        throw CliError(std::string("config: '") + key + "' must lie in (0,1)");
    return v;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
    if (!out) throw CliError("failed writing " + path.string());
}

// --- subcommands -----------------------------------------------------------------

int cmd_plan(const RunContext& ctx) {
    reject_unknown_keys(ctx.config, {"epsilon", "delta", "m_points"}, "config");
    const double eps = get_in_unit(ctx.config, "epsilon");
    const double delta = get_in_unit(ctx.config, "delta");
    const long long m = ctx.config.value("m_points", 1ll);
    const LearnPlan plan = plan_learn_points(eps, delta, m);
    json out;
    out["product_pair_rounds"] = plan_product_samples(eps, delta, m);
    out["learn_points"] = {{"n1_product_pairs", plan.n1},
                           {"n2_sign_copies", plan.n2},
                           {"quantum_copies", plan.quantum_copies()}};
    std::cout << out.dump(2) << '\n';
    return 0;
}

void write_record_outputs(const RunContext& ctx, const StateModel& state, Backend backend,
                          const std::vector<EstimateRecord>& records,
                          const std::function<std::optional<Complex>(const PhasePoint&)>& truth,
                          const json& summary) {
    std::ostringstream csv;
    write_records_csv(csv, records, truth, state_hash(state), backend_name(backend), ctx.seed);
    write_text(ctx.out_path("results.csv"), csv.str());
    write_text(ctx.out_path("summary.json"), summary.dump(2) + "\n");
    ctx.write_manifest(&state, backend);
}

int cmd_pair_estimator(const RunContext& ctx, bool square) {
    reject_unknown_keys(ctx.config, {"state", "points", "n_pairs", "backend", "seed"}, "config");
    const StateModel state = state_from_config(ctx.config);
    const auto points = points_from_config(ctx.config);
    if (!ctx.config.contains("n_pairs")) throw CliError("config: missing 'n_pairs'");
    const long long n_pairs = ctx.config["n_pairs"].get<long long>();
    const Backend backend = ctx.backend_for(state);

    RngStream rng(ctx.require_seed());
    std::vector<EstimateRecord> records;
    for (size_t i = 0; i < points.size(); ++i) {
        RngStream sub = rng.substream(i);
        records.push_back(square ? estimate_square(state, points[i], n_pairs, backend, sub)
                                 : estimate_product(state, points[i], n_pairs, backend, sub));
    }

    const double phase = square ? symmetry_of(state)->phase() : 0.0;
    const auto truth = [&](const PhasePoint& a) -> std::optional<Complex> {
        const Complex c = characteristic(state, a);
        const Complex partner =
            characteristic(state, PhasePoint{std::conj(a[0]) * std::exp(Complex(0.0, phase))});
        return c * partner;
    };
    json summary;
    summary["target"] = square ? "square" : "product";
    summary["n_pairs"] = n_pairs;
    summary["points"] = points.size();
    write_record_outputs(ctx, state, backend, records, truth, summary);
    return 0;
}

int cmd_learn_points(const RunContext& ctx) {
    reject_unknown_keys(ctx.config, {"state", "points", "epsilon", "delta", "backend", "seed"},
                        "config");
    const StateModel state = state_from_config(ctx.config);
    const auto points = points_from_config(ctx.config);
    const double eps = get_in_unit(ctx.config, "epsilon");
    const double delta = get_in_unit(ctx.config, "delta");
    const Backend backend = ctx.backend_for(state);

    RngStream rng(ctx.require_seed());
    LearnOptions opts;
    opts.workers = ctx.workers;
    const LearnResult res = learn_points(state, points, eps, delta, backend, rng, opts);

    const auto truth = [&](const PhasePoint& a) -> std::optional<Complex> {
        return characteristic(state, a);
    };
    json summary = json::parse(ledger_summary_json(res.ledger, res.plan, eps, delta, ctx.seed));
    write_record_outputs(ctx, state, backend, res.records, truth, summary);
    return 0;
}

int cmd_observable(const RunContext& ctx) {
    reject_unknown_keys(ctx.config,
                        {"state", "observable", "box", "epsilon", "delta", "point_epsilon",
                         "pilot_points", "backend", "seed"},
                        "config");
    const StateModel state = state_from_config(ctx.config);
    if (!ctx.config.contains("observable")) throw CliError("config: missing 'observable'");
    const json& o = ctx.config["observable"];
    reject_unknown_keys(o, {"fock_matrix"}, "observable");
    if (!o.contains("fock_matrix")) throw CliError("observable: missing 'fock_matrix'");
    const json& rows = o["fock_matrix"];
    const int d = int(rows.size());
    if (d < 1) throw CliError("observable.fock_matrix: empty");
    Eigen::MatrixXcd op(d, d);
    for (int i = 0; i < d; ++i) {
        if (int(rows[i].size()) != 2 * d)
            throw CliError("observable.fock_matrix rows are flat [re, im, ...] of length 2d");
        for (int j = 0; j < d; ++j)
            op(i, j) = Complex(rows[i][2 * j].get<double>(), rows[i][2 * j + 1].get<double>());
    }
    if ((op - op.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw CliError("observable.fock_matrix must be Hermitian");

    BoxRegion box;
    if (ctx.config.contains("box")) {
        reject_unknown_keys(ctx.config["box"], {"re_half", "im_half"}, "box");
        box.re_half = ctx.config["box"].value("re_half", box.re_half);
        box.im_half = ctx.config["box"].value("im_half", box.im_half);
    }
    const double eps = get_in_unit(ctx.config, "epsilon");
    const double delta = get_in_unit(ctx.config, "delta");
    const Backend backend = ctx.backend_for(state);

    ObservableOptions opts;
    opts.workers = ctx.workers;
    opts.point_epsilon = ctx.config.value("point_epsilon", 0.0);
    opts.pilot_points = ctx.config.value("pilot_points", opts.pilot_points);

    RngStream rng(ctx.require_seed());
    const ObservableResult res = estimate_observable(state, observable_cf_from_fock(op), box, eps,
                                                     delta, backend, rng, opts);
    json summary;
    summary["value_re"] = res.record.value.real();
    summary["value_im"] = res.record.value.imag();
    summary["epsilon"] = eps;
    summary["delta"] = delta;
    summary["points_used"] = res.points_used;
    summary["sigma_estimate"] = res.sigma_estimate;
    summary["ledger"] = json::parse(ledger_summary_json(res.ledger, LearnPlan{}, eps, delta,
                                                        ctx.seed))["ledger"];
    write_text(ctx.out_path("summary.json"), summary.dump(2) + "\n");
    ctx.write_manifest(&state, backend);
    return 0;
}

int cmd_baseline_restricted(const RunContext& ctx) {
    reject_unknown_keys(ctx.config, {"state", "points", "copy_budget", "backend", "seed"},
                        "config");
    const StateModel state = state_from_config(ctx.config);
    const auto points = points_from_config(ctx.config);
    if (!ctx.config.contains("copy_budget")) throw CliError("config: missing 'copy_budget'");
    const long long budget = ctx.config["copy_budget"].get<long long>();
    const Backend backend = ctx.backend_for(state);

    RngStream rng(ctx.require_seed());
    const auto records = restricted_estimate(state, points, budget, backend, rng);
    const auto truth = [&](const PhasePoint& a) -> std::optional<Complex> {
        return characteristic(state, a);
    };
    json summary;
    summary["copy_budget"] = budget;
    long long unestimated = 0;
    for (const auto& r : records) unestimated += r.copies == 0 ? 1 : 0;
    summary["unestimated_points"] = unestimated;
    write_record_outputs(ctx, state, backend, records, truth, summary);
    return 0;
}

int cmd_lowerbound_scaling(const RunContext& ctx) {
    reject_unknown_keys(ctx.config,
                        {"m_values", "alpha_mag", "budget_multipliers", "trials",
                         "quantum_epsilon", "seed"},
                        "config");
    if (!ctx.config.contains("m_values")) throw CliError("config: missing 'm_values'");
    const auto m_values = ctx.config["m_values"].get<std::vector<int>>();
    const double alpha_mag = ctx.config.value("alpha_mag", 1.0);
    std::vector<long long> mults =
        ctx.config.value("budget_multipliers", std::vector<long long>{32, 64, 128, 256, 512});
    const int trials = ctx.config.value("trials", 24);

    ScalingOptions opts;
    opts.trials = trials;
    opts.workers = ctx.workers;
    opts.quantum_epsilon = ctx.config.value("quantum_epsilon", opts.quantum_epsilon);

    RngStream rng(ctx.require_seed());
    const ScalingReport report =
        scaling_experiment(m_values, alpha_mag, mults, trials, rng, opts);

    std::ostringstream csv;
    write_scaling_csv(csv, report, ctx.seed);
    write_text(ctx.out_path("scaling.csv"), csv.str());
    write_text(ctx.out_path("fits.json"), scaling_fit_json(report) + "\n");
    ctx.write_manifest(nullptr, Backend::gaussian_analytic);
    return 0;
}

int cmd_oracle_check(const RunContext& ctx) {
    struct Check {
        std::string name;
        double err;
        double tol;
    };
    std::vector<Check> checks;

    const auto probe = [](int i) {
        return Complex(0.45 * std::cos(2.39996 * i), 0.45 * std::sin(2.39996 * i)) *
               (1.0 + 0.2 * i);
    };
    const auto cf_vs_oracle = [&](const StateModel& s, int dim, int n_probe) {
        const auto rho = to_fock(s, dim);
        double err = 0.0;
        for (int i = 0; i < n_probe; ++i) {
            const PhasePoint a{probe(i) / double(1 + i / 2)};
            err = std::max(err,
                           std::abs(characteristic(s, a) - fock::characteristic_trace(rho, a)));
        }
        return err;
    };

    checks.push_back({"vacuum-closed-form",
                      std::abs(characteristic(StateModel{GaussianStateSpec::vacuum()},
                                              PhasePoint{Complex(0.7, -0.3)}) -
                               std::exp(-0.5 * std::norm(Complex(0.7, -0.3)))),
                      1e-12});
    checks.push_back(
        {"squeezed-vs-oracle",
         cf_vs_oracle(StateModel{GaussianStateSpec::squeezed_vacuum(0.6, 0.7)}, 80, 8), 1e-6});
    checks.push_back(
        {"cat-vs-oracle", cf_vs_oracle(StateModel{CatStateSpec{Complex(1.2, 0.4), +1}}, 64, 8),
         1e-6});
    checks.push_back({"gkp-vs-oracle", cf_vs_oracle(StateModel{GkpSpec{0.3, 0, 48}}, 64, 8), 5e-5});
    checks.push_back({"fock-vs-oracle", cf_vs_oracle(StateModel{FockStateSpec{3}}, 48, 8), 1e-8});
    checks.push_back(
        {"normalization-calibration", normalization_calibration_residual(), 1e-4});

    json out = json::array();
    bool all_pass = true;
    for (const auto& c : checks) {
        const bool pass = c.err <= c.tol;
        all_pass = all_pass && pass;
        out.push_back({{"check", c.name}, {"max_err", c.err}, {"tol", c.tol}, {"pass", pass}});
        std::cout << (pass ? "pass" : "FAIL") << "  " << c.name << "  err=" << c.err
                  << " tol=" << c.tol << '\n';
    }
    write_text(ctx.out_path("oracle_check.json"), out.dump(2) + "\n");
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"characteristic-function learning experiments"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", backend_flag;
    std::uint64_t seed_flag = 0;
    bool seed_given = false;
    int workers = 1;

    const auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", config_path, "JSON config file");
        if (needs_config) c->required();
        sub->add_option("--seed", seed_flag, "seed override")->each([&](const std::string&) {
            seed_given = true;
        });
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--backend", backend_flag, "sampler backend override");
        sub->add_option("--workers", workers, "worker threads");
    };

    auto* plan = app.add_subcommand("plan", "print planner sample counts");
    auto* product = app.add_subcommand("cf-product", "estimate C(a) C(conj a)");
    auto* square = app.add_subcommand("cf-square", "estimate C(a)^2 via the reflection symmetry");
    auto* learn = app.add_subcommand("learn-points", "learn C(a) at a set of points");
    auto* obs = app.add_subcommand("observable", "estimate tr(rho O) from learned points");
    auto* restr = app.add_subcommand("baseline-restricted", "conventional single-copy baseline");
    auto* scaling = app.add_subcommand("lowerbound-scaling", "restricted-vs-enhanced scaling sweep");
    auto* oracle = app.add_subcommand("oracle-check", "run the fixture validation suite");
    for (auto* sub : {plan, product, square, learn, obs, restr, scaling})
        add_common(sub, true);
    add_common(oracle, false);

    CLI11_PARSE(app, argc, argv);

    try {
        RunContext ctx;
        ctx.out_dir = out_dir;
        ctx.workers = workers;
        if (workers < 1) throw CliError("--workers must be >= 1");
        if (!backend_flag.empty()) ctx.backend_flag = backend_flag;

        CLI::App* sub = app.get_subcommands().front();
        ctx.command = sub->get_name();
        if (!config_path.empty()) {
            std::string raw;
            ctx.config = load_config(config_path, raw);
            ctx.config_hash = fnv1a_hex(raw);
        } else {
            ctx.config = json::object();
            ctx.config_hash = fnv1a_hex("");
        }

        const bool needs_seed = ctx.command != "plan" && ctx.command != "oracle-check";
        if (seed_given) ctx.seed = seed_flag;
        else if (ctx.config.contains("seed")) ctx.seed = ctx.config["seed"].get<std::uint64_t>();
        else if (needs_seed) throw CliError("a seed is required (config 'seed' or --seed)");

        if (sub == plan) return cmd_plan(ctx);
        if (sub == product) return cmd_pair_estimator(ctx, false);
        if (sub == square) return cmd_pair_estimator(ctx, true);
        if (sub == learn) return cmd_learn_points(ctx);
        if (sub == obs) return cmd_observable(ctx);
        if (sub == restr) return cmd_baseline_restricted(ctx);
        if (sub == scaling) return cmd_lowerbound_scaling(ctx);
        if (sub == oracle) return cmd_oracle_check(ctx);
        throw CliError("unknown subcommand");
    } catch (const std::exception& e) {
        json err;
        err["error"] = e.what();
        std::cout << err.dump() << std::endl;
        return 1;
    }
}
