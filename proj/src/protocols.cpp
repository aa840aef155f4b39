#include "cvchar/protocols.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "cvchar/parallel.hpp"

namespace cvchar {

namespace {

constexpr Complex kI{0.0, 1.0};

long long hoeffding_ceil(double x) {
    if (!(x > 0.0)) return 1;
    if (x > 1e15) throw std::invalid_argument("planner: copy count overflows desk scale; relax epsilon/delta");
    return std::max<long long>(1, (long long)std::ceil(x));
}

void require_single_mode(const PhasePoint& a, const char* who) {
    if (a.k() != 1)
        throw std::invalid_argument(std::string(who) + ": only single-mode points are supported");
}

double symmetry_phase_of(const StateModel& state) {
    const auto sym = symmetry_of(state);
    if (!sym)
        throw std::invalid_argument("state has no declared reflection symmetry; "
                                    "the square estimator is unavailable");
    return sym->phase();
}

// e^{-2i u c_j} over equally spaced cell centers, by multiplicative recurrence
Eigen::VectorXcd phase_vector(double u, const AxisSpec& axis) {
    Eigen::VectorXcd v(axis.points);
    Complex cur = std::exp(Complex(0.0, -2.0 * u * (axis.coord(0) + 0.5 * axis.step())));
    const Complex q = std::exp(Complex(0.0, -2.0 * u * axis.step()));
    for (int i = 0; i < axis.points; ++i) {
        v(i) = cur;
        cur *= q;
    }
    return v;
}

AxisSpec cover_axis(double lo, double hi, int points) {
    const double pad = 1e-9 + 1e-12 * (std::abs(lo) + std::abs(hi));
    const double center = 0.5 * (lo + hi);
    // AxisSpec covers [center - hw, center + hw); cells are [coord, coord+step)
    return AxisSpec{center, 0.5 * (hi - lo) + pad, points};
}

} // namespace

std::string branch_name(Branch b) {
    switch (b) {
    case Branch::none: return "none";
    case Branch::zero: return "zero";
    case Branch::real_sign: return "real-sign";
    case Branch::imag_sign: return "imag-sign";
    }
    throw std::logic_error("branch_name: bad enum");
}

long long plan_product_samples(double epsilon, double delta, long long m_points) {
    if (!(epsilon > 0.0 && epsilon < 1.0 && delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("planner: epsilon and delta must lie in (0,1)");
    if (m_points < 1) throw std::invalid_argument("planner: m_points must be >= 1");
    return hoeffding_ceil(8.0 / (epsilon * epsilon) * std::log(4.0 * double(m_points) / delta));
}

long long plan_sign_samples(double eps_prime, double delta, long long m_points) {
    if (!(eps_prime > 0.0 && eps_prime < 1.0 && delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("planner: epsilon and delta must lie in (0,1)");
    if (m_points < 1) throw std::invalid_argument("planner: m_points must be >= 1");
    return hoeffding_ceil(2.0 / (eps_prime * eps_prime) *
                          std::log(2.0 * double(m_points) / delta));
}

LearnPlan plan_learn_points(double epsilon, double delta, long long m_points) {
    LearnPlan plan;
    plan.n1 = plan_product_samples(epsilon * epsilon / 18.0, delta / 2.0, m_points);
    plan.n2 = plan_sign_samples(std::sqrt(2.0) * epsilon / 12.0, delta / 2.0, m_points);
    return plan;
}

// --- PairStatistic --------------------------------------------------------------

PairStatistic::PairStatistic(PairSampleBatch batch, const std::vector<Complex>& planned_points) {
    n_ = batch.size();
    if (n_ < 1) throw std::invalid_argument("PairStatistic: empty batch");

    double max_u = 0.0, max_v = 0.0;
    for (const Complex a : planned_points) {
        max_u = std::max(max_u, std::abs(a.real()));
        max_v = std::max(max_v, std::abs(a.imag()));
    }
    const bool x_only = max_v < 1e-14;
    const bool p_only = max_u < 1e-14;

    const double xmin = batch.x.minCoeff(), xmax = batch.x.maxCoeff();
    const double pmin = batch.p.minCoeff(), pmax = batch.p.maxCoeff();

    if (x_only || p_only) {
        const int bins = 1 << 16;
        axis1d_ = x_only ? cover_axis(xmin, xmax, bins) : cover_axis(pmin, pmax, bins);
        const double fcell = 2.0 * std::max(max_u, max_v) * axis1d_.step();
        if (fcell <= 0.3) {
            mode_ = x_only ? Mode::hist1d_x : Mode::hist1d_p;
            const Eigen::VectorXd& q = x_only ? batch.x : batch.p;
            w1d_ = Eigen::VectorXd::Zero(bins);
            m1d_ = Eigen::VectorXd::Zero(bins);
            for (long long i = 0; i < n_; ++i) {
                const int c = std::clamp(int((q(i) - (axis1d_.center - axis1d_.half_width)) /
                                             axis1d_.step()),
                                         0, bins - 1);
                w1d_(c) += 1.0;
                m1d_(c) += q(i) - (axis1d_.coord(c) + 0.5 * axis1d_.step());
            }
            return;
        }
    } else {
        const int bins = 1024;
        grid2d_ = GridSpec{cover_axis(xmin, xmax, bins), cover_axis(pmin, pmax, bins)};
        const double fcell = std::max(2.0 * max_u * grid2d_.x.step(), 2.0 * max_v * grid2d_.p.step());
        if (fcell <= 0.25) {
            mode_ = Mode::hist2d;
            w2d_ = Eigen::MatrixXd::Zero(bins, bins);
            mx2d_ = Eigen::MatrixXd::Zero(bins, bins);
            mp2d_ = Eigen::MatrixXd::Zero(bins, bins);
            for (long long i = 0; i < n_; ++i) {
                const int cx = std::clamp(
                    int((batch.x(i) - (grid2d_.x.center - grid2d_.x.half_width)) / grid2d_.x.step()),
                    0, bins - 1);
                const int cp = std::clamp(
                    int((batch.p(i) - (grid2d_.p.center - grid2d_.p.half_width)) / grid2d_.p.step()),
                    0, bins - 1);
                w2d_(cx, cp) += 1.0;
                mx2d_(cx, cp) += batch.x(i) - (grid2d_.x.coord(cx) + 0.5 * grid2d_.x.step());
                mp2d_(cx, cp) += batch.p(i) - (grid2d_.p.coord(cp) + 0.5 * grid2d_.p.step());
            }
            return;
        }
    }
    mode_ = Mode::exact;
    batch_ = std::move(batch);
}

const char* PairStatistic::strategy() const {
    switch (mode_) {
    case Mode::exact: return "exact";
    case Mode::hist1d_x: return "hist1d-x";
    case Mode::hist1d_p: return "hist1d-p";
    case Mode::hist2d: return "hist2d";
    }
    return "?";
}

Complex PairStatistic::evaluate(Complex alpha) const {
    const double u = alpha.real(), v = alpha.imag();
    switch (mode_) {
    case Mode::exact: {
        if (n_ >= 262144) {
            // project onto the query direction and bin the 1D values; far
            // cheaper than per-sample sincos and exact to first moments
            const Eigen::VectorXd t = u * batch_.x + v * batch_.p;
            const int bins = 1 << 16;
            const AxisSpec axis = cover_axis(t.minCoeff(), t.maxCoeff(), bins);
            Eigen::VectorXd w = Eigen::VectorXd::Zero(bins);
            Eigen::VectorXd mom = Eigen::VectorXd::Zero(bins);
            const double lo = axis.center - axis.half_width, inv = 1.0 / axis.step();
            for (long long i = 0; i < n_; ++i) {
                const int c = std::clamp(int((t(i) - lo) * inv), 0, bins - 1);
                w(c) += 1.0;
                mom(c) += t(i) - (axis.coord(c) + 0.5 * axis.step());
            }
            const Eigen::VectorXcd ph = phase_vector(1.0, axis);
            Complex total{0.0, 0.0};
            for (int i = 0; i < bins; ++i)
                total += ph(i) * (w(i) + Complex(0.0, -2.0) * mom(i));
            return total / double(n_);
        }
        Complex acc{0.0, 0.0};
        for (long long i = 0; i < n_; ++i)
            acc += std::exp(Complex(0.0, -2.0 * (u * batch_.x(i) + v * batch_.p(i))));
        return acc / double(n_);
    }
    case Mode::hist1d_x:
    case Mode::hist1d_p: {
        const double f = mode_ == Mode::hist1d_x ? u : v;
        const Eigen::VectorXcd ph = phase_vector(f, axis1d_);
        // first-order within-cell correction: e^{-2if dx} ~ 1 - 2if dx
        Complex total{0.0, 0.0};
        for (int i = 0; i < axis1d_.points; ++i)
            total += ph(i) * (w1d_(i) + Complex(0.0, -2.0 * f) * m1d_(i));
        return total / double(n_);
    }
    case Mode::hist2d: {
        const Eigen::VectorXcd ex = phase_vector(u, grid2d_.x);
        const Eigen::VectorXcd ep = phase_vector(v, grid2d_.p);
        const Complex t0 = ex.transpose() * (w2d_ * ep);
        const Complex tx = ex.transpose() * (mx2d_ * ep);
        const Complex tp = ex.transpose() * (mp2d_ * ep);
        return (t0 + Complex(0.0, -2.0) * (u * tx + v * tp)) / double(n_);
    }
    }
    throw std::logic_error("PairStatistic: bad mode");
}

Eigen::VectorXcd PairStatistic::evaluate_many(const std::vector<Complex>& alphas,
                                              int workers) const {
    Eigen::VectorXcd out(alphas.size());
    if (mode_ == Mode::hist2d && alphas.size() >= 64) {
        // batch the bilinear forms as real GEMMs over point chunks
        const int bins = grid2d_.x.points;
        const int chunk = 2048;
        const int n_chunks = int((alphas.size() + chunk - 1) / chunk);
        parallel_for(n_chunks, workers, [&](int ci) {
            const size_t base = size_t(ci) * chunk;
            const int k = int(std::min<size_t>(chunk, alphas.size() - base));
            Eigen::MatrixXd epr(bins, k), epi(bins, k);
            for (int m = 0; m < k; ++m) {
                const Eigen::VectorXcd ep = phase_vector(alphas[base + m].imag(), grid2d_.p);
                epr.col(m) = ep.real();
                epi.col(m) = ep.imag();
            }
            const Eigen::MatrixXd yr0 = w2d_ * epr, yi0 = w2d_ * epi;
            const Eigen::MatrixXd yrx = mx2d_ * epr, yix = mx2d_ * epi;
            const Eigen::MatrixXd yrp = mp2d_ * epr, yip = mp2d_ * epi;
            for (int m = 0; m < k; ++m) {
                const double u = alphas[base + m].real(), v = alphas[base + m].imag();
                const Eigen::VectorXcd ex = phase_vector(u, grid2d_.x);
                const Complex t0 = ex.transpose() * (yr0.col(m) + kI * yi0.col(m)).eval();
                const Complex tx = ex.transpose() * (yrx.col(m) + kI * yix.col(m)).eval();
                const Complex tp = ex.transpose() * (yrp.col(m) + kI * yip.col(m)).eval();
                out(base + m) = (t0 + Complex(0.0, -2.0) * (u * tx + v * tp)) / double(n_);
            }
        });
        return out;
    }
    parallel_for(int(alphas.size()), workers, [&](int m) { out(m) = evaluate(alphas[m]); });
    return out;
}

// --- estimators ------------------------------------------------------------------

namespace {

Complex batch_statistic(const PairSampleBatch& b, Complex alpha) {
    Complex acc{0.0, 0.0};
    for (int i = 0; i < b.size(); ++i)
        acc += std::exp(Complex(0.0, -2.0 * (alpha.real() * b.x(i) + alpha.imag() * b.p(i))));
    return acc / double(b.size());
}

} // namespace

EstimateRecord estimate_product(const StateModel& state, const PhasePoint& alpha,
                                long long n_pairs, Backend backend, RngStream& rng) {
    require_single_mode(alpha, "estimate_product");
    if (n_pairs < 1) throw std::invalid_argument("estimate_product: empty batch");
    PairSampler sampler(state, 0.0, backend);
    const auto batch = sampler.draw(int(n_pairs), rng);
    return {alpha, batch_statistic(batch, alpha[0]), TargetKind::product, 0.0, 0.0, 2 * n_pairs,
            Branch::none};
}

EstimateRecord estimate_square(const StateModel& state, const PhasePoint& alpha,
                               long long n_pairs, Backend backend, RngStream& rng) {
    require_single_mode(alpha, "estimate_square");
    if (n_pairs < 1) throw std::invalid_argument("estimate_square: empty batch");
    PairSampler sampler(state, symmetry_phase_of(state), backend);
    const auto batch = sampler.draw(int(n_pairs), rng);
    return {alpha, batch_statistic(batch, alpha[0]), TargetKind::square, 0.0, 0.0, 2 * n_pairs,
            Branch::none};
}

namespace {

SignOutcome sign_from_sampler(const HomodyneSampler& sampler, const PhasePoint& alpha,
                              SignComponentKind component, long long n_copies, RngStream& rng) {
    require_single_mode(alpha, "sign_component");
    if (n_copies < 1) throw std::invalid_argument("sign_component: n_copies must be >= 1");
    const double freq = std::sqrt(2.0) * std::abs(alpha[0]);
    double mean = 0.0;
    for (long long i = 0; i < n_copies; ++i) {
        const double q = sampler.sample(rng);
        mean += component == SignComponentKind::real ? std::cos(freq * q) : std::sin(freq * q);
    }
    mean /= double(n_copies);
    // Re C = E cos(..), +1 iff mean > 0; Im C = -E sin(..), +1 iff mean < 0.
    // Ties take the paper's "<= 0" branch.
    const int s = component == SignComponentKind::real ? (mean > 0.0 ? +1 : -1)
                                                       : (mean < 0.0 ? +1 : -1);
    return {s, component, alpha};
}

} // namespace

SignOutcome sign_component(const StateModel& state, const PhasePoint& alpha,
                           SignComponentKind component, long long n_copies, Backend backend,
                           RngStream& rng) {
    require_single_mode(alpha, "sign_component");
    const HomodyneSampler sampler(state, std::arg(alpha[0]), backend);
    return sign_from_sampler(sampler, alpha, component, n_copies, rng);
}

BranchDecision resolve_branch(Complex square_estimate, double epsilon) {
    const double mag = std::abs(square_estimate);
    if (mag <= 4.0 * epsilon * epsilon / 9.0) return {Branch::zero, Complex{0.0, 0.0}};
    double theta = std::arg(square_estimate);
    if (theta >= M_PI) theta = -M_PI; // principal angle lives in [-pi, pi)
    const Complex c = std::sqrt(mag) * std::exp(Complex(0.0, theta / 2.0));
    const bool real_path = std::abs(c.real()) >= std::sqrt(2.0) * epsilon / 3.0;
    return {real_path ? Branch::real_sign : Branch::imag_sign, c};
}

LearnResult learn_points(const StateModel& state, const std::vector<PhasePoint>& points,
                         double epsilon, double delta, Backend backend, RngStream& rng,
                         const LearnOptions& opts) {
    if (points.empty()) throw std::invalid_argument("learn_points: need at least one point");
    for (const auto& a : points) require_single_mode(a, "learn_points");
    const double phase = symmetry_phase_of(state);
    const long long m = (long long)points.size();
    const LearnPlan plan = plan_learn_points(epsilon, delta, m);

    // shared product bank, filled in fixed chunks so results do not depend on
    // the worker count
    const PairSampler sampler(state, phase, backend, opts.sampler);
    PairSampleBatch bank;
    bank.x.resize(plan.n1);
    bank.p.resize(plan.n1);
    const int chunks = 64;
    const RngStream bank_rng = rng.substream(0);
    parallel_for(chunks, opts.workers, [&](int c) {
        const long long lo = plan.n1 * c / chunks, hi = plan.n1 * (c + 1) / chunks;
        if (hi == lo) return;
        RngStream chunk_rng = bank_rng.substream(c);
        PairSampleBatch part;
        sampler.fill(part, int(hi - lo), chunk_rng);
        bank.x.segment(lo, hi - lo) = part.x;
        bank.p.segment(lo, hi - lo) = part.p;
    });

    std::vector<Complex> freqs(points.size());
    for (size_t i = 0; i < points.size(); ++i) freqs[i] = points[i][0];
    const PairStatistic stat(std::move(bank), freqs);
    const Eigen::VectorXcd squares = stat.evaluate_many(freqs, opts.workers);

    LearnResult res;
    res.plan = plan;
    res.records.resize(points.size());

    // one homodyne table per distinct quadrature phase (grids of points share
    // only a handful of arg(alpha) values)
    std::map<double, HomodyneSampler> homodyne;
    for (const auto& pt : points)
        homodyne.try_emplace(std::arg(pt[0]), state, std::arg(pt[0]), backend, opts.sampler);

    const RngStream real_rng = rng.substream(1);
    const RngStream imag_rng = rng.substream(2);
    parallel_for(int(points.size()), opts.workers, [&](int i) {
        const BranchDecision dec = resolve_branch(squares(i), epsilon);
        // both sign banks are drawn for every point (the quantum protocol
        // prepares both); only the branch's bank decides the sign
        RngStream r1 = real_rng.substream(i);
        RngStream r2 = imag_rng.substream(i);
        const HomodyneSampler& hs = homodyne.at(std::arg(points[i][0]));
        const SignOutcome s_re =
            sign_from_sampler(hs, points[i], SignComponentKind::real, plan.n2, r1);
        const SignOutcome s_im =
            sign_from_sampler(hs, points[i], SignComponentKind::imag, plan.n2, r2);

        Complex value{0.0, 0.0};
        if (dec.branch == Branch::real_sign) {
            const int have = dec.principal.real() > 0.0 ? +1 : -1;
            value = have == s_re.value ? dec.principal : -dec.principal;
        } else if (dec.branch == Branch::imag_sign) {
            const int have = dec.principal.imag() > 0.0 ? +1 : -1;
            value = have == s_im.value ? dec.principal : -dec.principal;
        }
        res.records[i] = {points[i],
                          value,
                          TargetKind::point,
                          epsilon,
                          delta,
                          dec.branch == Branch::zero ? 2 * plan.n1 : plan.quantum_copies(),
                          dec.branch};
    });

    const double eps_prime = std::sqrt(2.0) * epsilon / 12.0;
    res.ledger.product_pairs = plan.n1;
    res.ledger.sign_copies_real = plan.n2;
    res.ledger.sign_copies_imag = plan.n2;
    res.ledger.simulation_draws = 2 * plan.n1 + 2 * m * plan.n2;
    res.ledger.union_bound_budget =
        double(m) * std::exp(-double(plan.n2) * eps_prime * eps_prime / 4.0);
    return res;
}

// --- observables --------------------------------------------------------------------

double normalization_calibration_residual(double box_half_width, int grid) {
    // o = c_norm Int_box |C_vac|^2 = (1/pi) (Int_-L^L e^{-t^2} dt)^2 for the
    // vacuum-vacuum pair; must equal tr(rho O) = 1
    double line = 0.0;
    const double step = 2.0 * box_half_width / grid;
    for (int i = 0; i < grid; ++i) {
        const double t = -box_half_width + (i + 0.5) * step;
        line += std::exp(-t * t) * step;
    }
    return std::abs(fourier_weyl_norm_per_mode * line * line - 1.0);
}

std::function<Complex(const PhasePoint&)> observable_cf_from_fock(const Eigen::MatrixXcd& op) {
    if (op.rows() != op.cols()) throw std::invalid_argument("observable_cf_from_fock: square matrix");
    const auto mat = std::make_shared<Eigen::MatrixXcd>(op);
    return [mat](const PhasePoint& alpha) {
        require_single_mode(alpha, "observable_cf");
        const Complex b = -kI * alpha[0];
        Complex acc{0.0, 0.0};
        const int d = int(mat->rows());
        for (int mm = 0; mm < d; ++mm)
            for (int nn = 0; nn < d; ++nn)
                acc += (*mat)(mm, nn) * displacement_matrix_element(nn, mm, b);
        return acc;
    };
}

namespace {

std::vector<PhasePoint> uniform_box_points(const BoxRegion& box, long long m, RngStream& rng) {
    std::vector<PhasePoint> pts;
    pts.reserve(m);
    for (long long i = 0; i < m; ++i)
        pts.emplace_back(Complex(box.re_half * (2.0 * rng.uniform() - 1.0),
                                 box.im_half * (2.0 * rng.uniform() - 1.0)));
    return pts;
}

void merge_ledger(CopyLedger& into, const CopyLedger& other) {
    into.product_pairs += other.product_pairs;
    into.sign_copies_real += other.sign_copies_real;
    into.sign_copies_imag += other.sign_copies_imag;
    into.simulation_draws += other.simulation_draws;
    into.union_bound_budget += other.union_bound_budget;
}

} // namespace

ObservableResult estimate_observable(const StateModel& state,
                                     const std::function<Complex(const PhasePoint&)>& observable_cf,
                                     const BoxRegion& region, double epsilon, double delta,
                                     Backend backend, RngStream& rng,
                                     const ObservableOptions& opts) {
    if (state.modes() != 1)
        throw std::invalid_argument("estimate_observable: single-mode states only");
    const double area = region.area();
    const double scale = fourier_weyl_norm_per_mode * area;
    const double eps_point =
        opts.point_epsilon > 0.0 ? opts.point_epsilon : epsilon / (4.0 * area);
    if (!(eps_point > 0.0 && eps_point < 1.0))
        throw std::invalid_argument("estimate_observable: point accuracy outside (0,1)");

    LearnOptions lopts;
    lopts.workers = opts.workers;
    lopts.sampler = opts.sampler;

    const auto summands = [&](const std::vector<PhasePoint>& pts, RngStream&& lrng,
                              CopyLedger& ledger) {
        const LearnResult lr = learn_points(state, pts, eps_point, delta / 2.0, backend,
                                            lrng, lopts);
        merge_ledger(ledger, lr.ledger);
        Eigen::VectorXcd t(pts.size());
        for (size_t i = 0; i < pts.size(); ++i) {
            const PhasePoint neg{-pts[i][0]};
            t(i) = scale * lr.records[i].value * observable_cf(neg);
        }
        return t;
    };

    ObservableResult res;

    // pilot pass: estimate the summand spread
    RngStream pilot_pts_rng = rng.substream(10);
    const auto pilot_pts = uniform_box_points(region, opts.pilot_points, pilot_pts_rng);
    const Eigen::VectorXcd pilot = summands(pilot_pts, rng.substream(11), res.ledger);
    const Eigen::VectorXd re = pilot.real();
    const double mean0 = re.mean();
    const double sigma = std::sqrt((re.array() - mean0).square().sum() /
                                   std::max<int>(1, int(re.size()) - 1));
    if (!std::isfinite(sigma))
        throw std::runtime_error("estimate_observable: pilot variance is not finite");
    res.sigma_estimate = sigma;

    const long long m_final = std::max<long long>(
        opts.pilot_points,
        hoeffding_ceil(16.0 * sigma * sigma / (epsilon * epsilon)));
    res.points_used = m_final;

    RngStream final_pts_rng = rng.substream(12);
    const auto pts = uniform_box_points(region, m_final, final_pts_rng);
    const Eigen::VectorXcd t = summands(pts, rng.substream(13), res.ledger);
    const Complex o = t.mean();

    res.record = {PhasePoint{Complex(0.0, 0.0)}, o,         TargetKind::observable,
                  epsilon,                       delta,     res.ledger.quantum_copies(),
                  Branch::none};
    return res;
}

// --- result files ----------------------------------------------------------------------

void write_records_csv(std::ostream& out, const std::vector<EstimateRecord>& records,
                       const std::function<std::optional<Complex>(const PhasePoint&)>& truth,
                       const std::string& state_hash, const std::string& backend,
                       std::uint64_t seed) {
    out << "alpha_re,alpha_im,est_re,est_im,truth_re,truth_im,abs_err,branch,"
           "copies_quantum,state_hash,backend,seed\n";
    char buf[64];
    const auto num = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    for (const auto& r : records) {
        out << num(r.alpha[0].real()) << ',' << num(r.alpha[0].imag()) << ','
            << num(r.value.real()) << ',' << num(r.value.imag()) << ',';
        if (truth) {
            if (const auto tv = truth(r.alpha)) {
                out << num(tv->real()) << ',' << num(tv->imag()) << ','
                    << num(std::abs(r.value - *tv)) << ',';
            } else {
                out << ",,,";
            }
        } else {
            out << ",,,";
        }
        out << branch_name(r.branch) << ',' << r.copies << ',' << state_hash << ',' << backend
            << ',' << seed << '\n';
    }
}

std::string ledger_summary_json(const CopyLedger& ledger, const LearnPlan& plan, double epsilon,
                                double delta, std::uint64_t seed) {
    nlohmann::json j;
    j["epsilon"] = epsilon;
    j["delta"] = delta;
    j["seed"] = seed;
    j["plan"] = {{"n1_product_pairs", plan.n1}, {"n2_sign_copies", plan.n2}};
    j["ledger"] = {{"product_pairs", ledger.product_pairs},
                   {"sign_copies_real", ledger.sign_copies_real},
                   {"sign_copies_imag", ledger.sign_copies_imag},
                   {"quantum_copies", ledger.quantum_copies()},
                   {"simulation_draws", ledger.simulation_draws},
                   {"union_bound_budget", ledger.union_bound_budget}};
    return j.dump(2);
}

} // namespace cvchar
