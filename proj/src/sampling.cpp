#include "cvchar/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cvchar/fock_oracle.hpp"

namespace cvchar {

namespace {

// flatten (possibly nested) mixtures into Gaussian leaves; empty if any leaf
// is not Gaussian
void gaussian_leaves(const StateModel& s, double weight,
                     std::vector<std::pair<double, GaussianStateSpec>>& out, bool& ok) {
    if (!ok) return;
    if (const auto* g = s.as<GaussianStateSpec>()) {
        out.push_back({weight, *g});
        return;
    }
    if (const auto* m = s.as<MixtureSpec>()) {
        for (const auto& c : m->components) gaussian_leaves(*c.state, weight * c.weight, out, ok);
        return;
    }
    ok = false;
}

std::vector<std::pair<double, GaussianStateSpec>> gaussian_decomposition(const StateModel& s) {
    std::vector<std::pair<double, GaussianStateSpec>> leaves;
    bool ok = true;
    gaussian_leaves(s, 1.0, leaves, ok);
    if (!ok) leaves.clear();
    return leaves;
}

Eigen::Matrix2d rotated_cov(const GaussianStateSpec& g, double phi) {
    Eigen::Matrix2d rot;
    rot << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
    return rot * g.cov.topLeftCorner<2, 2>() * rot.transpose();
}

Eigen::Matrix2d cholesky2(double vxx, double vpp, double vxp) {
    Eigen::Matrix2d l = Eigen::Matrix2d::Zero();
    l(0, 0) = std::sqrt(vxx);
    l(1, 0) = vxp / l(0, 0);
    const double rest = vpp - l(1, 0) * l(1, 0);
    if (rest < -1e-12) throw std::runtime_error("pair covariance is not positive semidefinite");
    l(1, 1) = std::sqrt(std::max(0.0, rest));
    return l;
}

constexpr int kGuideSlots = 1024;

// guide[g] = first cell whose cdf reaches g / kGuideSlots, so the inverse of u
// lies in [guide[g], guide[g+1]] with g = floor(u * kGuideSlots)
std::vector<int> build_guide(const double* cdf, int n) {
    std::vector<int> guide(kGuideSlots + 1);
    int i = 0;
    for (int g = 0; g <= kGuideSlots; ++g) {
        while (i < n - 1 && cdf[i] < double(g) / kGuideSlots) ++i;
        guide[g] = i;
    }
    return guide;
}

int find_cell(const double* cdf, const int* guide, double u) {
    const int g = std::min(int(u * kGuideSlots), kGuideSlots - 1);
    const double* it = std::lower_bound(cdf + guide[g], cdf + guide[g + 1], u);
    return std::min<int>(int(it - cdf), guide[kGuideSlots]);
}

double interp_cell(const AxisSpec& axis, const double* cdf, int i, double u) {
    const double lo = i == 0 ? 0.0 : cdf[i - 1];
    const double mass = cdf[i] - lo;
    const double frac = mass > 0.0 ? (u - lo) / mass : 0.5;
    // cells are centered on the tabulated coordinates
    return axis.coord(i) + (frac - 0.5) * axis.step();
}

} // namespace

std::string backend_name(Backend b) {
    switch (b) {
    case Backend::gaussian_analytic: return "gaussian-analytic";
    case Backend::fft_characteristic: return "fft-characteristic";
    case Backend::fock_exact: return "fock-exact";
    }
    throw std::logic_error("backend_name: bad enum");
}

Backend backend_from_name(const std::string& name) {
    if (name == "gaussian-analytic") return Backend::gaussian_analytic;
    if (name == "fft-characteristic") return Backend::fft_characteristic;
    if (name == "fock-exact") return Backend::fock_exact;
    throw std::invalid_argument("unknown backend '" + name + "'");
}

Backend pick_backend(const StateModel& state) {
    return gaussian_decomposition(state).empty() ? Backend::fft_characteristic
                                                 : Backend::gaussian_analytic;
}

double probe_frequency_extent(const StateModel& state, double symmetry_phase) {
    const Complex u = std::exp(Complex(0.0, symmetry_phase));
    for (double extent : {8.0, 16.0, 32.0, 64.0, 128.0, 256.0, 512.0}) {
        double worst = 0.0;
        for (int d = 0; d < 64; ++d) {
            const Complex beta =
                0.5 * extent * std::exp(Complex(0.0, M_PI * d / 64.0)) * ((d % 2) ? 0.98 : 1.0);
            worst = std::max(worst, std::abs(characteristic(state, PhasePoint{beta}) *
                                             characteristic(state, PhasePoint{std::conj(beta) * u})));
        }
        if (worst < 1e-12) return extent;
    }
    throw std::runtime_error("probe_frequency_extent: characteristic decays too slowly; "
                             "use the gaussian-analytic backend for such states");
}

// --- tabulated samplers ------------------------------------------------------

TabulatedSampler1D::TabulatedSampler1D(const DensityTable1D& pdf) : axis_(pdf.axis) {
    if (pdf.values.size() != axis_.points)
        throw std::invalid_argument("TabulatedSampler1D: table shape mismatch");
    if (pdf.values.minCoeff() < 0.0)
        throw std::invalid_argument("TabulatedSampler1D: negative density");
    cdf_.resize(axis_.points);
    double acc = 0.0;
    for (int i = 0; i < axis_.points; ++i) {
        acc += pdf.values(i) * axis_.step();
        cdf_(i) = acc;
    }
    if (acc <= 0.0) throw std::invalid_argument("TabulatedSampler1D: zero mass");
    cdf_ /= acc;
    guide_ = build_guide(cdf_.data(), axis_.points);
}

double TabulatedSampler1D::sample(RngStream& rng) const {
    const double u = rng.uniform();
    const int i = find_cell(cdf_.data(), guide_.data(), u);
    return interp_cell(axis_, cdf_.data(), i, u);
}

TabulatedSampler2D::TabulatedSampler2D(const Field2D& pdf) : grid_(pdf.grid) {
    pdf.check_shape();
    const Eigen::MatrixXd v = pdf.values.real();
    if (v.minCoeff() < 0.0) throw std::invalid_argument("TabulatedSampler2D: negative density");
    const int nx = grid_.x.points, np = grid_.p.points;

    x_cdf_.resize(nx);
    cond_cdf_.resize(np, nx);
    double total = 0.0;
    for (int ix = 0; ix < nx; ++ix) {
        double acc = 0.0;
        for (int ip = 0; ip < np; ++ip) {
            acc += v(ix, ip);
            cond_cdf_(ip, ix) = acc;
        }
        if (acc > 0.0) cond_cdf_.col(ix) /= acc;
        total += acc;
        x_cdf_(ix) = total;
    }
    if (total <= 0.0) throw std::invalid_argument("TabulatedSampler2D: zero mass");
    x_cdf_ /= total;

    x_guide_ = build_guide(x_cdf_.data(), nx);
    col_guide_.resize(kGuideSlots + 1, nx);
    for (int ix = 0; ix < nx; ++ix) {
        const auto g = build_guide(cond_cdf_.col(ix).data(), np);
        std::copy(g.begin(), g.end(), col_guide_.col(ix).data());
    }
}

std::pair<double, double> TabulatedSampler2D::sample(RngStream& rng) const {
    const double ux = rng.uniform();
    const int ix = find_cell(x_cdf_.data(), x_guide_.data(), ux);
    const double x = interp_cell(grid_.x, x_cdf_.data(), ix, ux);

    const double up = rng.uniform();
    const int ip = find_cell(cond_cdf_.col(ix).data(), col_guide_.col(ix).data(), up);
    return {x, interp_cell(grid_.p, cond_cdf_.col(ix).data(), ip, up)};
}

// --- homodyne ----------------------------------------------------------------

HomodyneSampler::HomodyneSampler(const StateModel& state, double theta, Backend backend,
                                 const SamplerOptions& opts)
    : backend_(backend) {
    if (backend_ == Backend::gaussian_analytic) {
        const auto leaves = gaussian_decomposition(state);
        if (leaves.empty())
            throw std::invalid_argument("gaussian-analytic backend needs a Gaussian state");
        const Eigen::Vector2d d(std::cos(theta), std::sin(theta));
        double cum = 0.0;
        for (const auto& [w, g] : leaves) {
            cum += w;
            gauss_.push_back({cum, std::sqrt(d.dot(g.cov.topLeftCorner<2, 2>() * d))});
        }
        return;
    }
    if (backend_ == Backend::fft_characteristic) {
        const double extent = 2.0 * probe_frequency_extent(state, 0.0); // |zeta dir| = |zeta|/sqrt(2)
        // pad the (near-zero) characteristic tail 8x: the outcome-axis step is
        // pi / extent, so padding refines the table without losing coverage
        table_ = std::make_unique<TabulatedSampler1D>(homodyne_from_characteristic(
            state, theta, AxisSpec{0.0, 8.0 * extent, 8 * opts.table_points}, opts.neg_tol));
        return;
    }
    const auto rho = to_fock(state, opts.fock_dim, 1e-6);
    const double hw = std::max(8.0, std::sqrt(2.0 * opts.fock_dim));
    table_ = std::make_unique<TabulatedSampler1D>(
        fock::homodyne_pdf(rho, theta, AxisSpec{0.0, hw, opts.table_points}));
}

double HomodyneSampler::sample(RngStream& rng) const {
    if (!gauss_.empty()) {
        double sigma = gauss_.back().second;
        if (gauss_.size() > 1) {
            const double u = rng.uniform();
            for (const auto& [cum, s] : gauss_)
                if (u <= cum) { sigma = s; break; }
        }
        return sigma * rng.normal();
    }
    return table_->sample(rng);
}

// --- two-copy pairs ------------------------------------------------------------

PairSampler::PairSampler(const StateModel& state, double symmetry_phase, Backend backend,
                         const SamplerOptions& opts)
    : backend_(backend) {
    if (state.modes() != 1) throw std::invalid_argument("PairSampler: single-mode states only");

    if (backend_ == Backend::gaussian_analytic) {
        const auto leaves = gaussian_decomposition(state);
        if (leaves.empty())
            throw std::invalid_argument("gaussian-analytic backend needs a Gaussian state");
        // each copy draws its mixture component independently; the second copy
        // is rotated by R = e^{-i phase n} before the beam splitter, so its
        // covariance picks up Rot(-phase)
        double cum = 0.0;
        for (const auto& [wi, gi] : leaves) {
            const Eigen::Matrix2d s1 = gi.cov.topLeftCorner<2, 2>();
            for (const auto& [wj, gj] : leaves) {
                const Eigen::Matrix2d s2 = rotated_cov(gj, -symmetry_phase);
                cum += wi * wj;
                gauss_.push_back({cum, cholesky2(0.5 * (s1(0, 0) + s2(0, 0)),
                                                 0.5 * (s1(1, 1) + s2(1, 1)),
                                                 0.5 * (s1(0, 1) - s2(0, 1)))});
            }
        }
        return;
    }

    double extent;
    int points = opts.table_points;
    if (opts.table_half_width > 0.0) {
        extent = opts.table_half_width;
    } else {
        extent = probe_frequency_extent(state, symmetry_phase);
    }
    if (backend_ == Backend::fft_characteristic) {
        // pad the frequency grid 8x at fixed point count: the outcome step is
        // 2 pi / (2 extent) and the outcome half width pi N / (2 extent) stays
        // comfortably past the support, which is conjugate-narrow when the
        // characteristic product needs a wide table
        extent *= 8.0;
        table_ = std::make_unique<TabulatedSampler2D>(pair_outcome_density(
            state, symmetry_phase, GridSpec{{0.0, extent, points}, {0.0, extent, points}},
            opts.neg_tol));
        return;
    }
    const auto rho = to_fock(state, opts.fock_dim, 1e-6);
    const double hw = std::max(8.0, std::sqrt(2.0 * opts.fock_dim));
    Field2D f = fock::joint_bs_pdf(rho, symmetry_phase,
                                   GridSpec{{0.0, hw, points}, {0.0, hw, points}});
    f.values = f.values.real().cwiseMax(0.0).cast<Complex>();
    table_ = std::make_unique<TabulatedSampler2D>(f);
}

void PairSampler::fill(PairSampleBatch& batch, int n, RngStream& rng) const {
    batch.x.resize(n);
    batch.p.resize(n);
    if (!gauss_.empty()) {
        const bool single = gauss_.size() == 1;
        for (int i = 0; i < n; ++i) {
            const Eigen::Matrix2d* chol = &gauss_.back().chol;
            if (!single) {
                const double u = rng.uniform();
                for (const auto& gp : gauss_)
                    if (u <= gp.cum_weight) { chol = &gp.chol; break; }
            }
            const double z1 = rng.normal(), z2 = rng.normal();
            batch.x(i) = (*chol)(0, 0) * z1;
            batch.p(i) = (*chol)(1, 0) * z1 + (*chol)(1, 1) * z2;
        }
        return;
    }
    for (int i = 0; i < n; ++i) {
        const auto [x, p] = table_->sample(rng);
        batch.x(i) = x;
        batch.p(i) = p;
    }
}

PairSampleBatch PairSampler::draw(int n, RngStream& rng) const {
    PairSampleBatch b;
    fill(b, n, rng);
    return b;
}

} // namespace cvchar
