#include "cvchar/states.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <json.hpp>

namespace cvchar {

namespace {

constexpr Complex kI{0.0, 1.0};

double laguerre(int n, double x) {
    if (n == 0) return 1.0;
    double lm1 = 1.0, l = 1.0 - x;
    for (int j = 1; j < n; ++j) {
        const double next = ((2 * j + 1 - x) * l - j * lm1) / (j + 1);
        lm1 = l;
        l = next;
    }
    return l;
}

double laguerre_assoc(int n, int k, double x) {
    if (n == 0) return 1.0;
    double lm1 = 1.0, l = 1.0 + k - x;
    for (int j = 1; j < n; ++j) {
        const double next = ((2 * j + 1 + k - x) * l - (j + k) * lm1) / (j + 1);
        lm1 = l;
        l = next;
    }
    return l;
}

// <gamma| D(b) |delta> for coherent states
Complex coherent_overlap(Complex gamma, Complex delta, Complex b) {
    return std::exp(-0.5 * (std::norm(gamma) + std::norm(delta) + std::norm(b)) +
                    std::conj(gamma) * delta + std::conj(gamma) * b - std::conj(b) * delta);
}

Eigen::Matrix2d rotation2(double theta) {
    Eigen::Matrix2d r;
    r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return r;
}

int default_pure_dim(const StateModel& state) {
    if (const auto* f = state.as<FockStateSpec>()) return f->n + 2;
    if (const auto* c = state.as<CatStateSpec>()) {
        const double nb = std::norm(c->beta);
        return std::max(32, int(std::ceil(nb + 8.0 * std::sqrt(nb + 1.0) + 12)));
    }
    if (const auto* b = state.as<BinomialCodeSpec>()) return int(b->coeffs.size());
    if (const auto* g = state.as<GkpSpec>()) return g->truncation_dim;
    throw std::invalid_argument("default_pure_dim: not a pure Fock-amplitude family");
}

Eigen::VectorXcd gkp_amplitudes(const GkpSpec& g, int dim) {
    if (g.delta <= 0.0) throw std::invalid_argument("gkp: delta must be positive");
    if (g.logical != 0 && g.logical != 1) throw std::invalid_argument("gkp: logical must be 0 or 1");
    static std::mutex mtx;
    static std::map<std::tuple<double, int, int>, Eigen::VectorXcd> cache;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find({g.delta, g.logical, dim});
        if (it != cache.end()) return it->second;
    }
    // Wavefunction: Gaussian comb at q = (2s + logical) sqrt(pi), peak width
    // delta, Gaussian envelope of width 1/delta.
    const double root_pi = std::sqrt(M_PI);
    const int smax = int(std::ceil(4.0 / (g.delta * 2.0 * root_pi))) + 2;
    const double qmax = (2 * smax + 1) * root_pi + 6.0;
    const int npts = 4096;
    const double dq = 2.0 * qmax / npts;
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(dim);
    for (int i = 0; i < npts; ++i) {
        const double q = -qmax + (i + 0.5) * dq;
        double psi = 0.0;
        for (int s = -smax; s <= smax; ++s) {
            const double mu = (2 * s + g.logical) * root_pi;
            psi += std::exp(-0.5 * g.delta * g.delta * mu * mu) *
                   std::exp(-0.5 * (q - mu) * (q - mu) / (g.delta * g.delta));
        }
        const Eigen::VectorXd h = fock::hermite_functions(q, dim);
        for (int n = 0; n < dim; ++n) c(n) += psi * h(n) * dq;
    }
    c /= c.norm();
    std::lock_guard<std::mutex> lock(mtx);
    cache[{g.delta, g.logical, dim}] = c;
    return c;
}

Complex trace_against_displacement(const Eigen::MatrixXcd& rho, Complex b) {
    // tr(rho D(b)) = sum_{mn} rho_{mn} <n|D(b)|m>
    const int d = int(rho.rows());
    Complex acc{0.0, 0.0};
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            acc += rho(m, n) * displacement_matrix_element(n, m, b);
    return acc;
}

} // namespace

Complex displacement_matrix_element(int m, int n, Complex b) {
    if (m < 0 || n < 0) throw std::invalid_argument("displacement_matrix_element: negative index");
    if (m < n) return std::conj(displacement_matrix_element(n, m, -b));
    // m >= n: sqrt(n!/m!) b^{m-n} e^{-|b|^2/2} L_n^{m-n}(|b|^2)
    Complex pref{1.0, 0.0};
    for (int i = n + 1; i <= m; ++i) pref *= b / std::sqrt(double(i));
    const double x = std::norm(b);
    return pref * std::exp(-0.5 * x) * laguerre_assoc(n, m - n, x);
}

// --- specs ------------------------------------------------------------------

GaussianStateSpec GaussianStateSpec::vacuum(int k) {
    GaussianStateSpec g;
    g.modes = k;
    g.cov = 0.5 * Eigen::MatrixXd::Identity(2 * k, 2 * k);
    return g;
}

GaussianStateSpec GaussianStateSpec::squeezed_vacuum(double r, double theta) {
    GaussianStateSpec g;
    g.modes = 1;
    Eigen::Matrix2d d = Eigen::Matrix2d::Zero();
    d(0, 0) = 0.5 * std::exp(-2.0 * r);
    d(1, 1) = 0.5 * std::exp(2.0 * r);
    const Eigen::Matrix2d rot = rotation2(theta);
    g.cov = rot * d * rot.transpose();
    return g;
}

void GaussianStateSpec::validate() const {
    if (modes < 1) throw std::invalid_argument("gaussian: modes must be >= 1");
    if (cov.rows() != 2 * modes || cov.cols() != 2 * modes)
        throw std::invalid_argument("gaussian: covariance must be 2k x 2k");
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("gaussian: covariance must be symmetric");
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
    for (int j = 0; j < modes; ++j) {
        omega(2 * j, 2 * j + 1) = 1.0;
        omega(2 * j + 1, 2 * j) = -1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(omega * cov, false);
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (std::abs(es.eigenvalues()(i)) < 0.5 - 1e-9)
            throw std::invalid_argument("gaussian: covariance violates the uncertainty bound");
}

double CatStateSpec::norm() const {
    const double n = 2.0 * (1.0 + parity * std::exp(-2.0 * std::norm(beta)));
    if (n <= 0.0) throw std::invalid_argument("cat: degenerate normalization");
    return n;
}

void BinomialCodeSpec::validate() const {
    if (coeffs.size() == 0) throw std::invalid_argument("binomial: empty coefficient vector");
    if (std::abs(coeffs.squaredNorm() - 1.0) > 1e-10)
        throw std::invalid_argument("binomial: squared norms must sum to 1");
}

void MixtureSpec::validate() const {
    if (components.empty()) throw std::invalid_argument("mixture: no components");
    double wsum = 0.0;
    for (const auto& c : components) {
        if (c.weight < 0.0) throw std::invalid_argument("mixture: negative weight");
        if (!c.state) throw std::invalid_argument("mixture: null component");
        wsum += c.weight;
    }
    if (std::abs(wsum - 1.0) > 1e-12) throw std::invalid_argument("mixture: weights must sum to 1");
}

int StateModel::modes() const {
    if (const auto* g = as<GaussianStateSpec>()) return g->modes;
    if (const auto* m = as<MixtureSpec>()) return m->components.front().state->modes();
    return 1;
}

std::string StateModel::family() const {
    struct V {
        std::string operator()(const GaussianStateSpec&) { return "gaussian"; }
        std::string operator()(const FockStateSpec&) { return "fock"; }
        std::string operator()(const CatStateSpec&) { return "cat"; }
        std::string operator()(const BinomialCodeSpec&) { return "binomial"; }
        std::string operator()(const GkpSpec&) { return "gkp"; }
        std::string operator()(const MixtureSpec&) { return "mixture"; }
        std::string operator()(const RawFockSpec&) { return "raw_fock"; }
    };
    return std::visit(V{}, spec);
}

double ReflectionSymmetry::phase() const {
    if (unitary.rows() != 1) throw std::invalid_argument("ReflectionSymmetry: not single-mode");
    return std::arg(unitary(0, 0));
}

bool ReflectionSymmetry::is_identity(double tol) const {
    return (unitary - Eigen::MatrixXcd::Identity(unitary.rows(), unitary.cols()))
               .cwiseAbs()
               .maxCoeff() < tol;
}

// --- characteristic ----------------------------------------------------------

Complex characteristic(const StateModel& state, const PhasePoint& alpha) {
    alpha.validate();
    if (alpha.k() != state.modes())
        throw std::invalid_argument("characteristic: mode count mismatch");

    if (const auto* g = state.as<GaussianStateSpec>()) {
        Eigen::VectorXd u(2 * g->modes);
        for (int j = 0; j < g->modes; ++j) {
            u(2 * j) = std::sqrt(2.0) * alpha[j].real();
            u(2 * j + 1) = std::sqrt(2.0) * alpha[j].imag();
        }
        return Complex(std::exp(-0.5 * u.dot(g->cov * u)), 0.0);
    }
    if (const auto* f = state.as<FockStateSpec>()) {
        const double x = std::norm(alpha[0]);
        return Complex(std::exp(-0.5 * x) * laguerre(f->n, x), 0.0);
    }
    if (const auto* c = state.as<CatStateSpec>()) {
        const Complex b = -kI * alpha[0];
        const double p = c->parity;
        const Complex num = coherent_overlap(c->beta, c->beta, b) +
                            coherent_overlap(-c->beta, -c->beta, b) +
                            p * coherent_overlap(c->beta, -c->beta, b) +
                            p * coherent_overlap(-c->beta, c->beta, b);
        return num / c->norm();
    }
    if (const auto* bc = state.as<BinomialCodeSpec>()) {
        const Complex b = -kI * alpha[0];
        const int d = int(bc->coeffs.size());
        Complex acc{0.0, 0.0};
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n)
                acc += std::conj(bc->coeffs(m)) * bc->coeffs(n) * displacement_matrix_element(m, n, b);
        return acc;
    }
    if (const auto* g = state.as<GkpSpec>()) {
        const Eigen::VectorXcd c = gkp_amplitudes(*g, g->truncation_dim);
        return trace_against_displacement(c * c.adjoint(), -kI * alpha[0]);
    }
    if (const auto* m = state.as<MixtureSpec>()) {
        Complex acc{0.0, 0.0};
        for (const auto& comp : m->components) acc += comp.weight * characteristic(*comp.state, alpha);
        return acc;
    }
    const auto* r = state.as<RawFockSpec>();
    return trace_against_displacement(r->rho, -kI * alpha[0]);
}

// --- quadrature density -------------------------------------------------------

DensityTable1D quadrature_pdf(const StateModel& state, double theta, const AxisSpec& axis) {
    axis.validate();
    if (state.modes() != 1)
        throw std::invalid_argument("quadrature_pdf: single-mode states only");

    DensityTable1D out{axis, Eigen::VectorXd::Zero(axis.points)};
    if (const auto* g = state.as<GaussianStateSpec>()) {
        Eigen::Vector2d d(std::cos(theta), std::sin(theta));
        const double var = d.dot(g->cov.topLeftCorner<2, 2>() * d);
        for (int i = 0; i < axis.points; ++i) {
            const double q = axis.coord(i);
            out.values(i) = std::exp(-0.5 * q * q / var) / std::sqrt(2.0 * M_PI * var);
        }
    } else if (const auto* m = state.as<MixtureSpec>()) {
        for (const auto& comp : m->components)
            out.values += comp.weight * quadrature_pdf(*comp.state, theta, axis).values;
    } else if (state.as<RawFockSpec>()) {
        const auto* r = state.as<RawFockSpec>();
        fock::TruncatedDensityMatrix rho{int(r->rho.rows()), 1, r->rho};
        return fock::homodyne_pdf(rho, theta, axis);
    } else {
        // pure Fock-amplitude families: p(q) = |sum_n c_n e^{-i theta n} psi_n(q)|^2
        const int dim = default_pure_dim(state);
        const Eigen::VectorXcd c = fock_amplitudes(state, dim);
        Eigen::VectorXcd phase(dim);
        for (int n = 0; n < dim; ++n) phase(n) = std::exp(-kI * (theta * n));
        for (int i = 0; i < axis.points; ++i) {
            const Eigen::VectorXd h = fock::hermite_functions(axis.coord(i), dim);
            Complex amp{0.0, 0.0};
            for (int n = 0; n < dim; ++n) amp += c(n) * phase(n) * h(n);
            out.values(i) = std::norm(amp);
        }
    }
    if (std::abs(out.integral() - 1.0) > 1e-6)
        throw std::runtime_error("quadrature_pdf: grid too small, tail mass above tolerance");
    return out;
}

// --- fock representation -------------------------------------------------------

Eigen::VectorXcd fock_amplitudes(const StateModel& state, int dim) {
    if (const auto* f = state.as<FockStateSpec>()) {
        if (f->n >= dim) throw std::invalid_argument("fock_amplitudes: n exceeds dim");
        Eigen::VectorXcd c = Eigen::VectorXcd::Zero(dim);
        c(f->n) = 1.0;
        return c;
    }
    if (const auto* cs = state.as<CatStateSpec>()) {
        Eigen::VectorXcd c = Eigen::VectorXcd::Zero(dim);
        Complex term = std::exp(-0.5 * std::norm(cs->beta)); // beta^n/sqrt(n!) running
        for (int n = 0; n < dim; ++n) {
            c(n) = term * (1.0 + double(cs->parity) * (n % 2 == 0 ? 1.0 : -1.0));
            term *= cs->beta / std::sqrt(double(n + 1));
        }
        return c / std::sqrt(cs->norm());
    }
    if (const auto* bc = state.as<BinomialCodeSpec>()) {
        bc->validate();
        if (bc->coeffs.size() > dim) throw std::invalid_argument("fock_amplitudes: dim too small");
        Eigen::VectorXcd c = Eigen::VectorXcd::Zero(dim);
        c.head(bc->coeffs.size()) = bc->coeffs;
        return c;
    }
    if (const auto* g = state.as<GkpSpec>()) {
        // the state is defined by its truncation_dim amplitudes; pad or crop
        const Eigen::VectorXcd full = gkp_amplitudes(*g, g->truncation_dim);
        Eigen::VectorXcd c = Eigen::VectorXcd::Zero(dim);
        const int d = std::min(dim, g->truncation_dim);
        c.head(d) = full.head(d);
        return c;
    }
    throw std::invalid_argument("fock_amplitudes: family has no pure Fock amplitudes");
}

namespace {

fock::TruncatedDensityMatrix gaussian_to_fock(const GaussianStateSpec& g, int dim) {
    if (g.modes != 1) throw std::invalid_argument("to_fock: multimode Gaussian unsupported");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(g.cov.topLeftCorner<2, 2>());
    const double lmin = es.eigenvalues()(0), lmax = es.eigenvalues()(1);
    const double nu = std::sqrt(lmin * lmax);
    const double r = 0.25 * std::log(lmax / lmin);
    const double phi = std::atan2(es.eigenvectors()(1, 0), es.eigenvectors()(0, 0));

    const double nbar = std::max(0.0, nu - 0.5);
    Eigen::MatrixXcd th = Eigen::MatrixXcd::Zero(dim, dim);
    if (nbar < 1e-14) {
        th(0, 0) = 1.0;
    } else {
        for (int n = 0; n < dim; ++n)
            th(n, n) = std::pow(nbar / (1.0 + nbar), n) / (1.0 + nbar);
    }
    const auto s = fock::squeeze(r, dim).mat;
    const auto rot = fock::phase_rotation(phi, dim).mat;
    Eigen::MatrixXcd rho = rot * (s * th * s.adjoint()) * rot.adjoint();
    return {dim, 1, std::move(rho)};
}

} // namespace

fock::TruncatedDensityMatrix to_fock(const StateModel& state, int dim, double tail_tol) {
    if (dim < 2) throw std::invalid_argument("to_fock: dim must be >= 2");

    fock::TruncatedDensityMatrix out{dim, 1, Eigen::MatrixXcd::Zero(dim, dim)};
    if (const auto* g = state.as<GaussianStateSpec>()) {
        out = gaussian_to_fock(*g, dim);
    } else if (const auto* m = state.as<MixtureSpec>()) {
        for (const auto& comp : m->components)
            out.rho += comp.weight * to_fock(*comp.state, dim, tail_tol).rho;
    } else if (const auto* r = state.as<RawFockSpec>()) {
        const int d = std::min<int>(dim, int(r->rho.rows()));
        out.rho.topLeftCorner(d, d) = r->rho.topLeftCorner(d, d);
    } else {
        const Eigen::VectorXcd c = fock_amplitudes(state, dim);
        out.rho = c * c.adjoint();
    }
    if (out.tail() > tail_tol)
        throw std::runtime_error("to_fock: truncation tail above requested tolerance");
    return out;
}

// --- symmetry -------------------------------------------------------------------

double symmetry_residual(const StateModel& state, const ReflectionSymmetry& sym,
                         int probe_points, double radius) {
    const int k = state.modes();
    if (sym.unitary.rows() != k || sym.unitary.cols() != k)
        throw std::invalid_argument("symmetry_residual: U dimension mismatch");
    double worst = 0.0;
    constexpr double golden = 2.399963229728653;
    for (int j = 0; j < probe_points; ++j) {
        const double rad = radius * (j + 1) / probe_points;
        std::vector<Complex> comps(k);
        for (int mode = 0; mode < k; ++mode)
            comps[mode] = rad * std::exp(kI * (golden * (j + 1) * (mode + 1)));
        const PhasePoint a{comps};
        // conj(alpha) U, treating alpha as a row vector
        std::vector<Complex> rotated(k, Complex{0.0, 0.0});
        for (int col = 0; col < k; ++col)
            for (int row = 0; row < k; ++row)
                rotated[col] += std::conj(comps[row]) * sym.unitary(row, col);
        const PhasePoint b{rotated};
        worst = std::max(worst, std::abs(characteristic(state, a) - characteristic(state, b)));
    }
    return worst;
}

std::optional<ReflectionSymmetry> symmetry_of(const StateModel& state) {
    const auto scalar = [](Complex u) {
        ReflectionSymmetry s;
        s.unitary = Eigen::MatrixXcd::Constant(1, 1, u);
        return s;
    };
    if (const auto* g = state.as<GaussianStateSpec>()) {
        if (g->modes == 1) {
            const double a = g->cov(0, 0), b = g->cov(1, 1), c = g->cov(0, 1);
            const double theta = 0.5 * std::atan2(2.0 * c, a - b);
            return scalar(std::exp(kI * (2.0 * theta)));
        }
        // per-mode product Gaussians only
        bool product = true;
        for (int i = 0; i < 2 * g->modes && product; ++i)
            for (int j = 0; j < 2 * g->modes; ++j)
                if (i / 2 != j / 2 && std::abs(g->cov(i, j)) > 1e-12) { product = false; break; }
        if (!product) return std::nullopt;
        Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(g->modes, g->modes);
        for (int j = 0; j < g->modes; ++j) {
            const double aa = g->cov(2 * j, 2 * j), bb = g->cov(2 * j + 1, 2 * j + 1),
                         cc = g->cov(2 * j, 2 * j + 1);
            u(j, j) = std::exp(kI * std::atan2(2.0 * cc, aa - bb));
        }
        return ReflectionSymmetry{u};
    }
    if (state.as<FockStateSpec>()) return scalar(1.0);
    if (const auto* c = state.as<CatStateSpec>()) {
        if (std::abs(c->beta) < 1e-14) return scalar(1.0);
        return scalar(std::exp(kI * (2.0 * std::arg(c->beta))));
    }
    if (const auto* b = state.as<BinomialCodeSpec>()) {
        if (b->coeffs.imag().cwiseAbs().maxCoeff() < 1e-12) return scalar(1.0);
        return std::nullopt;
    }
    if (state.as<GkpSpec>()) return scalar(1.0);
    if (const auto* r = state.as<RawFockSpec>()) {
        if (r->rho.imag().cwiseAbs().maxCoeff() < 1e-12) return scalar(1.0);
        return std::nullopt;
    }
    const auto* m = state.as<MixtureSpec>();
    // candidate list: identity, then any component symmetry; validate on a
    // probe grid against the analytic characteristic
    std::vector<ReflectionSymmetry> candidates{scalar(1.0)};
    for (const auto& comp : m->components)
        if (auto s = symmetry_of(*comp.state)) candidates.push_back(*s);
    for (const auto& cand : candidates)
        if (cand.unitary.rows() == state.modes() && symmetry_residual(state, cand) <= 1e-8)
            return cand;
    return std::nullopt;
}

// --- serialization -----------------------------------------------------------------

namespace {

using nlohmann::json;

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }
Complex complex_from_json(const json& j) { return Complex(j.at(0), j.at(1)); }

void check_keys(const json& j, std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok) throw std::invalid_argument("state schema: unknown key '" + it.key() + "'");
    }
}

json to_json_impl(const StateModel& s);

StateModel from_json_impl(const json& j) {
    const std::string family = j.at("family");
    if (family == "gaussian") {
        check_keys(j, {"family", "modes", "cov"});
        GaussianStateSpec g;
        g.modes = j.at("modes");
        const auto& rows = j.at("cov");
        g.cov.resize(rows.size(), rows.size());
        for (size_t i = 0; i < rows.size(); ++i)
            for (size_t k = 0; k < rows.size(); ++k) g.cov(i, k) = rows.at(i).at(k);
        g.validate();
        return StateModel{g};
    }
    if (family == "fock") {
        check_keys(j, {"family", "n"});
        FockStateSpec f{j.at("n")};
        if (f.n < 0 || f.n > FockStateSpec::max_n)
            throw std::invalid_argument("fock: n out of range");
        return StateModel{f};
    }
    if (family == "cat") {
        check_keys(j, {"family", "beta", "parity"});
        CatStateSpec c{complex_from_json(j.at("beta")), j.at("parity")};
        if (c.parity != 1 && c.parity != -1) throw std::invalid_argument("cat: parity must be +-1");
        c.norm();
        return StateModel{c};
    }
    if (family == "binomial") {
        check_keys(j, {"family", "coeffs"});
        BinomialCodeSpec b;
        const auto& arr = j.at("coeffs");
        b.coeffs.resize(arr.size());
        for (size_t i = 0; i < arr.size(); ++i) b.coeffs(i) = complex_from_json(arr.at(i));
        b.validate();
        return StateModel{b};
    }
    if (family == "gkp") {
        check_keys(j, {"family", "delta", "logical", "truncation_dim"});
        GkpSpec g{j.at("delta"), j.at("logical"), j.at("truncation_dim")};
        if (g.truncation_dim < 2) throw std::invalid_argument("gkp: truncation_dim too small");
        return StateModel{g};
    }
    if (family == "mixture") {
        check_keys(j, {"family", "components"});
        MixtureSpec m;
        for (const auto& cj : j.at("components")) {
            check_keys(cj, {"weight", "state"});
            m.components.push_back(
                {cj.at("weight"), std::make_shared<StateModel>(from_json_impl(cj.at("state")))});
        }
        m.validate();
        return StateModel{m};
    }
    if (family == "raw_fock") {
        check_keys(j, {"family", "rho"});
        RawFockSpec r;
        const auto& rows = j.at("rho");
        r.rho.resize(rows.size(), rows.size());
        for (size_t i = 0; i < rows.size(); ++i)
            for (size_t k = 0; k < rows.size(); ++k) r.rho(i, k) = complex_from_json(rows.at(i).at(k));
        return StateModel{r};
    }
    throw std::invalid_argument("state schema: unknown family '" + family + "'");
}

json to_json_impl(const StateModel& s) {
    json j;
    j["family"] = s.family();
    if (const auto* g = s.as<GaussianStateSpec>()) {
        j["modes"] = g->modes;
        json rows = json::array();
        for (int i = 0; i < g->cov.rows(); ++i) {
            json row = json::array();
            for (int k = 0; k < g->cov.cols(); ++k) row.push_back(g->cov(i, k));
            rows.push_back(row);
        }
        j["cov"] = rows;
    } else if (const auto* f = s.as<FockStateSpec>()) {
        j["n"] = f->n;
    } else if (const auto* c = s.as<CatStateSpec>()) {
        j["beta"] = complex_to_json(c->beta);
        j["parity"] = c->parity;
    } else if (const auto* b = s.as<BinomialCodeSpec>()) {
        json arr = json::array();
        for (int i = 0; i < b->coeffs.size(); ++i) arr.push_back(complex_to_json(b->coeffs(i)));
        j["coeffs"] = arr;
    } else if (const auto* g = s.as<GkpSpec>()) {
        j["delta"] = g->delta;
        j["logical"] = g->logical;
        j["truncation_dim"] = g->truncation_dim;
    } else if (const auto* m = s.as<MixtureSpec>()) {
        json arr = json::array();
        for (const auto& comp : m->components)
            arr.push_back({{"weight", comp.weight}, {"state", to_json_impl(*comp.state)}});
        j["components"] = arr;
    } else if (const auto* r = s.as<RawFockSpec>()) {
        json rows = json::array();
        for (int i = 0; i < r->rho.rows(); ++i) {
            json row = json::array();
            for (int k = 0; k < r->rho.cols(); ++k) row.push_back(complex_to_json(r->rho(i, k)));
            rows.push_back(row);
        }
        j["rho"] = rows;
    }
    return j;
}

} // namespace

std::string state_to_json(const StateModel& state) { return to_json_impl(state).dump(); }

StateModel state_from_json(const std::string& text) {
    return from_json_impl(nlohmann::json::parse(text));
}

std::string state_hash(const StateModel& state) {
    const std::string dump = state_to_json(state);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

} // namespace cvchar
