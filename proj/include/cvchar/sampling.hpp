#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "cvchar/grid.hpp"
#include "cvchar/phase_space.hpp"
#include "cvchar/rng.hpp"
#include "cvchar/states.hpp"

namespace cvchar {

enum class Backend {
    gaussian_analytic, // exact normals from covariance algebra
    fft_characteristic, // inverse-CDF over an FFT-derived density table
    fock_exact, // inverse-CDF over the truncated-Fock density (slow, oracle-grade)
};

std::string backend_name(Backend b);
Backend backend_from_name(const std::string& name);

// gaussian_analytic when the state is Gaussian (or a mixture of Gaussians),
// fft_characteristic otherwise
Backend pick_backend(const StateModel& state);

struct SamplerOptions {
    int table_points = 1024; // per axis, power of two
    double table_half_width = 0.0; // frequency-axis half width; 0 = probe the decay
    double neg_tol = 1e-6;
    int fock_dim = 48; // truncation for the fock_exact backend
};

// Inverse-CDF sampler over a tabulated density, piecewise-constant cells with
// linear interpolation inside the selected cell.
class TabulatedSampler1D {
public:
    explicit TabulatedSampler1D(const DensityTable1D& pdf);
    double sample(RngStream& rng) const;

private:
    AxisSpec axis_;
    Eigen::VectorXd cdf_; // cumulative mass at cell right edges, last = 1
    std::vector<int> guide_; // stratified index into cdf_, O(1) inversion
};

class TabulatedSampler2D {
public:
    explicit TabulatedSampler2D(const Field2D& pdf);
    std::pair<double, double> sample(RngStream& rng) const;

private:
    GridSpec grid_;
    Eigen::VectorXd x_cdf_;
    Eigen::MatrixXd cond_cdf_; // column ix: conditional CDF over p cells
    std::vector<int> x_guide_;
    Eigen::MatrixXi col_guide_; // column ix: stratified index into cond_cdf_
};

// Single-copy homodyne outcomes at a fixed quadrature phase.
class HomodyneSampler {
public:
    HomodyneSampler(const StateModel& state, double theta, Backend backend,
                    const SamplerOptions& opts = {});
    double sample(RngStream& rng) const;
    Backend backend() const { return backend_; }

private:
    Backend backend_;
    // gaussian path: per-component (cumulative weight, std dev)
    std::vector<std::pair<double, double>> gauss_;
    std::unique_ptr<TabulatedSampler1D> table_;
};

struct PairSampleBatch {
    Eigen::VectorXd x, p;
    int size() const { return int(x.size()); }
};

// Outcomes (x, p) of the two-copy interference measurement whose statistic
// e^{-2i(u x + v p)} averages to C(alpha) C(conj(alpha) U), alpha = u + iv.
class PairSampler {
public:
    PairSampler(const StateModel& state, double symmetry_phase, Backend backend,
                const SamplerOptions& opts = {});

    void fill(PairSampleBatch& batch, int n, RngStream& rng) const;
    PairSampleBatch draw(int n, RngStream& rng) const;
    Backend backend() const { return backend_; }

private:
    Backend backend_;
    struct GaussPair {
        double cum_weight;
        Eigen::Matrix2d chol; // lower Cholesky factor of the (X, P) covariance
    };
    std::vector<GaussPair> gauss_;
    std::unique_ptr<TabulatedSampler2D> table_;
};

// smallest grid half-width from {8,16,...} at which the product characteristic
// has decayed below 1e-12 along probe rays
double probe_frequency_extent(const StateModel& state, double symmetry_phase);

} // namespace cvchar
