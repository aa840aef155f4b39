#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace cvchar {

// One grid axis: `points` samples centered on `center`, covering
// [center - half_width, center + half_width).
struct AxisSpec {
    double center = 0.0;
    double half_width = 8.0;
    int points = 512;

    double step() const { return 2.0 * half_width / points; }
    double coord(int i) const { return center - half_width + (i + 0.0) * step(); }

    void validate(bool fft_axis = false) const {
        if (half_width <= 0.0) throw std::invalid_argument("AxisSpec: half_width must be positive");
        if (points <= 0) throw std::invalid_argument("AxisSpec: points must be positive");
        if (fft_axis) {
            if (points < 64) throw std::invalid_argument("AxisSpec: FFT axis needs >= 64 points");
            if ((points & (points - 1)) != 0)
                throw std::invalid_argument("AxisSpec: FFT axis needs a power-of-two point count");
        }
    }
};

struct GridSpec {
    AxisSpec x;
    AxisSpec p;
};

// Tabulated complex field over a 2D grid; values(ix, ip).
struct Field2D {
    GridSpec grid;
    Eigen::MatrixXcd values;

    Field2D() = default;
    explicit Field2D(const GridSpec& g)
        : grid(g), values(Eigen::MatrixXcd::Zero(g.x.points, g.p.points)) {}

    void check_shape() const {
        if (values.rows() != grid.x.points || values.cols() != grid.p.points)
            throw std::invalid_argument("Field2D: value shape does not match grid");
    }
};

// Tabulated real density over one axis.
struct DensityTable1D {
    AxisSpec axis;
    Eigen::VectorXd values;

    double integral() const { return values.sum() * axis.step(); }
};

} // namespace cvchar
