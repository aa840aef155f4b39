#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace cvchar {

// A k-mode phase-space coordinate.
struct PhasePoint {
    std::vector<std::complex<double>> components;

    PhasePoint() = default;
    explicit PhasePoint(std::complex<double> a) : components{a} {}
    explicit PhasePoint(std::vector<std::complex<double>> c) : components(std::move(c)) {
        validate();
    }

    int k() const { return static_cast<int>(components.size()); }
    std::complex<double> operator[](int j) const { return components[j]; }

    void validate() const {
        if (components.empty()) throw std::invalid_argument("PhasePoint: k must be >= 1");
        for (auto c : components)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw std::invalid_argument("PhasePoint: components must be finite");
    }
};

} // namespace cvchar
