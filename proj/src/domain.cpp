#include "quatconf/domain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace quatconf {

PlanarDomain::PlanarDomain(Kind kind, std::complex<double> center, double hw, double hh, int resolution, double h)
    : kind_(kind), center_(center), half_width_(hw), half_height_(hh), resolution_(resolution), h_(h) {
    if (resolution < 2) throw std::invalid_argument("PlanarDomain: resolution must be at least 2");
    if (!(h > 0.0)) throw std::invalid_argument("PlanarDomain: step h must be positive");
    if (!(hw > 2.0 * h) || !(hh > 2.0 * h)) {
        throw std::invalid_argument("PlanarDomain: extent smaller than the 2h boundary margin");
    }
}

PlanarDomain PlanarDomain::rectangle(std::complex<double> center, double half_width, double half_height,
                                     int resolution, double h) {
    return {Kind::rectangle, center, half_width, half_height, resolution, h};
}

PlanarDomain PlanarDomain::disk(std::complex<double> center, double radius, int resolution, double h) {
    return {Kind::disk, center, radius, radius, resolution, h};
}

double PlanarDomain::scale() const {
    return kind_ == Kind::disk ? half_width_ : std::hypot(half_width_, half_height_);
}

PlanarDomain PlanarDomain::with_step(double h) const {
    return {kind_, center_, half_width_, half_height_, resolution_, h};
}

PlanarDomain PlanarDomain::with_resolution(int resolution) const {
    return {kind_, center_, half_width_, half_height_, resolution, h_};
}

bool PlanarDomain::contains(std::complex<double> z) const {
    const std::complex<double> d = z - center_;
    const double margin = 2.0 * h_;
    if (kind_ == Kind::disk) return std::abs(d) <= (half_width_ - margin) * (1.0 + 1e-12);
    return std::abs(d.real()) <= half_width_ - margin && std::abs(d.imag()) <= half_height_ - margin;
}

bool PlanarDomain::encloses(std::complex<double> z) const {
    const std::complex<double> d = z - center_;
    if (kind_ == Kind::disk) return std::abs(d) <= half_width_;
    return std::abs(d.real()) <= half_width_ && std::abs(d.imag()) <= half_height_;
}

double PlanarDomain::spacing() const { return 2.0 * (half_width_ - 2.0 * h_) / (resolution_ - 1); }

std::vector<std::complex<double>> PlanarDomain::lattice() const {
    const double margin = 2.0 * h_;
    const double wx = half_width_ - margin;
    const double wy = half_height_ - margin;
    std::vector<std::complex<double>> pts;
    pts.reserve(static_cast<std::size_t>(resolution_) * static_cast<std::size_t>(resolution_));
    for (int r = 0; r < resolution_; ++r) {
        const double y = -wy + 2.0 * wy * r / (resolution_ - 1);
        for (int c = 0; c < resolution_; ++c) {
            const double x = -wx + 2.0 * wx * c / (resolution_ - 1);
            pts.emplace_back(center_.real() + x, center_.imag() + y);
        }
    }
    return pts;
}

std::vector<std::complex<double>> PlanarDomain::samples() const {
    std::vector<std::complex<double>> pts = lattice();
    if (kind_ == Kind::disk) {
        // Lattice corners sit exactly on the margin circle only up to rounding.
        const double limit = (half_width_ - 2.0 * h_) * (1.0 + 1e-12);
        std::erase_if(pts, [&](std::complex<double> z) { return std::abs(z - center_) > limit; });
    }
    return pts;
}

}  // namespace quatconf
