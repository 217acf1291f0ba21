#pragma once

#include <complex>
#include <vector>

namespace quatconf {

// Rectangle or disk in the plane, sampled on a square lattice. Sweeps keep a
// margin of 2h from the boundary so that difference stencils stay inside.
class PlanarDomain {
public:
    enum class Kind { rectangle, disk };

    // Throws std::invalid_argument for resolution < 2, h <= 0 or an extent
    // that the margin swallows.
    static PlanarDomain rectangle(std::complex<double> center, double half_width, double half_height,
                                  int resolution, double h = 1e-3);
    static PlanarDomain disk(std::complex<double> center, double radius, int resolution, double h = 1e-3);

    Kind kind() const { return kind_; }
    std::complex<double> center() const { return center_; }
    double half_width() const { return half_width_; }
    double half_height() const { return half_height_; }
    double radius() const { return half_width_; }
    int resolution() const { return resolution_; }
    double h() const { return h_; }
    // Largest distance from the centre to the boundary.
    double scale() const;

    PlanarDomain with_step(double h) const;
    PlanarDomain with_resolution(int resolution) const;

    // Strictly inside, at least 2h from the boundary.
    bool contains(std::complex<double> z) const;
    // Inside the closed domain, margin ignored.
    bool encloses(std::complex<double> z) const;

    // resolution x resolution points spanning the margin-reduced bounding box,
    // row-major: y outer (increasing), x inner (increasing).
    std::vector<std::complex<double>> lattice() const;
    // Lattice points inside the domain (the whole lattice for rectangles).
    std::vector<std::complex<double>> samples() const;
    // Lattice spacing along x.
    double spacing() const;

private:
    PlanarDomain(Kind kind, std::complex<double> center, double hw, double hh, int resolution, double h);
    Kind kind_;
    std::complex<double> center_;
    double half_width_;
    double half_height_;
    int resolution_;
    double h_;
};

}  // namespace quatconf
