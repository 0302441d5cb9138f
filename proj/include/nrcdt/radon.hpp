#pragma once

#include <cstddef>
#include <vector>

#include "nrcdt/measure.hpp"

namespace nrcdt {

// M equispaced directions on the full circle with uniform weights 1/M.
// For even M the second half is stored as the exact negation of the first,
// so slices at theta and theta+pi mirror bit-exactly.
class AngleGrid {
public:
    explicit AngleGrid(std::size_t count);

    std::size_t count() const { return directions_.size(); }
    const std::vector<Vec2>& directions() const { return directions_; }
    const Vec2& direction(std::size_t j) const { return directions_[j]; }
    double weight() const { return 1.0 / static_cast<double>(directions_.size()); }

private:
    std::vector<Vec2> directions_;
};

// R equispaced radial bin centers covering [-1, 1], stored symmetric about 0.
class RadialGrid {
public:
    explicit RadialGrid(std::size_t count);

    std::size_t count() const { return centers_.size(); }
    const std::vector<double>& centers() const { return centers_; }
    double spacing() const { return spacing_; }

private:
    std::vector<double> centers_;
    double spacing_ = 0.0;
};

// Discretized Radon transform: one binned slice per angle.
struct Sinogram {
    AngleGrid angles;
    RadialGrid radii;
    std::vector<Measure1D> slices;  // slices[j] pairs with angles.direction(j)
};

// Exact pushforward of the measure under x -> <x, theta>; no binning.
Measure1D restricted_slice(const Measure2D& m, const Vec2& theta);

// Slices for all angles, each splatted linearly onto the two nearest radial
// bin centers; per-angle mass is preserved.
Sinogram make_sinogram(const Measure2D& m, const AngleGrid& angles, std::size_t radial_bins);

// Evaluates h (sampled on the radial grid, linearly interpolated) at the
// projections <x_i, theta>.
std::vector<double> back_project(const std::vector<double>& h, const RadialGrid& grid,
                                 const Vec2& theta, const std::vector<Vec2>& queries);

struct Mat2 {
    // Row-major [[a, b], [c, d]].
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    Vec2 apply(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    Vec2 apply_transpose(const Vec2& v) const { return {a * v.x + c * v.y, b * v.x + d * v.y}; }
    double det() const { return a * d - b * c; }
    Mat2 times(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 inverse() const;
    void singular_values(double& s_max, double& s_min) const;
};

// Slice of the affinely transformed measure (A x + y)_# m expressed through a
// slice of m itself: scale by |A^T theta| and shift by <y, theta>.
Measure1D affine_pushforward_slice(const Measure2D& m, const Mat2& A, const Vec2& y,
                                   const Vec2& theta);

// Plain pushforward of the atoms under x -> A x + y.
Measure2D affine_transform(const Measure2D& m, const Mat2& A, const Vec2& y);

}  // namespace nrcdt
