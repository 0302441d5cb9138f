#pragma once

#include <cstddef>
#include <vector>

namespace nrcdt {

constexpr double kDomainHalfWidth = 0.70710678118654752440;  // 1/sqrt(2)

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

// Row-major nonnegative raster; value(r, c) with r = 0 at the top.
struct Image {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<double> data;

    Image() = default;
    Image(std::size_t h, std::size_t w, double fill = 0.0)
        : height(h), width(w), data(h * w, fill) {}

    double& at(std::size_t r, std::size_t c) { return data[r * width + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * width + c]; }
};

// Probability measure on the plane as weighted atoms. Construction
// normalizes total mass to one.
class Measure2D {
public:
    Measure2D(std::vector<Vec2> points, std::vector<double> masses);

    const std::vector<Vec2>& points() const { return points_; }
    const std::vector<double>& masses() const { return masses_; }
    std::size_t size() const { return points_.size(); }
    double total_mass() const;

private:
    std::vector<Vec2> points_;
    std::vector<double> masses_;
};

// Probability measure on the line: sorted atom positions, exact duplicates
// merged, masses normalized, prefix sums cached for CDF/quantile queries.
class Measure1D {
public:
    Measure1D(std::vector<double> positions, std::vector<double> masses);

    const std::vector<double>& positions() const { return positions_; }
    const std::vector<double>& masses() const { return masses_; }
    const std::vector<double>& cumulative() const { return cumulative_; }
    std::size_t size() const { return positions_.size(); }

private:
    std::vector<double> positions_;
    std::vector<double> masses_;
    std::vector<double> cumulative_;
};

// Uniform reference on [0, 1] sampled at the L midpoints t_k = (k - 1/2)/L.
class ReferenceGrid {
public:
    explicit ReferenceGrid(std::size_t count);

    std::size_t count() const { return knots_.size(); }
    const std::vector<double>& knots() const { return knots_; }
    double knot(std::size_t k) const { return knots_[k]; }

private:
    std::vector<double> knots_;
};

// One atom per nonzero pixel at the pixel center, masses proportional to the
// gray values; the image square maps to [-half_width, half_width]^2 with the
// y axis pointing up.
Measure2D image_to_measure(const Image& img, double half_width = kDomainHalfWidth);

// Right-continuous F(s) = m((-inf, s]).
double cdf(const Measure1D& m, double s);

// Generalized inverse inf{s : F(s) > t}, t in (0, 1).
double quantile(const Measure1D& m, double t);

struct Moments {
    double mean = 0.0;
    double std_dev = 0.0;
};

// Midpoint-rule mean and standard deviation of grid samples against the
// uniform reference: mean = (1/L) sum g_k, std = sqrt((1/L) sum (g_k-mean)^2).
Moments rho_moments(const std::vector<double>& grid_values);

// Largest pairwise distance over the support; exact (convex hull prefilter).
double diameter(const Measure2D& m);

// Dimension of the affine hull of the support: 0 for a point, 1 for a line,
// 2 otherwise. The spread threshold is in length units and compares against
// the square roots of the covariance eigenvalues, whose minimum equals the
// smallest per-direction projection spread.
int support_dimension(const Measure2D& m, double spread_tol = 1e-12);

}  // namespace nrcdt
