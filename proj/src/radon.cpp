#include "nrcdt/radon.hpp"

#include <algorithm>
#include <cmath>

#include "nrcdt/errors.hpp"

namespace nrcdt {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

AngleGrid::AngleGrid(std::size_t count) {
    if (count < 1) throw ArgOutOfRange("angle grid needs at least one direction");
    directions_.resize(count);
    const std::size_t half = count / 2;
    const bool even = (count % 2 == 0);
    const std::size_t explicit_count = even ? half : count;
    for (std::size_t j = 0; j < explicit_count; ++j) {
        double phi = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(count);
        directions_[j] = {std::cos(phi), std::sin(phi)};
    }
    if (even) {
        for (std::size_t j = 0; j < half; ++j)
            directions_[half + j] = {-directions_[j].x, -directions_[j].y};
    }
}

RadialGrid::RadialGrid(std::size_t count) {
    if (count < 2) throw ArgOutOfRange("radial grid needs at least two bins");
    centers_.resize(count);
    const double denom = static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        // Integer numerator keeps centers exactly antisymmetric.
        double num = 2.0 * static_cast<double>(i) - denom;
        centers_[i] = num / denom;
    }
    spacing_ = 2.0 / denom;
}

Measure1D restricted_slice(const Measure2D& m, const Vec2& theta) {
    if (std::abs(theta.x * theta.x + theta.y * theta.y - 1.0) > 1e-12)
        throw NonUnitDirection();
    std::vector<double> pos(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) pos[i] = dot(m.points()[i], theta);
    return Measure1D(std::move(pos), m.masses());
}

Sinogram make_sinogram(const Measure2D& m, const AngleGrid& angles, std::size_t radial_bins) {
    RadialGrid radii(radial_bins);
    const auto& centers = radii.centers();
    const double limit = 1.0 + 0.5 * radii.spacing();

    std::vector<Measure1D> slices;
    slices.reserve(angles.count());
    std::vector<double> bins(centers.size());
    for (std::size_t j = 0; j < angles.count(); ++j) {
        const Vec2& theta = angles.direction(j);
        std::fill(bins.begin(), bins.end(), 0.0);
        for (std::size_t i = 0; i < m.size(); ++i) {
            double p = dot(m.points()[i], theta);
            if (std::abs(p) > limit) throw SupportOutsideDisc(std::abs(p));
            double mass = m.masses()[i];
            // Locate by binary search: comparisons are exact, so mirrored
            // projections land in mirrored bins without rounding drift.
            auto it = std::upper_bound(centers.begin(), centers.end(), p);
            if (it == centers.begin()) {
                bins.front() += mass;
                continue;
            }
            if (it == centers.end()) {
                bins.back() += mass;
                continue;
            }
            std::size_t hi = static_cast<std::size_t>(it - centers.begin());
            std::size_t lo = hi - 1;
            double span = centers[hi] - centers[lo];
            double w_hi = (p - centers[lo]) / span;
            double w_lo = (centers[hi] - p) / span;
            bins[lo] += mass * w_lo;
            bins[hi] += mass * w_hi;
        }
        std::vector<double> pos, mass;
        pos.reserve(centers.size());
        mass.reserve(centers.size());
        for (std::size_t i = 0; i < centers.size(); ++i) {
            if (bins[i] != 0.0) {
                pos.push_back(centers[i]);
                mass.push_back(bins[i]);
            }
        }
        slices.emplace_back(std::move(pos), std::move(mass));
    }
    return Sinogram{angles, std::move(radii), std::move(slices)};
}

std::vector<double> back_project(const std::vector<double>& h, const RadialGrid& grid,
                                 const Vec2& theta, const std::vector<Vec2>& queries) {
    if (h.size() != grid.count()) throw GridMismatch();
    const auto& centers = grid.centers();
    std::vector<double> out(queries.size());
    for (std::size_t i = 0; i < queries.size(); ++i) {
        double t = dot(queries[i], theta);
        if (t < centers.front() || t > centers.back()) throw QueryOutsideGrid(t);
        auto it = std::upper_bound(centers.begin(), centers.end(), t);
        if (it == centers.begin()) {
            out[i] = h.front();
            continue;
        }
        if (it == centers.end()) {
            out[i] = h.back();
            continue;
        }
        std::size_t hi = static_cast<std::size_t>(it - centers.begin());
        std::size_t lo = hi - 1;
        double u = (t - centers[lo]) / (centers[hi] - centers[lo]);
        out[i] = (1.0 - u) * h[lo] + u * h[hi];
    }
    return out;
}

Mat2 Mat2::inverse() const {
    double determinant = det();
    if (std::abs(determinant) < 1e-300) throw SingularMatrix();
    double inv = 1.0 / determinant;
    return {d * inv, -b * inv, -c * inv, a * inv};
}

void Mat2::singular_values(double& s_max, double& s_min) const {
    double q = std::hypot(a + d, b - c);
    double r = std::hypot(a - d, b + c);
    s_max = 0.5 * (q + r);
    s_min = 0.5 * std::abs(q - r);
}

Measure1D affine_pushforward_slice(const Measure2D& m, const Mat2& A, const Vec2& y,
                                   const Vec2& theta) {
    if (A.det() == 0.0) throw SingularMatrix();
    Vec2 w = A.apply_transpose(theta);
    double norm = std::hypot(w.x, w.y);
    if (!(norm > 0.0)) throw SingularMatrix();
    Vec2 unit{w.x / norm, w.y / norm};
    Measure1D base = restricted_slice(m, unit);
    double shift = dot(y, theta);
    std::vector<double> pos(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) pos[i] = norm * base.positions()[i] + shift;
    return Measure1D(std::move(pos), base.masses());
}

Measure2D affine_transform(const Measure2D& m, const Mat2& A, const Vec2& y) {
    if (A.det() == 0.0) throw SingularMatrix();
    std::vector<Vec2> pts(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        Vec2 v = A.apply(m.points()[i]);
        pts[i] = {v.x + y.x, v.y + y.y};
    }
    return Measure2D(std::move(pts), m.masses());
}

}  // namespace nrcdt
