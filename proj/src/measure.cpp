#include "nrcdt/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nrcdt/errors.hpp"

namespace nrcdt {

Measure2D::Measure2D(std::vector<Vec2> points, std::vector<double> masses)
    : points_(std::move(points)), masses_(std::move(masses)) {
    if (points_.size() != masses_.size())
        throw LengthMismatch("Measure2D points vs masses");
    if (points_.empty()) throw ArgOutOfRange("Measure2D needs at least one atom");
    double total = 0.0;
    for (std::size_t i = 0; i < masses_.size(); ++i) {
        if (!(masses_[i] >= 0.0)) throw ArgOutOfRange("Measure2D mass must be >= 0");
        if (!std::isfinite(points_[i].x) || !std::isfinite(points_[i].y))
            throw ArgOutOfRange("Measure2D point must be finite");
        total += masses_[i];
    }
    if (!(total > 0.0)) throw ArgOutOfRange("Measure2D total mass must be positive");
    for (double& m : masses_) m /= total;
}

double Measure2D::total_mass() const {
    return std::accumulate(masses_.begin(), masses_.end(), 0.0);
}

Measure1D::Measure1D(std::vector<double> positions, std::vector<double> masses) {
    if (positions.size() != masses.size())
        throw LengthMismatch("Measure1D positions vs masses");
    if (positions.empty()) throw ArgOutOfRange("Measure1D needs at least one atom");
    std::vector<std::size_t> order(positions.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return positions[a] < positions[b]; });

    double total = 0.0;
    for (std::size_t idx : order) {
        double p = positions[idx];
        double m = masses[idx];
        if (!std::isfinite(p)) throw ArgOutOfRange("Measure1D position must be finite");
        if (!(m >= 0.0)) throw ArgOutOfRange("Measure1D mass must be >= 0");
        // Merge only exact duplicates; distinct positions stay distinct atoms.
        if (!positions_.empty() && positions_.back() == p) {
            masses_.back() += m;
        } else {
            positions_.push_back(p);
            masses_.push_back(m);
        }
        total += m;
    }
    if (!(total > 0.0)) throw ArgOutOfRange("Measure1D total mass must be positive");

    cumulative_.resize(positions_.size());
    double run = 0.0;
    for (std::size_t i = 0; i < positions_.size(); ++i) {
        masses_[i] /= total;
        run += masses_[i];
        cumulative_[i] = run;
    }
    cumulative_.back() = 1.0;
}

ReferenceGrid::ReferenceGrid(std::size_t count) {
    if (count < 1) throw ArgOutOfRange("reference grid needs at least one knot");
    knots_.resize(count);
    for (std::size_t k = 0; k < count; ++k)
        knots_[k] = (static_cast<double>(k) + 0.5) / static_cast<double>(count);
}

Measure2D image_to_measure(const Image& img, double half_width) {
    if (img.height == 0 || img.width == 0) throw ArgOutOfRange("empty image");
    const double px = 2.0 * half_width / static_cast<double>(img.width);
    const double py = 2.0 * half_width / static_cast<double>(img.height);
    std::vector<Vec2> pts;
    std::vector<double> masses;
    double total = 0.0;
    for (std::size_t r = 0; r < img.height; ++r) {
        for (std::size_t c = 0; c < img.width; ++c) {
            double v = img.at(r, c);
            if (!std::isfinite(v) || v < 0.0)
                throw NegativePixel("at (" + std::to_string(r) + "," + std::to_string(c) + ")");
            if (v == 0.0) continue;
            double x = (static_cast<double>(c) + 0.5) * px - half_width;
            double y = half_width - (static_cast<double>(r) + 0.5) * py;
            pts.push_back({x, y});
            masses.push_back(v);
            total += v;
        }
    }
    if (pts.empty() || !(total > 0.0)) throw AllZeroImage();
    return Measure2D(std::move(pts), std::move(masses));
}

double cdf(const Measure1D& m, double s) {
    const auto& pos = m.positions();
    // Index of the last atom with position <= s.
    auto it = std::upper_bound(pos.begin(), pos.end(), s);
    if (it == pos.begin()) return 0.0;
    return m.cumulative()[static_cast<std::size_t>(it - pos.begin()) - 1];
}

double quantile(const Measure1D& m, double t) {
    if (!(t > 0.0 && t < 1.0)) throw ArgOutOfRange("quantile level must be in (0,1)");
    const auto& cum = m.cumulative();
    // First atom whose cumulative mass strictly exceeds t.
    auto it = std::upper_bound(cum.begin(), cum.end(), t);
    return m.positions()[static_cast<std::size_t>(it - cum.begin())];
}

Moments rho_moments(const std::vector<double>& g) {
    if (g.size() < 2) throw ArgOutOfRange("rho_moments needs at least two grid values");
    const double n = static_cast<double>(g.size());
    double mean = 0.0;
    for (double v : g) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : g) {
        double d = v - mean;
        var += d * d;
    }
    return {mean, std::sqrt(var / n)};
}

namespace {

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew monotone chain; collinear points dropped.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    if (pts.size() <= 2) return pts;
    std::vector<Vec2> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

}  // namespace

int support_dimension(const Measure2D& m, double spread_tol) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        mx += m.masses()[i] * m.points()[i].x;
        my += m.masses()[i] * m.points()[i].y;
    }
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        double dx = m.points()[i].x - mx;
        double dy = m.points()[i].y - my;
        sxx += m.masses()[i] * dx * dx;
        sxy += m.masses()[i] * dx * dy;
        syy += m.masses()[i] * dy * dy;
    }
    double half_tr = 0.5 * (sxx + syy);
    double root = std::sqrt(std::max(0.0, 0.25 * (sxx - syy) * (sxx - syy) + sxy * sxy));
    double lo = std::max(0.0, half_tr - root);
    double hi = half_tr + root;
    double tol2 = spread_tol * spread_tol;
    if (hi <= tol2) return 0;
    if (lo <= tol2) return 1;
    return 2;
}

double diameter(const Measure2D& m) {
    std::vector<Vec2> support;
    support.reserve(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m.masses()[i] > 0.0) support.push_back(m.points()[i]);
    if (support.empty()) support.push_back(m.points().front());
    std::vector<Vec2> hull = convex_hull(std::move(support));
    double best = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        for (std::size_t j = i + 1; j < hull.size(); ++j) {
            double dx = hull[i].x - hull[j].x;
            double dy = hull[i].y - hull[j].y;
            best = std::max(best, dx * dx + dy * dy);
        }
    }
    return std::sqrt(best);
}

}  // namespace nrcdt
