#include "nrcdt/ot_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nrcdt/errors.hpp"

namespace nrcdt::oracle {

std::vector<double> TransportPlan::source_marginal(std::size_t n) const {
    std::vector<double> out(n, 0.0);
    for (const Link& l : links) out[l.src] += l.weight;
    return out;
}

std::vector<double> TransportPlan::target_marginal(std::size_t n) const {
    std::vector<double> out(n, 0.0);
    for (const Link& l : links) out[l.dst] += l.weight;
    return out;
}

TransportPlan monotone_plan(const Measure1D& a, const Measure1D& b) {
    TransportPlan plan;
    std::size_t i = 0, j = 0;
    double rem_a = a.masses()[0];
    double rem_b = b.masses()[0];
    while (i < a.size() && j < b.size()) {
        double w = std::min(rem_a, rem_b);
        if (w > 0.0) plan.links.push_back({i, j, w});
        rem_a -= w;
        rem_b -= w;
        if (rem_a <= 0.0) {
            ++i;
            if (i < a.size()) rem_a = a.masses()[i];
        }
        if (rem_b <= 0.0) {
            ++j;
            if (j < b.size()) rem_b = b.masses()[j];
        }
    }
    return plan;
}

double w_1d(const Measure1D& a, const Measure1D& b, Order p) {
    TransportPlan plan = monotone_plan(a, b);
    if (p == Order::inf) {
        double worst = 0.0;
        for (const auto& l : plan.links)
            worst = std::max(worst, std::abs(a.positions()[l.src] - b.positions()[l.dst]));
        return worst;
    }
    double cost = 0.0;
    for (const auto& l : plan.links) {
        double d = a.positions()[l.src] - b.positions()[l.dst];
        cost += l.weight * d * d;
    }
    return std::sqrt(cost);
}

double w_2d_assignment(const Measure2D& a, const Measure2D& b, Order p) {
    const std::size_t n = a.size();
    if (n != b.size()) throw LengthMismatch("w_2d_assignment atom counts");
    if (n > 8) throw TooManyAtoms(n);
    const double uniform = 1.0 / static_cast<double>(n);
    for (double m : a.masses())
        if (std::abs(m - uniform) > 1e-12) throw NonUniform();
    for (double m : b.masses())
        if (std::abs(m - uniform) > 1e-12) throw NonUniform();

    std::vector<std::vector<double>> d2(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double dx = a.points()[i].x - b.points()[j].x;
            double dy = a.points()[i].y - b.points()[j].y;
            d2[i][j] = dx * dx + dy * dy;
        }
    }

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double best = std::numeric_limits<double>::infinity();
    do {
        double value = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (p == Order::inf)
                value = std::max(value, d2[i][perm[i]]);
            else
                value += d2[i][perm[i]];
        }
        best = std::min(best, value);
    } while (std::next_permutation(perm.begin(), perm.end()));

    if (p == Order::inf) return std::sqrt(best);
    return std::sqrt(best * uniform);
}

}  // namespace nrcdt::oracle
