#pragma once

#include <cstddef>
#include <vector>

#include "nrcdt/measure.hpp"

namespace nrcdt::oracle {

enum class Order { two, inf };

// Pairing between source and target atoms with transported weights.
struct TransportPlan {
    struct Link {
        std::size_t src = 0;
        std::size_t dst = 0;
        double weight = 0.0;
    };
    std::vector<Link> links;

    std::vector<double> source_marginal(std::size_t n) const;
    std::vector<double> target_marginal(std::size_t n) const;
};

// Monotone (north-west corner) coupling between sorted 1-D measures; optimal
// for every convex ground cost and for the bottleneck cost.
TransportPlan monotone_plan(const Measure1D& a, const Measure1D& b);

// Exact 1-D Wasserstein distance via the monotone coupling; no grids.
double w_1d(const Measure1D& a, const Measure1D& b, Order p);

// Brute-force planar Wasserstein distance for uniform measures with equal
// atom counts n <= 8: the optimum is an assignment, found by exhausting all
// n! permutations.
double w_2d_assignment(const Measure2D& a, const Measure2D& b, Order p);

}  // namespace nrcdt::oracle
