#include "nrcdt/nrcdt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nrcdt/errors.hpp"

namespace nrcdt {

std::string to_string(FeatureTag tag) {
    switch (tag) {
        case FeatureTag::mNRCDT: return "mnrcdt";
        case FeatureTag::aNRCDT: return "anrcdt";
        case FeatureTag::RCDT_flat: return "rcdt";
        case FeatureTag::Euclidean_flat: return "euclidean";
    }
    return "unknown";
}

FeatureTag feature_tag_from_string(const std::string& s) {
    if (s == "mnrcdt") return FeatureTag::mNRCDT;
    if (s == "anrcdt") return FeatureTag::aNRCDT;
    if (s == "rcdt") return FeatureTag::RCDT_flat;
    if (s == "euclidean") return FeatureTag::Euclidean_flat;
    throw ConfigError("unknown representation: " + s);
}

QuantileField zero_mean_field(const QuantileField& f) {
    QuantileField out = f;
    for (std::size_t j = 0; j < f.angles; ++j) {
        double mean = 0.0;
        for (std::size_t k = 0; k < f.points; ++k) mean += f.at(k, j);
        mean /= static_cast<double>(f.points);
        for (std::size_t k = 0; k < f.points; ++k) out.at(k, j) = f.at(k, j) - mean;
    }
    return out;
}

NormalizedField normalize_field(const QuantileField& f, double std_guard) {
    NormalizedField out;
    out.points = f.points;
    out.angles = f.angles;
    out.values.resize(f.values.size());
    out.column_mean.resize(f.angles);
    out.column_std.resize(f.angles);
    for (std::size_t j = 0; j < f.angles; ++j) {
        Moments mom = rho_moments(f.column(j));
        if (mom.std_dev < std_guard) throw DegenerateDirection(j);
        out.column_mean[j] = mom.mean;
        out.column_std[j] = mom.std_dev;
        for (std::size_t k = 0; k < f.points; ++k)
            out.values[k + j * f.points] = (f.at(k, j) - mom.mean) / mom.std_dev;
    }
    return out;
}

FeatureVector max_nrcdt(const NormalizedField& n) {
    FeatureVector v;
    v.tag = FeatureTag::mNRCDT;
    v.values.resize(n.points);
    for (std::size_t k = 0; k < n.points; ++k) {
        double best = n.at(k, 0);
        for (std::size_t j = 1; j < n.angles; ++j) best = std::max(best, n.at(k, j));
        v.values[k] = best;
    }
    return v;
}

FeatureVector mean_nrcdt(const NormalizedField& n) {
    FeatureVector v;
    v.tag = FeatureTag::aNRCDT;
    v.values.resize(n.points);
    const double w = 1.0 / static_cast<double>(n.angles);
    for (std::size_t k = 0; k < n.points; ++k) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n.angles; ++j) sum += n.at(k, j);
        v.values[k] = sum * w;
    }
    return v;
}

double min_std(const QuantileField& f) {
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < f.angles; ++j)
        lowest = std::min(lowest, rho_moments(f.column(j)).std_dev);
    return lowest;
}

double winf_radius(const RobustnessBudget& budget) {
    if (budget.epsilon == 0.0) return 0.0;
    if (!(2.0 * budget.epsilon < budget.c0)) throw BudgetExceeded();
    const double e = budget.epsilon;
    return 4.0 * e * (budget.diam + 2.0 * e) / (budget.c0 * (budget.c0 - 2.0 * e));
}

double w2_radius(const RobustnessBudget& budget) {
    if (budget.epsilon == 0.0) return 0.0;
    if (!(2.0 * budget.epsilon < budget.c0)) throw BudgetExceeded();
    return 4.0 * budget.epsilon / budget.c0;
}

AnisotropyCheck check_anisotropy(double sigma_max, double sigma_min, double c,
                                 double anrcdt_gap_rho, double field_norm_max) {
    if (!(sigma_min > 0.0)) throw SingularMatrix();
    AnisotropyCheck out;
    out.spread = (sigma_max - sigma_min) / sigma_min;
    out.bound = c * anrcdt_gap_rho / field_norm_max;
    out.admissible = out.spread <= out.bound;
    return out;
}

double field_rho_norm(const NormalizedField& n) {
    double sum = 0.0;
    for (double v : n.values) sum += v * v;
    return std::sqrt(sum / static_cast<double>(n.values.size()));
}

}  // namespace nrcdt
