#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "nrcdt/cdt.hpp"

namespace nrcdt {

// Quantile field after the two-step per-angle normalization: every column
// has mean 0 and standard deviation 1 against the reference grid.
struct NormalizedField {
    std::size_t points = 0;
    std::size_t angles = 0;
    std::vector<double> values;         // column-major like QuantileField
    std::vector<double> column_mean;    // moments of the raw field, per angle
    std::vector<double> column_std;

    double at(std::size_t k, std::size_t j) const { return values[k + j * points]; }
};

enum class FeatureTag : std::uint8_t { mNRCDT, aNRCDT, RCDT_flat, Euclidean_flat };

std::string to_string(FeatureTag tag);
FeatureTag feature_tag_from_string(const std::string& s);

struct FeatureVector {
    std::vector<double> values;
    FeatureTag tag = FeatureTag::mNRCDT;
    std::uint64_t sample_seed = 0;
    std::uint64_t config_hash = 0;
};

// Guard below which a column is treated as having one-dimensional support.
constexpr double kStdGuard = 1e-12;

// Subtracts the per-angle mean only; the first normalization step.
QuantileField zero_mean_field(const QuantileField& f);

// Full normalization; throws DegenerateDirection(j) when column j has
// standard deviation below the guard.
NormalizedField normalize_field(const QuantileField& f, double std_guard = kStdGuard);

// Pointwise maximum over angles.
FeatureVector max_nrcdt(const NormalizedField& n);

// Uniform-weight average over angles.
FeatureVector mean_nrcdt(const NormalizedField& n);

// Smallest per-angle standard deviation of the raw field.
double min_std(const QuantileField& f);

struct RobustnessBudget {
    double epsilon = 0.0;   // perturbation radius
    double c0 = 0.0;        // smallest per-angle std of the template
    double diam = 0.0;      // diameter of the template support
};

// Sup-norm radius 4*eps*(diam + 2*eps) / (c0*(c0 - 2*eps)) for the
// max-normalized transform under W_inf perturbations. Requires 2*eps < c0.
double winf_radius(const RobustnessBudget& budget);

// rho-norm radius 4*eps/c0 for the mean-normalized transform under W_2
// perturbations. Requires 2*eps < c0.
double w2_radius(const RobustnessBudget& budget);

// Admissibility of an affine map for mean-normalized separation: the
// relative singular-value spread must stay below
// c * |aNR gap|_rho / max{C_mu, C_nu}.
struct AnisotropyCheck {
    double spread = 0.0;  // (s_max - s_min)/s_min
    double bound = 0.0;
    bool admissible = false;
};
AnisotropyCheck check_anisotropy(double sigma_max, double sigma_min, double c,
                                 double anrcdt_gap_rho, double field_norm_max);

// Frobenius-style norm sqrt((1/(L*M)) sum v^2) of a (normalized) field;
// equals 1 for every NormalizedField by construction.
double field_rho_norm(const NormalizedField& n);

}  // namespace nrcdt
