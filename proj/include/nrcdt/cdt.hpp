#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nrcdt/measure.hpp"
#include "nrcdt/radon.hpp"

namespace nrcdt {

// R-CDT samples on the (t, theta) grid, column j = angle j. Columns are
// nondecreasing since they are quantile samples.
struct QuantileField {
    std::size_t points = 0;  // L
    std::size_t angles = 0;  // M
    std::vector<double> values;  // column-major, values[k + j * points]

    double at(std::size_t k, std::size_t j) const { return values[k + j * points]; }
    double& at(std::size_t k, std::size_t j) { return values[k + j * points]; }
    std::vector<double> column(std::size_t j) const {
        return {values.begin() + static_cast<std::ptrdiff_t>(j * points),
                values.begin() + static_cast<std::ptrdiff_t>((j + 1) * points)};
    }
};

// CDT against the uniform reference: v_k = F_m^{[-1]}(t_k).
std::vector<double> cdt_1d(const Measure1D& m, const ReferenceGrid& ref);

// Angle-wise CDT of a sinogram.
QuantileField rcdt(const Sinogram& s, const ReferenceGrid& ref);

// Angle-wise CDT straight from the atom-level slices, skipping radial
// binning; used where bin resolution must not enter the comparison.
QuantileField rcdt_exact(const Measure2D& m, const AngleGrid& angles, const ReferenceGrid& ref);

// Norm distance sqrt((1/(L*M)) sum (f - g)^2); agrees with the sliced
// Wasserstein-2 distance of the underlying measures.
double sliced_w2(const QuantileField& f, const QuantileField& g);

// Exact integral sqrt(int_0^1 (F_a^{[-1]} - F_b^{[-1]})^2 dt), evaluated
// piecewise between the merged cumulative breakpoints through quantile
// queries. Companion route to oracle::w_1d(p=2).
double quantile_l2_gap(const Measure1D& a, const Measure1D& b);

// Binary feature container: magic, u32 L, u32 M (little endian), then
// column-major f64 payload. Magic "RCDT" for fields, "NRCF" for feature
// vectors.
void write_field(const std::string& path, const char magic[4], std::size_t points,
                 std::size_t angles, const std::vector<double>& values);
struct FieldFile {
    char magic[5] = {0, 0, 0, 0, 0};
    std::size_t points = 0;
    std::size_t angles = 0;
    std::vector<double> values;
};
FieldFile read_field(const std::string& path);

}  // namespace nrcdt
