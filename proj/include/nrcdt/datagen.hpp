#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nrcdt/measure.hpp"
#include "nrcdt/radon.hpp"
#include "nrcdt/rng.hpp"

namespace nrcdt::datagen {

// Random affine transform drawn per sample. Angles in degrees, shifts in
// pixels; the linear part composes as Rotation * ShearY * ShearX * Scale and
// acts about the image center in a y-up frame.
struct AffineParams {
    double scale_x = 1.0;
    double scale_y = 1.0;
    double shear_x_deg = 0.0;
    double shear_y_deg = 0.0;
    double rotation_deg = 0.0;
    double shift_x = 0.0;
    double shift_y = 0.0;

    Mat2 matrix() const;
    void singular_values(double& s_max, double& s_min) const;
};

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

struct CorruptionParams {
    double sin_freq1 = 0.0;
    double sin_freq2 = 0.0;
    double sin_amp1 = 0.0;   // pixels
    double sin_amp2 = 0.0;
    int salt_count = 0;
    int salt_strength = 0;   // disc radius in pixels
};

struct AffineRanges {
    Range scale{1.0, 1.0};
    Range shear_deg{0.0, 0.0};
    Range rotation_deg{0.0, 0.0};
    Range shift_px{0.0, 0.0};
};

struct CorruptionRanges {
    Range sin_freq{0.0, 0.0};
    Range sin_amp{0.0, 0.0};
    Range salt_count{0.0, 0.0};  // integer draw, inclusive
    int salt_strength = 0;
};

struct DatasetSpec {
    std::vector<int> template_ids = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    std::size_t samples_per_class = 10;
    std::size_t image_size = 256;
    std::uint64_t seed = 0;
    AffineRanges affine;
    CorruptionRanges corruption;
};

struct Sample {
    Image image;
    int label = 0;
    std::uint64_t seed = 0;
    AffineParams affine;
    CorruptionParams corruption;
};

struct Dataset {
    std::vector<Image> templates;        // clean renders, index = class
    std::vector<int> template_labels;
    std::vector<Sample> samples;
};

// Continuous intensity field of template `id` at unit-square coordinates
// (u, v) in [-1, 1]^2; the raster samples this at pixel centers. Twelve
// glyphs: base outline {disc, square, triangle} x topper {none, bar, plus,
// saltire}.
double template_intensity(int id, double u, double v);

// Renders template `id` on an N x N grid with anti-aliased strokes.
Image render_template(int id, std::size_t n);

// Independent uniform draws for each parameter; same rng state gives the
// same params.
AffineParams sample_affine(const AffineRanges& ranges, CounterRng& rng);
CorruptionParams sample_corruption(const CorruptionRanges& ranges, CounterRng& rng);

// Inverse-mapped affine warp with a 3x3 quadratic Lagrange stencil; values
// outside the frame read as zero, outputs clamped to >= 0.
Image warp_affine(const Image& img, const AffineParams& p);

// Sinusoidal non-affine warp: output pixel (j, k) samples the input at
// (j + a1 sin(2 pi f1 k / N), k + a2 cos(2 pi f2 j / N)).
Image warp_sinusoidal(const Image& img, const CorruptionParams& c);

// Stamps `salt_count` discs of radius `salt_strength` at uniform random
// centers, each filled with the current image maximum.
Image add_salt(const Image& img, const CorruptionParams& c, CounterRng& rng);

// Full pipeline per sample: sinusoidal warp, affine warp, salt. Each sample
// uses seed derive_seed(spec.seed, class, index) so generation order does
// not matter.
Dataset build_dataset(const DatasetSpec& spec);

// Corrupts a single rendered template with the sample's derived seed;
// build_dataset is a loop over this.
Sample make_sample(const Image& tmpl, int label, const DatasetSpec& spec,
                   std::size_t class_index, std::size_t sample_index);

// IDX container (big-endian), magic 0x803 for u8 image stacks and 0x801 for
// labels.
struct IdxImages {
    std::size_t count = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> pixels;
};

void write_idx_images(const std::string& path, const IdxImages& images);
IdxImages read_idx_images(const std::string& path);
void write_idx_labels(const std::string& path, const std::vector<std::uint8_t>& labels);
std::vector<std::uint8_t> read_idx_labels(const std::string& path);

}  // namespace nrcdt::datagen
