#include "nrcdt/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "nrcdt/errors.hpp"

namespace nrcdt::datagen {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Degree-based sine/cosine with exact values at quarter turns, so aligned
// rotations produce exact lattice maps.
void sincos_deg(double deg, double& s, double& c) {
    double r = std::fmod(deg, 360.0);
    if (r < 0.0) r += 360.0;
    if (r == 0.0) {
        s = 0.0;
        c = 1.0;
        return;
    }
    if (r == 90.0) {
        s = 1.0;
        c = 0.0;
        return;
    }
    if (r == 180.0) {
        s = 0.0;
        c = -1.0;
        return;
    }
    if (r == 270.0) {
        s = -1.0;
        c = 0.0;
        return;
    }
    double rad = deg * (kPi / 180.0);
    s = std::sin(rad);
    c = std::cos(rad);
}

double tan_deg(double deg) {
    if (deg == 0.0) return 0.0;
    return std::tan(deg * (kPi / 180.0));
}

}  // namespace

Mat2 AffineParams::matrix() const {
    Mat2 scale{scale_x, 0.0, 0.0, scale_y};
    Mat2 shear_x{1.0, tan_deg(shear_x_deg), 0.0, 1.0};
    Mat2 shear_y{1.0, 0.0, tan_deg(shear_y_deg), 1.0};
    double s, c;
    sincos_deg(rotation_deg, s, c);
    Mat2 rot{c, -s, s, c};
    return rot.times(shear_y.times(shear_x.times(scale)));
}

void AffineParams::singular_values(double& s_max, double& s_min) const {
    matrix().singular_values(s_max, s_min);
}

// ---------------------------------------------------------------------------
// Template glyphs
// ---------------------------------------------------------------------------

namespace {

struct Pt {
    double x, y;
};

double dist_segment(double px, double py, Pt a, Pt b) {
    double vx = b.x - a.x, vy = b.y - a.y;
    double wx = px - a.x, wy = py - a.y;
    double vv = vx * vx + vy * vy;
    double t = vv > 0.0 ? std::clamp((wx * vx + wy * vy) / vv, 0.0, 1.0) : 0.0;
    double dx = wx - t * vx, dy = wy - t * vy;
    return std::sqrt(dx * dx + dy * dy);
}

constexpr double kStrokeHalfWidth = 0.045;
constexpr double kFrameRadius = 0.45;  // outer ring shared by all glyphs
constexpr Pt kTopperCenter{0.0, 0.24};

// Distance of (u, v) to the glyph's stroke skeleton. All twelve glyphs share
// a dominant outer ring, like a shield outline, and differ only in the inner
// marks; that keeps the pixel-space baseline near chance. Topper-free glyphs
// center their base at the origin, so template 1 (ring plus inner circle) is
// rotation symmetric about the image center; topped glyphs drop the base,
// which also anchors the topper orientation. The plus and saltire carry
// different arm lengths so neither is a rotation of the other.
double glyph_distance(int id, double u, double v) {
    const int base = (id - 1) / 4;
    const int topper = (id - 1) % 4;
    const Pt center{0.0, topper == 0 ? 0.0 : -0.16};

    double d = std::abs(std::hypot(u, v) - kFrameRadius);
    switch (base) {
        case 0: {  // inner circle
            double r = std::hypot(u - center.x, v - center.y);
            d = std::min(d, std::abs(r - 0.20));
            break;
        }
        case 1: {  // inner square outline
            const double half = 0.18;
            double qx = std::abs(u - center.x) - half;
            double qy = std::abs(v - center.y) - half;
            double outside = std::hypot(std::max(qx, 0.0), std::max(qy, 0.0));
            double inside = std::min(std::max(qx, qy), 0.0);
            d = std::min(d, std::abs(outside + inside));
            break;
        }
        default: {  // inner triangle outline, apex down
            Pt a{-0.23, center.y + 0.13}, b{0.23, center.y + 0.13}, c{0.0, center.y - 0.23};
            d = std::min({d, dist_segment(u, v, a, b), dist_segment(u, v, b, c),
                          dist_segment(u, v, c, a)});
            break;
        }
    }

    const Pt t = kTopperCenter;
    switch (topper) {
        case 0:
            break;
        case 1: {  // bar
            const double arm = 0.13;
            d = std::min(d, dist_segment(u, v, {t.x - arm, t.y}, {t.x + arm, t.y}));
            break;
        }
        case 2: {  // plus
            const double arm = 0.10;
            d = std::min(d, dist_segment(u, v, {t.x - arm, t.y}, {t.x + arm, t.y}));
            d = std::min(d, dist_segment(u, v, {t.x, t.y - arm}, {t.x, t.y + arm}));
            break;
        }
        default: {  // saltire, deliberately longer arms than the plus
            const double g = 0.145 / std::sqrt(2.0);
            d = std::min(d, dist_segment(u, v, {t.x - g, t.y - g}, {t.x + g, t.y + g}));
            d = std::min(d, dist_segment(u, v, {t.x - g, t.y + g}, {t.x + g, t.y - g}));
            break;
        }
    }
    return d;
}

}  // namespace

double template_intensity(int id, double u, double v) {
    if (id < 1 || id > 12) throw BadTemplateId(id);
    // Anti-alias ramp of about 1.5 px at the reference resolution.
    const double aa = 0.012;
    double d = glyph_distance(id, u, v);
    return std::clamp((kStrokeHalfWidth - d) / aa + 0.5, 0.0, 1.0);
}

Image render_template(int id, std::size_t n) {
    if (id < 1 || id > 12) throw BadTemplateId(id);
    if (n < 64) throw ArgOutOfRange("template raster needs n >= 64");
    Image img(n, n);
    const double half = static_cast<double>(n) / 2.0;
    for (std::size_t r = 0; r < n; ++r) {
        double v = (half - (static_cast<double>(r) + 0.5)) / half;
        for (std::size_t c = 0; c < n; ++c) {
            double u = ((static_cast<double>(c) + 0.5) - half) / half;
            img.at(r, c) = template_intensity(id, u, v);
        }
    }
    return img;
}

// ---------------------------------------------------------------------------
// Random parameters
// ---------------------------------------------------------------------------

AffineParams sample_affine(const AffineRanges& r, CounterRng& rng) {
    AffineParams p;
    p.scale_x = rng.uniform(r.scale.lo, r.scale.hi);
    p.scale_y = rng.uniform(r.scale.lo, r.scale.hi);
    p.shear_x_deg = rng.uniform(r.shear_deg.lo, r.shear_deg.hi);
    p.shear_y_deg = rng.uniform(r.shear_deg.lo, r.shear_deg.hi);
    p.rotation_deg = rng.uniform(r.rotation_deg.lo, r.rotation_deg.hi);
    p.shift_x = rng.uniform(r.shift_px.lo, r.shift_px.hi);
    p.shift_y = rng.uniform(r.shift_px.lo, r.shift_px.hi);
    return p;
}

CorruptionParams sample_corruption(const CorruptionRanges& r, CounterRng& rng) {
    CorruptionParams c;
    c.sin_freq1 = rng.uniform(r.sin_freq.lo, r.sin_freq.hi);
    c.sin_freq2 = rng.uniform(r.sin_freq.lo, r.sin_freq.hi);
    c.sin_amp1 = rng.uniform(r.sin_amp.lo, r.sin_amp.hi);
    c.sin_amp2 = rng.uniform(r.sin_amp.lo, r.sin_amp.hi);
    c.salt_count = static_cast<int>(
        rng.uniform_int(static_cast<std::int64_t>(r.salt_count.lo),
                        static_cast<std::int64_t>(r.salt_count.hi)));
    c.salt_strength = r.salt_strength;
    return c;
}

// ---------------------------------------------------------------------------
// Warps
// ---------------------------------------------------------------------------

namespace {

// 3x3 quadratic Lagrange stencil centered on the nearest sample; reads
// outside the frame as zero, result clamped to >= 0. Exact at integer
// source positions.
double sample_biquadratic(const Image& img, double row, double col) {
    double nr = std::round(row);
    double nc = std::round(col);
    double hr = row - nr;
    double hc = col - nc;
    double wr[3] = {0.5 * hr * (hr - 1.0), (1.0 - hr) * (1.0 + hr), 0.5 * hr * (hr + 1.0)};
    double wc[3] = {0.5 * hc * (hc - 1.0), (1.0 - hc) * (1.0 + hc), 0.5 * hc * (hc + 1.0)};
    const auto ir = static_cast<std::ptrdiff_t>(nr);
    const auto ic = static_cast<std::ptrdiff_t>(nc);
    const auto h = static_cast<std::ptrdiff_t>(img.height);
    const auto w = static_cast<std::ptrdiff_t>(img.width);
    double acc = 0.0;
    for (int dr = -1; dr <= 1; ++dr) {
        std::ptrdiff_t rr = ir + dr;
        if (rr < 0 || rr >= h) continue;
        for (int dc = -1; dc <= 1; ++dc) {
            std::ptrdiff_t cc = ic + dc;
            if (cc < 0 || cc >= w) continue;
            acc += wr[dr + 1] * wc[dc + 1] *
                   img.at(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc));
        }
    }
    return std::max(acc, 0.0);
}

}  // namespace

Image warp_affine(const Image& img, const AffineParams& p) {
    Mat2 inv = p.matrix().inverse();
    const double cx = (static_cast<double>(img.width) - 1.0) / 2.0;
    const double cy = (static_cast<double>(img.height) - 1.0) / 2.0;
    Image out(img.height, img.width);
    for (std::size_t r = 0; r < img.height; ++r) {
        // y-up frame centered on the image.
        double v = cy - static_cast<double>(r);
        for (std::size_t c = 0; c < img.width; ++c) {
            double u = static_cast<double>(c) - cx;
            Vec2 src = inv.apply({u - p.shift_x, v - p.shift_y});
            double src_row = cy - src.y;
            double src_col = src.x + cx;
            out.at(r, c) = sample_biquadratic(img, src_row, src_col);
        }
    }
    return out;
}

Image warp_sinusoidal(const Image& img, const CorruptionParams& c) {
    const double n = static_cast<double>(img.height);
    Image out(img.height, img.width);
    for (std::size_t j = 0; j < img.height; ++j) {
        double col_shift = c.sin_amp2 * std::cos(2.0 * kPi * c.sin_freq2 * static_cast<double>(j) / n);
        for (std::size_t k = 0; k < img.width; ++k) {
            double row_shift = c.sin_amp1 * std::sin(2.0 * kPi * c.sin_freq1 * static_cast<double>(k) / n);
            out.at(j, k) = sample_biquadratic(img, static_cast<double>(j) + row_shift,
                                              static_cast<double>(k) + col_shift);
        }
    }
    return out;
}

Image add_salt(const Image& img, const CorruptionParams& c, CounterRng& rng) {
    Image out = img;
    if (c.salt_count <= 0) return out;
    double peak = *std::max_element(img.data.begin(), img.data.end());
    const double cx = (static_cast<double>(img.width) - 1.0) / 2.0;
    const double cy = (static_cast<double>(img.height) - 1.0) / 2.0;
    const double radius = static_cast<double>(c.salt_strength);
    const double placement =
        std::max(0.0, static_cast<double>(img.width) / 2.0 - radius - 1.0);
    for (int i = 0; i < c.salt_count; ++i) {
        // Two draws per disc: area-uniform radius, then angle.
        double rad = placement * std::sqrt(rng.uniform());
        double ang = 2.0 * kPi * rng.uniform();
        double dx = cx + rad * std::cos(ang);
        double dy = cy + rad * std::sin(ang);
        long lo_r = std::max(0L, static_cast<long>(std::floor(dy - radius)));
        long hi_r = std::min(static_cast<long>(img.height) - 1,
                             static_cast<long>(std::ceil(dy + radius)));
        long lo_c = std::max(0L, static_cast<long>(std::floor(dx - radius)));
        long hi_c = std::min(static_cast<long>(img.width) - 1,
                             static_cast<long>(std::ceil(dx + radius)));
        for (long r = lo_r; r <= hi_r; ++r) {
            for (long cc = lo_c; cc <= hi_c; ++cc) {
                double ddx = static_cast<double>(cc) - dx;
                double ddy = static_cast<double>(r) - dy;
                if (ddx * ddx + ddy * ddy <= radius * radius)
                    out.at(static_cast<std::size_t>(r), static_cast<std::size_t>(cc)) = peak;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dataset assembly
// ---------------------------------------------------------------------------

Sample make_sample(const Image& tmpl, int label, const DatasetSpec& spec,
                   std::size_t class_index, std::size_t sample_index) {
    Sample s;
    s.label = label;
    s.seed = derive_seed(spec.seed, class_index, sample_index);
    CounterRng rng(s.seed);
    s.corruption = sample_corruption(spec.corruption, rng);
    s.affine = sample_affine(spec.affine, rng);

    Image img = tmpl;
    if (s.corruption.sin_amp1 != 0.0 || s.corruption.sin_amp2 != 0.0)
        img = warp_sinusoidal(img, s.corruption);
    img = warp_affine(img, s.affine);
    img = add_salt(img, s.corruption, rng);
    s.image = std::move(img);
    return s;
}

Dataset build_dataset(const DatasetSpec& spec) {
    Dataset ds;
    ds.templates.reserve(spec.template_ids.size());
    for (int id : spec.template_ids) {
        ds.templates.push_back(render_template(id, spec.image_size));
        ds.template_labels.push_back(static_cast<int>(ds.template_labels.size()));
    }
    ds.samples.reserve(spec.template_ids.size() * spec.samples_per_class);
    for (std::size_t cls = 0; cls < spec.template_ids.size(); ++cls) {
        for (std::size_t i = 0; i < spec.samples_per_class; ++i) {
            ds.samples.push_back(
                make_sample(ds.templates[cls], static_cast<int>(cls), spec, cls, i));
        }
    }
    return ds;
}

// ---------------------------------------------------------------------------
// IDX container
// ---------------------------------------------------------------------------

namespace {

void put_u32_be(std::ofstream& out, std::uint32_t v) {
    unsigned char buf[4] = {static_cast<unsigned char>((v >> 24) & 0xff),
                            static_cast<unsigned char>((v >> 16) & 0xff),
                            static_cast<unsigned char>((v >> 8) & 0xff),
                            static_cast<unsigned char>(v & 0xff)};
    out.write(reinterpret_cast<const char*>(buf), 4);
}

std::uint32_t get_u32_be(std::ifstream& in, const std::string& path) {
    unsigned char buf[4];
    if (!in.read(reinterpret_cast<char*>(buf), 4)) throw TruncatedFile(path);
    return (static_cast<std::uint32_t>(buf[0]) << 24) | (static_cast<std::uint32_t>(buf[1]) << 16) |
           (static_cast<std::uint32_t>(buf[2]) << 8) | static_cast<std::uint32_t>(buf[3]);
}

}  // namespace

void write_idx_images(const std::string& path, const IdxImages& images) {
    if (images.pixels.size() != images.count * images.rows * images.cols)
        throw LengthMismatch("idx image payload");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    put_u32_be(out, 0x00000803u);
    put_u32_be(out, static_cast<std::uint32_t>(images.count));
    put_u32_be(out, static_cast<std::uint32_t>(images.rows));
    put_u32_be(out, static_cast<std::uint32_t>(images.cols));
    out.write(reinterpret_cast<const char*>(images.pixels.data()),
              static_cast<std::streamsize>(images.pixels.size()));
    if (!out) throw IoError("write failed: " + path);
}

IdxImages read_idx_images(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::uint32_t magic = get_u32_be(in, path);
    if (magic != 0x00000803u) throw BadMagic("idx images " + path);
    IdxImages img;
    img.count = get_u32_be(in, path);
    img.rows = get_u32_be(in, path);
    img.cols = get_u32_be(in, path);
    img.pixels.resize(img.count * img.rows * img.cols);
    if (!in.read(reinterpret_cast<char*>(img.pixels.data()),
                 static_cast<std::streamsize>(img.pixels.size())))
        throw TruncatedFile(path);
    return img;
}

void write_idx_labels(const std::string& path, const std::vector<std::uint8_t>& labels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    put_u32_be(out, 0x00000801u);
    put_u32_be(out, static_cast<std::uint32_t>(labels.size()));
    out.write(reinterpret_cast<const char*>(labels.data()),
              static_cast<std::streamsize>(labels.size()));
    if (!out) throw IoError("write failed: " + path);
}

std::vector<std::uint8_t> read_idx_labels(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::uint32_t magic = get_u32_be(in, path);
    if (magic != 0x00000801u) throw BadMagic("idx labels " + path);
    std::uint32_t count = get_u32_be(in, path);
    std::vector<std::uint8_t> labels(count);
    if (!in.read(reinterpret_cast<char*>(labels.data()), count)) throw TruncatedFile(path);
    return labels;
}

}  // namespace nrcdt::datagen
