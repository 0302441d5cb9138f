#include "nrcdt/cdt.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "nrcdt/errors.hpp"

namespace nrcdt {

std::vector<double> cdt_1d(const Measure1D& m, const ReferenceGrid& ref) {
    std::vector<double> out(ref.count());
    for (std::size_t k = 0; k < ref.count(); ++k) out[k] = quantile(m, ref.knot(k));
    return out;
}

QuantileField rcdt(const Sinogram& s, const ReferenceGrid& ref) {
    QuantileField field;
    field.points = ref.count();
    field.angles = s.slices.size();
    field.values.resize(field.points * field.angles);
    for (std::size_t j = 0; j < field.angles; ++j) {
        std::vector<double> col = cdt_1d(s.slices[j], ref);
        std::copy(col.begin(), col.end(), field.values.begin() + static_cast<std::ptrdiff_t>(j * field.points));
    }
    return field;
}

QuantileField rcdt_exact(const Measure2D& m, const AngleGrid& angles, const ReferenceGrid& ref) {
    QuantileField field;
    field.points = ref.count();
    field.angles = angles.count();
    field.values.resize(field.points * field.angles);
    for (std::size_t j = 0; j < field.angles; ++j) {
        Measure1D slice = restricted_slice(m, angles.direction(j));
        std::vector<double> col = cdt_1d(slice, ref);
        std::copy(col.begin(), col.end(), field.values.begin() + static_cast<std::ptrdiff_t>(j * field.points));
    }
    return field;
}

double sliced_w2(const QuantileField& f, const QuantileField& g) {
    if (f.points != g.points || f.angles != g.angles) throw GridMismatch();
    double sum = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        double d = f.values[i] - g.values[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(f.values.size()));
}

double quantile_l2_gap(const Measure1D& a, const Measure1D& b) {
    // Breakpoints of t -> (F_a^{[-1]}(t), F_b^{[-1]}(t)) are the cumulative
    // levels of either measure; between consecutive levels both quantiles are
    // constant, so evaluating at the segment midpoint integrates exactly.
    std::vector<double> levels;
    levels.reserve(a.size() + b.size() + 1);
    levels.push_back(0.0);
    levels.insert(levels.end(), a.cumulative().begin(), a.cumulative().end());
    levels.insert(levels.end(), b.cumulative().begin(), b.cumulative().end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
        double len = levels[i + 1] - levels[i];
        if (len <= 0.0) continue;
        double t = 0.5 * (levels[i] + levels[i + 1]);
        if (!(t > 0.0 && t < 1.0)) continue;
        double d = quantile(a, t) - quantile(b, t);
        sum += len * d * d;
    }
    return std::sqrt(sum);
}

namespace {

void put_u32_le(std::ofstream& out, std::uint32_t v) {
    unsigned char buf[4] = {static_cast<unsigned char>(v & 0xff),
                            static_cast<unsigned char>((v >> 8) & 0xff),
                            static_cast<unsigned char>((v >> 16) & 0xff),
                            static_cast<unsigned char>((v >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(buf), 4);
}

std::uint32_t get_u32_le(std::ifstream& in, const std::string& path) {
    unsigned char buf[4];
    if (!in.read(reinterpret_cast<char*>(buf), 4)) throw TruncatedFile(path);
    return static_cast<std::uint32_t>(buf[0]) | (static_cast<std::uint32_t>(buf[1]) << 8) |
           (static_cast<std::uint32_t>(buf[2]) << 16) | (static_cast<std::uint32_t>(buf[3]) << 24);
}

void put_f64_le(std::ofstream& out, double v) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(buf), 8);
}

double get_f64_le(std::ifstream& in, const std::string& path) {
    unsigned char buf[8];
    if (!in.read(reinterpret_cast<char*>(buf), 8)) throw TruncatedFile(path);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return std::bit_cast<double>(bits);
}

}  // namespace

void write_field(const std::string& path, const char magic[4], std::size_t points,
                 std::size_t angles, const std::vector<double>& values) {
    if (values.size() != points * angles) throw LengthMismatch("field payload");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(magic, 4);
    put_u32_le(out, static_cast<std::uint32_t>(points));
    put_u32_le(out, static_cast<std::uint32_t>(angles));
    for (double v : values) put_f64_le(out, v);
    if (!out) throw IoError("write failed: " + path);
}

FieldFile read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    FieldFile f;
    if (!in.read(f.magic, 4)) throw TruncatedFile(path);
    f.magic[4] = 0;
    if (std::strcmp(f.magic, "RCDT") != 0 && std::strcmp(f.magic, "NRCF") != 0)
        throw BadMagic(std::string(f.magic) + " in " + path);
    f.points = get_u32_le(in, path);
    f.angles = get_u32_le(in, path);
    f.values.resize(f.points * f.angles);
    for (double& v : f.values) v = get_f64_le(in, path);
    return f;
}

}  // namespace nrcdt
