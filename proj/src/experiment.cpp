#include "nrcdt/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include "nrcdt/cdt.hpp"
#include "nrcdt/errors.hpp"
#include "nrcdt/nrcdt.hpp"
#include "nrcdt/ot_oracle.hpp"

namespace nrcdt::experiment {

// ---------------------------------------------------------------------------
// Formatting (locale independent)
// ---------------------------------------------------------------------------

namespace {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_fixed(double v, int precision) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, precision);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s, int line) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ConfigError("line " + std::to_string(line) + ": bad number '" + s + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& s, int line) {
    std::uint64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ConfigError("line " + std::to_string(line) + ": bad integer '" + s + "'");
    return v;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(trim(cur));
    return out;
}

datagen::Range parse_range(const std::string& value, int line) {
    std::istringstream iss(value);
    std::string lo, hi;
    if (!(iss >> lo >> hi))
        throw ConfigError("line " + std::to_string(line) + ": expected 'lo hi' range");
    datagen::Range r{parse_double(lo, line), parse_double(hi, line)};
    if (r.lo > r.hi)
        throw ConfigError("line " + std::to_string(line) + ": range lo > hi");
    return r;
}

std::string range_text(const datagen::Range& r) {
    return format_double(r.lo) + " " + format_double(r.hi);
}

}  // namespace

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
    ExperimentConfig cfg;
    cfg.representations.clear();
    cfg.angle_sweep.clear();
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    bool have_angles = false, have_reps = false;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": unterminated section");
            section = line.substr(1, line.size() - 2);
            if (section != "dataset" && section != "discretization" && section != "run")
                throw ConfigError("line " + std::to_string(line_no) + ": unknown section '" +
                                  section + "'");
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));

        if (section == "dataset") {
            if (key == "templates") {
                cfg.dataset.template_ids.clear();
                for (const auto& tok : split(value, ','))
                    cfg.dataset.template_ids.push_back(static_cast<int>(parse_u64(tok, line_no)));
            } else if (key == "samples_per_class") {
                cfg.dataset.samples_per_class = parse_u64(value, line_no);
            } else if (key == "image_size") {
                cfg.dataset.image_size = parse_u64(value, line_no);
            } else if (key == "scale") {
                cfg.dataset.affine.scale = parse_range(value, line_no);
            } else if (key == "shear_deg") {
                cfg.dataset.affine.shear_deg = parse_range(value, line_no);
            } else if (key == "rotation_deg") {
                cfg.dataset.affine.rotation_deg = parse_range(value, line_no);
            } else if (key == "shift_px") {
                cfg.dataset.affine.shift_px = parse_range(value, line_no);
            } else if (key == "sin_freq") {
                cfg.dataset.corruption.sin_freq = parse_range(value, line_no);
            } else if (key == "sin_amp") {
                cfg.dataset.corruption.sin_amp = parse_range(value, line_no);
            } else if (key == "salt_count") {
                cfg.dataset.corruption.salt_count = parse_range(value, line_no);
            } else if (key == "salt_strength") {
                cfg.dataset.corruption.salt_strength =
                    static_cast<int>(parse_u64(value, line_no));
            } else if (key == "source") {
                if (value == "templates")
                    cfg.source = Source::templates;
                else if (value == "idx")
                    cfg.source = Source::idx;
                else
                    throw ConfigError("line " + std::to_string(line_no) + ": unknown source");
            } else if (key == "idx_images") {
                cfg.idx_images = value;
            } else if (key == "idx_labels") {
                cfg.idx_labels = value;
            } else if (key == "idx_per_class") {
                cfg.idx_per_class = parse_u64(value, line_no);
            } else if (key == "idx_pad_to") {
                cfg.idx_pad_to = parse_u64(value, line_no);
            } else {
                throw ConfigError("line " + std::to_string(line_no) + ": unknown dataset key '" +
                                  key + "'");
            }
        } else if (section == "discretization") {
            if (key == "angles") {
                for (const auto& tok : split(value, ','))
                    cfg.angle_sweep.push_back(parse_u64(tok, line_no));
                have_angles = true;
            } else if (key == "radii") {
                cfg.radii = parse_u64(value, line_no);
            } else if (key == "points") {
                cfg.points = parse_u64(value, line_no);
            } else {
                throw ConfigError("line " + std::to_string(line_no) +
                                  ": unknown discretization key '" + key + "'");
            }
        } else if (section == "run") {
            if (key == "representations") {
                for (const auto& tok : split(value, ','))
                    cfg.representations.push_back(feature_tag_from_string(tok));
                have_reps = true;
            } else if (key == "classifier") {
                cfg.classifier = value;
            } else if (key == "metric") {
                cfg.metric = classify::metric_from_string(value);
            } else if (key == "repetitions") {
                cfg.repetitions = parse_u64(value, line_no);
            } else if (key == "seed") {
                cfg.seed = parse_u64(value, line_no);
            } else if (key == "out") {
                cfg.out_dir = value;
            } else {
                throw ConfigError("line " + std::to_string(line_no) + ": unknown run key '" + key +
                                  "'");
            }
        } else {
            throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
        }
    }
    if (!have_angles) cfg.angle_sweep = {128};
    if (!have_reps) cfg.representations = {FeatureTag::mNRCDT, FeatureTag::aNRCDT};
    if (cfg.repetitions < 1) throw ConfigError("repetitions must be >= 1");
    if (cfg.angle_sweep.empty()) throw ConfigError("angles list must not be empty");
    for (std::size_t m : cfg.angle_sweep)
        if (m < 1) throw ConfigError("angles must be >= 1");
    if (cfg.radii < 2) throw ConfigError("radii must be >= 2");
    if (cfg.points < 2) throw ConfigError("points must be >= 2");
    return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string ExperimentConfig::to_text() const {
    std::ostringstream out;
    out << "[dataset]\n";
    out << "templates = ";
    for (std::size_t i = 0; i < dataset.template_ids.size(); ++i)
        out << (i ? "," : "") << dataset.template_ids[i];
    out << "\n";
    out << "samples_per_class = " << dataset.samples_per_class << "\n";
    out << "image_size = " << dataset.image_size << "\n";
    out << "scale = " << range_text(dataset.affine.scale) << "\n";
    out << "shear_deg = " << range_text(dataset.affine.shear_deg) << "\n";
    out << "rotation_deg = " << range_text(dataset.affine.rotation_deg) << "\n";
    out << "shift_px = " << range_text(dataset.affine.shift_px) << "\n";
    out << "sin_freq = " << range_text(dataset.corruption.sin_freq) << "\n";
    out << "sin_amp = " << range_text(dataset.corruption.sin_amp) << "\n";
    out << "salt_count = " << range_text(dataset.corruption.salt_count) << "\n";
    out << "salt_strength = " << dataset.corruption.salt_strength << "\n";
    out << "source = " << (source == Source::idx ? "idx" : "templates") << "\n";
    if (!idx_images.empty()) out << "idx_images = " << idx_images << "\n";
    if (!idx_labels.empty()) out << "idx_labels = " << idx_labels << "\n";
    out << "idx_per_class = " << idx_per_class << "\n";
    out << "idx_pad_to = " << idx_pad_to << "\n";
    out << "[discretization]\n";
    out << "angles = ";
    for (std::size_t i = 0; i < angle_sweep.size(); ++i) out << (i ? "," : "") << angle_sweep[i];
    out << "\n";
    out << "radii = " << radii << "\n";
    out << "points = " << points << "\n";
    out << "[run]\n";
    out << "representations = ";
    for (std::size_t i = 0; i < representations.size(); ++i)
        out << (i ? "," : "") << nrcdt::to_string(representations[i]);
    out << "\n";
    out << "classifier = " << classifier << "\n";
    out << "metric = " << classify::to_string(metric) << "\n";
    out << "repetitions = " << repetitions << "\n";
    out << "seed = " << seed << "\n";
    out << "out = " << out_dir << "\n";
    return out.str();
}

std::uint64_t ExperimentConfig::hash() const {
    std::string text = to_text();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

// ---------------------------------------------------------------------------
// CSV / PGM
// ---------------------------------------------------------------------------

void write_csv(const Table& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << table.columns[i];
    out << "\n";
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size()) throw LengthMismatch("csv row width");
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

Table read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    Table t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && in.eof()) break;
        auto cells = split(line, ',');
        if (first) {
            t.columns = cells;
            first = false;
        } else {
            t.rows.push_back(cells);
        }
    }
    return t;
}

void write_pgm(const std::vector<std::vector<double>>& matrix, const std::string& path,
               std::uint64_t seed, std::uint64_t config_hash) {
    if (matrix.empty() || matrix.front().empty()) throw ArgOutOfRange("empty pgm matrix");
    const std::size_t h = matrix.size();
    const std::size_t w = matrix.front().size();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(config_hash));
    out << "P5\n# seed=" << seed << " config=" << hex << "\n" << w << " " << h << "\n255\n";
    std::vector<unsigned char> row(w);
    for (const auto& r : matrix) {
        if (r.size() != w) throw LengthMismatch("pgm row width");
        for (std::size_t c = 0; c < w; ++c) {
            double v = r[c];
            if (!(v >= 0.0 && v <= 1.0)) throw ValueOutOfRange("pgm value " + format_double(v));
            row[c] = static_cast<unsigned char>(std::lround(255.0 * v));
        }
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(w));
    }
    if (!out) throw IoError("write failed: " + path);
}

Image read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    auto next_token = [&]() -> std::string {
        std::string tok;
        int ch;
        while ((ch = in.get()) != EOF) {
            if (ch == '#') {
                while ((ch = in.get()) != EOF && ch != '\n') {
                }
                continue;
            }
            if (std::isspace(ch)) {
                if (!tok.empty()) break;
                continue;
            }
            tok += static_cast<char>(ch);
        }
        return tok;
    };
    if (next_token() != "P5") throw BadMagic("pgm " + path);
    std::size_t w = std::stoul(next_token());
    std::size_t h = std::stoul(next_token());
    std::size_t maxval = std::stoul(next_token());
    if (maxval == 0 || maxval > 255) throw ValueOutOfRange("pgm maxval");
    Image img(h, w);
    std::vector<unsigned char> buf(w * h);
    if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size())))
        throw TruncatedFile(path);
    for (std::size_t i = 0; i < buf.size(); ++i)
        img.data[i] = static_cast<double>(buf[i]) / static_cast<double>(maxval);
    return img;
}

// ---------------------------------------------------------------------------
// Parallel helpers
// ---------------------------------------------------------------------------

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    unsigned workers = std::max(1u, threads);
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&]() {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

std::vector<FeatureVector> extract_all(const std::vector<Image>& images, FeatureTag tag,
                                       const classify::ExtractConfig& config, unsigned threads) {
    std::vector<FeatureVector> out(images.size());
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    parallel_for(images.size(), threads, [&](std::size_t i) {
        try {
            out[i] = classify::extract_features(images[i], tag, config);
        } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
        }
    });
    if (failure) std::rethrow_exception(failure);
    return out;
}

// ---------------------------------------------------------------------------
// Experiment runner
// ---------------------------------------------------------------------------

namespace {

struct ClassifierSpec {
    enum class Kind { nt, knn, probe } kind = Kind::nt;
    std::size_t k = 1;
    std::size_t train_per_class = 0;
};

ClassifierSpec parse_classifier(const std::string& text) {
    ClassifierSpec spec;
    if (text == "nt") {
        spec.kind = ClassifierSpec::Kind::nt;
        return spec;
    }
    if (text == "probe") {
        spec.kind = ClassifierSpec::Kind::probe;
        return spec;
    }
    auto parts = split(text, ':');
    if (parts.size() == 3 && parts[0] == "knn") {
        spec.kind = ClassifierSpec::Kind::knn;
        spec.k = parse_u64(parts[1], 0);
        spec.train_per_class = parse_u64(parts[2], 0);
        if (spec.k < 1 || spec.train_per_class < 1)
            throw ConfigError("knn needs k >= 1 and train_per_class >= 1");
        return spec;
    }
    throw ConfigError("unknown classifier '" + text + "' (use nt | knn:<k>:<train> | probe)");
}

datagen::Dataset build_idx_dataset(const ExperimentConfig& cfg,
                                   const datagen::DatasetSpec& spec) {
    datagen::IdxImages raw = datagen::read_idx_images(cfg.idx_images);
    std::vector<std::uint8_t> labels = datagen::read_idx_labels(cfg.idx_labels);
    if (labels.size() != raw.count) throw LengthMismatch("idx images vs labels");
    const std::size_t pad = std::max({cfg.idx_pad_to, raw.rows, raw.cols});

    datagen::Dataset ds;
    int max_label = 0;
    for (std::uint8_t l : labels) max_label = std::max(max_label, static_cast<int>(l));
    std::vector<std::size_t> taken(static_cast<std::size_t>(max_label) + 1, 0);

    for (std::size_t i = 0; i < raw.count; ++i) {
        int cls = static_cast<int>(labels[i]);
        auto& n_taken = taken[static_cast<std::size_t>(cls)];
        if (n_taken >= cfg.idx_per_class) continue;
        Image canvas(pad, pad, 0.0);
        std::size_t r0 = (pad - raw.rows) / 2;
        std::size_t c0 = (pad - raw.cols) / 2;
        for (std::size_t r = 0; r < raw.rows; ++r)
            for (std::size_t c = 0; c < raw.cols; ++c)
                canvas.at(r0 + r, c0 + c) =
                    static_cast<double>(raw.pixels[(i * raw.rows + r) * raw.cols + c]) / 255.0;

        datagen::Sample s;
        s.label = cls;
        s.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(cls), n_taken);
        CounterRng rng(s.seed);
        s.corruption = datagen::sample_corruption(spec.corruption, rng);
        s.affine = datagen::sample_affine(spec.affine, rng);
        Image img = std::move(canvas);
        if (s.corruption.sin_amp1 != 0.0 || s.corruption.sin_amp2 != 0.0)
            img = datagen::warp_sinusoidal(img, s.corruption);
        img = datagen::warp_affine(img, s.affine);
        img = datagen::add_salt(img, s.corruption, rng);
        s.image = std::move(img);
        ds.samples.push_back(std::move(s));
        ++n_taken;
    }
    return ds;
}

double classify_dataset(const datagen::Dataset& ds, const ClassifierSpec& classifier,
                        FeatureTag tag, const classify::ExtractConfig& extract,
                        classify::Metric metric, unsigned threads) {
    std::vector<Image> sample_images;
    sample_images.reserve(ds.samples.size());
    for (const auto& s : ds.samples) sample_images.push_back(s.image);
    std::vector<FeatureVector> sample_features = extract_all(sample_images, tag, extract, threads);
    std::vector<int> truth;
    truth.reserve(ds.samples.size());
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        sample_features[i].sample_seed = ds.samples[i].seed;
        truth.push_back(ds.samples[i].label);
    }

    if (classifier.kind == ClassifierSpec::Kind::nt) {
        if (ds.templates.empty()) throw ConfigError("nt classifier needs rendered templates");
        classify::FeatureSet templates;
        templates.metric = metric;
        templates.features = extract_all(ds.templates, tag, extract, threads);
        templates.labels = ds.template_labels;
        std::vector<int> predictions(sample_features.size());
        parallel_for(sample_features.size(), threads, [&](std::size_t i) {
            predictions[i] = classify::nearest_template(sample_features[i], templates);
        });
        return classify::evaluate(predictions, truth).accuracy;
    }

    if (classifier.kind == ClassifierSpec::Kind::probe) {
        int max_label = 0;
        for (int t : truth) max_label = std::max(max_label, t);
        if (max_label != 1) throw ConfigError("probe classifier needs exactly two classes");
        std::vector<FeatureVector> a, b;
        for (std::size_t i = 0; i < sample_features.size(); ++i) {
            if (truth[i] == 0)
                a.push_back(sample_features[i]);
            else
                b.push_back(sample_features[i]);
        }
        auto probe = classify::linear_probe(a, b, 2000);
        return probe.separable ? 1.0 : 0.0;
    }

    // k-NN: the first train_per_class samples of each class act as
    // references, the rest as queries.
    classify::FeatureSet refs;
    refs.metric = classify::Metric::l2;
    std::vector<std::size_t> query_idx;
    std::vector<std::size_t> seen(64, 0);
    for (std::size_t i = 0; i < sample_features.size(); ++i) {
        auto cls = static_cast<std::size_t>(truth[i]);
        if (cls >= seen.size()) seen.resize(cls + 1, 0);
        if (seen[cls] < classifier.train_per_class) {
            refs.features.push_back(sample_features[i]);
            refs.labels.push_back(truth[i]);
            ++seen[cls];
        } else {
            query_idx.push_back(i);
        }
    }
    if (refs.size() < classifier.k) throw KTooLarge();
    if (query_idx.empty()) throw ConfigError("knn: no query samples left after training split");
    std::vector<int> predictions(query_idx.size());
    std::vector<int> query_truth(query_idx.size());
    parallel_for(query_idx.size(), threads, [&](std::size_t i) {
        predictions[i] = classify::knn(sample_features[query_idx[i]], refs, classifier.k);
        query_truth[i] = truth[query_idx[i]];
    });
    return classify::evaluate(predictions, query_truth).accuracy;
}

struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd out;
    if (xs.empty()) return out;
    for (double x : xs) out.mean += x;
    out.mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - out.mean) * (x - out.mean);
    out.stddev = std::sqrt(var / static_cast<double>(xs.size()));
    return out;
}

constexpr const char* kRuntimePlaceholder = "0.000";  // timings go to stderr, files stay reproducible

}  // namespace

RunResult run_experiment(const ExperimentConfig& config, unsigned threads) {
    ClassifierSpec classifier = parse_classifier(config.classifier);
    char config_hex[32];
    std::snprintf(config_hex, sizeof(config_hex), "%016llx",
                  static_cast<unsigned long long>(config.hash()));
    RunResult result;
    result.table.columns = {"angles",        "config", "representation", "metric",
                            "accuracy_mean", "accuracy_std", "seed", "runtime_s"};

    // accs[m_index][tag_index] across repetitions
    std::vector<std::vector<std::vector<double>>> accs(
        config.angle_sweep.size(),
        std::vector<std::vector<double>>(config.representations.size()));

    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
        datagen::DatasetSpec spec = config.dataset;
        spec.seed = derive_seed(config.seed, 0xD5u, rep);
        datagen::Dataset ds = config.source == ExperimentConfig::Source::idx
                                  ? build_idx_dataset(config, spec)
                                  : datagen::build_dataset(spec);
        for (std::size_t mi = 0; mi < config.angle_sweep.size(); ++mi) {
            classify::ExtractConfig extract;
            extract.angles = config.angle_sweep[mi];
            extract.radii = config.radii;
            extract.points = config.points;
            for (std::size_t ti = 0; ti < config.representations.size(); ++ti) {
                double acc = classify_dataset(ds, classifier, config.representations[ti], extract,
                                              config.metric, threads);
                accs[mi][ti].push_back(acc);
            }
        }
    }

    for (std::size_t mi = 0; mi < config.angle_sweep.size(); ++mi) {
        for (std::size_t ti = 0; ti < config.representations.size(); ++ti) {
            MeanStd ms = mean_std(accs[mi][ti]);
            RunCell cell;
            cell.angles = config.angle_sweep[mi];
            cell.tag = config.representations[ti];
            cell.accuracy_mean = ms.mean;
            cell.accuracy_std = ms.stddev;
            result.cells.push_back(cell);
            result.table.rows.push_back({std::to_string(cell.angles), config_hex,
                                         nrcdt::to_string(cell.tag),
                                         classify::to_string(config.metric),
                                         format_fixed(ms.mean, 4), format_fixed(ms.stddev, 4),
                                         std::to_string(config.seed), kRuntimePlaceholder});
        }
    }
    return result;
}

PhaseResult run_phase_transition(const ExperimentConfig& config, const std::vector<int>& strengths,
                                 const std::vector<int>& counts, unsigned threads) {
    if (strengths.empty() || counts.empty()) throw ConfigError("phase grid must be non-empty");
    if (config.angle_sweep.size() != 1)
        throw ConfigError("phase transition runs at a single angle count");
    ClassifierSpec classifier = parse_classifier(config.classifier);

    PhaseResult result;
    result.strengths = strengths;
    result.counts = counts;
    result.accuracy.assign(
        config.representations.size(),
        std::vector<std::vector<double>>(counts.size(), std::vector<double>(strengths.size(), 0.0)));
    char config_hex[32];
    std::snprintf(config_hex, sizeof(config_hex), "%016llx",
                  static_cast<unsigned long long>(config.hash()));
    result.table.columns = {"strength",      "count", "config", "representation", "metric",
                            "accuracy_mean", "accuracy_std", "seed", "runtime_s"};

    classify::ExtractConfig extract;
    extract.angles = config.angle_sweep.front();
    extract.radii = config.radii;
    extract.points = config.points;

    for (std::size_t row = 0; row < counts.size(); ++row) {
        for (std::size_t col = 0; col < strengths.size(); ++col) {
            std::vector<std::vector<double>> accs(config.representations.size());
            for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
                datagen::DatasetSpec spec = config.dataset;
                // Cell settings vary only the corruption; per-sample seeds are
                // shared across cells so the zero-count column matches the
                // clean run.
                spec.seed = derive_seed(config.seed, 0xD5u, rep);
                spec.corruption.salt_count = {static_cast<double>(counts[row]),
                                              static_cast<double>(counts[row])};
                spec.corruption.salt_strength = strengths[col];
                datagen::Dataset ds = datagen::build_dataset(spec);
                for (std::size_t ti = 0; ti < config.representations.size(); ++ti) {
                    accs[ti].push_back(classify_dataset(ds, classifier,
                                                        config.representations[ti], extract,
                                                        config.metric, threads));
                }
            }
            for (std::size_t ti = 0; ti < config.representations.size(); ++ti) {
                MeanStd ms = mean_std(accs[ti]);
                result.accuracy[ti][row][col] = ms.mean;
                result.table.rows.push_back(
                    {std::to_string(strengths[col]), std::to_string(counts[row]), config_hex,
                     nrcdt::to_string(config.representations[ti]),
                     classify::to_string(config.metric), format_fixed(ms.mean, 4),
                     format_fixed(ms.stddev, 4), std::to_string(config.seed),
                     kRuntimePlaceholder});
            }
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Selftest
// ---------------------------------------------------------------------------

namespace {

Measure1D random_measure_1d(CounterRng& rng, std::size_t max_atoms) {
    std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(max_atoms)));
    std::vector<double> pos(n), mass(n);
    for (std::size_t i = 0; i < n; ++i) {
        pos[i] = rng.uniform(-1.0, 1.0);
        mass[i] = rng.uniform(0.05, 1.0);
    }
    return Measure1D(std::move(pos), std::move(mass));
}

Measure2D random_uniform_measure_2d(CounterRng& rng, std::size_t atoms) {
    std::vector<Vec2> pts(atoms);
    std::vector<double> mass(atoms, 1.0);
    for (auto& p : pts) {
        p.x = rng.uniform(-0.7, 0.7);
        p.y = rng.uniform(-0.7, 0.7);
    }
    return Measure2D(std::move(pts), std::move(mass));
}

SuiteResult suite_isometry(bool quick) {
    SuiteResult res{"isometry", true, ""};
    CounterRng rng(101);
    const std::size_t trials = quick ? 40 : 200;
    ReferenceGrid grid(4096);
    for (std::size_t t = 0; t < trials; ++t) {
        Measure1D a = random_measure_1d(rng, 8);
        Measure1D b = random_measure_1d(rng, 8);
        double exact = quantile_l2_gap(a, b);
        double reference = oracle::w_1d(a, b, oracle::Order::two);
        if (std::abs(exact - reference) > 1e-10) {
            res.passed = false;
            res.detail = "exact route mismatch " + format_double(std::abs(exact - reference));
            return res;
        }
        std::vector<double> qa = cdt_1d(a, grid), qb = cdt_1d(b, grid);
        double sum = 0.0;
        for (std::size_t k = 0; k < grid.count(); ++k) {
            double d = qa[k] - qb[k];
            sum += d * d;
        }
        double approx = std::sqrt(sum / static_cast<double>(grid.count()));
        if (reference > 1e-6 && std::abs(approx - reference) / reference > 0.01) {
            res.passed = false;
            res.detail = "grid route off by " +
                         format_double(std::abs(approx - reference) / reference);
            return res;
        }
    }
    return res;
}

SuiteResult suite_contraction(bool quick) {
    SuiteResult res{"contraction", true, ""};
    CounterRng rng(202);
    const std::size_t trials = quick ? 20 : 100;
    AngleGrid angles(8);
    for (std::size_t t = 0; t < trials; ++t) {
        std::size_t n = static_cast<std::size_t>(rng.uniform_int(2, 6));
        Measure2D a = random_uniform_measure_2d(rng, n);
        Measure2D b = random_uniform_measure_2d(rng, n);
        double w2 = oracle::w_2d_assignment(a, b, oracle::Order::two);
        double winf = oracle::w_2d_assignment(a, b, oracle::Order::inf);
        for (std::size_t j = 0; j < angles.count(); ++j) {
            Measure1D sa = restricted_slice(a, angles.direction(j));
            Measure1D sb = restricted_slice(b, angles.direction(j));
            if (oracle::w_1d(sa, sb, oracle::Order::two) > w2 + 1e-12 ||
                oracle::w_1d(sa, sb, oracle::Order::inf) > winf + 1e-12) {
                res.passed = false;
                res.detail = "slice distance exceeds planar distance";
                return res;
            }
        }
    }
    return res;
}

SuiteResult suite_adjointness(bool quick) {
    SuiteResult res{"adjointness", true, ""};
    CounterRng rng(303);
    const std::size_t trials = quick ? 25 : 100;
    RadialGrid grid(101);
    for (std::size_t t = 0; t < trials; ++t) {
        std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 12));
        std::vector<Vec2> pts(n);
        std::vector<double> mass(n);
        for (std::size_t i = 0; i < n; ++i) {
            pts[i] = {rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6)};
            mass[i] = rng.uniform(0.05, 1.0);
        }
        Measure2D m(pts, mass);
        double phi = rng.uniform(0.0, 6.28318530717958647692);
        Vec2 theta{std::cos(phi), std::sin(phi)};
        std::vector<double> h(grid.count());
        for (std::size_t i = 0; i < h.size(); ++i) h[i] = rng.uniform(-1.0, 1.0);

        Measure1D slice = restricted_slice(m, theta);
        std::vector<Vec2> slice_pts(slice.size());
        for (std::size_t i = 0; i < slice.size(); ++i)
            slice_pts[i] = {slice.positions()[i], 0.0};
        std::vector<double> h_at_slice = back_project(h, grid, Vec2{1.0, 0.0}, slice_pts);
        double lhs = 0.0;
        for (std::size_t i = 0; i < slice.size(); ++i) lhs += slice.masses()[i] * h_at_slice[i];

        std::vector<double> h_at_points = back_project(h, grid, theta, m.points());
        double rhs = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) rhs += m.masses()[i] * h_at_points[i];
        if (std::abs(lhs - rhs) > 1e-10) {
            res.passed = false;
            res.detail = "pairing gap " + format_double(std::abs(lhs - rhs));
            return res;
        }
    }
    return res;
}

SuiteResult suite_normalization(bool quick, bool inject_fault) {
    SuiteResult res{"normalization", true, ""};
    CounterRng rng(404);
    const std::size_t trials = quick ? 10 : 40;
    AngleGrid angles(16);
    ReferenceGrid ref(64);
    for (std::size_t t = 0; t < trials; ++t) {
        Measure2D m = random_uniform_measure_2d(rng, 6);
        QuantileField field = rcdt_exact(m, angles, ref);
        NormalizedField norm = normalize_field(field);
        for (std::size_t j = 0; j < norm.angles; ++j) {
            std::vector<double> col(norm.points);
            for (std::size_t k = 0; k < norm.points; ++k) col[k] = norm.at(k, j);
            Moments mom = rho_moments(col);
            if (std::abs(mom.mean) > 1e-10 || std::abs(mom.std_dev - 1.0) > 1e-10) {
                res.passed = false;
                res.detail = "column not standardized";
                return res;
            }
        }
    }
    // Collinear support must be rejected.
    Measure2D collinear({{-0.5, 0.0}, {0.2, 0.0}, {0.6, 0.0}}, {1.0, 1.0, 1.0});
    QuantileField field = rcdt_exact(collinear, AngleGrid(4), ref);
    const double guard = inject_fault ? 0.0 : kStdGuard;
    bool rejected = false;
    try {
        normalize_field(field, guard);
    } catch (const DegenerateDirection&) {
        rejected = true;
    }
    if (!rejected) {
        res.passed = false;
        res.detail = "degenerate direction not detected";
    }
    return res;
}

SuiteResult suite_bounds(bool quick) {
    SuiteResult res{"bounds", true, ""};
    CounterRng rng(505);
    const std::size_t trials = quick ? 10 : 50;
    AngleGrid angles(16);
    ReferenceGrid ref(64);
    for (std::size_t t = 0; t < trials; ++t) {
        std::size_t n = static_cast<std::size_t>(rng.uniform_int(3, 8));
        Measure2D base = random_uniform_measure_2d(rng, n);
        QuantileField f0 = rcdt_exact(base, angles, ref);
        double c0 = min_std(f0);
        if (c0 < 0.05) continue;
        double delta = rng.uniform(0.05, 0.45) * c0;
        double ang = rng.uniform(0.0, 6.28318530717958647692);
        std::size_t which = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
        std::vector<Vec2> pts = base.points();
        pts[which].x += delta * std::cos(ang);
        pts[which].y += delta * std::sin(ang);
        Measure2D shifted(pts, base.masses());
        QuantileField f1 = rcdt_exact(shifted, angles, ref);

        FeatureVector m0 = max_nrcdt(normalize_field(f0));
        FeatureVector m1 = max_nrcdt(normalize_field(f1));
        double sup = 0.0;
        for (std::size_t k = 0; k < m0.values.size(); ++k)
            sup = std::max(sup, std::abs(m0.values[k] - m1.values[k]));
        double radius = winf_radius({delta, c0, diameter(base)});
        if (sup > radius) {
            res.passed = false;
            res.detail = "sup-norm bound violated: " + format_double(sup) + " > " +
                         format_double(radius);
            return res;
        }

        FeatureVector a0 = mean_nrcdt(normalize_field(f0));
        FeatureVector a1 = mean_nrcdt(normalize_field(f1));
        double sum = 0.0;
        for (std::size_t k = 0; k < a0.values.size(); ++k) {
            double d = a0.values[k] - a1.values[k];
            sum += d * d;
        }
        double rho_norm = std::sqrt(sum / static_cast<double>(a0.values.size()));
        double eps = std::sqrt(base.masses()[which]) * delta;
        if (2.0 * eps < c0) {
            double radius2 = w2_radius({eps, c0, 0.0});
            if (rho_norm > radius2) {
                res.passed = false;
                res.detail = "rho-norm bound violated: " + format_double(rho_norm) + " > " +
                             format_double(radius2);
                return res;
            }
        }
    }
    return res;
}

SuiteResult suite_determinism(bool quick) {
    SuiteResult res{"determinism", true, ""};
    datagen::DatasetSpec spec;
    spec.template_ids = {1, 5};
    spec.samples_per_class = quick ? 2 : 4;
    spec.image_size = 64;
    spec.seed = 77;
    spec.affine.rotation_deg = {0.0, 360.0};
    spec.affine.shift_px = {-4.0, 4.0};
    spec.corruption.salt_count = {1.0, 2.0};
    spec.corruption.salt_strength = 3;
    datagen::Dataset a = datagen::build_dataset(spec);
    datagen::Dataset b = datagen::build_dataset(spec);
    if (a.samples.size() != b.samples.size()) {
        res.passed = false;
        res.detail = "sample counts differ";
        return res;
    }
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        if (a.samples[i].image.data != b.samples[i].image.data) {
            res.passed = false;
            res.detail = "sample images differ at index " + std::to_string(i);
            return res;
        }
    }
    ExperimentConfig cfg;
    cfg.dataset = spec;
    cfg.angle_sweep = {4};
    cfg.radii = 64;
    cfg.points = 16;
    cfg.representations = {FeatureTag::mNRCDT};
    cfg.seed = 99;
    RunResult r1 = run_experiment(cfg, 1);
    RunResult r2 = run_experiment(cfg, 2);
    if (r1.table.rows != r2.table.rows) {
        res.passed = false;
        res.detail = "experiment tables differ across thread counts";
    }
    return res;
}

}  // namespace

std::vector<SuiteResult> selftest(const SelftestOptions& options) {
    std::vector<SuiteResult> out;
    auto guard = [&](SuiteResult (*fn)(bool), const char* name) {
        try {
            out.push_back(fn(options.quick));
        } catch (const std::exception& e) {
            out.push_back({name, false, std::string("exception: ") + e.what()});
        }
    };
    guard(&suite_isometry, "isometry");
    guard(&suite_contraction, "contraction");
    guard(&suite_adjointness, "adjointness");
    try {
        out.push_back(suite_normalization(options.quick, options.inject_std_guard_fault));
    } catch (const std::exception& e) {
        out.push_back({"normalization", false, std::string("exception: ") + e.what()});
    }
    guard(&suite_bounds, "bounds");
    guard(&suite_determinism, "determinism");
    return out;
}

}  // namespace nrcdt::experiment
