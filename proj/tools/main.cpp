#include <chrono>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "nrcdt/cdt.hpp"
#include "nrcdt/classify.hpp"
#include "nrcdt/datagen.hpp"
#include "nrcdt/errors.hpp"
#include "nrcdt/experiment.hpp"

namespace fs = std::filesystem;
using namespace nrcdt;
using experiment::ExperimentConfig;
using experiment::Table;

namespace {

struct CommonArgs {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir;
    unsigned threads = 1;
    bool quiet = false;
};

ExperimentConfig load_config(const CommonArgs& args) {
    ExperimentConfig cfg = ExperimentConfig::parse_file(args.config_path);
    if (args.seed_set) cfg.seed = args.seed;
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool need_config = true) {
    auto* opt = cmd->add_option("--config", args.config_path, "experiment config file");
    if (need_config) opt->required();
    cmd->add_option("--seed", args.seed, "override the config seed")
        ->each([&args](const std::string&) { args.seed_set = true; });
    cmd->add_option("--out", args.out_dir, "override the output directory");
    cmd->add_option("--threads", args.threads, "worker threads");
    cmd->add_flag("--quiet", args.quiet, "suppress progress output");
}

std::string sample_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "sample_%05zu.pgm", index);
    return buf;
}

void write_image_pgm(const Image& img, const std::string& path, std::uint64_t seed,
                     std::uint64_t config_hash) {
    double peak = 0.0;
    for (double v : img.data) peak = std::max(peak, v);
    if (peak <= 0.0) peak = 1.0;
    std::vector<std::vector<double>> rows(img.height, std::vector<double>(img.width));
    for (std::size_t r = 0; r < img.height; ++r)
        for (std::size_t c = 0; c < img.width; ++c) rows[r][c] = img.at(r, c) / peak;
    experiment::write_pgm(rows, path, seed, config_hash);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int cmd_gen(const CommonArgs& args) {
    ExperimentConfig cfg = load_config(args);
    datagen::DatasetSpec spec = cfg.dataset;
    spec.seed = cfg.seed;
    datagen::Dataset ds = datagen::build_dataset(spec);
    fs::create_directories(cfg.out_dir);
    const std::uint64_t config_hash = cfg.hash();

    Table manifest;
    manifest.columns = {"file",        "class",      "seed",       "scale_x",   "scale_y",
                        "shear_x_deg", "shear_y_deg", "rotation_deg", "shift_x", "shift_y",
                        "sin_freq1",   "sin_freq2",  "sin_amp1",   "sin_amp2",  "salt_count",
                        "salt_strength", "master_seed", "config"};
    for (std::size_t t = 0; t < ds.templates.size(); ++t) {
        std::string name = "template_" + std::to_string(t) + ".pgm";
        write_image_pgm(ds.templates[t], cfg.out_dir + "/" + name, cfg.seed, config_hash);
    }
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        const datagen::Sample& s = ds.samples[i];
        std::string name = sample_name(i);
        write_image_pgm(s.image, cfg.out_dir + "/" + name, cfg.seed, config_hash);
        manifest.rows.push_back(
            {name, std::to_string(s.label), std::to_string(s.seed), fmt(s.affine.scale_x),
             fmt(s.affine.scale_y), fmt(s.affine.shear_x_deg), fmt(s.affine.shear_y_deg),
             fmt(s.affine.rotation_deg), fmt(s.affine.shift_x), fmt(s.affine.shift_y),
             fmt(s.corruption.sin_freq1), fmt(s.corruption.sin_freq2), fmt(s.corruption.sin_amp1),
             fmt(s.corruption.sin_amp2), std::to_string(s.corruption.salt_count),
             std::to_string(s.corruption.salt_strength), std::to_string(cfg.seed),
             std::to_string(config_hash)});
    }
    experiment::write_csv(manifest, cfg.out_dir + "/manifest.csv");
    if (!args.quiet)
        std::cerr << "wrote " << ds.samples.size() << " samples to " << cfg.out_dir << "\n";
    return 0;
}

int cmd_features(const CommonArgs& args, const std::string& in_dir, const std::string& out_file,
                 const std::string& representation) {
    ExperimentConfig cfg = load_config(args);
    FeatureTag tag = feature_tag_from_string(representation);
    Table manifest = experiment::read_csv(in_dir + "/manifest.csv");
    classify::ExtractConfig extract;
    extract.angles = cfg.angle_sweep.front();
    extract.radii = cfg.radii;
    extract.points = cfg.points;

    std::vector<Image> images;
    images.reserve(manifest.rows.size());
    for (const auto& row : manifest.rows) images.push_back(experiment::read_pgm(in_dir + "/" + row[0]));
    std::vector<FeatureVector> features =
        experiment::extract_all(images, tag, extract, args.threads);

    // Feature matrix: one column per sample.
    const std::size_t dim = features.empty() ? 0 : features.front().values.size();
    std::vector<double> payload;
    payload.reserve(dim * features.size());
    for (const auto& f : features) payload.insert(payload.end(), f.values.begin(), f.values.end());
    const char* magic = (tag == FeatureTag::mNRCDT || tag == FeatureTag::aNRCDT) ? "NRCF" : "RCDT";
    write_field(out_file, magic, dim, features.size(), payload);

    Table labels;
    labels.columns = {"index", "class", "master_seed", "config"};
    for (std::size_t i = 0; i < manifest.rows.size(); ++i)
        labels.rows.push_back({std::to_string(i), manifest.rows[i][1], std::to_string(cfg.seed),
                               std::to_string(cfg.hash())});
    experiment::write_csv(labels, out_file + ".labels.csv");
    if (!args.quiet) std::cerr << "wrote " << features.size() << " feature vectors\n";
    return 0;
}

std::vector<int> read_label_column(const std::string& path) {
    Table t = experiment::read_csv(path);
    std::vector<int> labels;
    for (const auto& row : t.rows) labels.push_back(std::stoi(row[1]));
    return labels;
}

int cmd_classify(const CommonArgs& args, const std::string& templates_file,
                 const std::string& queries_file, const std::string& out_file,
                 const std::string& metric_name) {
    FieldFile tf = read_field(templates_file);
    FieldFile qf = read_field(queries_file);
    if (tf.points != qf.points) throw LengthMismatch("template vs query feature length");
    std::vector<int> template_labels = read_label_column(templates_file + ".labels.csv");
    std::vector<int> query_labels = read_label_column(queries_file + ".labels.csv");

    classify::FeatureSet templates;
    templates.metric = classify::metric_from_string(metric_name);
    for (std::size_t j = 0; j < tf.angles; ++j) {
        FeatureVector f;
        f.values.assign(tf.values.begin() + static_cast<std::ptrdiff_t>(j * tf.points),
                        tf.values.begin() + static_cast<std::ptrdiff_t>((j + 1) * tf.points));
        templates.features.push_back(std::move(f));
        templates.labels.push_back(template_labels.at(j));
    }

    std::vector<int> predictions(qf.angles);
    std::vector<FeatureVector> queries(qf.angles);
    for (std::size_t j = 0; j < qf.angles; ++j) {
        queries[j].values.assign(qf.values.begin() + static_cast<std::ptrdiff_t>(j * qf.points),
                                 qf.values.begin() + static_cast<std::ptrdiff_t>((j + 1) * qf.points));
    }
    experiment::parallel_for(qf.angles, args.threads, [&](std::size_t j) {
        predictions[j] = classify::nearest_template(queries[j], templates);
    });

    Table out;
    out.columns = {"index", "truth", "predicted"};
    for (std::size_t j = 0; j < predictions.size(); ++j)
        out.rows.push_back({std::to_string(j), std::to_string(query_labels.at(j)),
                            std::to_string(predictions[j])});
    experiment::write_csv(out, out_file);
    classify::EvalReport report = classify::evaluate(predictions, query_labels);
    std::cout << "accuracy " << report.accuracy << "\n";
    return 0;
}

int cmd_experiment(const CommonArgs& args) {
    ExperimentConfig cfg = load_config(args);
    auto start = std::chrono::steady_clock::now();
    experiment::RunResult result = experiment::run_experiment(cfg, args.threads);
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    fs::create_directories(cfg.out_dir);
    experiment::write_csv(result.table, cfg.out_dir + "/experiment.csv");
    if (!args.quiet) {
        for (const auto& row : result.table.rows)
            std::cerr << "angles=" << row[0] << " " << row[2] << " accuracy=" << row[4] << "\n";
        std::cerr << "runtime " << elapsed << " s -> " << cfg.out_dir << "/experiment.csv\n";
    }
    return 0;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::string cur;
    for (char ch : text + ",") {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(std::stoi(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    return out;
}

int cmd_phase(const CommonArgs& args, const std::string& strengths_text,
              const std::string& counts_text) {
    ExperimentConfig cfg = load_config(args);
    std::vector<int> strengths = parse_int_list(strengths_text);
    std::vector<int> counts = parse_int_list(counts_text);
    auto start = std::chrono::steady_clock::now();
    experiment::PhaseResult result =
        experiment::run_phase_transition(cfg, strengths, counts, args.threads);
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    fs::create_directories(cfg.out_dir);
    experiment::write_csv(result.table, cfg.out_dir + "/phase.csv");
    for (std::size_t ti = 0; ti < cfg.representations.size(); ++ti) {
        std::string name = cfg.out_dir + "/phase_" + to_string(cfg.representations[ti]) + ".pgm";
        experiment::write_pgm(result.accuracy[ti], name, cfg.seed, cfg.hash());
    }
    if (!args.quiet) std::cerr << "phase grid done in " << elapsed << " s -> " << cfg.out_dir << "\n";
    return 0;
}

int cmd_selftest(bool full, bool inject_fault) {
    experiment::SelftestOptions options;
    options.quick = !full;
    options.inject_std_guard_fault = inject_fault;
    auto start = std::chrono::steady_clock::now();
    auto results = experiment::selftest(options);
    bool all_ok = true;
    for (const auto& suite : results) {
        std::cout << (suite.passed ? "[PASS] " : "[FAIL] ") << suite.name;
        if (!suite.detail.empty()) std::cout << " (" << suite.detail << ")";
        std::cout << "\n";
        all_ok = all_ok && suite.passed;
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (all_ok ? "selftest ok" : "selftest FAILED") << " in " << elapsed << " s\n";
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radon CDT feature extraction and classification experiments"};
    app.require_subcommand(1);

    CommonArgs gen_args, feat_args, cls_args, exp_args, phase_args;
    std::string feat_in, feat_out, feat_rep = "mnrcdt";
    std::string cls_templates, cls_queries, cls_out = "predictions.csv", cls_metric = "l2";
    std::string phase_strengths = "1,3,5,7,9", phase_counts = "0,2,4,6,8";
    bool selftest_full = false, selftest_fault = false;

    CLI::App* gen = app.add_subcommand("gen", "generate a dataset as PGM files plus manifest");
    add_common(gen, gen_args);

    CLI::App* features = app.add_subcommand("features", "extract features from a dataset directory");
    add_common(features, feat_args);
    features->add_option("--in", feat_in, "dataset directory")->required();
    features->add_option("--out-file", feat_out, "feature file to write")->required();
    features->add_option("--representation", feat_rep, "mnrcdt|anrcdt|rcdt|euclidean");

    CLI::App* classify_cmd = app.add_subcommand("classify", "nearest-template classification");
    add_common(classify_cmd, cls_args, false);
    classify_cmd->add_option("--templates", cls_templates, "template feature file")->required();
    classify_cmd->add_option("--queries", cls_queries, "query feature file")->required();
    classify_cmd->add_option("--out-file", cls_out, "predictions csv");
    classify_cmd->add_option("--metric", cls_metric, "l2|linf");

    CLI::App* exp = app.add_subcommand("experiment", "run the configured experiment");
    add_common(exp, exp_args);

    CLI::App* phase = app.add_subcommand("phase", "salt-noise phase transition grid");
    add_common(phase, phase_args);
    phase->add_option("--strengths", phase_strengths, "comma list of salt strengths");
    phase->add_option("--counts", phase_counts, "comma list of disc counts");

    CLI::App* selftest_cmd = app.add_subcommand("selftest", "run reduced invariant suites");
    selftest_cmd->add_flag("--full", selftest_full, "full-size suites");
    selftest_cmd->add_flag("--inject-std-guard-fault", selftest_fault,
                           "test fixture: disable the spread guard");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(gen_args);
        if (features->parsed()) return cmd_features(feat_args, feat_in, feat_out, feat_rep);
        if (classify_cmd->parsed())
            return cmd_classify(cls_args, cls_templates, cls_queries, cls_out, cls_metric);
        if (exp->parsed()) return cmd_experiment(exp_args);
        if (phase->parsed()) return cmd_phase(phase_args, phase_strengths, phase_counts);
        if (selftest_cmd->parsed()) return cmd_selftest(selftest_full, selftest_fault);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const TruncatedFile& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
