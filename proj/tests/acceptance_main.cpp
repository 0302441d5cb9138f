// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Sizes and tolerances are fixed here, not tunable from outside.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nrcdt/cdt.hpp"
#include "nrcdt/classify.hpp"
#include "nrcdt/datagen.hpp"
#include "nrcdt/errors.hpp"
#include "nrcdt/experiment.hpp"
#include "nrcdt/nrcdt.hpp"
#include "nrcdt/ot_oracle.hpp"
#include "nrcdt/rng.hpp"

using namespace nrcdt;
using experiment::ExperimentConfig;

namespace {

constexpr std::uint64_t kSeed = 20250614;
constexpr unsigned kThreads = 2;

struct Criterion {
    std::string name;
    std::function<bool(std::string&)> run;
};

ExperimentConfig headline_config() {
    ExperimentConfig cfg;
    cfg.dataset.template_ids = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    cfg.dataset.samples_per_class = 10;
    cfg.dataset.image_size = 256;
    cfg.dataset.affine.rotation_deg = {0.0, 360.0};
    cfg.dataset.affine.shift_px = {-20.0, 20.0};
    cfg.angle_sweep = {128};
    cfg.radii = 850;
    cfg.points = 64;
    cfg.classifier = "nt";
    cfg.metric = classify::Metric::l2;
    cfg.seed = kSeed;
    return cfg;
}

double cell_accuracy(const experiment::RunResult& r, std::size_t angles, FeatureTag tag) {
    for (const auto& cell : r.cells)
        if (cell.angles == angles && cell.tag == tag) return cell.accuracy_mean;
    throw std::runtime_error("missing cell");
}

std::string pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

Measure2D random_uniform_cloud(CounterRng& rng, std::size_t atoms, double extent) {
    std::vector<Vec2> pts(atoms);
    std::vector<double> mass(atoms, 1.0);
    for (auto& p : pts) p = {rng.uniform(-extent, extent), rng.uniform(-extent, extent)};
    return Measure2D(std::move(pts), std::move(mass));
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double sup = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sup = std::max(sup, std::abs(a[i] - b[i]));
    return sup;
}

double rho_norm_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(a.size()));
}

// --------------------------------------------------------------------------

bool c1_affine_invariance_headline(std::string& detail) {
    ExperimentConfig cfg = headline_config();
    cfg.representations = {FeatureTag::mNRCDT, FeatureTag::aNRCDT, FeatureTag::RCDT_flat,
                           FeatureTag::Euclidean_flat};
    auto start = std::chrono::steady_clock::now();
    experiment::RunResult r = experiment::run_experiment(cfg, kThreads);
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    double mnr = cell_accuracy(r, 128, FeatureTag::mNRCDT);
    double anr = cell_accuracy(r, 128, FeatureTag::aNRCDT);
    double rc = cell_accuracy(r, 128, FeatureTag::RCDT_flat);
    double eu = cell_accuracy(r, 128, FeatureTag::Euclidean_flat);
    detail = "mnrcdt=" + pct(mnr) + " anrcdt=" + pct(anr) + " rcdt=" + pct(rc) +
             " euclidean=" + pct(eu) + " runtime=" + pct(elapsed) + "s";
    return mnr >= 0.95 && anr >= 0.95 && rc <= 0.35 && eu <= 0.15 && elapsed <= 600.0;
}

bool c2_hard_affine(std::string& detail) {
    ExperimentConfig cfg = headline_config();
    cfg.dataset.affine.scale = {0.5, 1.25};
    cfg.dataset.affine.shear_deg = {-45.0, 45.0};
    cfg.representations = {FeatureTag::mNRCDT, FeatureTag::aNRCDT};
    experiment::RunResult r = experiment::run_experiment(cfg, kThreads);
    double mnr = cell_accuracy(r, 128, FeatureTag::mNRCDT);
    double anr = cell_accuracy(r, 128, FeatureTag::aNRCDT);
    detail = "mnrcdt=" + pct(mnr) + " anrcdt=" + pct(anr);
    return mnr >= 0.90 && mnr > anr;
}

bool c3_angle_sweep(std::string& detail) {
    ExperimentConfig cfg = headline_config();
    cfg.dataset.affine.scale = {0.5, 1.25};
    cfg.dataset.affine.shear_deg = {-45.0, 45.0};
    cfg.angle_sweep = {4, 16, 64};
    cfg.representations = {FeatureTag::mNRCDT};
    experiment::RunResult r = experiment::run_experiment(cfg, kThreads);
    double a4 = cell_accuracy(r, 4, FeatureTag::mNRCDT);
    double a16 = cell_accuracy(r, 16, FeatureTag::mNRCDT);
    double a64 = cell_accuracy(r, 64, FeatureTag::mNRCDT);
    detail = "m4=" + pct(a4) + " m16=" + pct(a16) + " m64=" + pct(a64);
    return a16 >= a4 - 0.05 && a64 >= a16 - 0.05;
}

bool c4_cdt_isometry(std::string& detail) {
    CounterRng rng(kSeed ^ 0x4);
    ReferenceGrid grid(64);
    double worst_exact = 0.0, worst_rel = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        // Uniform masses with power-of-two atom counts; levels then align
        // with the 64-cell grid and the quadrature is exact.
        std::size_t na = static_cast<std::size_t>(1) << rng.uniform_int(1, 3);
        std::size_t nb = static_cast<std::size_t>(1) << rng.uniform_int(1, 3);
        std::vector<double> pa(na), pb(nb);
        for (auto& p : pa) p = rng.uniform(-1.0, 1.0);
        for (auto& p : pb) p = rng.uniform(-1.0, 1.0);
        Measure1D a(pa, std::vector<double>(na, 1.0));
        Measure1D b(pb, std::vector<double>(nb, 1.0));

        double exact = quantile_l2_gap(a, b);
        double reference = oracle::w_1d(a, b, oracle::Order::two);
        worst_exact = std::max(worst_exact, std::abs(exact - reference));

        std::vector<double> qa = cdt_1d(a, grid), qb = cdt_1d(b, grid);
        double sum = 0.0;
        for (std::size_t k = 0; k < grid.count(); ++k) {
            double d = qa[k] - qb[k];
            sum += d * d;
        }
        double approx = std::sqrt(sum / static_cast<double>(grid.count()));
        if (reference > 1e-9)
            worst_rel = std::max(worst_rel, std::abs(approx - reference) / reference);
    }
    detail = "max |exact - oracle| = " + std::to_string(worst_exact) +
             ", max grid rel err = " + std::to_string(worst_rel);
    return worst_exact <= 1e-10 && worst_rel <= 0.02;
}

bool c5_slice_contraction(std::string& detail) {
    CounterRng rng(kSeed ^ 0x5);
    AngleGrid angles(16);
    auto start = std::chrono::steady_clock::now();
    int violations = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = static_cast<std::size_t>(rng.uniform_int(2, 8));
        Measure2D a = random_uniform_cloud(rng, n, 0.7);
        Measure2D b = random_uniform_cloud(rng, n, 0.7);
        double w2 = oracle::w_2d_assignment(a, b, oracle::Order::two);
        double winf = oracle::w_2d_assignment(a, b, oracle::Order::inf);
        for (std::size_t j = 0; j < angles.count(); ++j) {
            Measure1D sa = restricted_slice(a, angles.direction(j));
            Measure1D sb = restricted_slice(b, angles.direction(j));
            if (oracle::w_1d(sa, sb, oracle::Order::two) > w2 + 1e-12) ++violations;
            if (oracle::w_1d(sa, sb, oracle::Order::inf) > winf + 1e-12) ++violations;
        }
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    detail = "violations=" + std::to_string(violations) + " runtime=" + pct(elapsed) + "s";
    return violations == 0 && elapsed <= 60.0;
}

bool c6_normalization_guards(std::string& detail) {
    CounterRng rng(kSeed ^ 0x6);
    AngleGrid angles(32);
    ReferenceGrid ref(64);
    double worst_mean = 0.0, worst_std = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        Measure2D m = random_uniform_cloud(rng, 6, 0.7);
        NormalizedField n = normalize_field(rcdt_exact(m, angles, ref));
        for (std::size_t j = 0; j < n.angles; ++j) {
            std::vector<double> col(n.points);
            for (std::size_t k = 0; k < n.points; ++k) col[k] = n.at(k, j);
            Moments mom = rho_moments(col);
            worst_mean = std::max(worst_mean, std::abs(mom.mean));
            worst_std = std::max(worst_std, std::abs(mom.std_dev - 1.0));
        }
    }
    bool degenerate_detected = false;
    try {
        Measure2D line({{-0.4, 0.0}, {0.1, 0.0}, {0.5, 0.0}}, {1.0, 1.0, 1.0});
        normalize_field(rcdt_exact(line, AngleGrid(4), ref));
    } catch (const DegenerateDirection&) {
        degenerate_detected = true;
    }
    detail = "max |mean| = " + std::to_string(worst_mean) +
             ", max |std-1| = " + std::to_string(worst_std) +
             ", degenerate detected = " + (degenerate_detected ? "yes" : "no");
    return worst_mean <= 1e-10 && worst_std <= 1e-10 && degenerate_detected;
}

bool c7_perturbation_bounds(std::string& detail) {
    CounterRng rng(kSeed ^ 0x7);
    AngleGrid angles(16);
    ReferenceGrid ref(64);
    int winf_checked = 0, w2_checked = 0, violations = 0;
    while (winf_checked < 50 || w2_checked < 50) {
        std::size_t n = static_cast<std::size_t>(rng.uniform_int(3, 8));
        Measure2D base = random_uniform_cloud(rng, n, 0.7);
        QuantileField f0 = rcdt_exact(base, angles, ref);
        double c0 = min_std(f0);
        if (c0 < 0.05) continue;
        double delta = rng.uniform(0.05, 0.45) * c0;
        double ang = rng.uniform(0.0, 6.283185307179586);
        std::size_t which =
            static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
        std::vector<Vec2> pts = base.points();
        pts[which].x += delta * std::cos(ang);
        pts[which].y += delta * std::sin(ang);
        Measure2D shifted(pts, base.masses());
        QuantileField f1 = rcdt_exact(shifted, angles, ref);

        if (winf_checked < 50) {
            FeatureVector m0 = max_nrcdt(normalize_field(f0));
            FeatureVector m1 = max_nrcdt(normalize_field(f1));
            if (sup_diff(m0.values, m1.values) > winf_radius({delta, c0, diameter(base)}))
                ++violations;
            ++winf_checked;
        }
        if (w2_checked < 50) {
            double eps = std::sqrt(base.masses()[which]) * delta;
            if (2.0 * eps < c0) {
                FeatureVector a0 = mean_nrcdt(normalize_field(f0));
                FeatureVector a1 = mean_nrcdt(normalize_field(f1));
                if (rho_norm_diff(a0.values, a1.values) > w2_radius({eps, c0, 0.0})) ++violations;
                ++w2_checked;
            }
        }
    }
    detail = "winf trials=" + std::to_string(winf_checked) +
             " w2 trials=" + std::to_string(w2_checked) +
             " violations=" + std::to_string(violations);
    return violations == 0;
}

bool c8_affine_deviation(std::string& detail) {
    CounterRng rng(kSeed ^ 0x8);
    AngleGrid angles(128);
    ReferenceGrid ref(64);
    int violations = 0;
    double worst_ratio = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        Measure2D m = random_uniform_cloud(rng, 20, 0.5);
        NormalizedField base = normalize_field(rcdt_exact(m, angles, ref));
        // A = R(phi1) diag(a, b) R(phi2): singular values are a and b.
        double a = rng.uniform(0.75, 1.3);
        double b = rng.uniform(0.75, 1.3);
        double p1 = rng.uniform(0.0, 6.283185307179586);
        double p2 = rng.uniform(0.0, 6.283185307179586);
        Mat2 r1{std::cos(p1), -std::sin(p1), std::sin(p1), std::cos(p1)};
        Mat2 r2{std::cos(p2), -std::sin(p2), std::sin(p2), std::cos(p2)};
        Mat2 A = r1.times(Mat2{a, 0.0, 0.0, b}.times(r2));
        double beta = (std::max(a, b) - std::min(a, b)) / std::min(a, b);

        NormalizedField moved =
            normalize_field(rcdt_exact(affine_transform(m, A, {0.0, 0.0}), angles, ref));
        double deviation = rho_norm_diff(mean_nrcdt(base).values, mean_nrcdt(moved).values);
        double bound = beta * field_rho_norm(base) + 0.05;
        worst_ratio = std::max(worst_ratio, deviation / bound);
        if (deviation > bound) ++violations;
    }
    detail = "violations=" + std::to_string(violations) +
             " worst dev/bound=" + pct(worst_ratio);
    return violations == 0;
}

bool c9_linear_separability(std::string& detail) {
    CounterRng rng(kSeed ^ 0x9);
    AngleGrid angles(32);
    ReferenceGrid ref(64);
    Measure2D mu0 = image_to_measure(datagen::render_template(5, 128));
    Measure2D nu0 = image_to_measure(datagen::render_template(12, 128));

    // (a) full affine classes in max-normalized space.
    std::vector<FeatureVector> fa, fb;
    for (int i = 0; i < 10; ++i) {
        double a = rng.uniform(0.6, 1.3), b = rng.uniform(0.6, 1.3);
        double sx = rng.uniform(-0.8, 0.8), sy = rng.uniform(-0.8, 0.8);
        double phi = rng.uniform(0.0, 6.283185307179586);
        Mat2 rot{std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi)};
        Mat2 A = rot.times(Mat2{1.0, 0.0, sy, 1.0}.times(
            Mat2{1.0, sx, 0.0, 1.0}.times(Mat2{a, 0.0, 0.0, b})));
        Vec2 shift{rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1)};
        fa.push_back(max_nrcdt(normalize_field(
            rcdt_exact(affine_transform(mu0, A, shift), angles, ref))));
        fb.push_back(max_nrcdt(normalize_field(
            rcdt_exact(affine_transform(nu0, A, shift), angles, ref))));
    }
    classify::ProbeResult probe_a = classify::linear_probe(fa, fb, 5000);

    // (b) translation + isotropic scaling classes in raw per-angle CDT space.
    Vec2 theta0{1.0, 0.0};
    std::vector<FeatureVector> ga, gb;
    for (int i = 0; i < 10; ++i) {
        double s = rng.uniform(0.7, 1.3);
        Vec2 shift{rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2)};
        Mat2 iso{s, 0.0, 0.0, s};
        FeatureVector va, vb;
        va.values = cdt_1d(restricted_slice(affine_transform(mu0, iso, shift), theta0), ref);
        vb.values = cdt_1d(restricted_slice(affine_transform(nu0, iso, shift), theta0), ref);
        ga.push_back(std::move(va));
        gb.push_back(std::move(vb));
    }
    classify::ProbeResult probe_b = classify::linear_probe(ga, gb, 5000);

    detail = std::string("affine probe: ") + (probe_a.separable ? "separable" : "no") +
             " margin=" + std::to_string(probe_a.margin) + "; cdt probe: " +
             (probe_b.separable ? "separable" : "no") + " margin=" + std::to_string(probe_b.margin);
    return probe_a.separable && probe_b.separable && probe_a.margin > 0.0 && probe_b.margin > 0.0;
}

bool c10_phase_transition(std::string& detail) {
    ExperimentConfig cfg;
    cfg.dataset.template_ids = {1, 5, 12};
    cfg.dataset.samples_per_class = 10;
    cfg.dataset.image_size = 256;
    cfg.dataset.affine.rotation_deg = {0.0, 360.0};
    cfg.dataset.affine.shift_px = {-20.0, 20.0};
    cfg.angle_sweep = {64};
    cfg.radii = 850;
    cfg.points = 64;
    cfg.representations = {FeatureTag::mNRCDT, FeatureTag::aNRCDT};
    cfg.seed = kSeed;
    // Grid chosen to straddle the transition: the all-floor regime would
    // make the corner comparison vacuous.
    std::vector<int> strengths = {1, 2, 3, 5, 7};
    std::vector<int> counts = {0, 1, 2, 3, 4};
    experiment::PhaseResult phase =
        experiment::run_phase_transition(cfg, strengths, counts, kThreads);

    auto corner_mean = [&](std::size_t tag, bool clean) {
        const auto& acc = phase.accuracy[tag];
        std::size_t last_r = counts.size() - 1, last_c = strengths.size() - 1;
        if (clean)
            return (acc[0][0] + acc[0][1] + acc[1][0]) / 3.0;
        return (acc[last_r][last_c] + acc[last_r][last_c - 1] + acc[last_r - 1][last_c]) / 3.0;
    };
    double m_clean = corner_mean(0, true), m_noisy = corner_mean(0, false);
    double a_clean = corner_mean(1, true), a_noisy = corner_mean(1, false);
    detail = "mnrcdt clean=" + pct(m_clean) + " noisy=" + pct(m_noisy) +
             "; anrcdt clean=" + pct(a_clean) + " noisy=" + pct(a_noisy);
    return m_clean > m_noisy && a_clean > a_noisy && a_noisy >= m_noisy;
}

bool c11_determinism_and_formats(std::string& detail) {
    // Byte-identical repeated runs at different thread counts.
    ExperimentConfig cfg;
    cfg.dataset.template_ids = {1, 5, 12};
    cfg.dataset.samples_per_class = 3;
    cfg.dataset.image_size = 64;
    cfg.dataset.affine.rotation_deg = {0.0, 360.0};
    cfg.dataset.corruption.salt_count = {1, 2};
    cfg.dataset.corruption.salt_strength = 3;
    cfg.angle_sweep = {8};
    cfg.radii = 128;
    cfg.points = 32;
    cfg.representations = {FeatureTag::mNRCDT, FeatureTag::aNRCDT};
    cfg.seed = kSeed;
    experiment::RunResult r1 = experiment::run_experiment(cfg, 1);
    experiment::RunResult r2 = experiment::run_experiment(cfg, 2);
    experiment::write_csv(r1.table, "acceptance_run_a.csv");
    experiment::write_csv(r2.table, "acceptance_run_b.csv");
    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    bool deterministic = slurp("acceptance_run_a.csv") == slurp("acceptance_run_b.csv");
    std::remove("acceptance_run_a.csv");
    std::remove("acceptance_run_b.csv");

    // IDX round trip.
    datagen::IdxImages idx;
    idx.count = 2;
    idx.rows = 3;
    idx.cols = 4;
    idx.pixels.resize(24);
    for (std::size_t i = 0; i < idx.pixels.size(); ++i)
        idx.pixels[i] = static_cast<std::uint8_t>(i * 11);
    datagen::write_idx_images("acceptance.idx", idx);
    datagen::IdxImages back = datagen::read_idx_images("acceptance.idx");
    bool idx_ok = back.count == idx.count && back.rows == idx.rows && back.cols == idx.cols &&
                  back.pixels == idx.pixels;
    std::remove("acceptance.idx");

    // PGM byte-level examples.
    experiment::write_pgm({{0.0, 1.0}, {1.0, 0.0}}, "acceptance.pgm", kSeed, cfg.hash());
    std::string pgm = slurp("acceptance.pgm");
    std::remove("acceptance.pgm");
    bool pgm_ok = pgm.size() > 4 && pgm.compare(0, 3, "P5\n") == 0 &&
                  static_cast<unsigned char>(pgm[pgm.size() - 4]) == 0x00 &&
                  static_cast<unsigned char>(pgm[pgm.size() - 3]) == 0xff &&
                  static_cast<unsigned char>(pgm[pgm.size() - 2]) == 0xff &&
                  static_cast<unsigned char>(pgm[pgm.size() - 1]) == 0x00;

    // MNIST-style k-NN: use real files when present, otherwise a synthetic
    // IDX set exercises the same ingestion path.
    std::string mnist_dir = "data/mnist";
    if (const char* env = std::getenv("NRCDT_MNIST_DIR")) mnist_dir = env;
    std::string mnist_images = mnist_dir + "/train-images-idx3-ubyte";
    std::string mnist_labels = mnist_dir + "/train-labels-idx1-ubyte";
    bool knn_ok = false;
    std::string knn_note;
    if (std::ifstream(mnist_images).good() && std::ifstream(mnist_labels).good()) {
        ExperimentConfig mnist;
        mnist.source = ExperimentConfig::Source::idx;
        mnist.idx_images = mnist_images;
        mnist.idx_labels = mnist_labels;
        mnist.idx_per_class = 100;
        mnist.idx_pad_to = 128;
        mnist.dataset.affine.rotation_deg = {0.0, 360.0};
        mnist.dataset.affine.scale = {0.75, 1.0};
        mnist.dataset.affine.shift_px = {-20.0, 20.0};
        mnist.angle_sweep = {128};
        mnist.radii = 300;
        mnist.points = 64;
        mnist.representations = {FeatureTag::mNRCDT};
        mnist.classifier = "knn:11:50";
        mnist.seed = kSeed;
        experiment::RunResult r = experiment::run_experiment(mnist, kThreads);
        knn_ok = r.cells[0].accuracy_mean >= 0.45;
        knn_note = "mnist knn=" + pct(r.cells[0].accuracy_mean);
    } else {
        datagen::DatasetSpec spec;
        spec.template_ids = {1, 5, 12};
        spec.samples_per_class = 8;
        spec.image_size = 64;
        spec.seed = kSeed;
        spec.affine.rotation_deg = {0.0, 360.0};
        datagen::Dataset ds = datagen::build_dataset(spec);
        datagen::IdxImages synth;
        synth.count = ds.samples.size();
        synth.rows = 64;
        synth.cols = 64;
        std::vector<std::uint8_t> labels;
        for (const auto& s : ds.samples) {
            for (double v : s.image.data)
                synth.pixels.push_back(static_cast<std::uint8_t>(std::lround(255.0 * std::min(v, 1.0))));
            labels.push_back(static_cast<std::uint8_t>(s.label));
        }
        datagen::write_idx_images("acceptance_synth.idx", synth);
        datagen::write_idx_labels("acceptance_synth_labels.idx", labels);
        ExperimentConfig synth_cfg;
        synth_cfg.source = ExperimentConfig::Source::idx;
        synth_cfg.idx_images = "acceptance_synth.idx";
        synth_cfg.idx_labels = "acceptance_synth_labels.idx";
        synth_cfg.idx_per_class = 8;
        synth_cfg.idx_pad_to = 64;
        synth_cfg.angle_sweep = {16};
        synth_cfg.radii = 200;
        synth_cfg.points = 32;
        synth_cfg.representations = {FeatureTag::mNRCDT};
        synth_cfg.classifier = "knn:3:4";
        synth_cfg.seed = kSeed;
        experiment::RunResult r = experiment::run_experiment(synth_cfg, kThreads);
        knn_ok = r.cells[0].accuracy_mean > 1.0 / 3.0;
        knn_note = "synthetic-idx knn=" + pct(r.cells[0].accuracy_mean) + " (mnist absent)";
        std::remove("acceptance_synth.idx");
        std::remove("acceptance_synth_labels.idx");
    }

    detail = std::string("deterministic=") + (deterministic ? "yes" : "no") +
             " idx=" + (idx_ok ? "ok" : "bad") + " pgm=" + (pgm_ok ? "ok" : "bad") + " " + knn_note;
    return deterministic && idx_ok && pgm_ok && knn_ok;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {"C1 affine-invariance headline (rotation and shift only)", c1_affine_invariance_headline},
        {"C2 hard-affine setting (scaling 0.5-1.25, shear 45)", c2_hard_affine},
        {"C3 angle-sweep monotone trend (M = 4, 16, 64)", c3_angle_sweep},
        {"C4 CDT-W2 isometry vs oracle", c4_cdt_isometry},
        {"C5 slice contraction vs planar oracle", c5_slice_contraction},
        {"C6 normalization moments and degenerate guard", c6_normalization_guards},
        {"C7 perturbation bounds (sup-norm and rho-norm radii)", c7_perturbation_bounds},
        {"C8 anisotropy deviation bound for mean-normalized features", c8_affine_deviation},
        {"C9 perceptron separability (affine and iso-scaling classes)", c9_linear_separability},
        {"C10 salt phase transition corners", c10_phase_transition},
        {"C11 determinism, IDX, PGM, k-NN ingestion", c11_determinism_and_formats},
    };

    int failures = 0;
    for (auto& criterion : criteria) {
        std::string detail;
        bool ok = false;
        auto start = std::chrono::steady_clock::now();
        try {
            ok = criterion.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %s: %s (%.1f s)\n", ok ? "PASS" : "FAIL", criterion.name.c_str(),
                    detail.c_str(), elapsed);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures != 0) std::printf("%d criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
