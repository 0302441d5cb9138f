#include "nrcdt/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nrcdt/errors.hpp"
#include "nrcdt/rng.hpp"

namespace nrcdt::classify {

Metric metric_from_string(const std::string& s) {
    if (s == "l2") return Metric::l2;
    if (s == "linf") return Metric::linf;
    throw ConfigError("unknown metric: " + s);
}

std::string to_string(Metric m) { return m == Metric::l2 ? "l2" : "linf"; }

std::uint64_t ExtractConfig::hash() const {
    std::uint64_t h = CounterRng::mix(0x5bd1e995u ^ angles);
    h = CounterRng::mix(h ^ radii);
    h = CounterRng::mix(h ^ points);
    return h;
}

FeatureVector extract_features(const Image& image, FeatureTag tag, const ExtractConfig& config) {
    FeatureVector out;
    out.tag = tag;
    out.config_hash = config.hash();
    if (tag == FeatureTag::Euclidean_flat) {
        double total = std::accumulate(image.data.begin(), image.data.end(), 0.0);
        if (!(total > 0.0)) throw AllZeroImage();
        out.values.resize(image.data.size());
        for (std::size_t i = 0; i < image.data.size(); ++i) out.values[i] = image.data[i] / total;
        return out;
    }
    Measure2D measure = image_to_measure(image);
    AngleGrid angles(config.angles);
    ReferenceGrid ref(config.points);
    Sinogram sino = make_sinogram(measure, angles, config.radii);
    QuantileField field = rcdt(sino, ref);
    if (tag == FeatureTag::RCDT_flat) {
        out.values = field.values;
        return out;
    }
    // Normalization needs dim(support) > 1; binning can hide an exactly
    // collinear input behind a tiny positive spread, so test the measure
    // itself as well.
    if (support_dimension(measure) < 2) throw DegenerateDirection(0);
    NormalizedField normalized = normalize_field(field);
    FeatureVector reduced =
        tag == FeatureTag::mNRCDT ? max_nrcdt(normalized) : mean_nrcdt(normalized);
    reduced.config_hash = out.config_hash;
    return reduced;
}

double feature_distance(const FeatureVector& a, const FeatureVector& b, Metric metric) {
    if (a.values.size() != b.values.size()) throw LengthMismatch("feature vectors");
    if (metric == Metric::linf) {
        double worst = 0.0;
        for (std::size_t i = 0; i < a.values.size(); ++i)
            worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
        return worst;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        double d = a.values[i] - b.values[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

int nearest_template(const FeatureVector& query, const FeatureSet& templates) {
    if (templates.size() == 0) throw EmptyTemplateSet();
    if (templates.features.size() != templates.labels.size())
        throw LengthMismatch("template features vs labels");
    double best = std::numeric_limits<double>::infinity();
    int label = templates.labels.front();
    for (std::size_t i = 0; i < templates.size(); ++i) {
        double d = feature_distance(query, templates.features[i], templates.metric);
        if (d < best || (d == best && templates.labels[i] < label)) {
            best = d;
            label = templates.labels[i];
        }
    }
    return label;
}

int knn(const FeatureVector& query, const FeatureSet& refs, std::size_t k) {
    if (refs.size() == 0) throw EmptyTemplateSet();
    if (k == 0 || k > refs.size()) throw KTooLarge();
    std::vector<std::size_t> order(refs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> dist(refs.size());
    for (std::size_t i = 0; i < refs.size(); ++i)
        dist[i] = feature_distance(query, refs.features[i], Metric::l2);
    // Distance ties keep the lower sample index first.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
    int max_label = *std::max_element(refs.labels.begin(), refs.labels.end());
    std::vector<std::size_t> votes(static_cast<std::size_t>(max_label) + 1, 0);
    for (std::size_t i = 0; i < k; ++i) ++votes[static_cast<std::size_t>(refs.labels[order[i]])];
    std::size_t best_votes = 0;
    int label = 0;
    for (std::size_t c = 0; c < votes.size(); ++c) {
        if (votes[c] > best_votes) {
            best_votes = votes[c];
            label = static_cast<int>(c);
        }
    }
    return label;
}

ProbeResult linear_probe(const std::vector<FeatureVector>& class_a,
                         const std::vector<FeatureVector>& class_b, std::size_t max_epochs) {
    ProbeResult result;
    if (class_a.empty() || class_b.empty()) throw EmptyTemplateSet();
    const std::size_t dim = class_a.front().values.size();
    std::vector<const std::vector<double>*> xs;
    std::vector<double> ys;
    for (const auto& f : class_a) {
        if (f.values.size() != dim) throw LengthMismatch("probe features");
        xs.push_back(&f.values);
        ys.push_back(+1.0);
    }
    for (const auto& f : class_b) {
        if (f.values.size() != dim) throw LengthMismatch("probe features");
        xs.push_back(&f.values);
        ys.push_back(-1.0);
    }

    std::vector<double> w(dim, 0.0);
    double bias = 0.0;
    for (std::size_t epoch = 0; epoch < max_epochs; ++epoch) {
        std::size_t mistakes = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double activation = bias;
            for (std::size_t d = 0; d < dim; ++d) activation += w[d] * (*xs[i])[d];
            if (ys[i] * activation <= 0.0) {
                ++mistakes;
                for (std::size_t d = 0; d < dim; ++d) w[d] += ys[i] * (*xs[i])[d];
                bias += ys[i];
            }
        }
        if (mistakes == 0) {
            result.separable = true;
            result.epochs_used = epoch + 1;
            break;
        }
    }
    if (result.separable) {
        double norm = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), bias * bias));
        double least = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double activation = bias;
            for (std::size_t d = 0; d < dim; ++d) activation += w[d] * (*xs[i])[d];
            least = std::min(least, ys[i] * activation / norm);
        }
        result.margin = least;
    }
    return result;
}

EvalReport evaluate(const std::vector<int>& predictions, const std::vector<int>& truth) {
    if (predictions.size() != truth.size() || truth.empty())
        throw LengthMismatch("predictions vs truth");
    int max_label = 0;
    for (int t : truth) max_label = std::max(max_label, t);
    for (int p : predictions) max_label = std::max(max_label, p);
    EvalReport report;
    report.confusion.assign(static_cast<std::size_t>(max_label) + 1,
                            std::vector<std::size_t>(static_cast<std::size_t>(max_label) + 1, 0));
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        ++report.confusion[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(predictions[i])];
        if (predictions[i] == truth[i]) ++hits;
    }
    report.accuracy = static_cast<double>(hits) / static_cast<double>(truth.size());
    return report;
}

}  // namespace nrcdt::classify
