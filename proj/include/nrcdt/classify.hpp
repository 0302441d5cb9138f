#pragma once

#include <cstddef>
#include <vector>

#include "nrcdt/datagen.hpp"
#include "nrcdt/nrcdt.hpp"

namespace nrcdt::classify {

enum class Metric { l2, linf };

Metric metric_from_string(const std::string& s);
std::string to_string(Metric m);

struct FeatureSet {
    std::vector<FeatureVector> features;
    std::vector<int> labels;
    Metric metric = Metric::l2;

    std::size_t size() const { return features.size(); }
};

struct ExtractConfig {
    std::size_t angles = 128;   // M
    std::size_t radii = 850;    // R
    std::size_t points = 64;    // L

    std::uint64_t hash() const;
};

// Feature pipeline for one sample. Euclidean_flat flattens the
// mass-normalized image; RCDT_flat flattens the L x M quantile field;
// mNRCDT/aNRCDT reduce the normalized field over angles.
FeatureVector extract_features(const Image& image, FeatureTag tag, const ExtractConfig& config);

double feature_distance(const FeatureVector& a, const FeatureVector& b, Metric metric);

// Label of the closest template; ties resolve to the lowest class index.
int nearest_template(const FeatureVector& query, const FeatureSet& templates);

// Majority vote among the k nearest references (l2); distance ties prefer
// the lower sample index, vote ties the lowest class index.
int knn(const FeatureVector& query, const FeatureSet& refs, std::size_t k);

struct ProbeResult {
    bool separable = false;
    double margin = 0.0;
    std::size_t epochs_used = 0;
};

// Perceptron check for linear separability of two labelled clouds; margin is
// the smallest signed distance to the learned hyperplane at convergence.
ProbeResult linear_probe(const std::vector<FeatureVector>& class_a,
                         const std::vector<FeatureVector>& class_b, std::size_t max_epochs);

struct EvalReport {
    double accuracy = 0.0;
    std::vector<std::vector<std::size_t>> confusion;  // [truth][predicted]
    std::uint64_t seed = 0;
    double runtime_s = 0.0;
};

EvalReport evaluate(const std::vector<int>& predictions, const std::vector<int>& truth);

}  // namespace nrcdt::classify
