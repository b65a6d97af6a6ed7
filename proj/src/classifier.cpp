#include "eqfs/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eqfs/error.hpp"

namespace eqfs {

std::string to_string(EvaluatorKind kind) {
    switch (kind) {
        case EvaluatorKind::linear_svm: return "linear-svm";
        case EvaluatorKind::nearest_centroid: return "nearest-centroid";
        case EvaluatorKind::external: return "external";
    }
    return "?";
}

EvaluatorKind parse_evaluator_kind(const std::string& name) {
    for (auto k : {EvaluatorKind::linear_svm, EvaluatorKind::nearest_centroid, EvaluatorKind::external})
        if (to_string(k) == name) return k;
    throw ContractError("unknown evaluator '" + name + "'");
}

void validate(const EvaluatorSpec& spec) {
    if (!(spec.C > 0.0)) throw ContractError("C must be positive");
    if (spec.epochs < 1) throw ContractError("epochs must be at least 1");
    if (spec.kind == EvaluatorKind::external && spec.command.empty())
        throw ContractError("external evaluator needs a command");
}

int majority_class(std::span<const int> labels, int classes) {
    std::vector<std::size_t> freq(static_cast<std::size_t>(classes), 0);
    for (int y : labels) ++freq.at(static_cast<std::size_t>(y));
    return static_cast<int>(std::max_element(freq.begin(), freq.end()) - freq.begin());
}

int LinearModel::predict(std::span<const double> x) const {
    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < biases.size(); ++k) {
        double score = biases[k];
        for (std::size_t j = 0; j < x.size(); ++j) score += weights(k, j) * x[j];
        if (score > best_score) {
            best_score = score;
            best = static_cast<int>(k);
        }
    }
    return best;
}

LinearModel train_linear_svm(const Matrix& x, std::span<const int> y, int classes, double C, int epochs) {
    if (x.cols() == 0) throw ContractError("linear SVM needs at least one feature");
    if (y.size() != x.rows()) throw ContractError("label count differs from row count");
    if (classes < 2 || std::ranges::all_of(y, [&](int v) { return v == y.front(); }))
        throw DegenerateTrainingError("training labels hold a single class");

    const std::size_t rows = x.rows(), d = x.cols();
    const double inv_rows = 1.0 / static_cast<double>(rows);
    LinearModel model{Matrix(static_cast<std::size_t>(classes), d), std::vector<double>(static_cast<std::size_t>(classes))};
    std::vector<double> grad(d);
    std::vector<double> sign(rows);

    for (int k = 0; k < classes; ++k) {
        for (std::size_t i = 0; i < rows; ++i) sign[i] = y[i] == k ? 1.0 : -1.0;
        auto w = model.weights.row(static_cast<std::size_t>(k));
        double& b = model.biases[static_cast<std::size_t>(k)];
        for (int t = 1; t <= epochs; ++t) {
            const double eta = 1.0 / (C * t);
            for (std::size_t j = 0; j < d; ++j) grad[j] = C * w[j];
            double grad_b = 0.0;
            for (std::size_t i = 0; i < rows; ++i) {
                const auto xi = x.row(i);
                double score = b;
                for (std::size_t j = 0; j < d; ++j) score += w[j] * xi[j];
                if (sign[i] * score < 1.0) {
                    const double s = sign[i] * inv_rows;
                    for (std::size_t j = 0; j < d; ++j) grad[j] -= s * xi[j];
                    grad_b -= s;
                }
            }
            for (std::size_t j = 0; j < d; ++j) w[j] -= eta * grad[j];
            b -= eta * grad_b;
        }
    }
    return model;
}

NearestCentroid NearestCentroid::fit(const Matrix& x, std::span<const int> y, int classes) {
    NearestCentroid nc{Matrix(static_cast<std::size_t>(classes), x.cols()), std::vector<bool>(static_cast<std::size_t>(classes))};
    std::vector<double> count(static_cast<std::size_t>(classes), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto k = static_cast<std::size_t>(y[i]);
        count[k] += 1.0;
        for (std::size_t j = 0; j < x.cols(); ++j) nc.centroids(k, j) += x(i, j);
    }
    for (std::size_t k = 0; k < count.size(); ++k) {
        nc.present[k] = count[k] > 0.0;
        if (nc.present[k])
            for (std::size_t j = 0; j < x.cols(); ++j) nc.centroids(k, j) /= count[k];
    }
    return nc;
}

int NearestCentroid::predict(std::span<const double> x) const {
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < present.size(); ++k) {
        if (!present[k]) continue;
        double dist = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double diff = x[j] - centroids(k, j);
            dist += diff * diff;
        }
        if (dist < best_dist) {
            best_dist = dist;
            best = static_cast<int>(k);
        }
    }
    return best;
}

namespace {

template <class Predict>
double accuracy(const Matrix& test, std::span<const int> labels, Predict&& predict) {
    if (test.rows() == 0) throw ContractError("empty test set");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test.rows(); ++i)
        if (predict(test.row(i)) == labels[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(test.rows());
}

double constant_accuracy(int label, std::span<const int> labels) {
    if (labels.empty()) throw ContractError("empty test set");
    const auto hits = std::ranges::count(labels, label);
    return static_cast<double>(hits) / static_cast<double>(labels.size());
}

}  // namespace

double evaluate(const FeatureMask& mask, const SplitDataset& data, const EvaluatorSpec& spec) {
    if (mask.width() != data.feature_count())
        throw ContractError("mask width " + std::to_string(mask.width()) + " differs from feature count " +
                            std::to_string(data.feature_count()));
    if (spec.kind == EvaluatorKind::external) throw ContractError("external evaluation needs an ExternalEvaluator");

    const int majority = majority_class(data.train_labels, data.class_count);
    if (mask.none()) return constant_accuracy(majority, data.test_labels);

    const Matrix train = apply_mask(data.train_standardized, mask);
    const Matrix test = apply_mask(data.test_standardized, mask);
    if (spec.kind == EvaluatorKind::nearest_centroid) {
        const auto nc = NearestCentroid::fit(train, data.train_labels, data.class_count);
        return accuracy(test, data.test_labels, [&](auto row) { return nc.predict(row); });
    }
    try {
        const auto model = train_linear_svm(train, data.train_labels, data.class_count, spec.C, spec.epochs);
        return accuracy(test, data.test_labels, [&](auto row) { return model.predict(row); });
    } catch (const DegenerateTrainingError&) {
        return constant_accuracy(majority, data.test_labels);
    }
}

DatasetEvaluator::DatasetEvaluator(const SplitDataset& data, EvaluatorSpec spec) : data_(&data), spec_(std::move(spec)) {
    validate(spec_);
    if (spec_.kind == EvaluatorKind::external) throw ContractError("use ExternalEvaluator for the external kind");
}

std::unique_ptr<Evaluator> make_evaluator(const EvaluatorSpec& spec, const SplitDataset& data) {
    validate(spec);
    if (spec.kind == EvaluatorKind::external)
        return std::make_unique<ExternalEvaluator>(
            spec.command, data.feature_count(),
            std::chrono::milliseconds(static_cast<long long>(spec.timeout_seconds * 1000.0)));
    return std::make_unique<DatasetEvaluator>(data, spec);
}

}  // namespace eqfs
