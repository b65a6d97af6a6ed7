#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "eqfs/dataset.hpp"
#include "eqfs/feature_mask.hpp"

namespace eqfs {

enum class EvaluatorKind { linear_svm, nearest_centroid, external };

std::string to_string(EvaluatorKind kind);
EvaluatorKind parse_evaluator_kind(const std::string& name);

struct EvaluatorSpec {
    EvaluatorKind kind = EvaluatorKind::linear_svm;
    /// L2 strength of the hinge objective; also sets the step size 1/(C t).
    double C = 1.0;
    int epochs = 200;
    /// Shell command for the external kind.
    std::string command;
    double timeout_seconds = 60.0;

    bool operator==(const EvaluatorSpec&) const = default;
};

void validate(const EvaluatorSpec& spec);

/// One-vs-rest linear scores; prediction is the argmax, ties to the lowest class.
struct LinearModel {
    Matrix weights;  // classes x features
    std::vector<double> biases;

    int predict(std::span<const double> x) const;
};

/// Full-batch subgradient descent on C/2 |w|^2 + mean hinge, one binary
/// problem per class, zero start, step 1/(C t) at epoch t.
LinearModel train_linear_svm(const Matrix& x, std::span<const int> y, int classes, double C, int epochs);

struct NearestCentroid {
    Matrix centroids;  // classes x features
    std::vector<bool> present;

    static NearestCentroid fit(const Matrix& x, std::span<const int> y, int classes);
    int predict(std::span<const double> x) const;
};

/// Most frequent label, ties to the lowest index.
int majority_class(std::span<const int> labels, int classes);

/// Test accuracy of the model trained on the masked, standardized columns.
/// The all-zero mask scores the majority-class predictor.
double evaluate(const FeatureMask& mask, const SplitDataset& data, const EvaluatorSpec& spec);

/// Mask -> accuracy oracle consumed by the objective.
class Evaluator {
public:
    virtual ~Evaluator() = default;
    virtual int width() const = 0;
    /// Must be safe to call concurrently.
    virtual double operator()(const FeatureMask& mask) = 0;
};

class DatasetEvaluator final : public Evaluator {
public:
    DatasetEvaluator(const SplitDataset& data, EvaluatorSpec spec);

    int width() const override { return data_->feature_count(); }
    double operator()(const FeatureMask& mask) override { return evaluate(mask, *data_, spec_); }

private:
    const SplitDataset* data_;
    EvaluatorSpec spec_;
};

/// Child process speaking the line protocol on its standard streams:
///   HELLO EQFS 1 <n>  ->  READY
///   EVAL <bits>       ->  OK <accuracy> | ERR <message>
///   QUIT
/// Requests are serialized; one in flight at a time.
class ExternalEvaluator final : public Evaluator {
public:
    ExternalEvaluator(const std::string& command, int width,
                      std::chrono::milliseconds timeout = std::chrono::seconds(60));
    ~ExternalEvaluator() override;

    ExternalEvaluator(const ExternalEvaluator&) = delete;
    ExternalEvaluator& operator=(const ExternalEvaluator&) = delete;

    int width() const override { return width_; }
    double operator()(const FeatureMask& mask) override;

private:
    void stop() noexcept;
    void send_line(const std::string& line);
    std::string read_line();
    [[noreturn]] void fail(const std::string& why);

    int width_;
    std::chrono::milliseconds timeout_;
    int fd_ = -1;
    int pid_ = -1;
    std::string buffer_;
    std::mutex mutex_;
};

std::unique_ptr<Evaluator> make_evaluator(const EvaluatorSpec& spec, const SplitDataset& data);

}  // namespace eqfs
