#pragma once

#include <stdexcept>
#include <string>

namespace eqfs {

/// Base for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Gate addresses a qubit outside the register or repeats an operand.
class InvalidGateError : public Error {
public:
    using Error::Error;
};

/// Dense test-oracle construction refused for too many qubits.
class OracleLimitError : public Error {
public:
    using Error::Error;
};

/// Caller violated a documented precondition (width mismatch and similar).
class ContractError : public Error {
public:
    using Error::Error;
};

class LoadError : public Error {
public:
    enum class Kind {
        missing_file,
        missing_header,
        missing_label_column,
        non_numeric_cell,
        ragged_row,
        too_few_classes,
    };

    LoadError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

class SplitError : public Error {
public:
    using Error::Error;
};

/// Training data holds a single class; no separator can be learned.
class DegenerateTrainingError : public Error {
public:
    using Error::Error;
};

/// An evaluator (built-in or external process) failed to produce an accuracy.
class EvaluatorFailure : public Error {
public:
    using Error::Error;
};

/// Raised by fitness() when the evaluator fails; carries the offending mask.
class FitnessEvaluationError : public Error {
public:
    FitnessEvaluationError(std::string mask, const std::string& cause)
        : Error("fitness evaluation failed for mask " + mask + ": " + cause), mask_(std::move(mask)) {}

    const std::string& mask() const noexcept { return mask_; }

private:
    std::string mask_;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Run record could not be parsed, or records disagree on version or dataset.
class RecordError : public Error {
public:
    using Error::Error;
};

}  // namespace eqfs
