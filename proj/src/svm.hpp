#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "scheme.hpp"

namespace amc {

// Polynomial kernel (x.y + c0)^d. The only kernel family supported.
struct KernelSpec {
    int exponent = 1;     // d >= 1
    double offset = 0.0;  // c0 >= 0

    void validate() const;
};

double kernel_eval(const KernelSpec& k, const std::vector<double>& x,
                   const std::vector<double>& y);

// Soft-margin binary SVM in support-vector form. signed_weights holds
// lambda_k = y_k * alpha_k, so the decision value is
// f(x) = sum_k lambda_k K(x, x_k) + b.
struct BinarySvmModel {
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> signed_weights;
    double bias = 0.0;
    KernelSpec kernel;
    double box_c = 1.0;
    Scheme positive_class = Scheme::Unknown;  // +1 side
    Scheme negative_class = Scheme::Unknown;  // -1 side

    size_t support_count() const { return support_vectors.size(); }
};

double predict_binary(const BinarySvmModel& m, const std::vector<double>& x);

// Sign-based class decision: f > 0 -> positive class, f < 0 -> negative
// class, f == 0 -> the class of the pair whose name sorts first.
Scheme binary_decision(const BinarySvmModel& m, double f);

struct SmoConfig {
    double box_c = 10.0;
    double tol = 1e-3;
    KernelSpec kernel;
    size_t max_passes = 10000;     // outer-loop iterations before giving up
    uint64_t heuristic_seed = 1;   // start offsets of the fallback scans
    bool track_objective = false;  // record dual objective per accepted step

    void validate() const;
};

// Optional training diagnostics, mainly for verification harnesses.
struct SmoDiagnostics {
    size_t outer_iterations = 0;
    size_t accepted_steps = 0;
    double final_objective = 0.0;
    double max_kkt_residual = 0.0;
    std::vector<double> alphas;            // per training row
    std::vector<double> objective_trace;   // only when track_objective
};

// Platt-style SMO: alternating full and non-bound passes, second choice
// by max |E1 - E2| over the cached errors. Deterministic for a fixed
// config and row order.
BinarySvmModel train_binary(const std::vector<std::vector<double>>& rows,
                            const std::vector<int>& labels,
                            const SmoConfig& cfg,
                            SmoDiagnostics* diag = nullptr);

// Per-point optimality residuals for a trained model evaluated on its
// training rows. Alphas are recovered by exact-match against the
// retained support vectors (zero for non-support rows).
struct KktReport {
    std::vector<double> residuals;   // per row
    double max_residual = 0.0;
    double equality_gap = 0.0;       // |sum lambda_k|
    size_t violations = 0;           // residuals above tol
    double tol = 0.0;
};

KktReport kkt_report(const BinarySvmModel& m,
                     const std::vector<std::vector<double>>& rows,
                     const std::vector<int>& labels, double tol);

// Per-feature min-max scaling fitted on training data; constant
// columns map to 0.5 and out-of-range values clamp to [0, 1].
struct Normalization {
    std::vector<double> lo;
    std::vector<double> hi;

    size_t dim() const { return lo.size(); }
};

Normalization normalize_fit(const LabeledDataset& ds);
std::vector<double> normalize_apply(const Normalization& n,
                                    const std::vector<double>& x);

// One-vs-one multiclass bundle: one binary model per unordered class
// pair over the classes present in the training set.
struct MulticlassModel {
    Normalization norm;
    std::vector<Scheme> classes;              // canonical scheme order
    std::vector<BinarySvmModel> pair_models;  // pairs (i, j), i < j, j inner loop
    double box_c = 10.0;
    double tol = 1e-3;
    KernelSpec kernel;

    size_t pair_count() const { return pair_models.size(); }
};

MulticlassModel train_multiclass(const LabeledDataset& ds, const SmoConfig& cfg);

struct VoteDetail {
    std::vector<Scheme> classes;
    std::vector<int> votes;           // aligned with classes
    std::vector<double> margin_sums;  // sum |f| over each class's models
    Scheme label = Scheme::Unknown;
};

Scheme predict_multiclass(const MulticlassModel& m, const FeatureVector& x,
                          VoteDetail* detail = nullptr);

// Versioned text serialization (AMCSVM1). Rejects unknown version tags.
void save_model(const MulticlassModel& m, const std::string& path);
MulticlassModel load_model(const std::string& path);

}  // namespace amc
