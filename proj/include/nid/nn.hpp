#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "nid/candidate.hpp"
#include "nid/dataset.hpp"

namespace nid {

/// Fully connected ReLU network with a single linear output.
///
/// layer_sizes = {p, p_1, ..., p_L}. weights[l] maps layer l to layer l+1
/// and has shape p_{l+1} x p_l. With layer_sizes = {p} the network has no
/// hidden layer and computes w_y . x + b_y.
struct DenseNetwork {
    std::vector<int> layer_sizes;
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
    Eigen::VectorXd output_weights;
    double output_bias = 0.0;

    int input_dim() const { return layer_sizes.front(); }
    /// Number of hidden layers (L).
    int depth() const { return static_cast<int>(layer_sizes.size()) - 1; }
    std::size_t parameter_count() const;

    /// Throws Shape naming the first inconsistent layer.
    void check_shapes() const;
    bool all_finite() const;
};

/// Uniform Glorot initialization, zero biases. Deterministic in seed.
DenseNetwork init_network(const std::vector<int>& layer_sizes, std::uint64_t seed);

/// Output of a single network on one (already scaled) input.
double network_output(const DenseNetwork& net, const Eigen::VectorXd& x);

/// Derivatives of the network output with respect to every hidden unit,
/// computed by backpropagation. Element l-1 holds dy/dh^(l), l = 1..L.
std::vector<Eigen::VectorXd> hidden_gradients(const DenseNetwork& net, const Eigen::VectorXd& x);

/// Backprop-vs-central-difference check of dy/dtheta over every parameter.
/// Deviation per parameter is |g_bp - g_fd| / max(1, |g_bp|, |g_fd|); the
/// maximum is returned. x is nudged away from ReLU kinks first.
double gradient_check(const DenseNetwork& net, Eigen::VectorXd x, double epsilon);

struct InteractionNet {
    InteractionCandidate features;
    DenseNetwork net;
};

/// Affine input/target standardization learned from a training split.
/// Empty vectors mean identity.
struct Scaling {
    Eigen::VectorXd feature_mean;
    Eigen::VectorXd feature_scale;
    double target_mean = 0.0;
    double target_scale = 1.0;

    bool is_identity() const;
    Eigen::VectorXd scale_features(const Eigen::VectorXd& x) const;
    /// Rows of `features` selected by `rows`, scaled, one column per sample.
    Eigen::MatrixXd scale_columns(const Eigen::MatrixXd& features, const std::vector<std::size_t>& rows) const;
};

/// Sum of a main network, per-feature univariate networks and
/// per-interaction networks. MLP = main only, MLP-M = main + univariate,
/// MLP-Cutoff = univariate + interaction networks.
struct CompositeModel {
    Task task = Task::Regression;
    std::optional<DenseNetwork> main;
    std::vector<DenseNetwork> univariate;
    std::vector<InteractionNet> interactions;
    Scaling scaling;

    int input_dim() const;
    void check_shapes() const;
};

CompositeModel make_mlp(int p, const std::vector<int>& hidden, std::uint64_t seed, Task task = Task::Regression);
CompositeModel make_mlp_m(int p, const std::vector<int>& hidden, const std::vector<int>& univariate_hidden,
                          std::uint64_t seed, Task task = Task::Regression);

struct ForwardResult {
    /// Regression: prediction in target units. Classification: the logit.
    double prediction = 0.0;
    std::optional<double> probability;
    /// h^(1)..h^(L) of the main network (empty without a main network).
    std::vector<Eigen::VectorXd> hidden;
};

/// Evaluates the model on one raw (unscaled) feature vector.
ForwardResult forward(const CompositeModel& model, const Eigen::VectorXd& x);

/// Summed network output for scaled inputs, one column per sample.
Eigen::RowVectorXd composite_output(const CompositeModel& model, const Eigen::MatrixXd& scaled_inputs);

struct TrainingConfig {
    double l1_strength = 0.0;
    double l2_strength = 0.0;
    double learning_rate = 5e-3;
    int batch_size = 100;
    int max_epochs = 500;
    int patience = 20;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TrainedModel {
    CompositeModel model;
    std::vector<double> train_loss;
    std::vector<double> valid_loss;
    double best_valid_loss = 0.0;
    int best_epoch = 0;
};

/// Adam on task loss + l1 * sum|W_main| + l2 * sum W^2 with early stopping
/// on validation loss. Inputs (and regression targets) are standardized
/// with training-split statistics, which are stored in the returned model.
TrainedModel train(CompositeModel model, const Dataset& data, const TrainingConfig& cfg);

/// Task loss (MSE on the scaled target, or cross-entropy) on the given rows.
double evaluate_loss(const CompositeModel& model, const Dataset& data, const std::vector<std::size_t>& rows);

/// Scaled-target residual predictions: raw network sums for the rows.
Eigen::RowVectorXd predict_rows(const CompositeModel& model, const Dataset& data, const std::vector<std::size_t>& rows);

}  // namespace nid
