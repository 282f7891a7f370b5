#pragma once

// Batched forward/backward passes shared by training, gradient checking and
// the tests. Samples are columns.

#include <vector>

#include <Eigen/Core>

#include "nid/nn.hpp"

namespace nid::detail {

struct NetworkTape {
    std::vector<Eigen::MatrixXd> act;  // act[0] = input, act[l] = h^(l)
    std::vector<Eigen::MatrixXd> pre;  // pre[l-1] = W^(l) h^(l-1) + b^(l)
};

Eigen::RowVectorXd forward_batch(const DenseNetwork& net, const Eigen::MatrixXd& inputs, NetworkTape* tape);

/// Accumulates d(loss)/d(theta) into grad given d(loss)/d(output). When
/// d_hidden is non-null it receives d(loss)/d h^(l) for l = 1..L.
void backward_batch(const DenseNetwork& net, const NetworkTape& tape, const Eigen::RowVectorXd& d_output,
                    DenseNetwork* grad, std::vector<Eigen::MatrixXd>* d_hidden = nullptr);

DenseNetwork zeros_like(const DenseNetwork& net);
CompositeModel zeros_like(const CompositeModel& model);

struct ParamBlock {
    double* data;
    Eigen::Index size;
    bool is_weight;  // weight matrix or output weights, not a bias
    bool is_main;
};

std::vector<ParamBlock> param_blocks(DenseNetwork& net, bool is_main);
std::vector<ParamBlock> param_blocks(CompositeModel& model);

struct CompositeTape {
    NetworkTape main;
    std::vector<NetworkTape> univariate;
    std::vector<NetworkTape> interactions;
};

Eigen::RowVectorXd composite_forward_batch(const CompositeModel& model, const Eigen::MatrixXd& inputs,
                                           CompositeTape* tape);

/// Task loss averaged over the batch, plus the regularization penalty.
/// When grad is non-null it is overwritten with the full gradient.
struct LossParts {
    double task = 0.0;
    double penalty = 0.0;
    double total() const { return task + penalty; }
};
LossParts loss_and_gradient(const CompositeModel& model, const Eigen::MatrixXd& inputs,
                            const Eigen::RowVectorXd& targets, double l1_strength, double l2_strength,
                            CompositeModel* grad, CompositeTape* tape = nullptr);

double task_loss(Task task, const Eigen::RowVectorXd& outputs, const Eigen::RowVectorXd& targets);

}  // namespace nid::detail
