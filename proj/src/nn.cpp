#include "nid/nn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "nid/detail/backprop.hpp"
#include "nid/error.hpp"
#include "nid/random.hpp"

namespace nid {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

// ---------------------------------------------------------------------------
// DenseNetwork

std::size_t DenseNetwork::parameter_count() const {
    std::size_t count = static_cast<std::size_t>(output_weights.size()) + 1;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        count += static_cast<std::size_t>(weights[l].size() + biases[l].size());
    }
    return count;
}

void DenseNetwork::check_shapes() const {
    if (layer_sizes.empty()) throw Error(ErrorKind::Shape, "network has no layer sizes");
    for (int s : layer_sizes) {
        if (s <= 0) throw Error(ErrorKind::Shape, "layer sizes must be positive");
    }
    const auto L = static_cast<std::size_t>(depth());
    if (weights.size() != L || biases.size() != L) {
        throw Error(ErrorKind::Shape, "network has " + std::to_string(weights.size()) + " weight matrices for " +
                                          std::to_string(L) + " hidden layers");
    }
    for (std::size_t l = 0; l < L; ++l) {
        const auto name = "W^(" + std::to_string(l + 1) + ")";
        if (weights[l].rows() != layer_sizes[l + 1] || weights[l].cols() != layer_sizes[l]) {
            throw Error(ErrorKind::Shape, name + " has shape " + std::to_string(weights[l].rows()) + "x" +
                                              std::to_string(weights[l].cols()) + ", layer sizes require " +
                                              std::to_string(layer_sizes[l + 1]) + "x" +
                                              std::to_string(layer_sizes[l]));
        }
        if (biases[l].size() != layer_sizes[l + 1]) {
            throw Error(ErrorKind::Shape, "b^(" + std::to_string(l + 1) + ") has wrong length");
        }
    }
    if (output_weights.size() != layer_sizes.back()) {
        throw Error(ErrorKind::Shape, "output weights have length " + std::to_string(output_weights.size()) +
                                          ", expected " + std::to_string(layer_sizes.back()));
    }
}

bool DenseNetwork::all_finite() const {
    for (std::size_t l = 0; l < weights.size(); ++l) {
        if (!weights[l].allFinite() || !biases[l].allFinite()) return false;
    }
    return output_weights.allFinite() && std::isfinite(output_bias);
}

DenseNetwork init_network(const std::vector<int>& layer_sizes, std::uint64_t seed) {
    if (layer_sizes.empty()) throw Error(ErrorKind::InvalidConfig, "layer sizes must not be empty");
    for (int s : layer_sizes) {
        if (s <= 0) throw Error(ErrorKind::InvalidConfig, "layer sizes must be positive");
    }
    std::mt19937_64 rng(seed);
    auto fill = [&rng](auto& m, int fan_in, int fan_out) {
        const double s = std::sqrt(6.0 / (fan_in + fan_out));
        std::uniform_real_distribution<double> dist(-s, s);
        for (Index k = 0; k < m.size(); ++k) m.data()[k] = dist(rng);
    };
    DenseNetwork net;
    net.layer_sizes = layer_sizes;
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        MatrixXd w(layer_sizes[l + 1], layer_sizes[l]);
        fill(w, layer_sizes[l], layer_sizes[l + 1]);
        net.weights.push_back(std::move(w));
        net.biases.push_back(VectorXd::Zero(layer_sizes[l + 1]));
    }
    net.output_weights.resize(layer_sizes.back());
    fill(net.output_weights, layer_sizes.back(), 1);
    net.output_bias = 0.0;
    return net;
}

double network_output(const DenseNetwork& net, const VectorXd& x) {
    if (x.size() != net.input_dim()) throw Error(ErrorKind::Shape, "input length does not match network");
    return detail::forward_batch(net, x, nullptr)(0);
}

std::vector<VectorXd> hidden_gradients(const DenseNetwork& net, const VectorXd& x) {
    if (x.size() != net.input_dim()) throw Error(ErrorKind::Shape, "input length does not match network");
    detail::NetworkTape tape;
    detail::forward_batch(net, x, &tape);
    std::vector<MatrixXd> d_hidden;
    detail::backward_batch(net, tape, RowVectorXd::Ones(1), nullptr, &d_hidden);
    std::vector<VectorXd> out;
    out.reserve(d_hidden.size());
    for (auto& m : d_hidden) out.emplace_back(m.col(0));
    return out;
}

double gradient_check(const DenseNetwork& net, VectorXd x, double epsilon) {
    if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
    if (x.size() != net.input_dim()) throw Error(ErrorKind::Shape, "input length does not match network");
    net.check_shapes();

    // Nudge the input until every preactivation is at least 10*epsilon from 0.
    std::mt19937_64 rng(0x6b696e6bULL);
    std::normal_distribution<double> jitter(0.0, 0.1);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        detail::NetworkTape tape;
        detail::forward_batch(net, x, &tape);
        bool near_kink = false;
        for (const auto& pre : tape.pre) {
            if ((pre.array().abs() < 10.0 * epsilon).any()) near_kink = true;
        }
        if (!near_kink) break;
        for (Index k = 0; k < x.size(); ++k) x[k] += jitter(rng);
    }

    detail::NetworkTape tape;
    detail::forward_batch(net, x, &tape);
    DenseNetwork grad = detail::zeros_like(net);
    detail::backward_batch(net, tape, RowVectorXd::Ones(1), &grad);

    DenseNetwork probe = net;
    auto probe_blocks = detail::param_blocks(probe, true);
    auto grad_blocks = detail::param_blocks(grad, true);
    double worst = 0.0;
    for (std::size_t b = 0; b < probe_blocks.size(); ++b) {
        for (Index k = 0; k < probe_blocks[b].size; ++k) {
            double& theta = probe_blocks[b].data[k];
            const double saved = theta;
            theta = saved + epsilon;
            const double up = detail::forward_batch(probe, x, nullptr)(0);
            theta = saved - epsilon;
            const double down = detail::forward_batch(probe, x, nullptr)(0);
            theta = saved;
            const double fd = (up - down) / (2.0 * epsilon);
            const double bp = grad_blocks[b].data[k];
            const double denom = std::max({1.0, std::abs(bp), std::abs(fd)});
            worst = std::max(worst, std::abs(bp - fd) / denom);
        }
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Scaling and CompositeModel

bool Scaling::is_identity() const {
    return feature_mean.size() == 0 && target_mean == 0.0 && target_scale == 1.0;
}

VectorXd Scaling::scale_features(const VectorXd& x) const {
    if (feature_mean.size() == 0) return x;
    return ((x - feature_mean).array() / feature_scale.array()).matrix();
}

MatrixXd Scaling::scale_columns(const MatrixXd& features, const std::vector<std::size_t>& rows) const {
    MatrixXd out(features.cols(), static_cast<Index>(rows.size()));
    for (std::size_t c = 0; c < rows.size(); ++c) {
        out.col(static_cast<Index>(c)) = features.row(static_cast<Index>(rows[c])).transpose();
    }
    if (feature_mean.size() != 0) {
        out.colwise() -= feature_mean;
        out.array().colwise() /= feature_scale.array();
    }
    return out;
}

int CompositeModel::input_dim() const {
    if (main) return main->input_dim();
    if (!univariate.empty()) return static_cast<int>(univariate.size());
    int p = static_cast<int>(scaling.feature_mean.size());
    for (const auto& in : interactions) p = std::max(p, in.features.max_index() + 1);
    return p;
}

void CompositeModel::check_shapes() const {
    const int p = input_dim();
    if (main) main->check_shapes();
    if (!univariate.empty() && static_cast<int>(univariate.size()) != p) {
        throw Error(ErrorKind::Shape, "expected one univariate network per feature");
    }
    for (std::size_t i = 0; i < univariate.size(); ++i) {
        univariate[i].check_shapes();
        if (univariate[i].input_dim() != 1) {
            throw Error(ErrorKind::Shape, "univariate network " + std::to_string(i + 1) + " must take one input");
        }
    }
    for (const auto& in : interactions) {
        in.net.check_shapes();
        if (in.net.input_dim() != static_cast<int>(in.features.size())) {
            throw Error(ErrorKind::Shape, "interaction network {" + in.features.to_string() +
                                              "} input size does not match its features");
        }
        if (in.features.max_index() >= p) {
            throw Error(ErrorKind::Shape, "interaction {" + in.features.to_string() + "} exceeds feature count");
        }
    }
    if (scaling.feature_mean.size() != 0 &&
        (scaling.feature_mean.size() != p || scaling.feature_scale.size() != p)) {
        throw Error(ErrorKind::Shape, "scaling parameters do not match feature count");
    }
    if (!main && univariate.empty() && interactions.empty()) {
        throw Error(ErrorKind::Shape, "composite model has no networks");
    }
}

CompositeModel make_mlp(int p, const std::vector<int>& hidden, std::uint64_t seed, Task task) {
    CompositeModel model;
    model.task = task;
    std::vector<int> sizes{p};
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    model.main = init_network(sizes, derive_seed(seed, {0}));
    return model;
}

CompositeModel make_mlp_m(int p, const std::vector<int>& hidden, const std::vector<int>& univariate_hidden,
                          std::uint64_t seed, Task task) {
    CompositeModel model = make_mlp(p, hidden, seed, task);
    std::vector<int> sizes{1};
    sizes.insert(sizes.end(), univariate_hidden.begin(), univariate_hidden.end());
    for (int i = 0; i < p; ++i) {
        model.univariate.push_back(init_network(sizes, derive_seed(seed, {1, static_cast<std::uint64_t>(i)})));
    }
    return model;
}

ForwardResult forward(const CompositeModel& model, const VectorXd& x) {
    if (x.size() != model.input_dim()) {
        throw Error(ErrorKind::Shape, "input has " + std::to_string(x.size()) + " features, model expects " +
                                          std::to_string(model.input_dim()));
    }
    const VectorXd xs = model.scaling.scale_features(x);
    detail::CompositeTape tape;
    const double s = detail::composite_forward_batch(model, xs, &tape)(0);

    ForwardResult result;
    if (model.main) {
        for (std::size_t l = 1; l < tape.main.act.size(); ++l) result.hidden.emplace_back(tape.main.act[l].col(0));
    }
    if (model.task == Task::Regression) {
        result.prediction = s * model.scaling.target_scale + model.scaling.target_mean;
    } else {
        result.prediction = s;
        result.probability = 1.0 / (1.0 + std::exp(-s));
    }
    return result;
}

RowVectorXd composite_output(const CompositeModel& model, const MatrixXd& scaled_inputs) {
    return detail::composite_forward_batch(model, scaled_inputs, nullptr);
}

// ---------------------------------------------------------------------------
// Training

void TrainingConfig::validate() const {
    if (!(l1_strength >= 0.0) || !(l2_strength >= 0.0)) {
        throw Error(ErrorKind::InvalidConfig, "regularization strengths must be nonnegative");
    }
    if (!(learning_rate > 0.0)) throw Error(ErrorKind::InvalidConfig, "learning rate must be positive");
    if (batch_size < 1) throw Error(ErrorKind::InvalidConfig, "batch size must be positive");
    if (max_epochs < 1) throw Error(ErrorKind::InvalidConfig, "max_epochs must be positive");
    if (patience < 1) throw Error(ErrorKind::InvalidConfig, "patience must be at least 1");
}

namespace {

RowVectorXd scaled_targets(const Dataset& data, const Scaling& scaling, const std::vector<std::size_t>& rows) {
    RowVectorXd y(static_cast<Index>(rows.size()));
    for (std::size_t c = 0; c < rows.size(); ++c) {
        y[static_cast<Index>(c)] = data.target[static_cast<Index>(rows[c])];
    }
    if (data.task == Task::Regression) {
        y = (y.array() - scaling.target_mean) / scaling.target_scale;
    }
    return y;
}

struct Adam {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long step = 0;
};

}  // namespace

double evaluate_loss(const CompositeModel& model, const Dataset& data, const std::vector<std::size_t>& rows) {
    if (rows.empty()) throw Error(ErrorKind::InvalidData, "cannot evaluate on an empty split");
    const MatrixXd x = model.scaling.scale_columns(data.features, rows);
    return detail::task_loss(model.task, composite_output(model, x), scaled_targets(data, model.scaling, rows));
}

RowVectorXd predict_rows(const CompositeModel& model, const Dataset& data, const std::vector<std::size_t>& rows) {
    return composite_output(model, model.scaling.scale_columns(data.features, rows));
}

TrainedModel train(CompositeModel model, const Dataset& data, const TrainingConfig& cfg) {
    cfg.validate();
    model.check_shapes();
    if (data.splits.train.empty() || data.splits.valid.empty()) {
        throw Error(ErrorKind::InvalidData, "training needs nonempty train and valid splits");
    }
    if (model.input_dim() != static_cast<int>(data.cols())) {
        throw Error(ErrorKind::Shape, "model expects " + std::to_string(model.input_dim()) + " features, data has " +
                                          std::to_string(data.cols()));
    }
    if (model.task != data.task) throw Error(ErrorKind::InvalidConfig, "model task does not match dataset task");

    const ColumnStats stats = column_stats(data.features, data.splits.train);
    model.scaling.feature_mean = stats.mean;
    model.scaling.feature_scale = stats.scale;
    model.scaling.target_mean = 0.0;
    model.scaling.target_scale = 1.0;
    if (data.task == Task::Regression) {
        const MatrixXd y = data.target;
        const ColumnStats ts = column_stats(y, data.splits.train);
        model.scaling.target_mean = ts.mean[0];
        model.scaling.target_scale = ts.scale[0];
    }

    const MatrixXd x_train = model.scaling.scale_columns(data.features, data.splits.train);
    const RowVectorXd y_train = scaled_targets(data, model.scaling, data.splits.train);
    const MatrixXd x_valid = model.scaling.scale_columns(data.features, data.splits.valid);
    const RowVectorXd y_valid = scaled_targets(data, model.scaling, data.splits.valid);

    CompositeModel grad = detail::zeros_like(model);
    CompositeModel first_moment = detail::zeros_like(model);
    CompositeModel second_moment = detail::zeros_like(model);
    auto params = detail::param_blocks(model);
    auto grads = detail::param_blocks(grad);
    auto m = detail::param_blocks(first_moment);
    auto v = detail::param_blocks(second_moment);

    const Index n = x_train.cols();
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::mt19937_64 rng(derive_seed(cfg.seed, {0x5f}));

    TrainedModel result;
    result.best_valid_loss = std::numeric_limits<double>::infinity();
    CompositeModel best = model;
    int since_best = 0;
    Adam adam;
    detail::CompositeTape tape;
    MatrixXd xb;
    RowVectorXd yb;

    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        for (Index start = 0; start < n; start += cfg.batch_size) {
            const Index count = std::min<Index>(cfg.batch_size, n - start);
            std::vector<Index> idx(order.begin() + start, order.begin() + start + count);
            xb = x_train(Eigen::all, idx);
            yb = y_train(idx);
            const auto parts =
                detail::loss_and_gradient(model, xb, yb, cfg.l1_strength, cfg.l2_strength, &grad, &tape);
            epoch_loss += parts.task * static_cast<double>(count);

            ++adam.step;
            const double c1 = 1.0 - std::pow(adam.beta1, static_cast<double>(adam.step));
            const double c2 = 1.0 - std::pow(adam.beta2, static_cast<double>(adam.step));
            const double step_size = cfg.learning_rate * std::sqrt(c2) / c1;
            for (std::size_t b = 0; b < params.size(); ++b) {
                Eigen::Map<Eigen::ArrayXd> p(params[b].data, params[b].size);
                Eigen::Map<Eigen::ArrayXd> g(grads[b].data, grads[b].size);
                Eigen::Map<Eigen::ArrayXd> mb(m[b].data, m[b].size);
                Eigen::Map<Eigen::ArrayXd> vb(v[b].data, v[b].size);
                mb = adam.beta1 * mb + (1.0 - adam.beta1) * g;
                vb = adam.beta2 * vb + (1.0 - adam.beta2) * g.square();
                p -= step_size * mb / (vb.sqrt() + adam.eps * std::sqrt(c2));
            }
        }
        const double train_loss = epoch_loss / static_cast<double>(n);
        const double valid_loss = detail::task_loss(model.task, composite_output(model, x_valid), y_valid);
        result.train_loss.push_back(train_loss);
        result.valid_loss.push_back(valid_loss);
        if (!std::isfinite(train_loss) || !std::isfinite(valid_loss)) throw TrainingDiverged(epoch);

        if (valid_loss < result.best_valid_loss) {
            result.best_valid_loss = valid_loss;
            result.best_epoch = epoch;
            best = model;
            since_best = 0;
        } else if (++since_best >= cfg.patience) {
            break;
        }
    }
    for (const auto& block : detail::param_blocks(best)) {
        if (!Eigen::Map<const Eigen::ArrayXd>(block.data, block.size).allFinite()) {
            throw TrainingDiverged(result.best_epoch);
        }
    }
    result.model = std::move(best);
    return result;
}

// ---------------------------------------------------------------------------
// Batched passes

namespace detail {

RowVectorXd forward_batch(const DenseNetwork& net, const MatrixXd& inputs, NetworkTape* tape) {
    const auto L = static_cast<std::size_t>(net.depth());
    if (tape == nullptr) {
        MatrixXd h = inputs;
        MatrixXd z;
        for (std::size_t l = 0; l < L; ++l) {
            z.noalias() = net.weights[l] * h;
            z.colwise() += net.biases[l];
            h = z.cwiseMax(0.0);
        }
        RowVectorXd out = net.output_weights.transpose() * h;
        out.array() += net.output_bias;
        return out;
    }
    tape->act.resize(L + 1);
    tape->pre.resize(L);
    tape->act[0] = inputs;
    for (std::size_t l = 0; l < L; ++l) {
        tape->pre[l].noalias() = net.weights[l] * tape->act[l];
        tape->pre[l].colwise() += net.biases[l];
        tape->act[l + 1] = tape->pre[l].cwiseMax(0.0);
    }
    RowVectorXd out = net.output_weights.transpose() * tape->act[L];
    out.array() += net.output_bias;
    return out;
}

void backward_batch(const DenseNetwork& net, const NetworkTape& tape, const RowVectorXd& d_output,
                    DenseNetwork* grad, std::vector<MatrixXd>* d_hidden) {
    const auto L = static_cast<std::size_t>(net.depth());
    if (grad) {
        grad->output_weights.noalias() += tape.act[L] * d_output.transpose();
        grad->output_bias += d_output.sum();
    }
    if (L == 0) return;
    if (d_hidden) d_hidden->assign(L, MatrixXd());

    MatrixXd d_act = net.output_weights * d_output;  // dloss/dh^(L)
    MatrixXd delta;
    for (std::size_t l = L; l-- > 0;) {
        if (d_hidden) (*d_hidden)[l] = d_act;
        delta = d_act.cwiseProduct((tape.pre[l].array() > 0.0).cast<double>().matrix());
        if (grad) {
            grad->weights[l].noalias() += delta * tape.act[l].transpose();
            grad->biases[l] += delta.rowwise().sum();
        }
        if (l > 0) d_act.noalias() = net.weights[l].transpose() * delta;
    }
}

DenseNetwork zeros_like(const DenseNetwork& net) {
    DenseNetwork z = net;
    for (auto& w : z.weights) w.setZero();
    for (auto& b : z.biases) b.setZero();
    z.output_weights.setZero();
    z.output_bias = 0.0;
    return z;
}

CompositeModel zeros_like(const CompositeModel& model) {
    CompositeModel z = model;
    if (z.main) z.main = zeros_like(*z.main);
    for (auto& u : z.univariate) u = zeros_like(u);
    for (auto& in : z.interactions) in.net = zeros_like(in.net);
    return z;
}

std::vector<ParamBlock> param_blocks(DenseNetwork& net, bool is_main) {
    std::vector<ParamBlock> blocks;
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        blocks.push_back({net.weights[l].data(), net.weights[l].size(), true, is_main});
        blocks.push_back({net.biases[l].data(), net.biases[l].size(), false, is_main});
    }
    blocks.push_back({net.output_weights.data(), net.output_weights.size(), true, is_main});
    blocks.push_back({&net.output_bias, 1, false, is_main});
    return blocks;
}

std::vector<ParamBlock> param_blocks(CompositeModel& model) {
    std::vector<ParamBlock> blocks;
    auto append = [&blocks](std::vector<ParamBlock> more) { blocks.insert(blocks.end(), more.begin(), more.end()); };
    if (model.main) append(param_blocks(*model.main, true));
    for (auto& u : model.univariate) append(param_blocks(u, false));
    for (auto& in : model.interactions) append(param_blocks(in.net, false));
    return blocks;
}

namespace {

MatrixXd gather_rows(const MatrixXd& inputs, const std::vector<int>& rows) { return inputs(rows, Eigen::all); }

}  // namespace

RowVectorXd composite_forward_batch(const CompositeModel& model, const MatrixXd& inputs, CompositeTape* tape) {
    RowVectorXd out = RowVectorXd::Zero(inputs.cols());
    if (tape) {
        tape->univariate.resize(model.univariate.size());
        tape->interactions.resize(model.interactions.size());
    }
    if (model.main) out += forward_batch(*model.main, inputs, tape ? &tape->main : nullptr);
    for (std::size_t i = 0; i < model.univariate.size(); ++i) {
        out += forward_batch(model.univariate[i], inputs.row(static_cast<Index>(i)),
                             tape ? &tape->univariate[i] : nullptr);
    }
    for (std::size_t k = 0; k < model.interactions.size(); ++k) {
        const auto& in = model.interactions[k];
        out += forward_batch(in.net, gather_rows(inputs, in.features.indices()),
                             tape ? &tape->interactions[k] : nullptr);
    }
    return out;
}

double task_loss(Task task, const RowVectorXd& outputs, const RowVectorXd& targets) {
    const double n = static_cast<double>(outputs.size());
    if (task == Task::Regression) return (outputs - targets).squaredNorm() / n;
    // softplus(s) - y*s, written to stay finite for large |s|
    const Eigen::ArrayXd s = outputs.transpose().array();
    const Eigen::ArrayXd y = targets.transpose().array();
    const Eigen::ArrayXd softplus = s.max(0.0) + (-s.abs()).exp().log1p();
    return (softplus - y * s).sum() / n;
}

LossParts loss_and_gradient(const CompositeModel& model, const MatrixXd& inputs, const RowVectorXd& targets,
                            double l1_strength, double l2_strength, CompositeModel* grad, CompositeTape* tape) {
    CompositeTape local;
    CompositeTape& t = tape ? *tape : local;
    const RowVectorXd out = composite_forward_batch(model, inputs, &t);
    const double n = static_cast<double>(out.size());

    LossParts parts;
    parts.task = task_loss(model.task, out, targets);
    RowVectorXd d_out;
    if (model.task == Task::Regression) {
        d_out = 2.0 * (out - targets) / n;
    } else {
        d_out = ((1.0 / (1.0 + (-out.array()).exp())) - targets.array()).matrix() / n;
    }

    auto& mutable_model = const_cast<CompositeModel&>(model);
    const auto blocks = param_blocks(mutable_model);
    for (const auto& b : blocks) {
        if (!b.is_weight) continue;
        Eigen::Map<const Eigen::ArrayXd> w(b.data, b.size);
        if (b.is_main && l1_strength > 0.0) parts.penalty += l1_strength * w.abs().sum();
        if (l2_strength > 0.0) parts.penalty += l2_strength * w.square().sum();
    }
    if (!grad) return parts;

    for (auto& b : param_blocks(*grad)) Eigen::Map<Eigen::ArrayXd>(b.data, b.size).setZero();
    if (model.main) backward_batch(*model.main, t.main, d_out, &*grad->main);
    for (std::size_t i = 0; i < model.univariate.size(); ++i) {
        backward_batch(model.univariate[i], t.univariate[i], d_out, &grad->univariate[i]);
    }
    for (std::size_t k = 0; k < model.interactions.size(); ++k) {
        backward_batch(model.interactions[k].net, t.interactions[k], d_out, &grad->interactions[k].net);
    }
    const auto grad_blocks = param_blocks(*grad);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (!blocks[b].is_weight) continue;
        Eigen::Map<const Eigen::ArrayXd> w(blocks[b].data, blocks[b].size);
        Eigen::Map<Eigen::ArrayXd> g(grad_blocks[b].data, grad_blocks[b].size);
        // sign(0) = 0, so L1 contributes no subgradient at exactly zero
        if (blocks[b].is_main && l1_strength > 0.0) g += l1_strength * w.sign();
        if (l2_strength > 0.0) g += 2.0 * l2_strength * w;
    }
    return parts;
}

}  // namespace detail
}  // namespace nid
