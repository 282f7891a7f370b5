#include "nid/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include <Eigen/Dense>

#include "nid/error.hpp"

namespace nid {

std::string_view to_string(AveragingKind kind) {
    switch (kind) {
        case AveragingKind::Maximum: return "maximum";
        case AveragingKind::RootMeanSquare: return "root-mean-square";
        case AveragingKind::ArithmeticMean: return "arithmetic-mean";
        case AveragingKind::GeometricMean: return "geometric-mean";
        case AveragingKind::HarmonicMean: return "harmonic-mean";
        case AveragingKind::Minimum: return "minimum";
    }
    return "unknown";
}

AveragingKind parse_averaging(std::string_view text) {
    for (auto kind : all_averaging_kinds()) {
        if (text == to_string(kind)) return kind;
    }
    if (text == "max") return AveragingKind::Maximum;
    if (text == "rms") return AveragingKind::RootMeanSquare;
    if (text == "mean" || text == "arithmetic") return AveragingKind::ArithmeticMean;
    if (text == "geometric") return AveragingKind::GeometricMean;
    if (text == "harmonic") return AveragingKind::HarmonicMean;
    if (text == "min") return AveragingKind::Minimum;
    throw Error(ErrorKind::InvalidConfig, "unknown averaging function '" + std::string(text) + "'");
}

std::vector<AveragingKind> all_averaging_kinds() {
    return {AveragingKind::Maximum,       AveragingKind::RootMeanSquare, AveragingKind::ArithmeticMean,
            AveragingKind::GeometricMean, AveragingKind::HarmonicMean,   AveragingKind::Minimum};
}

AggregatedWeights aggregated_weights(const DenseNetwork& net, int layer) {
    const int L = net.depth();
    if (layer < 1 || layer > L) {
        throw Error(ErrorKind::InvalidArgument, "layer " + std::to_string(layer) + " outside 1.." + std::to_string(L));
    }
    Eigen::RowVectorXd z = net.output_weights.cwiseAbs().transpose();
    for (int l = L; l > layer; --l) {
        z = z * net.weights[static_cast<std::size_t>(l - 1)].cwiseAbs();
    }
    return {layer, z.transpose()};
}

double average(AveragingKind kind, std::span<const double> values) {
    if (values.empty()) throw Error(ErrorKind::InvalidArgument, "cannot average an empty list");
    for (double v : values) {
        if (!(v >= 0.0)) throw Error(ErrorKind::InvalidArgument, "averaged values must be nonnegative");
    }
    const double n = static_cast<double>(values.size());
    switch (kind) {
        case AveragingKind::Maximum: return *std::max_element(values.begin(), values.end());
        case AveragingKind::Minimum: return *std::min_element(values.begin(), values.end());
        case AveragingKind::ArithmeticMean: return std::accumulate(values.begin(), values.end(), 0.0) / n;
        case AveragingKind::RootMeanSquare: {
            double sq = 0.0;
            for (double v : values) sq += v * v;
            return std::sqrt(sq / n);
        }
        case AveragingKind::GeometricMean: {
            double logs = 0.0;
            for (double v : values) {
                if (v == 0.0) return 0.0;
                logs += std::log(v);
            }
            return std::exp(logs / n);
        }
        case AveragingKind::HarmonicMean: {
            double inv = 0.0;
            for (double v : values) {
                if (v == 0.0) return 0.0;
                inv += 1.0 / v;
            }
            return n / inv;
        }
    }
    throw Error(ErrorKind::InvalidArgument, "unknown averaging kind");
}

double unit_interaction_strength(double z, const Eigen::VectorXd& row, const InteractionCandidate& cand,
                                 AveragingKind kind) {
    if (cand.max_index() >= row.size()) {
        throw Error(ErrorKind::InvalidArgument, "candidate {" + cand.to_string() + "} exceeds row length");
    }
    std::vector<double> values;
    values.reserve(cand.size());
    for (int i : cand.indices()) values.push_back(std::abs(row[i]));
    return z * average(kind, values);
}

void RankedInteractions::sort() {
    std::stable_sort(entries.begin(), entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
        if (a.strength != b.strength) return a.strength > b.strength;
        if (a.candidate.size() != b.candidate.size()) return a.candidate.size() < b.candidate.size();
        return a.candidate < b.candidate;
    });
}

std::vector<InteractionCandidate> unit_proposals(const Eigen::VectorXd& row) {
    const auto p = static_cast<int>(row.size());
    std::vector<int> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&row](int a, int b) { return std::abs(row[a]) > std::abs(row[b]); });
    std::vector<InteractionCandidate> out;
    std::vector<int> members;
    for (int j = 0; j < p; ++j) {
        members.insert(std::upper_bound(members.begin(), members.end(), order[static_cast<std::size_t>(j)]),
                       order[static_cast<std::size_t>(j)]);
        if (j >= 1) out.emplace_back(members);
    }
    return out;
}

RankedInteractions greedy_rank(const Eigen::MatrixXd& first_layer, const AggregatedWeights& z1, AveragingKind kind) {
    if (z1.values.size() != first_layer.rows()) {
        throw Error(ErrorKind::InvalidArgument, "aggregated weights do not match the number of first-layer units");
    }
    std::map<InteractionCandidate, double> strengths;
    for (Eigen::Index r = 0; r < first_layer.rows(); ++r) {
        const Eigen::VectorXd row = first_layer.row(r).transpose();
        for (auto& cand : unit_proposals(row)) {
            const double s = unit_interaction_strength(z1.values[r], row, cand, kind);
            strengths[std::move(cand)] += s;
        }
    }
    RankedInteractions ranked;
    ranked.entries.reserve(strengths.size());
    for (auto& [cand, s] : strengths) ranked.entries.push_back({cand, s});
    ranked.sort();
    return ranked;
}

RankedInteractions rank_interactions(const DenseNetwork& net, AveragingKind kind) {
    if (net.depth() < 1) throw Error(ErrorKind::InvalidArgument, "network has no hidden layer to rank");
    return greedy_rank(net.weights.front(), aggregated_weights(net, 1), kind);
}

Eigen::MatrixXd pairwise_strengths(const Eigen::MatrixXd& first_layer, const AggregatedWeights& z1) {
    if (z1.values.size() != first_layer.rows()) {
        throw Error(ErrorKind::InvalidArgument, "aggregated weights do not match the number of first-layer units");
    }
    const Eigen::Index p = first_layer.cols();
    const Eigen::MatrixXd a = first_layer.cwiseAbs();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index s = 0; s < a.rows(); ++s) {
        const double z = z1.values[s];
        for (Eigen::Index i = 0; i < p; ++i) {
            for (Eigen::Index j = i + 1; j < p; ++j) out(i, j) += z * std::min(a(s, i), a(s, j));
        }
    }
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = i + 1; j < p; ++j) out(j, i) = out(i, j);
    }
    return out;
}

Eigen::MatrixXd pairwise_strengths(const DenseNetwork& net) {
    if (net.depth() < 1) throw Error(ErrorKind::InvalidArgument, "network has no hidden layer");
    return pairwise_strengths(net.weights.front(), aggregated_weights(net, 1));
}

RankedInteractions prune_subsets(const RankedInteractions& ranked) {
    RankedInteractions out;
    for (std::size_t k = 0; k < ranked.entries.size(); ++k) {
        const auto& cand = ranked.entries[k].candidate;
        bool redundant = false;
        for (std::size_t above = 0; above < k && !redundant; ++above) {
            redundant = cand.is_subset_of(ranked.entries[above].candidate);
        }
        if (!redundant) out.entries.push_back(ranked.entries[k]);
    }
    return out;
}

InteractionGraph::InteractionGraph(const DenseNetwork& net) : sizes_(net.layer_sizes) {
    net.check_shapes();
    for (const auto& w : net.weights) {
        std::vector<std::vector<int>> layer(static_cast<std::size_t>(w.rows()));
        for (Eigen::Index j = 0; j < w.rows(); ++j) {
            for (Eigen::Index i = 0; i < w.cols(); ++i) {
                if (w(j, i) != 0.0) layer[static_cast<std::size_t>(j)].push_back(static_cast<int>(i));
            }
        }
        parents_.push_back(std::move(layer));
    }
}

int InteractionGraph::units(int layer) const {
    if (layer < 0 || layer >= static_cast<int>(sizes_.size())) {
        throw Error(ErrorKind::InvalidArgument, "layer " + std::to_string(layer) + " does not exist");
    }
    return sizes_[static_cast<std::size_t>(layer)];
}

std::vector<int> InteractionGraph::input_ancestors(int layer, int unit) const {
    if (unit < 0 || unit >= units(layer)) {
        throw Error(ErrorKind::InvalidArgument, "unit " + std::to_string(unit) + " does not exist in layer " +
                                                    std::to_string(layer));
    }
    std::vector<char> frontier(static_cast<std::size_t>(sizes_[static_cast<std::size_t>(layer)]), 0);
    frontier[static_cast<std::size_t>(unit)] = 1;
    for (int l = layer; l > 0; --l) {
        std::vector<char> below(static_cast<std::size_t>(sizes_[static_cast<std::size_t>(l - 1)]), 0);
        const auto& parents = parents_[static_cast<std::size_t>(l - 1)];
        for (std::size_t j = 0; j < frontier.size(); ++j) {
            if (!frontier[j]) continue;
            for (int i : parents[j]) below[static_cast<std::size_t>(i)] = 1;
        }
        frontier = std::move(below);
    }
    std::vector<int> out;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
        if (frontier[i]) out.push_back(static_cast<int>(i));
    }
    return out;
}

InteractionGraph build_graph(const DenseNetwork& net) { return InteractionGraph(net); }

double bivariate_relu_beta5(double a1, double a2) {
    const double s1 = a1 * a1;
    const double s2 = a2 * a2;
    const double hi = std::max(s1, s2);
    const double lo = std::min(s1, s2);
    if (hi == 0.0 || lo == 0.0) return 0.0;
    return 0.75 * (1.0 - lo / (5.0 * hi)) * std::min(std::abs(a1), std::abs(a2));
}

std::array<double, 6> beta5_numeric_oracle(double a1, double a2, int grid) {
    if (grid < 50) throw Error(ErrorKind::InvalidArgument, "grid must be at least 50");
    Eigen::Matrix<double, 6, 6> normal = Eigen::Matrix<double, 6, 6>::Zero();
    Eigen::Matrix<double, 6, 1> rhs = Eigen::Matrix<double, 6, 1>::Zero();
    Eigen::Matrix<double, 6, 1> basis;
    for (int u = 0; u < grid; ++u) {
        const double x1 = -1.0 + (2.0 * u + 1.0) / grid;
        for (int v = 0; v < grid; ++v) {
            const double x2 = -1.0 + (2.0 * v + 1.0) / grid;
            basis << 1.0, x1, x2, x1 * x1, x2 * x2, x1 * x2;
            const double y = std::max(a1 * x1 + a2 * x2, 0.0);
            normal.noalias() += basis * basis.transpose();
            rhs.noalias() += y * basis;
        }
    }
    Eigen::LDLT<Eigen::Matrix<double, 6, 6>> solver(normal);
    if (solver.info() != Eigen::Success || !solver.isPositive()) {
        throw Error(ErrorKind::Domain, "singular normal equations in quadratic fit");
    }
    const Eigen::Matrix<double, 6, 1> beta = solver.solve(rhs);
    std::array<double, 6> out{};
    for (int k = 0; k < 6; ++k) out[static_cast<std::size_t>(k)] = beta[k];
    return out;
}

void write_ranking_csv(const RankedInteractions& ranked, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
    out << "rank,indices,strength\n";
    for (std::size_t k = 0; k < ranked.entries.size(); ++k) {
        out << (k + 1) << ",\"" << ranked.entries[k].candidate.to_string() << "\","
            << format_double(ranked.entries[k].strength) << '\n';
    }
}

RankedInteractions read_ranking_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open ranking '" + path.string() + "'");
    std::string line;
    std::getline(in, line);
    RankedInteractions ranked;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto open = line.find('"');
        const auto close = line.find('"', open + 1);
        if (open == std::string::npos || close == std::string::npos || close + 1 >= line.size()) {
            throw Error(ErrorKind::Parse, "malformed ranking line '" + line + "'");
        }
        auto cand = InteractionCandidate::parse(line.substr(open + 1, close - open - 1));
        double strength = 0.0;
        try {
            strength = std::stod(line.substr(close + 2));
        } catch (const std::exception&) {
            throw Error(ErrorKind::Parse, "malformed strength in '" + line + "'");
        }
        ranked.entries.push_back({std::move(cand), strength});
    }
    return ranked;
}

}  // namespace nid
