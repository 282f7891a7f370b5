#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "nid/candidate.hpp"
#include "nid/nn.hpp"

namespace nid {

enum class AveragingKind { Maximum, RootMeanSquare, ArithmeticMean, GeometricMean, HarmonicMean, Minimum };

std::string_view to_string(AveragingKind kind);
AveragingKind parse_averaging(std::string_view text);
/// In generalized-mean order: maximum, rms, arithmetic, geometric, harmonic, minimum.
std::vector<AveragingKind> all_averaging_kinds();

/// Influence of each unit of hidden layer `layer` on the output:
/// z^(l) = |w_y|' |W^(L)| ... |W^(l+1)|.
struct AggregatedWeights {
    int layer = 0;
    Eigen::VectorXd values;
};

/// layer in 1..L; z^(L) = |w_y|.
AggregatedWeights aggregated_weights(const DenseNetwork& net, int layer);

/// Named mean of nonnegative values. Geometric and harmonic return 0 when
/// any value is 0.
double average(AveragingKind kind, std::span<const double> values);

/// omega_i(I) = z_i * mean(|w_row| restricted to I).
double unit_interaction_strength(double z, const Eigen::VectorXd& row, const InteractionCandidate& cand,
                                 AveragingKind kind);

struct RankedEntry {
    InteractionCandidate candidate;
    double strength = 0.0;
};

/// Candidates by strength, descending; ties go to smaller candidates, then
/// lexicographically smaller index lists.
struct RankedInteractions {
    std::vector<RankedEntry> entries;

    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
    void sort();
};

/// Top-j features of a row by |weight|, ties to the lower index, for every
/// j = 2..p. Returned sets are 0-based and sorted ascending.
std::vector<InteractionCandidate> unit_proposals(const Eigen::VectorXd& row);

/// Greedy variable-order ranking over the first-layer weights (p1 x p).
/// Rows are visited in ascending order, orders ascending, so the summed
/// strengths are reproducible bit for bit.
RankedInteractions greedy_rank(const Eigen::MatrixXd& first_layer, const AggregatedWeights& z1,
                               AveragingKind kind = AveragingKind::Minimum);

/// Convenience: greedy_rank on the first layer of a network.
RankedInteractions rank_interactions(const DenseNetwork& net, AveragingKind kind = AveragingKind::Minimum);

/// p x p symmetric matrix with entry (i,j) = sum_s z_s min(|W_si|, |W_sj|)
/// and a zero diagonal.
Eigen::MatrixXd pairwise_strengths(const Eigen::MatrixXd& first_layer, const AggregatedWeights& z1);
Eigen::MatrixXd pairwise_strengths(const DenseNetwork& net);

/// Drops every candidate that is a subset of a candidate ranked above it.
RankedInteractions prune_subsets(const RankedInteractions& ranked);

/// Directed graph over inputs and hidden units with an edge wherever the
/// connecting weight is nonzero.
class InteractionGraph {
public:
    explicit InteractionGraph(const DenseNetwork& net);

    int layers() const { return static_cast<int>(parents_.size()); }
    int units(int layer) const;

    /// Input features (0-based, ascending) with a path to unit `unit`
    /// (0-based) of layer `layer` (0 = inputs, 1..L hidden).
    std::vector<int> input_ancestors(int layer, int unit) const;

private:
    std::vector<int> sizes_;
    // parents_[l][j]: units of layer l with a nonzero edge into unit j of layer l+1
    std::vector<std::vector<std::vector<int>>> parents_;
};

InteractionGraph build_graph(const DenseNetwork& net);

/// |beta_5| of the best quadratic fit to max(a1 x1 + a2 x2, 0) on [-1,1]^2.
double bivariate_relu_beta5(double a1, double a2);

/// Least-squares fit of b0 + b1 x1 + b2 x2 + b3 x1^2 + b4 x2^2 + b5 x1 x2 to
/// max(a1 x1 + a2 x2, 0) over the cell centers of a grid x grid lattice on
/// [-1,1]^2. Test support for the closed form above.
std::array<double, 6> beta5_numeric_oracle(double a1, double a2, int grid);

/// rank,indices,strength with 1-based quoted index lists.
void write_ranking_csv(const RankedInteractions& ranked, const std::filesystem::path& path);
RankedInteractions read_ranking_csv(const std::filesystem::path& path);

}  // namespace nid
