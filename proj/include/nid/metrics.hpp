#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "nid/interaction.hpp"
#include "nid/synth.hpp"

namespace nid {

/// Area under the ROC curve as the Mann-Whitney statistic; tied scores
/// share their average rank. Throws UndefinedMetric without both classes.
double auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

/// One label per unordered pair {i,j}, i < j, in row-major upper-triangle
/// order; positive iff the pair lies inside some true interaction.
std::vector<std::uint8_t> pairwise_labels(const GroundTruth& truth, int p);

/// Upper triangle of a p x p matrix in the same order as pairwise_labels.
std::vector<double> upper_triangle(const Eigen::MatrixXd& m);

/// AUC of a pairwise strength matrix against the pairwise ground truth.
double pairwise_auc(const Eigen::MatrixXd& strengths, const GroundTruth& truth);

/// Number of true interactions matched exactly, scanning from the top and
/// skipping strict subsets of true interactions, before the first
/// candidate that is neither. Zero for empty truth.
int count_correct_before_fp(const RankedInteractions& ranked, const GroundTruth& truth);

/// count_correct_before_fp / |truth|. Throws UndefinedMetric on empty truth.
double top_rank_recall(const RankedInteractions& ranked, const GroundTruth& truth);

struct TrialSummary {
    std::vector<double> values;  // as supplied
    double mean = 0.0;
    double stddev = 0.0;  // sample deviation of the kept values; 0 when one is kept
    int trials_dropped = 0;
};

/// Drops the `drop_extremes` largest and smallest values, then summarizes.
TrialSummary aggregate_trials(std::span<const double> values, int drop_extremes);

}  // namespace nid
