#include "nid/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nid/error.hpp"

namespace nid {

double auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    if (scores.size() != labels.size()) throw Error(ErrorKind::InvalidArgument, "scores and labels differ in length");
    const std::size_t n = scores.size();
    std::size_t positives = 0;
    for (auto l : labels) positives += l ? 1 : 0;
    const std::size_t negatives = n - positives;
    if (positives == 0 || negatives == 0) {
        throw Error(ErrorKind::UndefinedMetric, "AUC needs at least one positive and one negative label");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double positive_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double mid_rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            if (labels[order[k]]) positive_rank_sum += mid_rank;
        }
        i = j + 1;
    }
    const double np = static_cast<double>(positives);
    const double nn = static_cast<double>(negatives);
    return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

std::vector<std::uint8_t> pairwise_labels(const GroundTruth& truth, int p) {
    std::vector<std::uint8_t> labels;
    labels.reserve(static_cast<std::size_t>(p) * static_cast<std::size_t>(std::max(p - 1, 0)) / 2);
    for (const auto& t : truth.interactions) {
        if (t.max_index() >= p) throw Error(ErrorKind::InvalidArgument, "ground truth index exceeds p");
    }
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            bool positive = false;
            for (const auto& t : truth.interactions) {
                if (t.contains(i) && t.contains(j)) {
                    positive = true;
                    break;
                }
            }
            labels.push_back(positive ? 1 : 0);
        }
    }
    return labels;
}

std::vector<double> upper_triangle(const Eigen::MatrixXd& m) {
    std::vector<double> out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < m.cols(); ++j) out.push_back(m(i, j));
    }
    return out;
}

double pairwise_auc(const Eigen::MatrixXd& strengths, const GroundTruth& truth) {
    const auto scores = upper_triangle(strengths);
    const auto labels = pairwise_labels(truth, static_cast<int>(strengths.rows()));
    return auc(scores, labels);
}

int count_correct_before_fp(const RankedInteractions& ranked, const GroundTruth& truth) {
    int correct = 0;
    for (const auto& entry : ranked.entries) {
        const auto& cand = entry.candidate;
        bool exact = false;
        bool redundant_subset = false;
        for (const auto& t : truth.interactions) {
            if (cand == t) exact = true;
            else if (cand.is_strict_subset_of(t)) redundant_subset = true;
        }
        if (exact) ++correct;
        else if (!redundant_subset) break;
    }
    return correct;
}

double top_rank_recall(const RankedInteractions& ranked, const GroundTruth& truth) {
    if (truth.empty()) throw Error(ErrorKind::UndefinedMetric, "top-rank recall needs a nonempty ground truth");
    return static_cast<double>(count_correct_before_fp(ranked, truth)) / static_cast<double>(truth.size());
}

TrialSummary aggregate_trials(std::span<const double> values, int drop_extremes) {
    if (drop_extremes < 0) throw Error(ErrorKind::InvalidArgument, "drop count must be nonnegative");
    if (values.size() <= 2 * static_cast<std::size_t>(drop_extremes)) {
        throw Error(ErrorKind::InvalidArgument, "too few trials to drop " + std::to_string(drop_extremes) +
                                                    " from each end");
    }
    TrialSummary summary;
    summary.values.assign(values.begin(), values.end());
    summary.trials_dropped = 2 * drop_extremes;
    std::vector<double> kept(values.begin(), values.end());
    std::sort(kept.begin(), kept.end());
    kept.erase(kept.end() - drop_extremes, kept.end());
    kept.erase(kept.begin(), kept.begin() + drop_extremes);
    const double n = static_cast<double>(kept.size());
    summary.mean = std::accumulate(kept.begin(), kept.end(), 0.0) / n;
    if (kept.size() > 1) {
        double sq = 0.0;
        for (double v : kept) sq += (v - summary.mean) * (v - summary.mean);
        summary.stddev = std::sqrt(sq / (n - 1.0));
    }
    return summary;
}

}  // namespace nid
