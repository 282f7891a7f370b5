#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nid/error.hpp"
#include "nid/interaction.hpp"
#include "nid/nn.hpp"

namespace nid {

/// L2 strength used for every MLP-Cutoff fit.
inline constexpr double kCutoffL2 = 1e-4;

/// GAM of p univariate networks plus one network per interaction; there is
/// no main network. Sub-networks use `hidden` (10-10-10 by default).
CompositeModel build_cutoff_model(int p, const std::vector<InteractionCandidate>& interactions,
                                  std::uint64_t seed = 0, Task task = Task::Regression,
                                  const std::vector<int>& hidden = {10, 10, 10});

/// Validation RMSE on the standardized target (regression) or validation
/// AUC (classification) of a trained model.
double validation_metric(const TrainedModel& trained, const Dataset& data);

/// True when `metric` reaches or beats `reference` for this task.
bool reaches_reference(Task task, double metric, double reference);

struct CutoffResult {
    Task task = Task::Regression;
    std::vector<InteractionCandidate> ranked;  // top-k_max candidates in rank order
    std::vector<InteractionCandidate> selected;
    std::vector<double> curve;  // metric for K = 0..k_max
    double reference_metric = 0.0;
    int k_stop = 0;
    int k_max = 0;
};

class CutoffFailed : public Error {
public:
    CutoffFailed(int k, std::vector<double> partial_curve, const std::string& reason)
        : Error(ErrorKind::Diverged, "cutoff training failed at K=" + std::to_string(k) + ": " + reason),
          k_(k),
          partial_curve_(std::move(partial_curve)) {}

    int k() const noexcept { return k_; }
    const std::vector<double>& partial_curve() const noexcept { return partial_curve_; }

private:
    int k_;
    std::vector<double> partial_curve_;
};

struct CutoffOptions {
    std::vector<int> hidden = {10, 10, 10};
    int jobs = 1;
};

/// Trains a fresh MLP-Cutoff on the top-K candidates for every K = 0..K_max
/// (K_max is capped at the ranking length), then reports the first K whose
/// validation metric reaches the reference. selected = pruned top-K_stop.
CutoffResult find_cutoff(const RankedInteractions& ranked, const Dataset& data, double reference_metric,
                         const TrainingConfig& cfg, int k_max, const CutoffOptions& options = {});

/// Structured-text (JSON) report: reference, per-K curve with the candidate
/// added at each step, K_stop and the selected interactions.
std::string cutoff_report(const CutoffResult& result);
void write_cutoff_report(const CutoffResult& result, const std::filesystem::path& path);

}  // namespace nid
