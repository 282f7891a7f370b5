#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nid/interaction.hpp"
#include "nid/metrics.hpp"
#include "nid/nn.hpp"
#include "nid/synth.hpp"

namespace nid {

enum class Architecture { Mlp, MlpM };

std::string_view to_string(Architecture arch);
Architecture parse_architecture(std::string_view text);

inline constexpr double kDefaultL1 = 1.5e-5;

struct SuiteOptions {
    std::vector<SynthFunction> functions = all_functions();
    int trials = 10;
    std::size_t samples = 30000;
    std::vector<int> hidden = {140, 100, 60, 20};
    std::vector<int> univariate_hidden = {10, 10, 10};
    TrainingConfig training = [] {
        TrainingConfig cfg;
        cfg.l1_strength = kDefaultL1;
        return cfg;
    }();
    /// When nonempty, every trial trains once per value and keeps the model
    /// with the lowest validation loss; training.l1_strength is then ignored.
    std::vector<double> l1_grid;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    int jobs = 1;
    int drop_extremes = 1;

    void validate() const;
};

/// Dataset of one trial: generate(f) followed by add_noise(sigma). The
/// noise step standardizes even at sigma = 0 so every sigma shares data.
Dataset trial_dataset(SynthFunction f, int trial, const SuiteOptions& options);

struct TrialOutcome {
    SynthFunction function = SynthFunction::F1;
    int trial = 0;
    Architecture architecture = Architecture::MlpM;
    double l1_strength = 0.0;
    double pairwise_auc = 0.0;
    /// count_correct_before_fp per averaging kind, in all_averaging_kinds() order.
    std::array<int, 6> correct_before_fp{};
    double top_rank_recall = 0.0;  // minimum averaging
    RankedInteractions ranking;    // minimum averaging
    TrainedModel trained;
};

TrialOutcome run_trial(SynthFunction f, int trial, Architecture arch, const SuiteOptions& options);

/// Every (function, trial, architecture) combination, ordered by function,
/// then trial, then architecture as listed. Runs options.jobs at a time.
std::vector<TrialOutcome> run_suite(const SuiteOptions& options, const std::vector<Architecture>& architectures);

struct Table2Row {
    SynthFunction function;
    Architecture architecture;
    TrialSummary auc;
};

struct Table2Report {
    std::vector<Table2Row> rows;
    /// Mean of per-function means, per architecture (same order as requested).
    std::vector<std::pair<Architecture, double>> averages;

    const Table2Row& row(SynthFunction f, Architecture arch) const;
    double average(Architecture arch) const;
};

Table2Report table2(const std::vector<TrialOutcome>& outcomes, int drop_extremes);

struct AveragingCounts {
    AveragingKind kind;
    int mlp = 0;
    int mlp_m = 0;
    int combined() const { return mlp + mlp_m; }
};

/// Summed count_correct_before_fp over every outcome, per averaging kind.
std::vector<AveragingCounts> averaging_comparison(const std::vector<TrialOutcome>& outcomes);

struct NoisePoint {
    double sigma = 0.0;
    Architecture architecture = Architecture::MlpM;
    TrialSummary recall;  // nothing dropped; one value per (function, trial)
};

std::vector<NoisePoint> noise_points(double sigma, const std::vector<TrialOutcome>& outcomes);

std::vector<NoisePoint> noise_sweep(SuiteOptions options, const std::vector<double>& sigmas,
                                    const std::vector<Architecture>& architectures);

void write_trials_csv(const std::vector<TrialOutcome>& outcomes, const std::filesystem::path& path);
void write_table2_csv(const Table2Report& report, const std::filesystem::path& path);
void write_averaging_csv(const std::vector<AveragingCounts>& counts, const std::filesystem::path& path);
void write_noise_csv(const std::vector<NoisePoint>& points, const std::filesystem::path& path);

std::string format_table2(const Table2Report& report);
std::string format_averaging(const std::vector<AveragingCounts>& counts);
std::string format_noise(const std::vector<NoisePoint>& points);

}  // namespace nid
