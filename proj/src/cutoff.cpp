#include "nid/cutoff.hpp"

#include <cmath>
#include <fstream>
#include <optional>

#include "json.hpp"
#include "nid/metrics.hpp"
#include "nid/parallel.hpp"
#include "nid/random.hpp"

namespace nid {

CompositeModel build_cutoff_model(int p, const std::vector<InteractionCandidate>& interactions, std::uint64_t seed,
                                  Task task, const std::vector<int>& hidden) {
    if (p < 1) throw Error(ErrorKind::InvalidArgument, "p must be positive");
    CompositeModel model;
    model.task = task;
    std::vector<int> uni{1};
    uni.insert(uni.end(), hidden.begin(), hidden.end());
    for (int i = 0; i < p; ++i) {
        model.univariate.push_back(init_network(uni, derive_seed(seed, {1, static_cast<std::uint64_t>(i)})));
    }
    for (std::size_t k = 0; k < interactions.size(); ++k) {
        const auto& cand = interactions[k];
        if (cand.max_index() >= p) {
            throw Error(ErrorKind::InvalidArgument, "interaction {" + cand.to_string() + "} exceeds p");
        }
        std::vector<int> sizes{static_cast<int>(cand.size())};
        sizes.insert(sizes.end(), hidden.begin(), hidden.end());
        model.interactions.push_back({cand, init_network(sizes, derive_seed(seed, {2, k}))});
    }
    return model;
}

double validation_metric(const TrainedModel& trained, const Dataset& data) {
    if (trained.model.task == Task::Regression) return std::sqrt(trained.best_valid_loss);
    const auto scores = predict_rows(trained.model, data, data.splits.valid);
    std::vector<std::uint8_t> labels;
    for (auto r : data.splits.valid) labels.push_back(data.target[static_cast<Eigen::Index>(r)] > 0.5 ? 1 : 0);
    return auc(std::span<const double>(scores.data(), static_cast<std::size_t>(scores.size())), labels);
}

bool reaches_reference(Task task, double metric, double reference) {
    return task == Task::Regression ? metric <= reference : metric >= reference;
}

CutoffResult find_cutoff(const RankedInteractions& ranked, const Dataset& data, double reference_metric,
                         const TrainingConfig& cfg, int k_max, const CutoffOptions& options) {
    if (k_max < 0) throw Error(ErrorKind::InvalidArgument, "K_max must be nonnegative");
    if (ranked.empty()) throw Error(ErrorKind::InvalidArgument, "cutoff needs a nonempty ranking");
    cfg.validate();

    CutoffResult result;
    result.task = data.task;
    result.reference_metric = reference_metric;
    result.k_max = std::min<int>(k_max, static_cast<int>(ranked.size()));
    for (int k = 0; k < result.k_max; ++k) result.ranked.push_back(ranked.entries[static_cast<std::size_t>(k)].candidate);

    const auto count = static_cast<std::size_t>(result.k_max) + 1;
    std::vector<std::optional<double>> metrics(count);
    std::vector<std::string> failures(count);
    const int p = static_cast<int>(data.cols());
    parallel_for(count, options.jobs, [&](std::size_t k) {
        const std::vector<InteractionCandidate> top(result.ranked.begin(), result.ranked.begin() + static_cast<long>(k));
        TrainingConfig run = cfg;
        run.seed = derive_seed(cfg.seed, {k});
        try {
            auto model = build_cutoff_model(p, top, derive_seed(cfg.seed, {k, 1}), data.task, options.hidden);
            metrics[k] = validation_metric(train(std::move(model), data, run), data);
        } catch (const TrainingDiverged& e) {
            failures[k] = e.what();
        }
    });

    for (std::size_t k = 0; k < count; ++k) {
        if (!metrics[k]) throw CutoffFailed(static_cast<int>(k), result.curve, failures[k]);
        result.curve.push_back(*metrics[k]);
    }
    result.k_stop = result.k_max;
    for (int k = 0; k <= result.k_max; ++k) {
        if (reaches_reference(result.task, result.curve[static_cast<std::size_t>(k)], reference_metric)) {
            result.k_stop = k;
            break;
        }
    }
    RankedInteractions top;
    for (int k = 0; k < result.k_stop; ++k) top.entries.push_back(ranked.entries[static_cast<std::size_t>(k)]);
    for (auto& e : prune_subsets(top).entries) result.selected.push_back(e.candidate);
    return result;
}

std::string cutoff_report(const CutoffResult& result) {
    using json = nlohmann::json;
    json j;
    j["task"] = std::string(to_string(result.task));
    j["metric"] = result.task == Task::Regression ? "validation_rmse_scaled" : "validation_auc";
    j["reference_metric"] = result.reference_metric;
    j["k_max"] = result.k_max;
    j["k_stop"] = result.k_stop;
    j["curve"] = json::array();
    for (std::size_t k = 0; k < result.curve.size(); ++k) {
        json point{{"k", k}, {"metric", result.curve[k]}};
        point["added"] = k == 0 ? json(nullptr) : json(result.ranked[k - 1].to_string());
        j["curve"].push_back(point);
    }
    j["selected"] = json::array();
    for (const auto& c : result.selected) j["selected"].push_back(c.to_string());
    return j.dump(1) + "\n";
}

void write_cutoff_report(const CutoffResult& result, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
    out << cutoff_report(result);
}

}  // namespace nid
