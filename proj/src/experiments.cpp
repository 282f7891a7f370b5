#include "nid/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nid/error.hpp"
#include "nid/parallel.hpp"
#include "nid/random.hpp"

namespace nid {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
    return out;
}

std::string fixed(double value, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, value);
    return buf;
}

}  // namespace

std::string_view to_string(Architecture arch) { return arch == Architecture::Mlp ? "MLP" : "MLP-M"; }

Architecture parse_architecture(std::string_view text) {
    if (text == "MLP" || text == "mlp") return Architecture::Mlp;
    if (text == "MLP-M" || text == "mlp-m") return Architecture::MlpM;
    throw Error(ErrorKind::InvalidConfig, "unknown architecture '" + std::string(text) + "'");
}

void SuiteOptions::validate() const {
    if (functions.empty()) throw Error(ErrorKind::InvalidConfig, "no functions selected");
    if (trials < 1) throw Error(ErrorKind::InvalidConfig, "trials must be positive");
    if (samples < 3) throw Error(ErrorKind::InvalidConfig, "need at least 3 samples");
    if (sigma < 0.0) throw Error(ErrorKind::InvalidConfig, "sigma must be nonnegative");
    if (jobs < 1) throw Error(ErrorKind::InvalidConfig, "jobs must be positive");
    for (double l1 : l1_grid) {
        if (!(l1 >= 0.0)) throw Error(ErrorKind::InvalidConfig, "L1 grid values must be nonnegative");
    }
    training.validate();
}

Dataset trial_dataset(SynthFunction f, int trial, const SuiteOptions& options) {
    const auto fid = static_cast<std::uint64_t>(f);
    const auto t = static_cast<std::uint64_t>(trial);
    Dataset data = generate(f, options.samples, derive_seed(options.seed, {fid, t}));
    return add_noise(std::move(data), options.sigma, derive_seed(options.seed, {fid, t, 0x401}));
}

TrialOutcome run_trial(SynthFunction f, int trial, Architecture arch, const SuiteOptions& options) {
    const Dataset data = trial_dataset(f, trial, options);
    const auto fid = static_cast<std::uint64_t>(f);
    const auto t = static_cast<std::uint64_t>(trial);
    const auto a = static_cast<std::uint64_t>(arch);
    const std::uint64_t model_seed = derive_seed(options.seed, {fid, t, 0x100 + a});
    const auto p = static_cast<int>(data.cols());
    const CompositeModel initial = arch == Architecture::Mlp
                                       ? make_mlp(p, options.hidden, model_seed, data.task)
                                       : make_mlp_m(p, options.hidden, options.univariate_hidden, model_seed, data.task);

    TrainingConfig cfg = options.training;
    cfg.seed = derive_seed(options.seed, {fid, t, 0x200 + a});
    const std::vector<double> grid = options.l1_grid.empty() ? std::vector<double>{cfg.l1_strength} : options.l1_grid;

    TrialOutcome outcome;
    outcome.function = f;
    outcome.trial = trial;
    outcome.architecture = arch;
    bool have = false;
    for (double l1 : grid) {
        cfg.l1_strength = l1;
        TrainedModel trained = train(initial, data, cfg);
        if (!have || trained.best_valid_loss < outcome.trained.best_valid_loss) {
            outcome.trained = std::move(trained);
            outcome.l1_strength = l1;
            have = true;
        }
    }

    const GroundTruth truth = ground_truth(f);
    const DenseNetwork& main = *outcome.trained.model.main;
    outcome.pairwise_auc = pairwise_auc(pairwise_strengths(main), truth);
    const auto kinds = all_averaging_kinds();
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        auto ranked = rank_interactions(main, kinds[k]);
        outcome.correct_before_fp[k] = count_correct_before_fp(ranked, truth);
        if (kinds[k] == AveragingKind::Minimum) {
            outcome.top_rank_recall = top_rank_recall(ranked, truth);
            outcome.ranking = std::move(ranked);
        }
    }
    return outcome;
}

std::vector<TrialOutcome> run_suite(const SuiteOptions& options, const std::vector<Architecture>& architectures) {
    options.validate();
    if (architectures.empty()) throw Error(ErrorKind::InvalidConfig, "no architectures selected");
    struct Job {
        SynthFunction f;
        int trial;
        Architecture arch;
    };
    std::vector<Job> jobs;
    for (auto f : options.functions) {
        for (int t = 0; t < options.trials; ++t) {
            for (auto arch : architectures) jobs.push_back({f, t, arch});
        }
    }
    std::vector<TrialOutcome> outcomes(jobs.size());
    parallel_for(jobs.size(), options.jobs, [&](std::size_t i) {
        outcomes[i] = run_trial(jobs[i].f, jobs[i].trial, jobs[i].arch, options);
    });
    return outcomes;
}

const Table2Row& Table2Report::row(SynthFunction f, Architecture arch) const {
    for (const auto& r : rows) {
        if (r.function == f && r.architecture == arch) return r;
    }
    throw Error(ErrorKind::InvalidArgument, "no row for " + to_string(f) + " " + std::string(to_string(arch)));
}

double Table2Report::average(Architecture arch) const {
    for (const auto& [a, v] : averages) {
        if (a == arch) return v;
    }
    throw Error(ErrorKind::InvalidArgument, "no average for " + std::string(to_string(arch)));
}

Table2Report table2(const std::vector<TrialOutcome>& outcomes, int drop_extremes) {
    Table2Report report;
    std::vector<SynthFunction> functions;
    std::vector<Architecture> archs;
    for (const auto& o : outcomes) {
        if (std::find(functions.begin(), functions.end(), o.function) == functions.end()) functions.push_back(o.function);
        if (std::find(archs.begin(), archs.end(), o.architecture) == archs.end()) archs.push_back(o.architecture);
    }
    for (auto f : functions) {
        for (auto arch : archs) {
            std::vector<double> aucs;
            for (const auto& o : outcomes) {
                if (o.function == f && o.architecture == arch) aucs.push_back(o.pairwise_auc);
            }
            if (aucs.empty()) continue;
            report.rows.push_back({f, arch, aggregate_trials(aucs, drop_extremes)});
        }
    }
    for (auto arch : archs) {
        double sum = 0.0;
        int count = 0;
        for (const auto& r : report.rows) {
            if (r.architecture == arch) {
                sum += r.auc.mean;
                ++count;
            }
        }
        report.averages.emplace_back(arch, count ? sum / count : 0.0);
    }
    return report;
}

std::vector<AveragingCounts> averaging_comparison(const std::vector<TrialOutcome>& outcomes) {
    const auto kinds = all_averaging_kinds();
    std::vector<AveragingCounts> counts;
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        AveragingCounts c{kinds[k]};
        for (const auto& o : outcomes) {
            (o.architecture == Architecture::Mlp ? c.mlp : c.mlp_m) += o.correct_before_fp[k];
        }
        counts.push_back(c);
    }
    return counts;
}

std::vector<NoisePoint> noise_points(double sigma, const std::vector<TrialOutcome>& outcomes) {
    std::vector<NoisePoint> points;
    for (auto arch : {Architecture::Mlp, Architecture::MlpM}) {
        std::vector<double> recalls;
        for (const auto& o : outcomes) {
            if (o.architecture == arch) recalls.push_back(o.top_rank_recall);
        }
        if (!recalls.empty()) points.push_back({sigma, arch, aggregate_trials(recalls, 0)});
    }
    return points;
}

std::vector<NoisePoint> noise_sweep(SuiteOptions options, const std::vector<double>& sigmas,
                                    const std::vector<Architecture>& architectures) {
    std::vector<NoisePoint> points;
    for (double sigma : sigmas) {
        options.sigma = sigma;
        const auto part = noise_points(sigma, run_suite(options, architectures));
        points.insert(points.end(), part.begin(), part.end());
    }
    return points;
}

void write_trials_csv(const std::vector<TrialOutcome>& outcomes, const std::filesystem::path& path) {
    auto out = open_output(path);
    out << "function,architecture,trial,l1,pairwise_auc,top_rank_recall,best_valid_loss,best_epoch";
    for (auto kind : all_averaging_kinds()) out << ",correct_" << to_string(kind);
    out << "\n";
    for (const auto& o : outcomes) {
        out << to_string(o.function) << ',' << to_string(o.architecture) << ',' << o.trial + 1 << ','
            << format_double(o.l1_strength) << ',' << format_double(o.pairwise_auc) << ','
            << format_double(o.top_rank_recall) << ',' << format_double(o.trained.best_valid_loss) << ','
            << o.trained.best_epoch;
        for (int c : o.correct_before_fp) out << ',' << c;
        out << "\n";
    }
}

void write_table2_csv(const Table2Report& report, const std::filesystem::path& path) {
    auto out = open_output(path);
    out << "function,architecture,auc_mean,auc_std,trials,trials_dropped\n";
    for (const auto& r : report.rows) {
        out << to_string(r.function) << ',' << to_string(r.architecture) << ',' << format_double(r.auc.mean) << ','
            << format_double(r.auc.stddev) << ',' << r.auc.values.size() << ',' << r.auc.trials_dropped << "\n";
    }
    for (const auto& [arch, avg] : report.averages) {
        out << "average," << to_string(arch) << ',' << format_double(avg) << ",,,\n";
    }
}

void write_averaging_csv(const std::vector<AveragingCounts>& counts, const std::filesystem::path& path) {
    auto out = open_output(path);
    out << "averaging,mlp,mlp_m,combined\n";
    for (const auto& c : counts) {
        out << to_string(c.kind) << ',' << c.mlp << ',' << c.mlp_m << ',' << c.combined() << "\n";
    }
}

void write_noise_csv(const std::vector<NoisePoint>& points, const std::filesystem::path& path) {
    auto out = open_output(path);
    out << "sigma,architecture,recall_mean,recall_std,trials\n";
    for (const auto& p : points) {
        out << format_double(p.sigma) << ',' << to_string(p.architecture) << ',' << format_double(p.recall.mean)
            << ',' << format_double(p.recall.stddev) << ',' << p.recall.values.size() << "\n";
    }
}

std::string format_table2(const Table2Report& report) {
    std::ostringstream os;
    os << "pairwise interaction AUC (mean +- std after dropping extremes)\n";
    for (const auto& r : report.rows) {
        os << "  " << to_string(r.function) << "  " << to_string(r.architecture) << "  " << fixed(r.auc.mean)
           << " +- " << fixed(r.auc.stddev) << "\n";
    }
    for (const auto& [arch, avg] : report.averages) os << "  average  " << to_string(arch) << "  " << fixed(avg) << "\n";
    return os.str();
}

std::string format_averaging(const std::vector<AveragingCounts>& counts) {
    std::ostringstream os;
    os << "correct interactions ranked before the first false positive\n";
    os << "  averaging            MLP  MLP-M  combined\n";
    for (const auto& c : counts) {
        char line[128];
        std::snprintf(line, sizeof line, "  %-18s %5d  %5d  %8d\n", std::string(to_string(c.kind)).c_str(), c.mlp,
                      c.mlp_m, c.combined());
        os << line;
    }
    return os.str();
}

std::string format_noise(const std::vector<NoisePoint>& points) {
    std::ostringstream os;
    os << "top-rank recall under input and target noise\n";
    for (const auto& p : points) {
        os << "  sigma " << fixed(p.sigma, 2) << "  " << to_string(p.architecture) << "  " << fixed(p.recall.mean)
           << " +- " << fixed(p.recall.stddev) << "\n";
    }
    return os.str();
}

}  // namespace nid
