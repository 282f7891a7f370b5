// Command-line front end: data generation, training, ranking, pairwise
// heatmaps, cutoff search and the synthetic-suite evaluations.

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nid/cutoff.hpp"
#include "nid/dataset.hpp"
#include "nid/error.hpp"
#include "nid/experiments.hpp"
#include "nid/interaction.hpp"
#include "nid/model_io.hpp"
#include "nid/nn.hpp"
#include "nid/random.hpp"
#include "nid/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

enum ExitCode { kOk = 0, kConfigError = 2, kDataError = 3, kNumericError = 4 };

int exit_code_for(nid::ErrorKind kind) {
    using nid::ErrorKind;
    switch (kind) {
        case ErrorKind::InvalidConfig:
        case ErrorKind::InvalidArgument:
            return kConfigError;
        case ErrorKind::Diverged:
        case ErrorKind::UndefinedMetric:
        case ErrorKind::Domain:
            return kNumericError;
        default:
            return kDataError;
    }
}

std::vector<std::string> split_list(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, sep)) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

std::vector<int> parse_sizes(const std::string& text) {
    std::vector<int> sizes;
    for (const auto& part : split_list(text, ',')) {
        int v = 0;
        try {
            v = std::stoi(part);
        } catch (const std::exception&) {
            throw nid::Error(nid::ErrorKind::InvalidConfig, "bad layer size '" + part + "'");
        }
        if (v < 1) throw nid::Error(nid::ErrorKind::InvalidConfig, "layer sizes must be positive");
        sizes.push_back(v);
    }
    return sizes;
}

std::vector<double> parse_reals(const std::string& text) {
    std::vector<double> values;
    for (const auto& part : split_list(text, ',')) {
        try {
            values.push_back(std::stod(part));
        } catch (const std::exception&) {
            throw nid::Error(nid::ErrorKind::InvalidConfig, "bad number '" + part + "'");
        }
    }
    return values;
}

/// "F1..F10", "F1,F5" or a mix such as "F1..F3,F7".
std::vector<nid::SynthFunction> parse_functions(const std::string& text) {
    std::vector<nid::SynthFunction> out;
    for (const auto& part : split_list(text, ',')) {
        const auto dots = part.find("..");
        if (dots == std::string::npos) {
            out.push_back(nid::parse_function(part));
            continue;
        }
        const int lo = static_cast<int>(nid::parse_function(part.substr(0, dots)));
        const int hi = static_cast<int>(nid::parse_function(part.substr(dots + 2)));
        if (lo > hi) throw nid::Error(nid::ErrorKind::InvalidConfig, "empty function range '" + part + "'");
        for (int k = lo; k <= hi; ++k) out.push_back(static_cast<nid::SynthFunction>(k));
    }
    if (out.empty()) throw nid::Error(nid::ErrorKind::InvalidConfig, "no functions given");
    return out;
}

/// "1,2;3,4,5" with 1-based indices.
std::vector<nid::InteractionCandidate> parse_interactions(const std::string& text) {
    std::vector<nid::InteractionCandidate> out;
    for (const auto& part : split_list(text, ';')) out.push_back(nid::InteractionCandidate::parse(part));
    return out;
}

std::uint64_t fnv1a_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::uint64_t h = 1469598103934665603ULL;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

class Manifest {
public:
    Manifest(std::string command, fs::path dir) : command_(std::move(command)), dir_(std::move(dir)) {}

    void parameter(const std::string& key, json value) { parameters_[key] = std::move(value); }
    void input(const fs::path& path) { inputs_.push_back(path); }
    void output(const std::string& name) { outputs_.push_back(name); }

    void write() const {
        json j;
        j["tool"] = "nid";
        j["tool_version"] = kToolVersion;
        j["model_format_version"] = nid::kModelFormatVersion;
        j["command"] = command_;
        j["parameters"] = parameters_;
        j["inputs"] = json::array();
        for (const auto& p : inputs_) {
            char hash[17];
            std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a_file(p)));
            j["inputs"].push_back({{"path", p.string()}, {"bytes", fs::file_size(p)}, {"fnv1a64", hash}});
        }
        j["outputs"] = outputs_;
        std::ofstream out(dir_ / "manifest.json");
        if (!out) throw nid::Error(nid::ErrorKind::Io, "cannot write manifest in '" + dir_.string() + "'");
        out << j.dump(1) << "\n";
    }

private:
    std::string command_;
    fs::path dir_;
    json parameters_ = json::object();
    std::vector<fs::path> inputs_;
    std::vector<std::string> outputs_;
};

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw nid::Error(nid::ErrorKind::Io, "cannot create '" + dir.string() + "': " + ec.message());
}

void require_file(const fs::path& path) {
    if (!fs::is_regular_file(path)) throw nid::Error(nid::ErrorKind::Io, "no such file '" + path.string() + "'");
}

// ---------------------------------------------------------------------------

struct Common {
    std::uint64_t seed = 0;
    int jobs = 1;
    std::string out = ".";
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "Base random seed")->envname("NID_SEED");
    cmd->add_option("--jobs", c.jobs, "Parallel worker slots")->envname("NID_JOBS")->check(CLI::PositiveNumber);
    cmd->add_option("--out", c.out, "Output directory");
}

struct TrainFlags {
    double l1 = nid::kDefaultL1;
    double l2 = 0.0;
    double lr = 5e-3;
    int batch = 100;
    int epochs = 500;
    int patience = 20;
};

void add_training(CLI::App* cmd, TrainFlags& t) {
    cmd->add_option("--l1", t.l1, "L1 strength on main-network weights");
    cmd->add_option("--l2", t.l2, "L2 strength on all weights");
    cmd->add_option("--lr", t.lr, "Learning rate");
    cmd->add_option("--batch-size", t.batch, "Mini-batch size");
    cmd->add_option("--max-epochs", t.epochs, "Epoch limit");
    cmd->add_option("--patience", t.patience, "Early-stopping patience in epochs");
}

nid::TrainingConfig training_config(const TrainFlags& t, std::uint64_t seed) {
    nid::TrainingConfig cfg;
    cfg.l1_strength = t.l1;
    cfg.l2_strength = t.l2;
    cfg.learning_rate = t.lr;
    cfg.batch_size = t.batch;
    cfg.max_epochs = t.epochs;
    cfg.patience = t.patience;
    cfg.seed = seed;
    cfg.validate();
    return cfg;
}

void record_training(Manifest& m, const nid::TrainingConfig& cfg) {
    m.parameter("l1", cfg.l1_strength);
    m.parameter("l2", cfg.l2_strength);
    m.parameter("learning_rate", cfg.learning_rate);
    m.parameter("batch_size", cfg.batch_size);
    m.parameter("max_epochs", cfg.max_epochs);
    m.parameter("patience", cfg.patience);
    m.parameter("seed", cfg.seed);
}

struct DataFlags {
    std::string data;
    std::string splits;
    std::string task = "regression";
};

void add_data(CLI::App* cmd, DataFlags& d) {
    cmd->add_option("--data", d.data, "Dataset CSV (header row, target in the last column)")->required();
    cmd->add_option("--splits", d.splits, "Split file; random 1/3 splits from --seed when omitted");
    cmd->add_option("--task", d.task, "regression or classification");
}

nid::Dataset load_data(const DataFlags& d, std::uint64_t seed, Manifest& m) {
    require_file(d.data);
    auto data = nid::read_csv(d.data, nid::parse_task(d.task));
    m.input(d.data);
    if (!d.splits.empty()) {
        require_file(d.splits);
        nid::read_splits(data, d.splits);
        m.input(d.splits);
    } else {
        data = nid::split(std::move(data), {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, seed);
    }
    data.validate();
    m.parameter("task", std::string(nid::to_string(data.task)));
    return data;
}

// ---------------------------------------------------------------------------

struct GenData {
    Common common;
    std::string function = "F1";
    std::size_t n = 30000;
    double sigma = 0.0;
    int large_p = 0;
    int rank = 5;
    double density = 0.02;
    double noise_var = 0.1;
};

void cmd_gen_data(const GenData& g) {
    const fs::path dir = g.common.out;
    ensure_dir(dir);
    Manifest m("gen-data", dir);
    nid::Dataset data;
    nid::GroundTruth truth;
    if (g.large_p > 0) {
        std::tie(data, truth) = nid::generate_large_p(g.large_p, g.n, g.rank, g.density, g.noise_var, g.common.seed);
        m.parameter("generator", "large-p");
        m.parameter("p", g.large_p);
        m.parameter("rank", g.rank);
        m.parameter("density", g.density);
        m.parameter("noise_var", g.noise_var);
    } else {
        const auto f = nid::parse_function(g.function);
        data = nid::generate(f, g.n, g.common.seed);
        truth = nid::ground_truth(f);
        m.parameter("generator", nid::to_string(f));
    }
    if (g.sigma > 0.0) data = nid::add_noise(std::move(data), g.sigma, nid::derive_seed(g.common.seed, {9}));
    m.parameter("n", g.n);
    m.parameter("sigma", g.sigma);
    m.parameter("seed", g.common.seed);
    nid::write_csv(data, dir / "data.csv");
    nid::write_splits(data, dir / "splits.csv");
    nid::write_ground_truth(truth, dir / "truth.txt");
    for (const char* name : {"data.csv", "splits.csv", "truth.txt"}) m.output(name);
    m.write();
}

struct Train {
    Common common;
    DataFlags data;
    TrainFlags training;
    std::string arch = "mlp-m";
    std::string hidden = "140,100,60,20";
    std::string univariate_hidden = "10,10,10";
    std::string interactions;
    std::string ranking;
    int top = 0;
};

void cmd_train(const Train& t) {
    const fs::path dir = t.common.out;
    ensure_dir(dir);
    Manifest m("train", dir);
    const auto data = load_data(t.data, t.common.seed, m);
    const int p = static_cast<int>(data.cols());
    const auto cfg = training_config(t.training, t.common.seed);
    const auto model_seed = nid::derive_seed(t.common.seed, {1});

    nid::CompositeModel model;
    if (t.arch == "mlp") {
        model = nid::make_mlp(p, parse_sizes(t.hidden), model_seed, data.task);
    } else if (t.arch == "mlp-m") {
        model = nid::make_mlp_m(p, parse_sizes(t.hidden), parse_sizes(t.univariate_hidden), model_seed, data.task);
    } else if (t.arch == "mlp-cutoff") {
        std::vector<nid::InteractionCandidate> chosen = parse_interactions(t.interactions);
        if (!t.ranking.empty()) {
            require_file(t.ranking);
            m.input(t.ranking);
            const auto ranked = nid::read_ranking_csv(t.ranking);
            const auto count = std::min<std::size_t>(static_cast<std::size_t>(std::max(t.top, 0)), ranked.size());
            for (std::size_t k = 0; k < count; ++k) chosen.push_back(ranked.entries[k].candidate);
        }
        model = nid::build_cutoff_model(p, chosen, model_seed, data.task, parse_sizes(t.univariate_hidden));
        json list = json::array();
        for (const auto& c : chosen) list.push_back(c.to_string());
        m.parameter("interactions", list);
    } else {
        throw nid::Error(nid::ErrorKind::InvalidConfig, "unknown architecture '" + t.arch + "'");
    }
    m.parameter("architecture", t.arch);
    m.parameter("hidden", t.hidden);
    m.parameter("univariate_hidden", t.univariate_hidden);
    record_training(m, cfg);

    const auto trained = nid::train(std::move(model), data, cfg);
    nid::save_model(trained.model, dir / "model.json");
    {
        std::ofstream out(dir / "training.csv");
        out << "epoch,train_loss,valid_loss\n";
        for (std::size_t e = 0; e < trained.train_loss.size(); ++e) {
            out << e + 1 << ',' << nid::format_double(trained.train_loss[e]) << ','
                << nid::format_double(trained.valid_loss[e]) << "\n";
        }
    }
    {
        std::ofstream out(dir / "training_summary.json");
        json s;
        s["best_epoch"] = trained.best_epoch;
        s["best_valid_loss"] = trained.best_valid_loss;
        s["validation_metric"] = nid::validation_metric(trained, data);
        s["test_loss"] = data.splits.test.empty() ? json(nullptr)
                                                   : json(nid::evaluate_loss(trained.model, data, data.splits.test));
        out << s.dump(1) << "\n";
    }
    for (const char* name : {"model.json", "training.csv", "training_summary.json"}) m.output(name);
    m.write();
}

const nid::DenseNetwork& main_network(const nid::CompositeModel& model) {
    if (!model.main) throw nid::Error(nid::ErrorKind::InvalidConfig, "model has no main network to interpret");
    return *model.main;
}

struct Rank {
    Common common;
    std::string model;
    std::string averaging = "minimum";
};

void cmd_rank(const Rank& r) {
    const fs::path dir = r.common.out;
    ensure_dir(dir);
    Manifest m("rank", dir);
    require_file(r.model);
    m.input(r.model);
    const auto kind = nid::parse_averaging(r.averaging);
    m.parameter("averaging", std::string(nid::to_string(kind)));
    const auto model = nid::load_model(r.model);
    nid::write_ranking_csv(nid::rank_interactions(main_network(model), kind), dir / "ranking.csv");
    m.output("ranking.csv");
    m.write();
}

std::string ramp_color(double t) {
    // light #f7fbff -> dark #08306b
    const int lo[3] = {0xf7, 0xfb, 0xff};
    const int hi[3] = {0x08, 0x30, 0x6b};
    char buf[8];
    int c[3];
    for (int k = 0; k < 3; ++k) c[k] = static_cast<int>(std::lround(lo[k] + t * (hi[k] - lo[k])));
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
    return buf;
}

void write_heatmap_svg(const Eigen::MatrixXd& s, const std::vector<std::string>& names, const fs::path& path) {
    const double lo = s.minCoeff();
    const double hi = s.maxCoeff();
    const int cell = 28;
    const int margin = 48;
    const auto p = static_cast<int>(s.rows());
    const int size = margin + p * cell + 8;
    std::ofstream out(path);
    if (!out) throw nid::Error(nid::ErrorKind::Io, "cannot write '" + path.string() + "'");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int i = 0; i < p; ++i) {
        const int pos = margin + i * cell + cell / 2;
        out << "<text x=\"" << margin - 4 << "\" y=\"" << pos + 4 << "\" font-size=\"10\" text-anchor=\"end\">"
            << names[static_cast<std::size_t>(i)] << "</text>\n";
        out << "<text x=\"" << pos << "\" y=\"" << margin - 6 << "\" font-size=\"10\" text-anchor=\"middle\">"
            << names[static_cast<std::size_t>(i)] << "</text>\n";
        for (int j = 0; j < p; ++j) {
            const double t = hi > lo ? (s(i, j) - lo) / (hi - lo) : 0.0;
            out << "<rect x=\"" << margin + j * cell << "\" y=\"" << margin + i * cell << "\" width=\"" << cell
                << "\" height=\"" << cell << "\" fill=\"" << ramp_color(t) << "\" data-value=\""
                << nid::format_double(s(i, j)) << "\"/>\n";
        }
    }
    out << "</svg>\n";
}

struct Pairwise {
    Common common;
    std::string model;
};

void cmd_pairwise(const Pairwise& pw) {
    const fs::path dir = pw.common.out;
    ensure_dir(dir);
    Manifest m("pairwise", dir);
    require_file(pw.model);
    m.input(pw.model);
    const auto model = nid::load_model(pw.model);
    const auto s = nid::pairwise_strengths(main_network(model));
    std::vector<std::string> names;
    for (Eigen::Index j = 0; j < s.cols(); ++j) names.push_back("x" + std::to_string(j + 1));
    {
        std::ofstream out(dir / "pairwise.csv");
        for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
        out << "\n";
        for (Eigen::Index i = 0; i < s.rows(); ++i) {
            for (Eigen::Index j = 0; j < s.cols(); ++j) out << (j ? "," : "") << nid::format_double(s(i, j));
            out << "\n";
        }
    }
    write_heatmap_svg(s, names, dir / "pairwise.svg");
    m.output("pairwise.csv");
    m.output("pairwise.svg");
    m.write();
}

struct Cutoff {
    Common common;
    DataFlags data;
    TrainFlags training;
    std::string ranking;
    std::string reference_model;
    double reference = std::numeric_limits<double>::quiet_NaN();
    int k_max = 20;
    std::string hidden = "10,10,10";
};

void cmd_cutoff(const Cutoff& c) {
    const fs::path dir = c.common.out;
    ensure_dir(dir);
    Manifest m("cutoff", dir);
    const auto data = load_data(c.data, c.common.seed, m);
    require_file(c.ranking);
    m.input(c.ranking);
    const auto ranked = nid::read_ranking_csv(c.ranking);
    double reference = c.reference;
    if (!c.reference_model.empty()) {
        require_file(c.reference_model);
        m.input(c.reference_model);
        nid::TrainedModel ref;
        ref.model = nid::load_model(c.reference_model);
        ref.best_valid_loss = nid::evaluate_loss(ref.model, data, data.splits.valid);
        reference = nid::validation_metric(ref, data);
    }
    if (std::isnan(reference)) {
        throw nid::Error(nid::ErrorKind::InvalidConfig, "cutoff needs --reference or --reference-model");
    }
    auto cfg = training_config(c.training, c.common.seed);
    cfg.l1_strength = 0.0;
    record_training(m, cfg);
    m.parameter("k_max", c.k_max);
    m.parameter("reference_metric", reference);
    m.parameter("jobs", c.common.jobs);

    nid::CutoffOptions options;
    options.hidden = parse_sizes(c.hidden);
    options.jobs = c.common.jobs;
    const auto result = nid::find_cutoff(ranked, data, reference, cfg, c.k_max, options);
    nid::write_cutoff_report(result, dir / "cutoff.json");
    {
        std::ofstream out(dir / "cutoff_curve.csv");
        out << "k,added,metric\n";
        for (std::size_t k = 0; k < result.curve.size(); ++k) {
            out << k << ",\"" << (k ? result.ranked[k - 1].to_string() : "") << "\","
                << nid::format_double(result.curve[k]) << "\n";
        }
    }
    m.output("cutoff.json");
    m.output("cutoff_curve.csv");
    m.write();
}

struct Evaluate {
    Common common;
    TrainFlags training;
    std::string report = "table2";
    std::string functions = "F1..F10";
    int trials = 10;
    std::size_t n = 30000;
    std::string hidden = "140,100,60,20";
    std::string univariate_hidden = "10,10,10";
    std::string archs;
    std::string l1_grid;
    std::string sigmas = "0,0.2,0.4,0.6,0.8,1";
    int drop = 1;
};

void cmd_evaluate(const Evaluate& e) {
    const fs::path dir = e.common.out;
    ensure_dir(dir);
    Manifest m("evaluate", dir);
    nid::SuiteOptions options;
    options.functions = parse_functions(e.functions);
    options.trials = e.trials;
    options.samples = e.n;
    options.hidden = parse_sizes(e.hidden);
    options.univariate_hidden = parse_sizes(e.univariate_hidden);
    options.training = training_config(e.training, e.common.seed);
    options.l1_grid = parse_reals(e.l1_grid);
    options.seed = e.common.seed;
    options.jobs = e.common.jobs;
    options.drop_extremes = e.drop;
    options.validate();

    std::vector<nid::Architecture> archs;
    for (const auto& a : split_list(e.archs, ',')) archs.push_back(nid::parse_architecture(a));
    if (archs.empty()) {
        archs = e.report == "table2" ? std::vector{nid::Architecture::MlpM}
                                     : std::vector{nid::Architecture::Mlp, nid::Architecture::MlpM};
    }

    json fn_list = json::array();
    for (auto f : options.functions) fn_list.push_back(nid::to_string(f));
    json arch_list = json::array();
    for (auto a : archs) arch_list.push_back(std::string(nid::to_string(a)));
    m.parameter("report", e.report);
    m.parameter("functions", fn_list);
    m.parameter("architectures", arch_list);
    m.parameter("trials", e.trials);
    m.parameter("n", e.n);
    m.parameter("hidden", e.hidden);
    m.parameter("univariate_hidden", e.univariate_hidden);
    m.parameter("l1_grid", options.l1_grid);
    m.parameter("drop_extremes", e.drop);
    m.parameter("jobs", e.common.jobs);
    record_training(m, options.training);

    std::string text;
    if (e.report == "table2" || e.report == "fig3") {
        const auto outcomes = nid::run_suite(options, archs);
        nid::write_trials_csv(outcomes, dir / "trials.csv");
        m.output("trials.csv");
        if (e.report == "table2") {
            const auto report = nid::table2(outcomes, e.drop);
            nid::write_table2_csv(report, dir / "table2.csv");
            m.output("table2.csv");
            text = nid::format_table2(report);
        } else {
            const auto counts = nid::averaging_comparison(outcomes);
            nid::write_averaging_csv(counts, dir / "averaging.csv");
            m.output("averaging.csv");
            text = nid::format_averaging(counts);
        }
    } else if (e.report == "noise") {
        const auto sigmas = parse_reals(e.sigmas);
        if (sigmas.empty()) throw nid::Error(nid::ErrorKind::InvalidConfig, "no noise levels given");
        m.parameter("sigmas", sigmas);
        const auto points = nid::noise_sweep(options, sigmas, archs);
        nid::write_noise_csv(points, dir / "noise.csv");
        m.output("noise.csv");
        text = nid::format_noise(points);
    } else {
        throw nid::Error(nid::ErrorKind::InvalidConfig, "unknown report '" + e.report + "' (table2, fig3, noise)");
    }
    std::ofstream(dir / "report.txt") << text;
    std::cout << text;
    m.output("report.txt");
    m.write();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neural interaction detection toolkit"};
    app.set_config("--config", "", "TOML config file; command-line flags take precedence");
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    GenData gen;
    auto* gen_cmd = app.add_subcommand("gen-data", "Generate a synthetic dataset with ground truth");
    add_common(gen_cmd, gen.common);
    gen_cmd->add_option("--function", gen.function, "Suite function F1..F10");
    gen_cmd->add_option("-n,--samples", gen.n, "Number of samples")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--sigma", gen.sigma, "Standardize, then add N(0, sigma^2) noise to features and target");
    gen_cmd->add_option("--large-p", gen.large_p, "Use the sparse quadratic generator with this many features");
    gen_cmd->add_option("--rank", gen.rank, "Quadratic rank K for --large-p");
    gen_cmd->add_option("--density", gen.density, "Nonzero fraction of each factor for --large-p");
    gen_cmd->add_option("--noise-var", gen.noise_var, "Target noise variance for --large-p");

    Train tr;
    auto* train_cmd = app.add_subcommand("train", "Train MLP, MLP-M or MLP-Cutoff and save the model");
    add_common(train_cmd, tr.common);
    add_data(train_cmd, tr.data);
    add_training(train_cmd, tr.training);
    train_cmd->add_option("--arch", tr.arch, "mlp, mlp-m or mlp-cutoff");
    train_cmd->add_option("--hidden", tr.hidden, "Main-network hidden sizes");
    train_cmd->add_option("--univariate-hidden", tr.univariate_hidden, "Side-network hidden sizes");
    train_cmd->add_option("--interactions", tr.interactions, "MLP-Cutoff interactions, e.g. \"1,2;3,4,5\"");
    train_cmd->add_option("--ranking", tr.ranking, "Ranking CSV whose top entries feed MLP-Cutoff");
    train_cmd->add_option("--top", tr.top, "Number of ranking entries to use with --ranking");

    Rank rk;
    auto* rank_cmd = app.add_subcommand("rank", "Rank interactions of a trained model");
    add_common(rank_cmd, rk.common);
    rank_cmd->add_option("--model", rk.model, "Model file")->required();
    rank_cmd->add_option("--averaging", rk.averaging, "maximum, rms, mean, geometric, harmonic or minimum");

    Pairwise pw;
    auto* pair_cmd = app.add_subcommand("pairwise", "Pairwise interaction strengths as CSV and SVG heatmap");
    add_common(pair_cmd, pw.common);
    pair_cmd->add_option("--model", pw.model, "Model file")->required();

    Cutoff co;
    auto* cut_cmd = app.add_subcommand("cutoff", "Search the ranking cutoff with MLP-Cutoff models");
    add_common(cut_cmd, co.common);
    add_data(cut_cmd, co.data);
    co.training.l2 = nid::kCutoffL2;
    add_training(cut_cmd, co.training);
    cut_cmd->add_option("--ranking", co.ranking, "Ranking CSV")->required();
    cut_cmd->add_option("--reference-model", co.reference_model, "Trained MLP-M whose validation metric is the target");
    cut_cmd->add_option("--reference", co.reference, "Reference validation metric");
    cut_cmd->add_option("--k-max", co.k_max, "Largest K to train");
    cut_cmd->add_option("--hidden", co.hidden, "Sub-network hidden sizes");

    Evaluate ev;
    auto* eval_cmd = app.add_subcommand("evaluate", "Synthetic-suite experiments");
    add_common(eval_cmd, ev.common);
    add_training(eval_cmd, ev.training);
    eval_cmd->add_option("report", ev.report, "table2, fig3 or noise")->required();
    eval_cmd->add_option("--functions", ev.functions, "Functions, e.g. F1..F10 or F1,F5");
    eval_cmd->add_option("--trials", ev.trials, "Trials per function")->check(CLI::PositiveNumber);
    eval_cmd->add_option("-n,--samples", ev.n, "Samples per dataset")->check(CLI::PositiveNumber);
    eval_cmd->add_option("--hidden", ev.hidden, "Main-network hidden sizes");
    eval_cmd->add_option("--univariate-hidden", ev.univariate_hidden, "Side-network hidden sizes");
    eval_cmd->add_option("--archs", ev.archs, "Comma list of MLP, MLP-M");
    eval_cmd->add_option("--l1-grid", ev.l1_grid, "Pick L1 per trial by validation loss from this list");
    eval_cmd->add_option("--sigmas", ev.sigmas, "Noise levels for the noise report");
    eval_cmd->add_option("--drop", ev.drop, "Extremes dropped from each end in table2");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error code=E_CONFIG: " << e.what() << "\n";
        return kConfigError;
    }

    try {
        if (*gen_cmd) cmd_gen_data(gen);
        else if (*train_cmd) cmd_train(tr);
        else if (*rank_cmd) cmd_rank(rk);
        else if (*pair_cmd) cmd_pairwise(pw);
        else if (*cut_cmd) cmd_cutoff(co);
        else if (*eval_cmd) cmd_evaluate(ev);
    } catch (const nid::Error& e) {
        std::cerr << "error code=" << nid::to_string(e.kind()) << ": " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error code=E_IO: " << e.what() << "\n";
        return kDataError;
    }
    return kOk;
}
