#include "nid/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

#include "nid/error.hpp"
#include "nid/random.hpp"

namespace nid {

namespace {

constexpr double kPi = std::numbers::pi;

double f1(std::span<const double> v) {
    auto x = [&](int i) { return v[static_cast<std::size_t>(i - 1)]; };
    return std::pow(kPi, x(1) * x(2)) * std::sqrt(2.0 * x(3)) - std::asin(x(4)) + std::log(x(3) + x(5)) -
           (x(9) / x(10)) * std::sqrt(x(7) / x(8)) - x(2) * x(7);
}

// x7 enters through |x7| so the square root stays real on [-1, 1].
double f2(std::span<const double> v) {
    auto x = [&](int i) { return v[static_cast<std::size_t>(i - 1)]; };
    return std::pow(kPi, x(1) * x(2)) * std::sqrt(2.0 * std::abs(x(3))) - std::asin(0.5 * x(4)) +
           std::log(std::abs(x(3) + x(5)) + 1.0) +
           (x(9) / (1.0 + std::abs(x(10)))) * std::sqrt(std::abs(x(7)) / (1.0 + std::abs(x(8)))) - x(2) * x(7);
}

// x3^(2|x4|) is read as (x3^2)^|x4|, real for negative x3.
double f3(std::span<const double> v) {
    auto x = [&](int i) { return v[static_cast<std::size_t>(i - 1)]; };
    return std::exp(std::abs(x(1) - x(2))) + std::abs(x(2) * x(3)) - std::pow(x(3) * x(3), std::abs(x(4))) +
           std::log(x(4) * x(4) + x(5) * x(5) + x(7) * x(7) + x(8) * x(8)) + x(9) + 1.0 / (1.0 + x(10) * x(10));
}

double f4(std::span<const double> v) {
    auto x = [&](int i) { return v[static_cast<std::size_t>(i - 1)]; };
    const double x1x4 = x(1) * x(4);
    return f3(v) + x1x4 * x1x4;
}

double f5(std::span<const double> v) {
    auto x = [&](int i) { return v[static_cast<std::size_t>(i - 1)]; };
    return 1.0 / (1.0 + x(1) * x(1) + x(2) * x(2) + x(3) * x(3)) + std::sqrt(std::exp(x(4) + x(5))) +
           std::abs(x(6) + x(7)) + x(8) * x(9) * x(10);
}

double f6(std::span<const double> v) {
    auto x = [&](int i) { return v[static_cast<std::size_t>(i - 1)]; };
    return std::exp(std::abs(x(1) * x(2)) + 1.0) - std::exp(std::abs(x(3) + x(4)) + 1.0) +
           std::cos(x(5) + x(6) - x(8)) + std::sqrt(x(8) * x(8) + x(9) * x(9) + x(10) * x(10));
}

double f7(std::span<const double> v) {
    auto x = [&](int i) { return v[static_cast<std::size_t>(i - 1)]; };
    const double atans = std::atan(x(1)) + std::atan(x(2));
    const double prod = x(4) * x(5) * x(6) * x(7) * x(8);
    double sum = 0.0;
    for (int i = 1; i <= 10; ++i) sum += x(i);
    return atans * atans + std::max(x(3) * x(4) + x(6), 0.0) - 1.0 / (1.0 + prod * prod) +
           std::pow(std::abs(x(7)) / (1.0 + std::abs(x(9))), 5) + sum;
}

double f8(std::span<const double> v) {
    auto x = [&](int i) { return v[static_cast<std::size_t>(i - 1)]; };
    return x(1) * x(2) + std::pow(2.0, x(3) + x(5) + x(6)) + std::pow(2.0, x(3) + x(4) + x(5) + x(7)) +
           std::sin(x(7) * std::sin(x(8) + x(9))) + std::acos(0.9 * x(10));
}

double f9(std::span<const double> v) {
    auto x = [&](int i) { return v[static_cast<std::size_t>(i - 1)]; };
    const double p678 = x(6) * x(7) * x(8);
    return std::tanh(x(1) * x(2) + x(3) * x(4)) * std::sqrt(std::abs(x(5))) + std::exp(x(5) + x(6)) +
           std::log(p678 * p678 + 1.0) + x(9) * x(10) + 1.0 / (1.0 + std::abs(x(10)));
}

double f10(std::span<const double> v) {
    auto x = [&](int i) { return v[static_cast<std::size_t>(i - 1)]; };
    return std::sinh(x(1) + x(2)) + std::acos(std::tanh(x(3) + x(5) + x(7))) + std::cos(x(4) + x(5)) +
           1.0 / std::cos(x(7) * x(9));
}

// 1-based, maximal interactions read off each additive term.
const std::vector<std::vector<std::vector<int>>>& truth_table() {
    static const std::vector<std::vector<std::vector<int>>> table = {
        /* F1  */ {{1, 2, 3}, {2, 7}, {3, 5}, {7, 8, 9, 10}},
        /* F2  */ {{1, 2, 3}, {2, 7}, {3, 5}, {7, 8, 9, 10}},
        /* F3  */ {{1, 2}, {2, 3}, {3, 4}, {4, 5, 7, 8}},
        /* F4  */ {{1, 2}, {1, 4}, {2, 3}, {3, 4}, {4, 5, 7, 8}},
        /* F5  */ {{1, 2, 3}, {4, 5}, {6, 7}, {8, 9, 10}},
        /* F6  */ {{1, 2}, {3, 4}, {5, 6, 8}, {8, 9, 10}},
        /* F7  */ {{1, 2}, {3, 4, 6}, {4, 5, 6, 7, 8}, {7, 9}},
        /* F8  */ {{1, 2}, {3, 4, 5, 7}, {3, 5, 6}, {7, 8, 9}},
        /* F9  */ {{1, 2, 3, 4, 5}, {5, 6}, {6, 7, 8}, {9, 10}},
        /* F10 */ {{1, 2}, {3, 5, 7}, {4, 5}, {7, 9}},
    };
    return table;
}

// Input ranges for F1: x4, x5, x8, x10 ~ U(0.6, 1); the rest U(0, 1).
void sample_inputs(SynthFunction f, std::mt19937_64& rng, std::span<double> row) {
    if (f == SynthFunction::F1) {
        std::uniform_real_distribution<double> low(0.0, 1.0);
        std::uniform_real_distribution<double> high(0.6, 1.0);
        for (std::size_t j = 0; j < row.size(); ++j) {
            const int feature = static_cast<int>(j) + 1;
            const bool shifted = feature == 4 || feature == 5 || feature == 8 || feature == 10;
            row[j] = shifted ? high(rng) : low(rng);
        }
        return;
    }
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& v : row) v = dist(rng);
}

}  // namespace

SynthFunction parse_function(const std::string& name) {
    std::string s = name;
    if (!s.empty() && (s[0] == 'F' || s[0] == 'f')) s = s.substr(1);
    int k = 0;
    try {
        std::size_t used = 0;
        k = std::stoi(s, &used);
        if (used != s.size()) k = 0;
    } catch (const std::exception&) {
        k = 0;
    }
    if (k < 1 || k > 10) throw Error(ErrorKind::InvalidConfig, "unknown function id '" + name + "'");
    return static_cast<SynthFunction>(k);
}

std::string to_string(SynthFunction f) { return "F" + std::to_string(static_cast<int>(f)); }

std::vector<SynthFunction> all_functions() {
    std::vector<SynthFunction> out;
    for (int k = 1; k <= 10; ++k) out.push_back(static_cast<SynthFunction>(k));
    return out;
}

double evaluate_function(SynthFunction f, std::span<const double> x) {
    if (x.size() != kSuiteFeatures) throw Error(ErrorKind::InvalidArgument, "suite functions take 10 features");
    double y = 0.0;
    switch (f) {
        case SynthFunction::F1: y = f1(x); break;
        case SynthFunction::F2: y = f2(x); break;
        case SynthFunction::F3: y = f3(x); break;
        case SynthFunction::F4: y = f4(x); break;
        case SynthFunction::F5: y = f5(x); break;
        case SynthFunction::F6: y = f6(x); break;
        case SynthFunction::F7: y = f7(x); break;
        case SynthFunction::F8: y = f8(x); break;
        case SynthFunction::F9: y = f9(x); break;
        case SynthFunction::F10: y = f10(x); break;
        default: throw Error(ErrorKind::InvalidConfig, "unknown function id");
    }
    if (!std::isfinite(y)) throw Error(ErrorKind::Domain, to_string(f) + " produced a non-finite value");
    return y;
}

Dataset generate(SynthFunction f, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw Error(ErrorKind::InvalidConfig, "n must be at least 1");
    if (static_cast<int>(f) < 1 || static_cast<int>(f) > 10) {
        throw Error(ErrorKind::InvalidConfig, "unknown function id");
    }
    std::mt19937_64 rng(derive_seed(seed, {1}));
    Dataset data;
    data.task = Task::Regression;
    data.features.resize(static_cast<Eigen::Index>(n), kSuiteFeatures);
    data.target.resize(static_cast<Eigen::Index>(n));
    std::array<double, kSuiteFeatures> row{};
    for (std::size_t i = 0; i < n; ++i) {
        sample_inputs(f, rng, row);
        const auto r = static_cast<Eigen::Index>(i);
        for (int j = 0; j < kSuiteFeatures; ++j) data.features(r, j) = row[static_cast<std::size_t>(j)];
        data.target[r] = evaluate_function(f, row);
    }
    return split(std::move(data), {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, derive_seed(seed, {2}));
}

GroundTruth ground_truth(SynthFunction f) {
    const int k = static_cast<int>(f);
    if (k < 1 || k > 10) throw Error(ErrorKind::InvalidConfig, "unknown function id");
    GroundTruth truth;
    for (const auto& one_based : truth_table()[static_cast<std::size_t>(k - 1)]) {
        truth.interactions.push_back(InteractionCandidate::from_one_based(one_based));
    }
    std::sort(truth.interactions.begin(), truth.interactions.end());
    return truth;
}

GroundTruth pairwise_truth_from_factors(const std::vector<Eigen::VectorXd>& factors, int p) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(p, p);
    for (const auto& a : factors) w.noalias() += a * a.transpose();
    GroundTruth truth;
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            if (w(i, j) != 0.0) truth.interactions.push_back(InteractionCandidate{i, j});
        }
    }
    return truth;
}

std::pair<Dataset, GroundTruth> generate_large_p(int p, std::size_t n, int rank, double density, double noise_var,
                                                 std::uint64_t seed) {
    if (p < 1 || n < 1 || rank < 1) throw Error(ErrorKind::InvalidConfig, "p, n and K must be at least 1");
    if (!(density > 0.0 && density <= 1.0)) throw Error(ErrorKind::InvalidConfig, "density must lie in (0, 1]");
    if (!(noise_var >= 0.0)) throw Error(ErrorKind::InvalidConfig, "noise variance must be nonnegative");

    std::mt19937_64 rng(derive_seed(seed, {7}));
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto nonzeros = static_cast<int>(std::llround(density * p));
    std::vector<int> positions(static_cast<std::size_t>(p));
    auto sparse_vector = [&]() {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(p);
        std::iota(positions.begin(), positions.end(), 0);
        std::shuffle(positions.begin(), positions.end(), rng);
        for (int k = 0; k < nonzeros; ++k) v[positions[static_cast<std::size_t>(k)]] = normal(rng);
        return v;
    };
    std::vector<Eigen::VectorXd> factors;
    for (int k = 0; k < rank; ++k) factors.push_back(sparse_vector());
    const Eigen::VectorXd beta = sparse_vector();

    Dataset data;
    data.task = Task::Regression;
    const auto rows = static_cast<Eigen::Index>(n);
    data.features.resize(rows, p);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) data.features(i, j) = normal(rng);
    }
    // x'Wx = sum_k (a_k . x)^2
    data.target = data.features * beta;
    for (const auto& a : factors) data.target.array() += (data.features * a).array().square();
    if (noise_var > 0.0) {
        std::normal_distribution<double> noise(0.0, std::sqrt(noise_var));
        for (Eigen::Index i = 0; i < rows; ++i) data.target[i] += noise(rng);
    }
    data = split(std::move(data), {0.8, 0.1, 0.1}, derive_seed(seed, {8}));
    return {std::move(data), pairwise_truth_from_factors(factors, p)};
}

Dataset add_noise(Dataset data, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw Error(ErrorKind::InvalidConfig, "noise sigma must be nonnegative");
    if (data.task != Task::Regression) {
        throw Error(ErrorKind::InvalidConfig, "noise injection scales the target and needs a regression task");
    }
    std::vector<std::size_t> rows = data.splits.train;
    if (rows.empty()) {
        rows.resize(data.rows());
        std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    const ColumnStats fs = column_stats(data.features, rows);
    const Eigen::MatrixXd y = data.target;
    const ColumnStats ts = column_stats(y, rows);
    data.features.rowwise() -= fs.mean.transpose();
    data.features.array().rowwise() /= fs.scale.transpose().array();
    data.target = ((data.target.array() - ts.mean[0]) / ts.scale[0]).matrix();
    if (sigma > 0.0) {
        std::mt19937_64 rng(derive_seed(seed, {3}));
        std::normal_distribution<double> noise(0.0, sigma);
        for (Eigen::Index i = 0; i < data.features.rows(); ++i) {
            for (Eigen::Index j = 0; j < data.features.cols(); ++j) data.features(i, j) += noise(rng);
            data.target[i] += noise(rng);
        }
    }
    return data;
}

void write_ground_truth(const GroundTruth& truth, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
    for (const auto& c : truth.interactions) out << c.to_string() << '\n';
}

GroundTruth read_ground_truth(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open ground truth '" + path.string() + "'");
    GroundTruth truth;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        truth.interactions.push_back(InteractionCandidate::parse(line));
    }
    return truth;
}

}  // namespace nid
