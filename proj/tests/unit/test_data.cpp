#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "nid/dataset.hpp"
#include "nid/error.hpp"
#include "nid/model_io.hpp"
#include "nid/synth.hpp"

using namespace nid;
using Eigen::VectorXd;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "nid_unit_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::Io;
}

}  // namespace

TEST_CASE("suite functions at hand-evaluated points") {
    const std::vector<double> zeros(10, 0.0);
    CHECK(evaluate_function(SynthFunction::F5, zeros) == doctest::Approx(2.0));
    CHECK(evaluate_function(SynthFunction::F10, zeros) == doctest::Approx(std::numbers::pi / 2.0 + 2.0));
}

TEST_CASE("ground-truth registry") {
    auto names = [](const GroundTruth& t) {
        std::vector<std::string> out;
        for (const auto& c : t.interactions) out.push_back(c.to_string());
        return out;
    };
    CHECK(names(ground_truth(SynthFunction::F1)) == std::vector<std::string>{"1,2,3", "2,7", "3,5", "7,8,9,10"});
    CHECK(names(ground_truth(SynthFunction::F5)) == std::vector<std::string>{"1,2,3", "4,5", "6,7", "8,9,10"});
    CHECK(names(ground_truth(SynthFunction::F10)) == std::vector<std::string>{"1,2", "3,5,7", "4,5", "7,9"});
    for (auto f : all_functions()) {
        const auto t = ground_truth(f);
        for (const auto& a : t.interactions) {
            CHECK(a.max_index() < kSuiteFeatures);
            for (const auto& b : t.interactions) {
                if (!(a == b)) CHECK_FALSE(a.is_subset_of(b));
            }
        }
    }
}

TEST_CASE("ground truth agrees with a numerical mixed-difference probe") {
    // A pair {i,j} interacts somewhere iff the mixed second difference of f
    // is nonzero at some point; check that pairs inside a true interaction
    // show it and pairs outside never do.
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (auto f : all_functions()) {
        const auto labels = [&] {
            std::set<std::pair<int, int>> pos;
            for (const auto& t : ground_truth(f).interactions) {
                for (int a : t.indices()) {
                    for (int b : t.indices()) {
                        if (a < b) pos.insert({a, b});
                    }
                }
            }
            return pos;
        }();
        for (int i = 0; i < 10; ++i) {
            for (int j = i + 1; j < 10; ++j) {
                double biggest = 0.0;
                for (int trial = 0; trial < 60; ++trial) {
                    std::vector<double> x(10);
                    for (auto& v : x) v = u(rng);
                    if (f == SynthFunction::F1) {
                        for (int k : {3, 4, 7, 9}) x[static_cast<std::size_t>(k)] = 0.8 + 0.1 * x[static_cast<std::size_t>(k)];
                        for (int k : {0, 1, 2, 5, 6, 8}) x[static_cast<std::size_t>(k)] = 0.5 + 0.4 * x[static_cast<std::size_t>(k)];
                    }
                    const double h = 0.05;
                    auto at = [&](double di, double dj) {
                        auto y = x;
                        y[static_cast<std::size_t>(i)] += di;
                        y[static_cast<std::size_t>(j)] += dj;
                        return evaluate_function(f, y);
                    };
                    const double mixed = at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h);
                    biggest = std::max(biggest, std::abs(mixed));
                }
                INFO(to_string(f), " pair ", i + 1, ",", j + 1);
                if (labels.count({i, j})) CHECK(biggest > 1e-9);
                else CHECK(biggest < 1e-9);
            }
        }
    }
}

TEST_CASE("generate: shape, splits, determinism, stored targets") {
    const auto d = generate(SynthFunction::F3, 3000, 5);
    CHECK(d.rows() == 3000);
    CHECK(d.cols() == 10);
    CHECK(d.splits.train.size() == 1000);
    CHECK(d.splits.valid.size() == 1000);
    CHECK(d.splits.test.size() == 1000);
    d.validate();
    const auto again = generate(SynthFunction::F3, 3000, 5);
    CHECK((d.features.array() == again.features.array()).all());
    CHECK((d.target.array() == again.target.array()).all());
    CHECK(d.splits.train == again.splits.train);
    CHECK(d.features.minCoeff() >= -1.0);
    CHECK(d.features.maxCoeff() <= 1.0);

    for (auto f : all_functions()) {
        const auto g = generate(f, 1000, 9);
        double worst = 0.0;
        for (Eigen::Index r = 0; r < 1000; ++r) {
            const VectorXd x = g.features.row(r).transpose();
            worst = std::max(worst, std::abs(evaluate_function(f, std::span(x.data(), 10)) - g.target[r]));
        }
        CHECK(worst == 0.0);
    }
}

TEST_CASE("F1 input ranges") {
    const auto d = generate(SynthFunction::F1, 5000, 2);
    for (int j : {3, 4, 7, 9}) {
        CHECK(d.features.col(j).minCoeff() >= 0.6);
        CHECK(d.features.col(j).maxCoeff() <= 1.0);
    }
    for (int j : {0, 1, 2, 5, 6, 8}) {
        CHECK(d.features.col(j).minCoeff() >= 0.0);
        CHECK(d.features.col(j).maxCoeff() <= 1.0);
    }
}

TEST_CASE("split sizes and validation") {
    Dataset d = testing::make_dataset(100, 2, 1, [](const VectorXd& x) { return x[0]; });
    auto s = split(d, {0.8, 0.1, 0.1}, 3);
    CHECK(s.splits.train.size() == 80);
    CHECK(s.splits.valid.size() == 10);
    CHECK(s.splits.test.size() == 10);
    s.validate();
    auto all = split(d, {1.0, 0.0, 0.0}, 3);
    CHECK(all.splits.train.size() == 100);
    CHECK(all.splits.valid.empty());
    CHECK(kind_of([&] { split(d, {0.5, 0.2, 0.2}, 1); }) == ErrorKind::InvalidConfig);

    Dataset big = testing::make_dataset(30000, 1, 1, [](const VectorXd& x) { return x[0]; });
    auto thirds = split(big, {1.0 / 3, 1.0 / 3, 1.0 / 3}, 7);
    CHECK(thirds.splits.train.size() == 10000);
    CHECK(thirds.splits.valid.size() == 10000);
    CHECK(thirds.splits.test.size() == 10000);
}

TEST_CASE("validate catches overlapping splits and NaN") {
    Dataset d = testing::make_dataset(10, 2, 1, [](const VectorXd& x) { return x[0]; });
    d.splits.valid.push_back(0);
    CHECK(kind_of([&] { d.validate(); }) == ErrorKind::InvalidData);
    Dataset e = testing::make_dataset(10, 2, 1, [](const VectorXd& x) { return x[0]; });
    e.features(3, 1) = std::nan("");
    CHECK(kind_of([&] { e.validate(); }) == ErrorKind::InvalidData);
}

TEST_CASE("add_noise") {
    const auto d = generate(SynthFunction::F2, 30000, 1);
    const auto scaled = add_noise(d, 0.0, 4);
    const auto stats = column_stats(scaled.features, scaled.splits.train);
    CHECK(stats.mean.cwiseAbs().maxCoeff() < 1e-12);
    CHECK((stats.scale.array() - 1.0).abs().maxCoeff() < 1e-12);

    const auto twice = add_noise(scaled, 0.0, 4);
    CHECK((twice.features - scaled.features).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((twice.target - scaled.target).cwiseAbs().maxCoeff() < 1e-12);

    const auto noisy = add_noise(d, 1.0, 4);
    std::vector<std::size_t> all(noisy.rows());
    std::iota(all.begin(), all.end(), std::size_t{0});
    const auto ns = column_stats(noisy.features, all);
    for (Eigen::Index j = 0; j < ns.scale.size(); ++j) CHECK(std::abs(ns.scale[j] * ns.scale[j] - 2.0) < 0.1);
    const Eigen::MatrixXd y = noisy.target;
    const auto ys = column_stats(y, all);
    CHECK(std::abs(ys.scale[0] * ys.scale[0] - 2.0) < 0.1);

    const auto repeat = add_noise(d, 1.0, 4);
    CHECK((repeat.features.array() == noisy.features.array()).all());
}

TEST_CASE("large-p generator") {
    auto [data, truth] = generate_large_p(50, 500, 3, 0.1, 0.1, 8);
    CHECK(data.cols() == 50);
    CHECK(data.splits.train.size() == 400);
    CHECK(data.splits.valid.size() == 50);
    CHECK(data.splits.test.size() == 50);
    for (const auto& t : truth.interactions) CHECK(t.size() == 2);

    Eigen::VectorXd a = Eigen::VectorXd::Zero(6);
    a[0] = 1.0;
    a[1] = 1.0;
    const auto one = pairwise_truth_from_factors({a}, 6);
    REQUIRE(one.size() == 1);
    CHECK(one.interactions[0].to_string() == "1,2");

    auto [flat, none] = generate_large_p(40, 200, 2, 0.01, 0.1, 3);
    CHECK(none.empty());
    CHECK(kind_of([] { generate_large_p(10, 10, 1, 0.0, 0.1, 1); }) == ErrorKind::InvalidConfig);
    CHECK(kind_of([] { generate_large_p(10, 10, 1, 1.5, 0.1, 1); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("large-p pair count at the reference size") {
    auto [data, truth] = generate_large_p(1000, 10, 5, 0.02, 0.1, 1);
    // 5 factors with 20 nonzeros each: each contributes 190 pairs; overlaps are rare.
    CHECK(truth.size() <= 950);
    CHECK(truth.size() >= 900);
}

TEST_CASE("CSV round trip is exact and rejects malformed input") {
    const auto d = generate(SynthFunction::F4, 60, 3);
    const auto path = scratch("data.csv");
    write_csv(d, path);
    write_splits(d, scratch("splits.csv"));
    auto back = read_csv(path);
    read_splits(back, scratch("splits.csv"));
    CHECK((back.features.array() == d.features.array()).all());
    CHECK((back.target.array() == d.target.array()).all());
    CHECK(back.splits.valid == d.splits.valid);

    write_csv(d, scratch("data2.csv"));
    CHECK(slurp(path) == slurp(scratch("data2.csv")));

    std::ofstream(scratch("bad.csv")) << "a,b,y\n1,2,3\n4,oops,6\n";
    CHECK(kind_of([&] { read_csv(scratch("bad.csv")); }) == ErrorKind::InvalidData);
    std::ofstream(scratch("ragged.csv")) << "a,b,y\n1,2,3\n4,5\n";
    CHECK(kind_of([&] { read_csv(scratch("ragged.csv")); }) == ErrorKind::InvalidData);
    CHECK(kind_of([&] { read_csv(scratch("missing.csv")); }) == ErrorKind::Io);
}

TEST_CASE("ground-truth file round trip") {
    const auto t = ground_truth(SynthFunction::F8);
    write_ground_truth(t, scratch("truth.txt"));
    const auto back = read_ground_truth(scratch("truth.txt"));
    CHECK(back.interactions == t.interactions);
}

TEST_CASE("model save/load is bit exact") {
    CompositeModel m = make_mlp_m(4, {7, 5}, {3}, 12);
    m.interactions.push_back({InteractionCandidate{0, 2}, init_network({2, 3}, 1)});
    m.scaling.feature_mean = Eigen::VectorXd::Constant(4, 0.1);
    m.scaling.feature_scale = Eigen::VectorXd::Constant(4, 1.0 / 3.0);
    m.scaling.target_mean = std::numbers::pi;
    m.scaling.target_scale = std::numbers::e;
    save_model(m, scratch("model.json"));
    const auto back = load_model(scratch("model.json"));
    for (std::size_t l = 0; l < m.main->weights.size(); ++l) {
        CHECK((back.main->weights[l].array() == m.main->weights[l].array()).all());
        CHECK((back.main->biases[l].array() == m.main->biases[l].array()).all());
    }
    CHECK((back.main->output_weights.array() == m.main->output_weights.array()).all());
    CHECK((back.univariate[3].weights[0].array() == m.univariate[3].weights[0].array()).all());
    CHECK(back.interactions[0].features == m.interactions[0].features);
    CHECK(back.scaling.target_scale == m.scaling.target_scale);
    CHECK(model_to_string(back) == model_to_string(m));
}

TEST_CASE("model load errors") {
    const CompositeModel m = make_mlp(3, {4, 2}, 1);
    const std::string text = model_to_string(m);
    CHECK(kind_of([&] { model_from_string(text.substr(0, text.size() / 2)); }) == ErrorKind::Parse);

    auto j = text;
    const auto pos = j.find("\"format_version\": 1");
    REQUIRE(pos != std::string::npos);
    j.replace(pos, std::string("\"format_version\": 1").size(), "\"format_version\": 99");
    CHECK(kind_of([&] { model_from_string(j); }) == ErrorKind::VersionMismatch);

    CompositeModel broken = m;
    broken.main->layer_sizes[1] = 5;
    const auto bad_text = model_to_string(broken);
    try {
        model_from_string(bad_text);
        FAIL("expected a shape error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Shape);
        CHECK(std::string(e.what()).find("W^(1)") != std::string::npos);
    }
}
