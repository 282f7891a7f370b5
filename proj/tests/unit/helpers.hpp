#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "nid/dataset.hpp"
#include "nid/nn.hpp"

namespace nid::testing {

inline DenseNetwork random_network(std::mt19937_64& rng, int p, int depth, int max_width) {
    std::uniform_int_distribution<int> width(1, max_width);
    std::vector<int> sizes{p};
    for (int l = 0; l < depth; ++l) sizes.push_back(width(rng));
    DenseNetwork net = init_network(sizes, rng());
    std::normal_distribution<double> g(0.0, 0.3);
    for (auto& b : net.biases) {
        for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = g(rng);
    }
    net.output_bias = g(rng);
    return net;
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = g(rng);
    return v;
}

/// Uniform(-1,1) features, target from fn, splits 60/20/20 in row order.
template <class Fn>
Dataset make_dataset(std::size_t n, int p, std::uint64_t seed, Fn&& fn, Task task = Task::Regression) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Dataset d;
    d.task = task;
    d.features.resize(static_cast<Eigen::Index>(n), p);
    d.target.resize(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
        for (int j = 0; j < p; ++j) d.features(i, j) = u(rng);
        d.target[i] = fn(Eigen::VectorXd(d.features.row(i).transpose()));
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto& bucket = i < n * 6 / 10 ? d.splits.train : (i < n * 8 / 10 ? d.splits.valid : d.splits.test);
        bucket.push_back(i);
    }
    return d;
}

}  // namespace nid::testing
