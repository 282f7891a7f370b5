#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nid/candidate.hpp"
#include "nid/dataset.hpp"

namespace nid {

/// The ten benchmark functions F1..F10 over ten features.
enum class SynthFunction { F1 = 1, F2, F3, F4, F5, F6, F7, F8, F9, F10 };

inline constexpr int kSuiteFeatures = 10;

SynthFunction parse_function(const std::string& name);
std::string to_string(SynthFunction f);
std::vector<SynthFunction> all_functions();

/// Maximal true interactions of a generating function; no member is a
/// subset of another.
struct GroundTruth {
    std::vector<InteractionCandidate> interactions;

    bool empty() const { return interactions.empty(); }
    std::size_t size() const { return interactions.size(); }
};

/// Evaluates F_k at x (x[0] is x_1). Throws Domain on a non-finite result.
double evaluate_function(SynthFunction f, std::span<const double> x);

/// n samples with the function's input distribution and exact targets,
/// split 1/3 train, 1/3 valid, 1/3 test. Deterministic in seed.
Dataset generate(SynthFunction f, std::size_t n, std::uint64_t seed);

GroundTruth ground_truth(SynthFunction f);

/// y = beta.x + x'Wx + eps with W = sum_k a_k a_k'. Each a_k and beta has
/// round(density*p) nonzero N(0,1) entries at random positions; x ~ N(0,I);
/// eps ~ N(0, noise_var). Truth = pairs {i,j}, i != j, with W_ij != 0.
/// Split 80/10/10.
std::pair<Dataset, GroundTruth> generate_large_p(int p, std::size_t n, int rank, double density,
                                                 double noise_var, std::uint64_t seed);

/// Pairs {i,j}, i < j, whose entry in sum_k a_k a_k' is nonzero.
GroundTruth pairwise_truth_from_factors(const std::vector<Eigen::VectorXd>& factors, int p);

/// Standard-scales every feature and the target with train-split
/// statistics, then adds i.i.d. N(0, sigma^2) noise to all of them.
Dataset add_noise(Dataset data, double sigma, std::uint64_t seed);

/// One interaction per line, comma-separated ascending 1-based indices.
void write_ground_truth(const GroundTruth& truth, const std::filesystem::path& path);
GroundTruth read_ground_truth(const std::filesystem::path& path);

}  // namespace nid
