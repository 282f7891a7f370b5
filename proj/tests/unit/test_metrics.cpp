#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "nid/error.hpp"
#include "nid/metrics.hpp"

using namespace nid;

namespace {

RankedInteractions ranking_of(std::initializer_list<InteractionCandidate> cands) {
    RankedInteractions r;
    double s = static_cast<double>(cands.size());
    for (const auto& c : cands) r.entries.push_back({c, s--});
    return r;
}

GroundTruth truth_of(std::initializer_list<InteractionCandidate> cands) {
    return GroundTruth{std::vector<InteractionCandidate>(cands)};
}

InteractionCandidate one_based(std::initializer_list<int> idx) {
    return InteractionCandidate::from_one_based(std::vector<int>(idx));
}

}  // namespace

TEST_CASE("auc on small cases") {
    const std::vector<std::uint8_t> labels{1, 1, 0, 0};
    CHECK(auc(std::vector<double>{4, 3, 2, 1}, labels) == 1.0);
    CHECK(auc(std::vector<double>{1, 2, 3, 4}, labels) == 0.0);
    CHECK(auc(std::vector<double>{7, 7, 7, 7}, labels) == 0.5);
    CHECK(auc(std::vector<double>{0.9, 0.8, 0.1}, std::vector<std::uint8_t>{1, 0, 1}) == 0.5);
    CHECK(auc(std::vector<double>{1, 1, 0}, std::vector<std::uint8_t>{1, 0, 0}) == doctest::Approx(0.75));

    try {
        auc(std::vector<double>{1, 2}, std::vector<std::uint8_t>{1, 1});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UndefinedMetric);
    }
    CHECK_THROWS_AS(auc(std::vector<double>{1, 2}, std::vector<std::uint8_t>{1}), Error);
}

TEST_CASE("auc agrees with pair counting and ignores monotone transforms") {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> level(0, 6);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 5 + trial % 20;
        std::vector<double> s(static_cast<std::size_t>(n));
        std::vector<std::uint8_t> y(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            s[static_cast<std::size_t>(i)] = level(rng);
            y[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i % 3 == 0);
        }
        double wins = 0;
        double pairs = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (!y[static_cast<std::size_t>(i)] || y[static_cast<std::size_t>(j)]) continue;
                ++pairs;
                const double a = s[static_cast<std::size_t>(i)];
                const double b = s[static_cast<std::size_t>(j)];
                wins += a > b ? 1.0 : (a == b ? 0.5 : 0.0);
            }
        }
        const double base = auc(s, y);
        CHECK(base == doctest::Approx(wins / pairs).epsilon(1e-12));
        std::vector<double> t(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) t[i] = std::exp(3.0 * s[i]) - 11.0;
        CHECK(auc(t, y) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("pairwise labels") {
    const auto triple = pairwise_labels(truth_of({one_based({1, 2, 3})}), 4);
    CHECK(triple == std::vector<std::uint8_t>{1, 1, 0, 1, 0, 0});
    const auto none = pairwise_labels(GroundTruth{}, 5);
    CHECK(none.size() == 10);
    CHECK(std::count(none.begin(), none.end(), 1) == 0);

    const auto f1 = pairwise_labels(ground_truth(SynthFunction::F1), 10);
    CHECK(f1.size() == 45);
    CHECK(std::count(f1.begin(), f1.end(), 1) == 11);
}

TEST_CASE("pairwise labels equal the union of pair subsets") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const int p = 3 + trial % 8;
        std::uniform_int_distribution<int> feature(0, p - 1);
        GroundTruth truth;
        std::set<std::pair<int, int>> expected;
        for (int k = 0; k < 1 + trial % 3; ++k) {
            std::set<int> members;
            while (members.size() < 2 + static_cast<std::size_t>(k % 2)) members.insert(feature(rng));
            truth.interactions.emplace_back(std::vector<int>(members.begin(), members.end()));
            for (int a : members) {
                for (int b : members) {
                    if (a < b) expected.insert({a, b});
                }
            }
        }
        const auto labels = pairwise_labels(truth, p);
        std::size_t k = 0;
        for (int i = 0; i < p; ++i) {
            for (int j = i + 1; j < p; ++j, ++k) CHECK(static_cast<bool>(labels[k]) == expected.count({i, j}) > 0);
        }
    }
}

TEST_CASE("top-rank recall examples") {
    const auto truth = truth_of({one_based({1, 2}), one_based({5, 6})});
    CHECK(top_rank_recall(ranking_of({one_based({1, 2}), one_based({3, 4}), one_based({5, 6})}), truth) == 0.5);
    CHECK(top_rank_recall(ranking_of({one_based({1, 2}), one_based({1, 2, 3})}), truth_of({one_based({1, 2, 3})})) ==
          1.0);
    CHECK(top_rank_recall(ranking_of({one_based({5, 6}), one_based({1, 2})}), truth) == 1.0);
    CHECK(top_rank_recall(RankedInteractions{}, truth) == 0.0);
    CHECK_THROWS_AS(top_rank_recall(ranking_of({one_based({1, 2})}), GroundTruth{}), Error);
}

TEST_CASE("top-rank recall ignores inserted subsets of the truth") {
    const auto truth = truth_of({one_based({1, 2, 3}), one_based({4, 5, 6, 7})});
    const auto plain = ranking_of({one_based({4, 5, 6, 7}), one_based({8, 9}), one_based({1, 2, 3})});
    const auto padded = ranking_of({one_based({4, 5}), one_based({4, 5, 6, 7}), one_based({1, 3}),
                                    one_based({5, 6, 7}), one_based({8, 9}), one_based({1, 2, 3})});
    CHECK(top_rank_recall(plain, truth) == 0.5);
    CHECK(top_rank_recall(padded, truth) == top_rank_recall(plain, truth));
}

TEST_CASE("correct before the first false positive") {
    const auto truth = truth_of({one_based({1, 2}), one_based({3, 4}), one_based({5, 6}), one_based({7, 8})});
    const auto perfect = ranking_of({one_based({7, 8}), one_based({1, 2}), one_based({5, 6}), one_based({3, 4}),
                                     one_based({1, 9}), one_based({2, 9})});
    CHECK(count_correct_before_fp(perfect, truth) == 4);
    CHECK(count_correct_before_fp(ranking_of({one_based({1, 9}), one_based({1, 2})}), truth) == 0);
    CHECK(count_correct_before_fp(perfect, GroundTruth{}) == 0);
}

TEST_CASE("trial aggregation") {
    const std::vector<double> v{0, 10, 5, 5, 5};
    const auto trimmed = aggregate_trials(v, 1);
    CHECK(trimmed.mean == 5.0);
    CHECK(trimmed.stddev == 0.0);
    CHECK(trimmed.trials_dropped == 2);
    CHECK(trimmed.values == v);

    const auto plain = aggregate_trials(v, 0);
    CHECK(plain.mean == 5.0);
    CHECK(plain.stddev == doctest::Approx(std::sqrt(12.5)));

    CHECK(aggregate_trials(std::vector<double>{3.0}, 0).stddev == 0.0);
    CHECK_THROWS_AS(aggregate_trials(std::vector<double>{1, 2}, 1), Error);
    CHECK_THROWS_AS(aggregate_trials(std::vector<double>{}, 0), Error);
}
