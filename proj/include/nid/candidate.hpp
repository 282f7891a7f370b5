#pragma once

#include <compare>
#include <initializer_list>
#include <string>
#include <vector>

namespace nid {

/// A set of (0-based) feature indices with at least two members, stored
/// strictly ascending so it can be used directly as a map key.
class InteractionCandidate {
public:
    InteractionCandidate() = default;

    /// Sorts and validates; throws InvalidArgument on duplicates, negative
    /// indices or fewer than two features.
    explicit InteractionCandidate(std::vector<int> indices);
    InteractionCandidate(std::initializer_list<int> indices)
        : InteractionCandidate(std::vector<int>(indices)) {}

    /// Builds from 1-based indices as written in files and reports.
    static InteractionCandidate from_one_based(const std::vector<int>& indices);

    const std::vector<int>& indices() const noexcept { return indices_; }
    std::size_t size() const noexcept { return indices_.size(); }
    int max_index() const { return indices_.back(); }

    bool contains(int feature) const;
    bool is_subset_of(const InteractionCandidate& other) const;
    bool is_strict_subset_of(const InteractionCandidate& other) const {
        return size() < other.size() && is_subset_of(other);
    }

    /// "1,2,3" with 1-based indices.
    std::string to_string() const;
    /// Inverse of to_string(); throws Parse on malformed text.
    static InteractionCandidate parse(const std::string& text);

    auto operator<=>(const InteractionCandidate&) const = default;

private:
    std::vector<int> indices_;
};

}  // namespace nid
