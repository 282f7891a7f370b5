#include "nid/candidate.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "nid/error.hpp"

namespace nid {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidConfig: return "E_CONFIG";
        case ErrorKind::InvalidArgument: return "E_ARGUMENT";
        case ErrorKind::InvalidData: return "E_DATA";
        case ErrorKind::Shape: return "E_SHAPE";
        case ErrorKind::Parse: return "E_PARSE";
        case ErrorKind::VersionMismatch: return "E_VERSION";
        case ErrorKind::Diverged: return "E_DIVERGED";
        case ErrorKind::UndefinedMetric: return "E_METRIC";
        case ErrorKind::Domain: return "E_DOMAIN";
        case ErrorKind::Io: return "E_IO";
    }
    return "E_UNKNOWN";
}

InteractionCandidate::InteractionCandidate(std::vector<int> indices) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    if (indices_.size() < 2) {
        throw Error(ErrorKind::InvalidArgument, "interaction candidate needs at least two features");
    }
    if (indices_.front() < 0) {
        throw Error(ErrorKind::InvalidArgument, "interaction candidate has a negative feature index");
    }
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
        throw Error(ErrorKind::InvalidArgument, "interaction candidate has duplicate features");
    }
}

InteractionCandidate InteractionCandidate::from_one_based(const std::vector<int>& indices) {
    std::vector<int> zero_based;
    zero_based.reserve(indices.size());
    for (int i : indices) {
        if (i < 1) throw Error(ErrorKind::InvalidArgument, "1-based feature index must be >= 1");
        zero_based.push_back(i - 1);
    }
    return InteractionCandidate(std::move(zero_based));
}

bool InteractionCandidate::contains(int feature) const {
    return std::binary_search(indices_.begin(), indices_.end(), feature);
}

bool InteractionCandidate::is_subset_of(const InteractionCandidate& other) const {
    return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(), indices_.end());
}

std::string InteractionCandidate::to_string() const {
    std::string out;
    for (std::size_t k = 0; k < indices_.size(); ++k) {
        if (k) out += ',';
        out += std::to_string(indices_[k] + 1);
    }
    return out;
}

InteractionCandidate InteractionCandidate::parse(const std::string& text) {
    std::vector<int> one_based;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        auto first = token.find_first_not_of(" \t\"");
        auto last = token.find_last_not_of(" \t\"\r");
        if (first == std::string::npos) throw Error(ErrorKind::Parse, "empty index in '" + text + "'");
        std::string_view digits(token.data() + first, last - first + 1);
        int value = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
        if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
            throw Error(ErrorKind::Parse, "bad feature index '" + std::string(digits) + "'");
        }
        one_based.push_back(value);
    }
    try {
        return from_one_based(one_based);
    } catch (const Error& e) {
        throw Error(ErrorKind::Parse, "bad interaction '" + text + "': " + e.what());
    }
}

}  // namespace nid
