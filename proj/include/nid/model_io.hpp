#pragma once

#include <filesystem>
#include <string>

#include "nid/nn.hpp"

namespace nid {

inline constexpr int kModelFormatVersion = 1;

/// JSON document holding format_version, task, scaling, every network with
/// row-major weights, and the interaction candidates (1-based) of the
/// interaction networks. Doubles are written shortest-round-trip, so a
/// save/load cycle is bit-exact.
std::string model_to_string(const CompositeModel& model);
CompositeModel model_from_string(const std::string& text);

void save_model(const CompositeModel& model, const std::filesystem::path& path);
/// Throws VersionMismatch, Parse (malformed document) or Shape (arrays that
/// contradict layer_sizes; the message names the layer).
CompositeModel load_model(const std::filesystem::path& path);

}  // namespace nid
