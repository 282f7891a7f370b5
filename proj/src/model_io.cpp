#include "nid/model_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nid/error.hpp"

namespace nid {

using json = nlohmann::json;

namespace {

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json network_json(const DenseNetwork& net) {
    json j;
    j["layer_sizes"] = net.layer_sizes;
    j["weights"] = json::array();
    j["biases"] = json::array();
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        const auto& w = net.weights[l];
        std::vector<double> row_major;
        row_major.reserve(static_cast<std::size_t>(w.size()));
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) row_major.push_back(w(r, c));
        }
        j["weights"].push_back(row_major);
        j["biases"].push_back(vector_json(net.biases[l]));
    }
    j["output_weights"] = vector_json(net.output_weights);
    j["output_bias"] = net.output_bias;
    return j;
}

Eigen::VectorXd read_vector(const json& j) {
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

DenseNetwork read_network(const json& j, const std::string& where) {
    DenseNetwork net;
    net.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
    if (net.layer_sizes.empty()) throw Error(ErrorKind::Shape, where + ": empty layer_sizes");
    for (int s : net.layer_sizes) {
        if (s <= 0) throw Error(ErrorKind::Shape, where + ": non-positive layer size");
    }
    const auto& weights = j.at("weights");
    const auto& biases = j.at("biases");
    const std::size_t L = net.layer_sizes.size() - 1;
    if (weights.size() != L || biases.size() != L) {
        throw Error(ErrorKind::Shape, where + ": expected " + std::to_string(L) + " weight matrices, found " +
                                          std::to_string(weights.size()));
    }
    for (std::size_t l = 0; l < L; ++l) {
        const auto flat = weights[l].get<std::vector<double>>();
        const int rows = net.layer_sizes[l + 1];
        const int cols = net.layer_sizes[l];
        if (flat.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
            throw Error(ErrorKind::Shape, where + ": W^(" + std::to_string(l + 1) + ") has " +
                                              std::to_string(flat.size()) + " values, layer_sizes require " +
                                              std::to_string(rows) + "x" + std::to_string(cols));
        }
        Eigen::MatrixXd w(rows, cols);
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) w(r, c) = flat[static_cast<std::size_t>(r) * cols + c];
        }
        net.weights.push_back(std::move(w));
        net.biases.push_back(read_vector(biases[l]));
    }
    net.output_weights = read_vector(j.at("output_weights"));
    net.output_bias = j.at("output_bias").get<double>();
    try {
        net.check_shapes();
    } catch (const Error& e) {
        throw Error(ErrorKind::Shape, where + ": " + e.what());
    }
    return net;
}

}  // namespace

std::string model_to_string(const CompositeModel& model) {
    json j;
    j["format"] = "nid-model";
    j["format_version"] = kModelFormatVersion;
    j["task"] = std::string(to_string(model.task));
    j["layer_sizes"] = model.main ? json(model.main->layer_sizes) : json(nullptr);
    j["scaling"] = {
        {"feature_mean", vector_json(model.scaling.feature_mean)},
        {"feature_scale", vector_json(model.scaling.feature_scale)},
        {"target_mean", model.scaling.target_mean},
        {"target_scale", model.scaling.target_scale},
    };
    j["main"] = model.main ? network_json(*model.main) : json(nullptr);
    j["univariate"] = json::array();
    for (const auto& u : model.univariate) j["univariate"].push_back(network_json(u));
    j["interactions"] = json::array();
    for (const auto& in : model.interactions) {
        std::vector<int> one_based;
        for (int i : in.features.indices()) one_based.push_back(i + 1);
        j["interactions"].push_back({{"features", one_based}, {"network", network_json(in.net)}});
    }
    return j.dump(1) + "\n";
}

CompositeModel model_from_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Parse, std::string("malformed model file: ") + e.what());
    }
    try {
        if (!j.is_object() || j.value("format", std::string()) != "nid-model") {
            throw Error(ErrorKind::Parse, "not a model file (missing format tag)");
        }
        const int version = j.at("format_version").get<int>();
        if (version != kModelFormatVersion) {
            throw Error(ErrorKind::VersionMismatch, "model format version " + std::to_string(version) +
                                                        " is not supported (expected " +
                                                        std::to_string(kModelFormatVersion) + ")");
        }
        CompositeModel model;
        model.task = parse_task(j.at("task").get<std::string>());
        const auto& s = j.at("scaling");
        model.scaling.feature_mean = read_vector(s.at("feature_mean"));
        model.scaling.feature_scale = read_vector(s.at("feature_scale"));
        model.scaling.target_mean = s.at("target_mean").get<double>();
        model.scaling.target_scale = s.at("target_scale").get<double>();
        if (!j.at("main").is_null()) {
            model.main = read_network(j.at("main"), "main network");
            if (j.at("layer_sizes").get<std::vector<int>>() != model.main->layer_sizes) {
                throw Error(ErrorKind::Shape, "main network: layer_sizes disagree with the top-level header");
            }
        }
        const auto& uni = j.at("univariate");
        for (std::size_t i = 0; i < uni.size(); ++i) {
            model.univariate.push_back(read_network(uni[i], "univariate network " + std::to_string(i + 1)));
        }
        for (const auto& entry : j.at("interactions")) {
            auto features = InteractionCandidate::from_one_based(entry.at("features").get<std::vector<int>>());
            auto net = read_network(entry.at("network"), "interaction network {" + features.to_string() + "}");
            model.interactions.push_back({std::move(features), std::move(net)});
        }
        model.check_shapes();
        return model;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("malformed model file: ") + e.what());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::InvalidArgument || e.kind() == ErrorKind::InvalidConfig) {
            throw Error(ErrorKind::Parse, std::string("malformed model file: ") + e.what());
        }
        throw;
    }
}

void save_model(const CompositeModel& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write model '" + path.string() + "'");
    out << model_to_string(model);
}

CompositeModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open model '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return model_from_string(buffer.str());
}

}  // namespace nid
