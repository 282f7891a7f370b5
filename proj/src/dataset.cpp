#include "nid/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "nid/error.hpp"

namespace nid {

std::string_view to_string(Task task) {
    return task == Task::Regression ? "regression" : "classification";
}

Task parse_task(std::string_view text) {
    if (text == "regression") return Task::Regression;
    if (text == "classification" || text == "binary-classification") return Task::BinaryClassification;
    throw Error(ErrorKind::InvalidConfig, "unknown task '" + std::string(text) + "'");
}

std::string Dataset::feature_name(std::size_t j) const {
    if (j < feature_names.size()) return feature_names[j];
    return "x" + std::to_string(j + 1);
}

void Dataset::validate() const {
    if (target.size() != features.rows()) {
        throw Error(ErrorKind::InvalidData, "target length does not match feature rows");
    }
    if (!features.allFinite() || !target.allFinite()) {
        throw Error(ErrorKind::InvalidData, "dataset contains non-finite values");
    }
    if (task == Task::BinaryClassification) {
        for (Eigen::Index i = 0; i < target.size(); ++i) {
            if (target[i] != 0.0 && target[i] != 1.0) {
                throw Error(ErrorKind::InvalidData, "classification targets must be 0 or 1");
            }
        }
    }
    std::vector<char> seen(rows(), 0);
    std::size_t covered = 0;
    for (const auto* part : {&splits.train, &splits.valid, &splits.test}) {
        for (std::size_t idx : *part) {
            if (idx >= rows()) throw Error(ErrorKind::InvalidData, "split index out of range");
            if (seen[idx]) throw Error(ErrorKind::InvalidData, "splits overlap");
            seen[idx] = 1;
            ++covered;
        }
    }
    if (covered != rows()) throw Error(ErrorKind::InvalidData, "splits do not cover every row");
}

Dataset split(Dataset data, const std::array<double, 3>& fractions, std::uint64_t seed) {
    double total = 0.0;
    for (double f : fractions) {
        if (!(f >= 0.0)) throw Error(ErrorKind::InvalidConfig, "split fractions must be nonnegative");
        total += f;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw Error(ErrorKind::InvalidConfig, "split fractions must sum to 1");
    }
    const std::size_t n = data.rows();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    auto n_train = std::min<std::size_t>(n, static_cast<std::size_t>(std::llround(fractions[0] * n)));
    auto n_valid = std::min<std::size_t>(n - n_train, static_cast<std::size_t>(std::llround(fractions[1] * n)));
    if (fractions[2] == 0.0) n_valid = n - n_train;
    if (fractions[1] == 0.0 && fractions[2] == 0.0) n_train = n;

    auto begin = order.begin();
    data.splits.train.assign(begin, begin + n_train);
    data.splits.valid.assign(begin + n_train, begin + n_train + n_valid);
    data.splits.test.assign(begin + n_train + n_valid, order.end());
    for (auto* part : {&data.splits.train, &data.splits.valid, &data.splits.test}) {
        std::sort(part->begin(), part->end());
    }
    return data;
}

ColumnStats column_stats(const Eigen::MatrixXd& values, const std::vector<std::size_t>& rows) {
    const Eigen::Index p = values.cols();
    ColumnStats stats{Eigen::VectorXd::Zero(p), Eigen::VectorXd::Ones(p)};
    if (rows.empty()) return stats;
    const double n = static_cast<double>(rows.size());
    for (Eigen::Index j = 0; j < p; ++j) {
        double sum = 0.0;
        for (std::size_t r : rows) sum += values(static_cast<Eigen::Index>(r), j);
        const double mean = sum / n;
        double sq = 0.0;
        for (std::size_t r : rows) {
            const double d = values(static_cast<Eigen::Index>(r), j) - mean;
            sq += d * d;
        }
        const double sd = std::sqrt(sq / n);
        stats.mean[j] = mean;
        stats.scale[j] = sd > 0.0 ? sd : 1.0;
    }
    return stats;
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        if (!cell.empty() && cell.back() == '\r') cell.pop_back();
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_cell(const std::string& cell, std::size_t line_no) {
    auto first = cell.find_first_not_of(" \t");
    auto last = cell.find_last_not_of(" \t");
    if (first == std::string::npos) {
        throw Error(ErrorKind::InvalidData, "empty cell on line " + std::to_string(line_no));
    }
    double value = 0.0;
    const char* begin = cell.data() + first;
    const char* end = cell.data() + last + 1;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw Error(ErrorKind::InvalidData,
                    "non-numeric cell '" + cell + "' on line " + std::to_string(line_no));
    }
    return value;
}

}  // namespace

Dataset read_csv(const std::filesystem::path& path, Task task) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open dataset '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::InvalidData, "dataset '" + path.string() + "' is empty");
    auto header = split_line(line);
    if (header.size() < 2) {
        throw Error(ErrorKind::InvalidData, "dataset needs at least one feature column and a target column");
    }
    const std::size_t cols = header.size();
    std::vector<double> values;
    std::size_t line_no = 1;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto cells = split_line(line);
        if (cells.size() != cols) {
            throw Error(ErrorKind::InvalidData, "line " + std::to_string(line_no) + " has " +
                                                    std::to_string(cells.size()) + " cells, expected " +
                                                    std::to_string(cols));
        }
        for (const auto& c : cells) values.push_back(parse_cell(c, line_no));
        ++n;
    }
    if (n == 0) throw Error(ErrorKind::InvalidData, "dataset '" + path.string() + "' has no rows");

    Dataset data;
    data.task = task;
    const auto p = static_cast<Eigen::Index>(cols - 1);
    data.features.resize(static_cast<Eigen::Index>(n), p);
    data.target.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) data.features(static_cast<Eigen::Index>(i), j) = values[i * cols + j];
        data.target[static_cast<Eigen::Index>(i)] = values[i * cols + cols - 1];
    }
    data.feature_names.assign(header.begin(), header.end() - 1);
    data.splits.train.resize(n);
    std::iota(data.splits.train.begin(), data.splits.train.end(), std::size_t{0});
    data.validate();
    return data;
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
    for (std::size_t j = 0; j < data.cols(); ++j) out << data.feature_name(j) << ',';
    out << "y\n";
    for (Eigen::Index i = 0; i < data.features.rows(); ++i) {
        for (Eigen::Index j = 0; j < data.features.cols(); ++j) out << format_double(data.features(i, j)) << ',';
        out << format_double(data.target[i]) << '\n';
    }
}

void write_splits(const Dataset& data, const std::filesystem::path& path) {
    std::vector<const char*> label(data.rows(), "test");
    for (auto i : data.splits.train) label[i] = "train";
    for (auto i : data.splits.valid) label[i] = "valid";
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
    out << "split\n";
    for (const char* l : label) out << l << '\n';
}

void read_splits(Dataset& data, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open splits '" + path.string() + "'");
    std::string line;
    std::getline(in, line);
    Splits splits;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line == "train") splits.train.push_back(row);
        else if (line == "valid") splits.valid.push_back(row);
        else if (line == "test") splits.test.push_back(row);
        else throw Error(ErrorKind::InvalidData, "unknown split label '" + line + "'");
        ++row;
    }
    if (row != data.rows()) throw Error(ErrorKind::InvalidData, "splits file row count does not match dataset");
    data.splits = std::move(splits);
}

}  // namespace nid
