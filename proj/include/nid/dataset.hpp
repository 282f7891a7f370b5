#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace nid {

enum class Task { Regression, BinaryClassification };

std::string_view to_string(Task task);
Task parse_task(std::string_view text);

struct Splits {
    std::vector<std::size_t> train;
    std::vector<std::size_t> valid;
    std::vector<std::size_t> test;
};

/// Row-per-sample feature matrix plus target. Splits index rows and are
/// disjoint; together they cover every row.
struct Dataset {
    Eigen::MatrixXd features;  // n x p
    Eigen::VectorXd target;    // n
    Task task = Task::Regression;
    Splits splits;
    std::vector<std::string> feature_names;  // empty -> x1..xp

    std::size_t rows() const { return static_cast<std::size_t>(features.rows()); }
    std::size_t cols() const { return static_cast<std::size_t>(features.cols()); }
    std::string feature_name(std::size_t j) const;

    /// Throws InvalidData when shapes disagree, splits overlap or leave
    /// rows out, or any value is non-finite.
    void validate() const;
};

/// Random disjoint partition with sizes round(f_train*n), round(f_valid*n)
/// and the remainder for test. Fractions must be nonnegative and sum to 1.
Dataset split(Dataset data, const std::array<double, 3>& fractions, std::uint64_t seed);

/// Per-column mean and standard deviation (population) over the given rows.
/// A zero deviation is reported as 1 so scaling stays finite.
struct ColumnStats {
    Eigen::VectorXd mean;
    Eigen::VectorXd scale;
};
ColumnStats column_stats(const Eigen::MatrixXd& values, const std::vector<std::size_t>& rows);

/// CSV with a header row; the last column is the target. The task is not
/// stored in the file and must be supplied by the caller.
Dataset read_csv(const std::filesystem::path& path, Task task = Task::Regression);
void write_csv(const Dataset& data, const std::filesystem::path& path);

/// Writes "train,valid,test" membership as one split name per row.
void write_splits(const Dataset& data, const std::filesystem::path& path);
/// Reads a file produced by write_splits and installs it on data.
void read_splits(Dataset& data, const std::filesystem::path& path);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace nid
