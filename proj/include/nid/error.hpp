#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nid {

enum class ErrorKind {
    InvalidConfig,
    InvalidArgument,
    InvalidData,
    Shape,
    Parse,
    VersionMismatch,
    Diverged,
    UndefinedMetric,
    Domain,
    Io,
};

std::string_view to_string(ErrorKind kind);

/// Base error for everything thrown by the library. The kind decides the
/// CLI exit code and the machine-readable code printed with the message.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class TrainingDiverged : public Error {
public:
    explicit TrainingDiverged(int epoch)
        : Error(ErrorKind::Diverged,
                "training diverged (non-finite loss) at epoch " + std::to_string(epoch)),
          epoch_(epoch) {}

    int epoch() const noexcept { return epoch_; }

private:
    int epoch_;
};

}  // namespace nid
