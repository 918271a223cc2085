#pragma once

#include <stdexcept>
#include <string>

namespace teamseg {

// Coarse buckets; the CLI maps them onto exit codes (input: 1,
// config/model: 2, numeric: 3).
enum class ErrorKind { Input, Config, Numeric };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

struct FormatError : Error {
    explicit FormatError(const std::string& m) : Error(ErrorKind::Input, m) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& m) : Error(ErrorKind::Config, m) {}
};

struct NumericError : Error {
    explicit NumericError(const std::string& m) : Error(ErrorKind::Numeric, m) {}
};

// Raised when a model is asked for more history than it has seen
// (e.g. bandwidth estimation from fewer than two samples).
struct InsufficientHistoryError : Error {
    explicit InsufficientHistoryError(const std::string& m)
        : Error(ErrorKind::Config, m) {}
};

// A classifier refusing to break an exact tie. Carries both contenders so
// the caller can log them; pipelines record the region as unclassified.
class TieError : public Error {
public:
    TieError(double a, double b)
        : Error(ErrorKind::Numeric,
                "classification tie: " + std::to_string(a) + " vs " + std::to_string(b)),
          a_(a), b_(b) {}
    double first() const { return a_; }
    double second() const { return b_; }

private:
    double a_, b_;
};

} // namespace teamseg
