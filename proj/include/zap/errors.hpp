#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zap {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Out-of-range or inconsistent parameter (lengths, counts, measure parameters).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Operation requested on an empty buffer.
class EmptyBufferError : public Error {
public:
    using Error::Error;
};

/// A quantity whose definition divides by a zero power or norm.
class UndefinedError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// File system failure; the message carries the offending path.
class IoError : public Error {
public:
    using Error::Error;
};

/// An adaptive filter produced a non-finite weight or error.
class DivergenceError : public Error {
public:
    DivergenceError(std::string algorithm, std::size_t sample, std::size_t run)
        : Error("divergence: algorithm " + algorithm + " became non-finite at sample " +
                std::to_string(sample) + " (run " + std::to_string(run) + ")"),
          algorithm_(std::move(algorithm)), sample_(sample), run_(run) {}

    const std::string& algorithm() const noexcept { return algorithm_; }
    std::size_t sample() const noexcept { return sample_; }
    std::size_t run() const noexcept { return run_; }

private:
    std::string algorithm_;
    std::size_t sample_;
    std::size_t run_;
};

}  // namespace zap
