#pragma once

#include <stdexcept>
#include <string>

namespace faith {

/// Base for every error raised by the harness.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// gateway
class EndpointUnavailable : public Error { using Error::Error; };
class TemplateUnfilled : public Error { using Error::Error; };
class UnparseableVerdict : public Error { using Error::Error; };

/// Raised by the transport layer for failures worth retrying
/// (connection errors, HTTP 429 and 5xx).
class TransportError : public Error { using Error::Error; };

// strength / conflict / evidence
class ExcludedQuestion : public Error { using Error::Error; };
class InvalidPartition : public Error { using Error::Error; };
class OutOfRange : public Error { using Error::Error; };
class NoDifference : public Error { using Error::Error; };
class MissingComponent : public Error { using Error::Error; };

// eval
class MissingEvidence : public Error { using Error::Error; };
class EmptyGroup : public Error { using Error::Error; };
class UnknownDimension : public Error { using Error::Error; };

// cli / pipeline
class MissingUpstream : public Error { using Error::Error; };
class ConfigMismatch : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };

class SchemaViolation : public Error {
public:
    SchemaViolation(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace faith
