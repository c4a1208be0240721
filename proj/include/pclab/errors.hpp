#pragma once

#include <stdexcept>
#include <string>

namespace pclab {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownLabel : std::runtime_error {
    explicit UnknownLabel(const std::string& what) : std::runtime_error(what) {}
};

struct NotAContraction : std::runtime_error {
    explicit NotAContraction(const std::string& what) : std::runtime_error(what) {}
};

struct UnboundedRegion : std::runtime_error {
    explicit UnboundedRegion(const std::string& what) : std::runtime_error(what) {}
};

struct DistanceToEmpty : std::runtime_error {
    explicit DistanceToEmpty(const std::string& what) : std::runtime_error(what) {}
};

struct OutsideDomain : std::runtime_error {
    explicit OutsideDomain(const std::string& what) : std::runtime_error(what) {}
};

struct SingularPoint : std::runtime_error {
    explicit SingularPoint(const std::string& what) : std::runtime_error(what) {}
};

// Transition-map construction found an ambiguous image; callers react by
// enumerating deeper rather than guessing a branch.
struct SeparationViolated : std::runtime_error {
    explicit SeparationViolated(const std::string& what) : std::runtime_error(what) {}
};

// A certificate failed its own post-verification. Always a bug, never silenced.
struct CertificateInconsistent : std::runtime_error {
    explicit CertificateInconsistent(const std::string& what) : std::runtime_error(what) {}
};

struct ResourceExceeded : std::runtime_error {
    explicit ResourceExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidParameter : std::runtime_error {
    explicit InvalidParameter(const std::string& what) : std::runtime_error(what) {}
};

struct PreconditionFailed : std::runtime_error {
    explicit PreconditionFailed(const std::string& what) : std::runtime_error(what) {}
};

struct Unsupported : std::runtime_error {
    explicit Unsupported(const std::string& what) : std::runtime_error(what) {}
};

} // namespace pclab
