#pragma once

#include <stdexcept>
#include <string>

namespace vfield {

// Error taxonomy used across the toolkit. All domain errors derive from
// std::runtime_error; argument-contract violations use std::invalid_argument.

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidScene : std::runtime_error {
    explicit InvalidScene(const std::string& msg) : std::runtime_error(msg) {}
};

struct BoundsError : std::runtime_error {
    explicit BoundsError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InsufficientScenes : std::runtime_error {
    explicit InsufficientScenes(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateData : std::runtime_error {
    explicit DegenerateData(const std::string& msg) : std::runtime_error(msg) {}
};

struct UnobservedBlock : std::runtime_error {
    explicit UnobservedBlock(const std::string& msg) : std::runtime_error(msg) {}
};

struct CorruptEvent : std::runtime_error {
    explicit CorruptEvent(const std::string& msg) : std::runtime_error(msg) {}
};

struct ImpossibleGeometry : std::runtime_error {
    explicit ImpossibleGeometry(const std::string& msg) : std::runtime_error(msg) {}
};

// Upstream artifact does not match the hashes recorded in a manifest.
struct IntegrityError : std::runtime_error {
    explicit IntegrityError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace vfield
