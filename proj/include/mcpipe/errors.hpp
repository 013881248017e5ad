#pragma once

#include <stdexcept>
#include <string>

namespace mcpipe {

// Invalid configuration or input contract violation. The CLI maps this to
// exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical routine failed to converge (quadrature, optimizer). Exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Threshold synchronization found no signal onset. Exit code 4.
class SyncError : public std::runtime_error {
public:
    explicit SyncError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mcpipe
