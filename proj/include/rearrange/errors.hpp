#pragma once

#include <stdexcept>
#include <string>

namespace rearrange {

// Fatal environment/configuration problems (unreadable repo, bad branch).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Caller violated a documented precondition.
class contract_error : public std::logic_error {
public:
    explicit contract_error(const std::string& msg) : std::logic_error(msg) {}
};

// Malformed input data (bad CSV row, corrupt model file).
class data_error : public std::runtime_error {
public:
    explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace rearrange
