#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace phdnas {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value lies outside its admissible range (index, probability, bin count).
class RangeError : public Error {
public:
    using Error::Error;
};

/// Two inputs disagree in dimension or layout.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A caller-side precondition was violated (e.g. empty population).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// An object was used in a state that does not support the operation.
class StateError : public Error {
public:
    using Error::Error;
};

/// Invalid search configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

class MissingArchitectureError : public Error {
public:
    explicit MissingArchitectureError(std::uint32_t index, std::string context = {})
        : Error(make_message(index, context)), index_(index) {}

    [[nodiscard]] std::uint32_t index() const noexcept { return index_; }

private:
    static std::string make_message(std::uint32_t index, const std::string& context) {
        std::string msg = "benchmark table has no row for architecture index " + std::to_string(index);
        if (!context.empty()) msg += " (" + context + ")";
        return msg;
    }

    std::uint32_t index_;
};

class UnknownDeviceError : public Error {
public:
    UnknownDeviceError(std::string device, std::vector<std::string> available)
        : Error(make_message(device, available)), device_(std::move(device)), available_(std::move(available)) {}

    [[nodiscard]] const std::string& device() const noexcept { return device_; }
    [[nodiscard]] const std::vector<std::string>& available() const noexcept { return available_; }

private:
    static std::string make_message(const std::string& device, const std::vector<std::string>& available) {
        std::string msg = "unknown device '" + device + "'; available:";
        for (const auto& d : available) msg += " " + d;
        return msg;
    }

    std::string device_;
    std::vector<std::string> available_;
};

/// Malformed benchmark input. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class CompletenessError : public Error {
public:
    explicit CompletenessError(std::size_t missing)
        : Error("benchmark table is incomplete: " + std::to_string(missing) + " architecture row(s) missing"),
          missing_(missing) {}

    [[nodiscard]] std::size_t missing() const noexcept { return missing_; }

private:
    std::size_t missing_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

/// File system failure (open, read, write).
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace phdnas
