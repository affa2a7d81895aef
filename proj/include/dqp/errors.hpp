#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dqp {

// Misuse of the model API: bad ids, structural rule broken by a builder call.
class PatternError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Concretisation failures (unknown parameter, option outside domain, ...).
class BindingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// finalize() with open parameters; carries the parameter names.
class IncompleteBindingError : public BindingError {
public:
    IncompleteBindingError(const std::string& msg, std::vector<std::string> missing)
        : BindingError(msg), missing_(std::move(missing)) {}
    const std::vector<std::string>& missing() const { return missing_; }

private:
    std::vector<std::string> missing_;
};

// Text-format errors with a 1-based position.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line, int column)
        : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " +
                             std::to_string(column)),
          line_(line),
          column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// Pattern document does not match the JSON schema; pointer is RFC 6901 style.
class SchemaError : public std::runtime_error {
public:
    SchemaError(const std::string& pointer, const std::string& msg)
        : std::runtime_error(pointer + ": " + msg), pointer_(pointer) {}
    const std::string& pointer() const { return pointer_; }

private:
    std::string pointer_;
};

}  // namespace dqp
