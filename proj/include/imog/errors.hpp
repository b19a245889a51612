#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace imog {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownElement : public Error {
public:
    explicit UnknownElement(const std::string& id)
        : Error("unknown element '" + id + "'"), id_(id) {}
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class BudgetExceeded : public Error {
public:
    BudgetExceeded(std::size_t budget, std::size_t features)
        : Error("enumeration budget exceeded: " + std::to_string(features) + " features, budget " +
                std::to_string(budget)),
          budget_(budget), features_(features) {}
    std::size_t budget() const noexcept { return budget_; }
    std::size_t features() const noexcept { return features_; }

private:
    std::size_t budget_;
    std::size_t features_;
};

/// The feature relations do not form a single tree.
class InvalidFeatureModel : public Error {
public:
    using Error::Error;
};

class KindNotExtractable : public Error {
public:
    explicit KindNotExtractable(const std::string& id)
        : Error("element '" + id + "' cannot be extracted into the knowledge base"), id_(id) {}
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class StoreCorrupt : public Error {
public:
    StoreCorrupt(const std::string& path, std::size_t line, const std::string& what)
        : Error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoFailure : public Error {
public:
    using Error::Error;
};

} // namespace imog
