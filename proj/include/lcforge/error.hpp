#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include "lcforge/report.hpp"

namespace lcforge {

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or precondition supplied by the caller.
class ConfigError : public Error {
public:
    using Error::Error;
};

class MissingSlot : public Error {
public:
    explicit MissingSlot(std::string slot)
        : Error("template slot is unbound: " + slot), slot_(std::move(slot)) {}
    const std::string& slot() const noexcept { return slot_; }

private:
    std::string slot_;
};

class UnknownSlot : public Error {
public:
    explicit UnknownSlot(std::string slot)
        : Error("binding does not match any template slot: " + slot), slot_(std::move(slot)) {}
    const std::string& slot() const noexcept { return slot_; }

private:
    std::string slot_;
};

class InvalidCount : public Error {
public:
    using Error::Error;
};

enum class BackendErrorKind { Transport, RateLimited, MalformedResponse };

inline const char* backend_error_kind_name(BackendErrorKind k) {
    switch (k) {
        case BackendErrorKind::Transport: return "transport";
        case BackendErrorKind::RateLimited: return "rate_limited";
        case BackendErrorKind::MalformedResponse: return "malformed_response";
    }
    return "unknown";
}

class BackendError : public Error {
public:
    BackendError(BackendErrorKind kind, const std::string& what)
        : Error(std::string(backend_error_kind_name(kind)) + ": " + what), kind_(kind) {}
    BackendErrorKind kind() const noexcept { return kind_; }

private:
    BackendErrorKind kind_;
};

/// The regeneration loop ran out of attempts; carries the last failing report.
class Exhausted : public Error {
public:
    Exhausted(ValidationReport report, int attempts, const std::string& stage = {})
        : Error("regeneration exhausted after " + std::to_string(attempts) + " attempt(s)" +
                (stage.empty() ? std::string{} : " in " + stage) + ":\n" + report.failure_summary()),
          report_(std::move(report)),
          attempts_(attempts) {}
    const ValidationReport& report() const noexcept { return report_; }
    int attempts() const noexcept { return attempts_; }

private:
    ValidationReport report_;
    int attempts_;
};

class ValidationFailed : public Error {
public:
    explicit ValidationFailed(ValidationReport report)
        : Error("validation failed:\n" + report.failure_summary()), report_(std::move(report)) {}
    const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

class EmptyDatabase : public Error {
public:
    EmptyDatabase() : Error("scenario database is empty") {}
};

class UnknownLocale : public Error {
public:
    explicit UnknownLocale(const std::string& locale) : Error("no name table for locale: " + locale) {}
};

class RoleViolation : public Error {
public:
    using Error::Error;
};

class BudgetOverflow : public Error {
public:
    using Error::Error;
};

class UnrecognizedSpec : public Error {
public:
    UnrecognizedSpec(std::string raw, std::string path = {})
        : Error("unrecognized placeholder spec" + (path.empty() ? std::string{} : " at " + path) +
                ": \"" + raw + "\""),
          raw_(std::move(raw)),
          path_(std::move(path)) {}
    const std::string& raw() const noexcept { return raw_; }
    const std::string& path() const noexcept { return path_; }

private:
    std::string raw_;
    std::string path_;
};

class EmptyReport : public Error {
public:
    EmptyReport() : Error("cannot score an empty validation report") {}
};

class NoAxesEnabled : public Error {
public:
    NoAxesEnabled() : Error("no judge axis is enabled") {}
};

class UnparseableVerdict : public Error {
public:
    using Error::Error;
};

class ModelRoleConflict : public Error {
public:
    explicit ModelRoleConflict(const std::string& model)
        : Error("judge model must differ from the generation model: " + model) {}
};

class TooFewVerdicts : public Error {
public:
    TooFewVerdicts() : Error("ensemble agreement needs at least two verdicts") {}
};

class DuplicateId : public Error {
public:
    explicit DuplicateId(std::string id) : Error("duplicate record id: " + id), id_(std::move(id)) {}
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class IoFailure : public Error {
public:
    using Error::Error;
};

class ParseFailure : public Error {
public:
    ParseFailure(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class TraceUnparseable : public Error {
public:
    using Error::Error;
};

}  // namespace lcforge
