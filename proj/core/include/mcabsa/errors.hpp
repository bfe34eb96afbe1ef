#pragma once

#include <stdexcept>
#include <string>

namespace mcabsa {

/// Base class for every error this library raises.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Dataset or prediction file violates the schema. Carries the offending
/// document id and a dotted field path when they are known.
class SchemaError : public Error {
public:
    SchemaError(std::string doc_id, std::string field_path, const std::string& msg)
        : Error(format(doc_id, field_path, msg)),
          doc_id_(std::move(doc_id)),
          field_path_(std::move(field_path)) {}

    const std::string& doc_id() const { return doc_id_; }
    const std::string& field_path() const { return field_path_; }

private:
    static std::string format(const std::string& doc, const std::string& field,
                              const std::string& msg) {
        std::string out = "schema error";
        if (!doc.empty()) out += " [doc " + doc + "]";
        if (!field.empty()) out += " at " + field;
        return out + ": " + msg;
    }

    std::string doc_id_;
    std::string field_path_;
};

class DuplicateDocId : public SchemaError {
public:
    explicit DuplicateDocId(const std::string& doc_id)
        : SchemaError(doc_id, "doc_id", "duplicate doc_id \"" + doc_id + "\"") {}
};

class DanglingReplyTo : public SchemaError {
public:
    DanglingReplyTo(const std::string& doc_id, int utterance_id, int reply_to)
        : SchemaError(doc_id, "dialogue[" + std::to_string(utterance_id) + "].reply_to",
                      "reply_to=" + std::to_string(reply_to) +
                          " does not reference an earlier utterance") {}
};

/// Model output could not be parsed into the expected structure.
class ParseFailure : public Error {
public:
    explicit ParseFailure(const std::string& msg) : Error("parse failure: " + msg) {}
};

/// Scripted provider has no entry for the request.
class ScriptMiss : public Error {
public:
    explicit ScriptMiss(const std::string& msg) : Error("script miss: " + msg) {}
};

/// All retry attempts against a provider were spent.
class BackendExhausted : public Error {
public:
    explicit BackendExhausted(const std::string& msg) : Error("backend exhausted: " + msg) {}
};

/// A stage binding or request names a backend that is not configured.
class UnknownBackend : public Error {
public:
    explicit UnknownBackend(const std::string& name) : Error("unknown backend \"" + name + "\"") {}
};

/// Caption backend produced empty text after all retries.
class EmptyCaption : public Error {
public:
    explicit EmptyCaption(const std::string& msg) : Error("empty caption: " + msg) {}
};

/// Every consensus sample failed to parse.
class NoValidSamples : public Error {
public:
    explicit NoValidSamples(const std::string& msg) : Error("no valid samples: " + msg) {}
};

/// A cache key was rewritten with different content.
class CacheIntegrityError : public Error {
public:
    explicit CacheIntegrityError(const std::string& msg) : Error("cache integrity: " + msg) {}
};

/// Run configuration is unusable (bad JSON, unresolved binding, missing prompt).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error("config error: " + msg) {}
};

}  // namespace mcabsa
