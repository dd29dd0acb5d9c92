// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef TXCLUSTER_ERRORS_H
#define TXCLUSTER_ERRORS_H

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace txcluster {

/** Base class for every error raised by the library. */
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/** A record or field that is not valid JSON or has the wrong type. */
class MalformedRecord : public Error
{
public:
    MalformedRecord(std::string field, const std::string& what)
        : Error("malformed record: " + field + ": " + what), m_field(std::move(field)) {}
    const std::string& field() const noexcept { return m_field; }

private:
    std::string m_field;
};

/** A well-typed record that breaks a data-model invariant. */
class InvariantViolation : public Error
{
public:
    InvariantViolation(std::string field, const std::string& what)
        : Error("invariant violation: " + field + ": " + what), m_field(std::move(field)) {}
    const std::string& field() const noexcept { return m_field; }

private:
    std::string m_field;
};

class UnknownTransaction : public Error
{
public:
    explicit UnknownTransaction(const std::string& txid) : Error("unknown transaction: " + txid) {}
};

class CycleDetected : public Error
{
public:
    explicit CycleDetected(std::vector<std::string> txids);
    const std::vector<std::string>& txids() const noexcept { return m_txids; }

private:
    std::vector<std::string> m_txids;
};

class UnknownHeuristic : public Error
{
public:
    explicit UnknownHeuristic(const std::string& id) : Error("unknown heuristic: " + id), m_id(id) {}
    const std::string& id() const noexcept { return m_id; }

private:
    std::string m_id;
};

class UnknownScenario : public Error
{
public:
    explicit UnknownScenario(const std::string& name) : Error("unknown scenario: " + name) {}
};

class MalformedClusterFile : public Error
{
public:
    MalformedClusterFile(std::size_t line, const std::string& what)
        : Error("malformed cluster file, line " + std::to_string(line) + ": " + what), m_line(line) {}
    std::size_t line() const noexcept { return m_line; }

private:
    std::size_t m_line;
};

class MalformedLabelFile : public Error
{
public:
    MalformedLabelFile(std::size_t line, const std::string& what)
        : Error("malformed label file, line " + std::to_string(line) + ": " + what), m_line(line) {}
    std::size_t line() const noexcept { return m_line; }

private:
    std::size_t m_line;
};

class SingletonCluster : public Error
{
public:
    SingletonCluster() : Error("classification is undefined for a singleton cluster") {}
};

class ConfigError : public Error
{
public:
    using Error::Error;
};

/** A batch of ingest input that was rejected as a whole; one message per bad line. */
class IngestError : public Error
{
public:
    explicit IngestError(std::vector<std::string> problems)
        : Error(problems.empty() ? "ingest failed" : problems.front()), m_problems(std::move(problems)) {}
    const std::vector<std::string>& problems() const noexcept { return m_problems; }

private:
    std::vector<std::string> m_problems;
};

} // namespace txcluster

#endif // TXCLUSTER_ERRORS_H
