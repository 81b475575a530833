#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mocp {

/// Base of every error raised by the runtime.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Specification (automaton, monitor, scenario) is ill-formed or inconsistent.
class SpecError : public Error {
public:
    using Error::Error;
};

/// Two transitions of a compensating automaton matched the same event.
class MalformedSpec : public SpecError {
public:
    using SpecError::SpecError;
};

class MissingCaptureKey : public Error {
public:
    explicit MissingCaptureKey(std::string key)
        : Error("missing capture key '" + key + "'"), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class UnknownStrategy : public Error {
public:
    explicit UnknownStrategy(std::string name)
        : Error("unknown compensation strategy '" + name + "'"), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class ChannelLoopDetected : public Error {
public:
    using Error::Error;
};

/// Handshake or emission loop violated its contract.
class ProtocolError : public Error {
public:
    using Error::Error;
};

class Deadlock : public ProtocolError {
public:
    explicit Deadlock(std::uint64_t seq, const std::string& why)
        : ProtocolError("deadlock at event " + std::to_string(seq) + ": " + why), seq_(seq) {}
    std::uint64_t seq() const noexcept { return seq_; }

private:
    std::uint64_t seq_;
};

/// Reading or writing a file failed.
class IoError : public Error {
public:
    using Error::Error;
};

/// Forward action could not be performed; the harness turns these into fail events.
class ActionRefused : public Error {
public:
    using Error::Error;
};

class InsufficientFunds : public ActionRefused {
public:
    using ActionRefused::ActionRefused;
};

class NoCourierAvailable : public ActionRefused {
public:
    using ActionRefused::ActionRefused;
};

/// Compensation instruction could not be executed; world left unchanged.
class CompensationFault : public Error {
public:
    using Error::Error;
};

}  // namespace mocp
