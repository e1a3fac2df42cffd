#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace uavmec {

// Base for every error raised by the library. Callers that only care about
// "something went wrong" catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A value violates a documented type invariant (bad overrides, bad file data).
class InvalidScenario : public Error {
public:
    using Error::Error;
};

// Malformed scenario/config file. `field` is the dotted key path, `location`
// names where in the document it happened.
class ParseError : public Error {
public:
    ParseError(std::string field, std::string location, std::string reason)
        : Error("parse error at " + location + " (field '" + field + "'): " + reason),
          field_(std::move(field)), location_(std::move(location)), reason_(std::move(reason)) {}

    const std::string& field() const noexcept { return field_; }
    const std::string& location() const noexcept { return location_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::string field_;
    std::string location_;
    std::string reason_;
};

// T * f <= F: no transmit power can meet the deadline at this capacity.
class InfeasibleDeadline : public Error {
public:
    InfeasibleDeadline(double min_capacity_hz, const std::string& what)
        : Error(what), min_capacity_hz_(min_capacity_hz) {}
    // Capacity must strictly exceed this value.
    double min_capacity_hz() const noexcept { return min_capacity_hz_; }

private:
    double min_capacity_hz_;
};

// Even at maximum UE power the upload alone takes at least T.
class DeadlineUnreachable : public Error {
public:
    using Error::Error;
};

class BracketError : public Error {
public:
    using Error::Error;
};

// Per-UAV capacity subproblem has sum f_min > capped capacity.
class CapacityInfeasible : public Error {
public:
    CapacityInfeasible(double overload_hz, const std::string& what)
        : Error(what), overload_hz_(overload_hz) {}
    double overload_hz() const noexcept { return overload_hz_; }

private:
    double overload_hz_;
};

class LocalInfeasible : public Error {
public:
    using Error::Error;
};

class NoFeasibleChoice : public Error {
public:
    NoFeasibleChoice(std::vector<int> ues, const std::string& what)
        : Error(what), ues_(std::move(ues)) {}
    const std::vector<int>& ues() const noexcept { return ues_; }

private:
    std::vector<int> ues_;
};

// Fixed-beamwidth placement cannot cover the served set.
class PlacementInfeasible : public Error {
public:
    using Error::Error;
};

class AllInfeasible : public Error {
public:
    using Error::Error;
};

struct UeRejection {
    int ue_index = 0;
    // One entry per UAV tried, e.g. "uav 2: not covered".
    std::vector<std::string> reasons;
};

class InfeasibleScenario : public Error {
public:
    InfeasibleScenario(std::vector<UeRejection> rejected, const std::string& what)
        : Error(what), rejected_(std::move(rejected)) {}
    const std::vector<UeRejection>& rejected() const noexcept { return rejected_; }

private:
    std::vector<UeRejection> rejected_;
};

class ScaleExceeded : public Error {
public:
    using Error::Error;
};

// A sub-step failed from a feasible start; indicates a bug, not bad input.
class SolverAssertion : public Error {
public:
    using Error::Error;
};

}  // namespace uavmec
