#pragma once
// Exception hierarchy for the thermometry library. Everything thrown here
// derives from thermo::Error so callers can catch library failures in one
// place and map them to process exit codes.

#include <stdexcept>
#include <string>

namespace thermo {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside the physical domain (T <= 0, negative level index, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// A computation would exceed a configured hard cap (level truncation, grid size).
class ResourceError : public Error {
public:
    using Error::Error;
};

// A quantity is ill-conditioned or undefined at the requested point
// (e.g. the argument of a near-zero complex resultant).
class SingularityError : public Error {
public:
    using Error::Error;
};

// The likelihood carries no information about the parameter (flat response).
class NoInformationError : public Error {
public:
    using Error::Error;
};

// Input failed validation; for config files the message carries file:line.
class ValidationError : public Error {
public:
    using Error::Error;
};

}  // namespace thermo
