#pragma once

#include <stdexcept>
#include <string>

namespace scrambled {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of an operation.
class DomainError : public Error {
   public:
    using Error::Error;
};

class NotHermitian : public Error {
   public:
    using Error::Error;
};

/// A matrix or file violates a state invariant; the message names the invariant.
class InvalidState : public Error {
   public:
    using Error::Error;
};

class InvalidDistribution : public Error {
   public:
    using Error::Error;
};

class DuplicateSetting : public Error {
   public:
    using Error::Error;
};

class SettingMismatch : public Error {
   public:
    using Error::Error;
};

class MissingSetting : public Error {
   public:
    using Error::Error;
};

/// Multi-start optimization did not reproduce its best value across starts.
class ConvergenceFailure : public Error {
   public:
    using Error::Error;
};

class ParseError : public Error {
   public:
    using Error::Error;
};

}  // namespace scrambled
