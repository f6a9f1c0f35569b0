#pragma once

#include <stdexcept>
#include <string>

namespace infodiag {

/// Ground-set size outside the supported range.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Malformed argument: overlapping parts, atom not in a set, bad matrix, ...
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Absolute-continuity violations and other evaluation-domain failures.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Conditioning on an event of probability zero.
class ConditioningError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Abstract model lacks a structure an operation requires (e.g. a top element).
class UnsupportedModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation does not hold on its input.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two characterizations that must agree gave different answers.
class VerificationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Input document does not follow the expected schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace infodiag
