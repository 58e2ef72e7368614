#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace fwdlogic {

enum class ErrorKind {
  // context construction
  DuplicateName,
  UnknownAnnotationTarget,
  IllFormed,
  // cp-typing
  UnusedEndpoint,
  UnknownEndpoint,
  TypeMismatch,
  NonAtomicLink,
  SplitFailure,
  SideConditionViolation,
  // forwarder-typing
  RuleMismatch,
  WrongTarget,
  EmptyQueue,
  ResidualQueue,
  Unclosed,
  // context-lts
  NonMultiplicative,
  // mcut-engine
  Stuck,
  MeasureViolation,
  // frontend
  ParseError,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::UnknownAnnotationTarget: return "UnknownAnnotationTarget";
    case ErrorKind::IllFormed: return "IllFormed";
    case ErrorKind::UnusedEndpoint: return "UnusedEndpoint";
    case ErrorKind::UnknownEndpoint: return "UnknownEndpoint";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::NonAtomicLink: return "NonAtomicLink";
    case ErrorKind::SplitFailure: return "SplitFailure";
    case ErrorKind::SideConditionViolation: return "SideConditionViolation";
    case ErrorKind::RuleMismatch: return "RuleMismatch";
    case ErrorKind::WrongTarget: return "WrongTarget";
    case ErrorKind::EmptyQueue: return "EmptyQueue";
    case ErrorKind::ResidualQueue: return "ResidualQueue";
    case ErrorKind::Unclosed: return "Unclosed";
    case ErrorKind::NonMultiplicative: return "NonMultiplicative";
    case ErrorKind::Stuck: return "Stuck";
    case ErrorKind::MeasureViolation: return "MeasureViolation";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "?";
}

/// A diagnostic. `where` holds the rendered judgement at the failing node.
struct Error {
  ErrorKind kind;
  std::string message;
  std::string where;

  std::string describe() const {
    std::string s(to_string(kind));
    s += ": " + message;
    if (!where.empty()) s += "\n  at: " + where;
    return s;
  }
};

/// Thrown by constructors and by the frontend; checkers return Result instead.
class FwdError : public std::runtime_error {
public:
  explicit FwdError(Error e) : std::runtime_error(e.describe()), error_(std::move(e)) {}
  FwdError(ErrorKind kind, std::string message)
      : FwdError(Error{kind, std::move(message), {}}) {}
  const Error& error() const { return error_; }
  ErrorKind kind() const { return error_.kind; }

private:
  Error error_;
};

template <class T>
class Result {
public:
  Result(T value) : v_(std::move(value)) {}
  Result(Error error) : v_(std::move(error)) {}

  bool ok() const { return std::holds_alternative<T>(v_); }
  explicit operator bool() const { return ok(); }

  const T& value() const& {
    if (!ok()) throw FwdError(error());
    return std::get<T>(v_);
  }
  T&& value() && {
    if (!ok()) throw FwdError(error());
    return std::get<T>(std::move(v_));
  }
  const T& operator*() const& { return value(); }
  const T* operator->() const { return &value(); }

  const Error& error() const { return std::get<Error>(v_); }

private:
  std::variant<T, Error> v_;
};

struct Unit {};

inline Error make_error(ErrorKind kind, std::string message, std::string where = {}) {
  return Error{kind, std::move(message), std::move(where)};
}

}  // namespace fwdlogic
