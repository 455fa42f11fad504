#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sfg {

/// Base class for all toolkit errors. `kind()` is a stable machine-readable
/// tag used by the CLI for exit codes and --json-errors output.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
  virtual const char* kind() const { return "error"; }
};

class ParseError : public Error {
public:
  ParseError(const std::string& msg, int line = 0, int column = 0)
      : Error(msg), line(line), column(column) {}
  const char* kind() const override { return "parse"; }
  int line;
  int column;
};

class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& msg) : Error(msg) {}
  const char* kind() const override { return "validation"; }
};

/// Two constraints cannot be merged: sibling filler types or clashing
/// lexifications on one function label.
class UnificationError : public Error {
public:
  UnificationError(const std::string& msg, std::string label)
      : Error(msg), label(std::move(label)) {}
  const char* kind() const override { return "unification"; }
  std::string label;
};

/// Errors raised while generating a sentence. `constituent_path` names the
/// chain of function labels from the sentence root down to the failing
/// constituent; it is filled in as the error unwinds.
class GenerationError : public Error {
public:
  explicit GenerationError(const std::string& msg) : Error(msg) {}
  const char* kind() const override { return "generation"; }
  std::vector<std::string> constituent_path;
};

class MissingAnswerError : public GenerationError {
public:
  MissingAnswerError(const std::string& msg, std::string inquiry)
      : GenerationError(msg), inquiry(std::move(inquiry)) {}
  const char* kind() const override { return "missing-answer"; }
  std::string inquiry;
};

class NoBranchError : public GenerationError {
public:
  NoBranchError(const std::string& msg, std::string inquiry, std::string answer)
      : GenerationError(msg), inquiry(std::move(inquiry)), answer(std::move(answer)) {}
  const char* kind() const override { return "no-branch"; }
  std::string inquiry;
  std::string answer;
};

class NoChoiceError : public GenerationError {
public:
  explicit NoChoiceError(const std::string& msg) : GenerationError(msg) {}
  const char* kind() const override { return "no-choice"; }
};

/// The semantic input drove a chooser onto a path marked out of bounds for
/// the extracted subgrammar.
class OutOfBoundsError : public GenerationError {
public:
  explicit OutOfBoundsError(const std::string& msg) : GenerationError(msg) {}
  const char* kind() const override { return "out-of-bounds"; }
};

class LexiconMissError : public GenerationError {
public:
  LexiconMissError(const std::string& msg, std::string item)
      : GenerationError(msg), item(std::move(item)) {}
  const char* kind() const override { return "lexicon-miss"; }
  std::string item;
};

class OrderCycleError : public GenerationError {
public:
  explicit OrderCycleError(const std::string& msg) : GenerationError(msg) {}
  const char* kind() const override { return "order-cycle"; }
};

class BindingConflictError : public GenerationError {
public:
  explicit BindingConflictError(const std::string& msg) : GenerationError(msg) {}
  const char* kind() const override { return "binding-conflict"; }
};

/// A percolated action sequence contained a `choose`; collapsing consumes the
/// choice, so this indicates a caller bug.
class ChoosePercolatedError : public Error {
public:
  explicit ChoosePercolatedError(const std::string& msg) : Error(msg) {}
  const char* kind() const override { return "choose-percolated"; }
};

class InvalidGoalError : public Error {
public:
  explicit InvalidGoalError(const std::string& msg) : Error(msg) {}
  const char* kind() const override { return "invalid-goal"; }
};

}  // namespace sfg
