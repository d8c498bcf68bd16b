#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lapgraph {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad caller-supplied data (non-finite entries, wrong shapes, negative weights).
class InputError : public Error {
 public:
  using Error::Error;
};

class DegenerateColumnError : public InputError {
 public:
  explicit DegenerateColumnError(std::size_t column)
      : InputError("column " + std::to_string(column) + " has zero variance"), column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A quantity was requested outside its mathematical domain (logdet of a non-PD matrix, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class NotPsdError : public DomainError {
 public:
  using DomainError::DomainError;
};

class InitializationError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t iteration) : Error(what), iteration_(iteration) {}
  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

class SearchFailure : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Re-throws the active lapgraph exception with `context` prepended, keeping its type.
[[noreturn]] inline void rethrow_with_context(const std::string& context) {
  try {
    throw;
  } catch (const DegenerateColumnError&) {
    throw;
  } catch (const DivergenceError& e) {
    throw DivergenceError(context + ": " + e.what(), e.iteration());
  } catch (const InitializationError& e) {
    throw InitializationError(context + ": " + e.what());
  } catch (const NotPsdError& e) {
    throw NotPsdError(context + ": " + e.what());
  } catch (const DomainError& e) {
    throw DomainError(context + ": " + e.what());
  } catch (const SearchFailure& e) {
    throw SearchFailure(context + ": " + e.what());
  } catch (const InputError& e) {
    throw InputError(context + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(context + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(context + ": " + e.what());
  }
}

}  // namespace lapgraph
