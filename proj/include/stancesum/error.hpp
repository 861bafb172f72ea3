#pragma once

#include <stdexcept>
#include <string>

namespace stancesum {

// Base for every error raised by the library. The CLI maps these to exit 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed artifact files (models, tables, summaries).
class FormatError : public Error {
 public:
  using Error::Error;
};

class EmptyCorpusError : public Error {
 public:
  using Error::Error;
};

class EmptyGraphError : public Error {
 public:
  using Error::Error;
};

class GraphTooSmallError : public Error {
 public:
  using Error::Error;
};

// Arguments outside an operation's mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

// Inputs that do not belong together (ids from another corpus, topics differ).
class MismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace stancesum
