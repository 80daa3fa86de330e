#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xpathsat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `offset` is a byte offset into the text that was
/// being parsed (content model, DTD, XPath or tree term).
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// A DTD that is syntactically fine but semantically unusable (duplicate
/// rules, undeclared labels, unsupported declarations).
class DtdError : public Error {
 public:
  using Error::Error;
};

/// A rule whose content model is outside the MRW class.
class NotMrwError : public Error {
 public:
  NotMrwError(std::string label, const std::string& model)
      : Error("content model of '" + label + "' is not MRW: " + model),
        label_(std::move(label)) {}

  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
};

/// An XPath expression outside both tractable fragments.
class UnsupportedFragment : public Error {
 public:
  using Error::Error;
};

/// A broken internal invariant or a violated operation precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace xpathsat
