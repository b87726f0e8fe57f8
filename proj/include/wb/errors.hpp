#ifndef WB_ERRORS_HPP
#define WB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wb {

// Base class for all workbench errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Operation applied to the wrong number of arguments, or a relation/operation
// pairing with incompatible arities.
class ArityMismatch : public Error {
public:
  using Error::Error;
};

// Coordinate, argument or table index outside the declared range.
class IndexOutOfRange : public Error {
public:
  using Error::Error;
};

// Two objects built over different base domains were combined.
class DomainMismatch : public Error {
public:
  using Error::Error;
};

// Matrix/column substitution with incompatible dimensions.
class ShapeMismatch : public Error {
public:
  using Error::Error;
};

// A cut producer violated the decreasing property between two materialised
// cuts.
class DecreasingViolation : public Error {
public:
  using Error::Error;
};

// An index permutation that is not a finite-support permutation of the
// coordinates.
class NotFiniteSupport : public Error {
public:
  using Error::Error;
};

// A matrix handed to a matrical polymorphism check has a column outside the
// relation.
class ColumnNotInRelation : public Error {
public:
  using Error::Error;
};

// An enumeration whose estimated cost exceeds the configured cap; raised
// before any work is done.
class CapExceeded : public Error {
public:
  using Error::Error;
};

// Definition file rejected; carries the 1-based line number.
class ParseError : public Error {
public:
  ParseError(int line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

// A definition file referred to a name that was never declared.
class UnknownName : public Error {
public:
  using Error::Error;
};

}  // namespace wb

#endif
