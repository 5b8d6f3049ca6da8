#pragma once
// Exception types shared across the library. Each maps to one failure
// class a caller may want to handle separately.

#include <stdexcept>
#include <string>

namespace interid {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Schema violations: unknown slot, unknown value, invalid schema definition.
class SchemaError : public Error {
public:
    using Error::Error;
};

// Malformed input file content; message carries the line number when known.
class ParseError : public Error {
public:
    using Error::Error;
};

// Structurally valid file whose declared sizes or magic bytes do not match.
class FormatError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

// Enumeration request too large to evaluate exactly.
class CapacityError : public Error {
public:
    using Error::Error;
};

class SelectorError : public Error {
public:
    using Error::Error;
};

// No unasked, non-exhausted question remains.
class BankExhaustedError : public Error {
public:
    using Error::Error;
};

class DataError : public Error {
public:
    using Error::Error;
};

// Remote plug (scorer / answerer / questioner) failed or timed out.
class PlugError : public Error {
public:
    using Error::Error;
};

}  // namespace interid
