#pragma once

#include <stdexcept>
#include <string>

namespace braille {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be read, written, or parsed.
class IoError : public Error {
public:
    using Error::Error;
};

/// Mapping-table file problem; carries the 1-based line number (0 when not line-specific).
class TableError : public Error {
public:
    TableError(const std::string& msg, int line = 0) : Error(msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// The page cannot be carried through the geometric pipeline.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// The lower grey-scale histogram holds no pixels: nothing that could be a dot.
class NoDotMassError : public StructuralError {
public:
    using StructuralError::StructuralError;
};

/// No circle-shaped components, so the standard dot diameter is undefined.
class NoCirclesError : public StructuralError {
public:
    using StructuralError::StructuralError;
};

/// The peer-distance distribution exposed fewer than two usable peaks.
/// When a single dominant pitch was found it is attached for diagnostics.
class PitchError : public StructuralError {
public:
    explicit PitchError(const std::string& msg)
        : StructuralError(msg), dominant_(0.0), has_dominant_(false) {}
    PitchError(const std::string& msg, double dominant_pitch)
        : StructuralError(msg), dominant_(dominant_pitch), has_dominant_(true) {}

    bool has_dominant_pitch() const { return has_dominant_; }
    double dominant_pitch() const { return dominant_; }

private:
    double dominant_;
    bool has_dominant_;
};

}  // namespace braille
