#pragma once

#include <stdexcept>
#include <string>

namespace sbfem {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the admissible domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Degenerate or inverted geometry.
class GeometryError : public Error {
public:
    using Error::Error;
};

class QuadratureError : public Error {
public:
    using Error::Error;
};

class AssemblyError : public Error {
public:
    using Error::Error;
};

// Singular or ill-conditioned linear algebra.
class ConditioningError : public Error {
public:
    using Error::Error;
};

class DefectiveSpectrumError : public Error {
public:
    using Error::Error;
};

// Rejected mesh or input file.
class ValidationError : public Error {
public:
    using Error::Error;
};

}  // namespace sbfem
