#pragma once

#include <stdexcept>
#include <string>

namespace fpde {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the admissible range (orders, indices, points, sizes).
class DomainError : public Error {
public:
    using Error::Error;
};

// Iterative routine hit its cap.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Singular or numerically singular matrix / pencil.
class SingularError : public Error {
public:
    using Error::Error;
};

// Eigenbasis not usable (defective, ill-conditioned, residual too large).
class SpectrumError : public Error {
public:
    using Error::Error;
};

// Diagonal denominator of the fast solver vanished.
class ResonanceError : public Error {
public:
    using Error::Error;
};

// Problem too large for the dense reference path.
class SizeError : public Error {
public:
    using Error::Error;
};

} // namespace fpde
