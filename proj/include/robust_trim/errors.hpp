#pragma once

#include <stdexcept>
#include <string>

namespace robust_trim {

// Base of every error raised by the library. Callers that only care about
// "something went wrong" can catch this one type.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error
{
public:
    using Error::Error;
};

class DimensionMismatch : public InvalidArgument
{
public:
    using InvalidArgument::InvalidArgument;
};

// A predictor column with zero norm cannot be rescaled.
class DegenerateColumn : public Error
{
public:
    using Error::Error;
};

// C(n, h) exceeds the enumeration cap of the exact solver.
class TooLarge : public Error
{
public:
    using Error::Error;
};

// The prediction bound constant divides by ||beta0||_1.
class UndefinedBound : public Error
{
public:
    using Error::Error;
};

class RankDeficient : public Error
{
public:
    using Error::Error;
};

// Malformed or unreadable input data.
class DataError : public Error
{
public:
    using Error::Error;
};

// Inner solver did not reach its tolerance within the sweep budget.
class SolverError : public Error
{
public:
    using Error::Error;
};

} // namespace robust_trim
