#pragma once

#include <stdexcept>
#include <string>

namespace penlevel {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonFiniteError : Error {
    NonFiniteError() : Error("non-finite value in input") {}
    explicit NonFiniteError(const std::string& what) : Error(what) {}
};

struct ConstantColumnError : Error {
    int column;
    explicit ConstantColumnError(int j)
        : Error("column " + std::to_string(j) + " has zero variance"), column(j) {}
};

struct NotStandardizedError : Error {
    NotStandardizedError() : Error("dataset must be standardized") {}
};

struct OverflowError : Error {
    explicit OverflowError(double linpred)
        : Error("linear predictor magnitude " + std::to_string(linpred) +
                " exceeds the exponent guard") {}
};

struct ZeroResidualError : Error {
    ZeroResidualError() : Error("residual vector is (numerically) zero") {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(what) {}
};

struct InsufficientDrawsError : Error {
    explicit InsufficientDrawsError(int draws)
        : Error("Monte Carlo draw count " + std::to_string(draws) + " is below the minimum of 100") {}
};

struct FoldTooSmallError : Error {
    explicit FoldTooSmallError(int fold)
        : Error("cross-validation fold " + std::to_string(fold) + " has fewer than 2 observations") {}
};

struct CsvParseError : Error {
    long row;
    CsvParseError(long row_number, const std::string& what)
        : Error("csv row " + std::to_string(row_number) + ": " + what), row(row_number) {}
};

}  // namespace penlevel
