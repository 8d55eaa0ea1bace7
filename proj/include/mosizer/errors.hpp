#pragma once

#include <stdexcept>
#include <string>

namespace mosizer {

/// Base class for every typed failure the library reports.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A factorization pivot fell below the numeric rank threshold.
class RankDeficient : public Error { public: using Error::Error; };

/// No step in the halving schedule reduced the fit SSE.
class Diverged : public Error { public: using Error::Error; };

/// A statistics input series is constant (zero variance).
class DegenerateSeries : public Error { public: using Error::Error; };

/// Input outside a model's validated domain.
class OutOfDomain : public Error { public: using Error::Error; };

/// Operating point is not in the saturation region.
class NotSaturated : public Error { public: using Error::Error; };

/// A denominator in an extraction formula vanished.
class DegenerateDenominator : public Error { public: using Error::Error; };

/// The gain expression's denominator vanished.
class SingularDenominator : public Error { public: using Error::Error; };

/// Root finding could not bracket the target.
class NoBracket : public Error { public: using Error::Error; };

/// Solver exhausted its iteration budget without meeting tolerance.
class NonConvergence : public Error { public: using Error::Error; };

/// A file or value could not be parsed.
class ParseError : public Error { public: using Error::Error; };

/// A file parsed but its structure is missing or unexpected.
class SchemaError : public Error { public: using Error::Error; };

/// A column or field carries the wrong unit.
class UnitError : public Error { public: using Error::Error; };

} // namespace mosizer
