#pragma once

#include <stdexcept>
#include <string>

namespace seqauction {

/// Exogenous primitives of the sequential-auction market.
///
/// K is the belief-scale parameter: the insider reads the common signal as
/// v/K while market makers read it as v, so K > 1 means overconfident and
/// K < 1 underconfident. All quantities are carried in base units; any
/// dimensionless normalization is internal to the solvers.
struct ModelParams {
    double K = 1.0;            ///< belief parameter, 0 < K < 2
    double p0 = 0.0;           ///< prior mean of the asset value
    double Sigma0 = 1.0;       ///< prior variance of the asset value
    double sigma_mu_sq = 1.0;  ///< per-auction noise-trade variance
    int N = 1;                 ///< number of auctions
};

/// Whether the insider's trade is published after each auction.
enum class Regime { Disclosure, NoDisclosure };

enum class Errc {
    OutOfRangeK,
    NonPositiveVariance,
    ZeroPeriods,
    UnsupportedRegime,
    NoSignChange,
    SecondOrderViolation,
    DenominatorCollapse,
    NegativeRadicand,
    NegativeNoiseVariance,
    InsufficientPaths,
};

const char* errc_name(Errc code);

/// Bad inputs (parameter range, regime scope). CLI maps these to exit 2.
class ValidationError : public std::runtime_error {
public:
    ValidationError(Errc code, const std::string& what);
    Errc code() const { return code_; }

private:
    Errc code_;
};

/// Numerical failure inside a solver. CLI maps these to exit 3.
class NumericError : public std::runtime_error {
public:
    NumericError(Errc code, const std::string& what);
    Errc code() const { return code_; }

private:
    Errc code_;
};

/// Returns the parameters unchanged iff every invariant holds:
/// 0 < K < 2 strictly, Sigma0 > 0, sigma_mu_sq > 0, N >= 1.
/// Throws ValidationError otherwise. Idempotent.
ModelParams validate(const ModelParams& params);

/// The no-disclosure solver only covers the two-period market.
void validate_regime(const ModelParams& params, Regime regime);

const char* regime_name(Regime regime);
Regime regime_from_string(const std::string& text);

}  // namespace seqauction
