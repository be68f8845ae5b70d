#include "seqauction/model.hpp"

#include <sstream>

namespace seqauction {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::OutOfRangeK: return "OutOfRangeK";
        case Errc::NonPositiveVariance: return "NonPositiveVariance";
        case Errc::ZeroPeriods: return "ZeroPeriods";
        case Errc::UnsupportedRegime: return "UnsupportedRegime";
        case Errc::NoSignChange: return "NoSignChange";
        case Errc::SecondOrderViolation: return "SecondOrderViolation";
        case Errc::DenominatorCollapse: return "DenominatorCollapse";
        case Errc::NegativeRadicand: return "NegativeRadicand";
        case Errc::NegativeNoiseVariance: return "NegativeNoiseVariance";
        case Errc::InsufficientPaths: return "InsufficientPaths";
    }
    return "UnknownError";
}

namespace {
std::string tag(Errc code, const std::string& what) {
    std::ostringstream os;
    os << errc_name(code) << ": " << what;
    return os.str();
}
}  // namespace

ValidationError::ValidationError(Errc code, const std::string& what)
    : std::runtime_error(tag(code, what)), code_(code) {}

NumericError::NumericError(Errc code, const std::string& what)
    : std::runtime_error(tag(code, what)), code_(code) {}

ModelParams validate(const ModelParams& params) {
    if (!(params.K > 0.0 && params.K < 2.0)) {
        std::ostringstream os;
        os << "K out of (0,2): K=" << params.K;
        throw ValidationError(Errc::OutOfRangeK, os.str());
    }
    if (!(params.Sigma0 > 0.0)) {
        std::ostringstream os;
        os << "Sigma0 must be positive: Sigma0=" << params.Sigma0;
        throw ValidationError(Errc::NonPositiveVariance, os.str());
    }
    if (!(params.sigma_mu_sq > 0.0)) {
        std::ostringstream os;
        os << "sigma_mu_sq must be positive: sigma_mu_sq=" << params.sigma_mu_sq;
        throw ValidationError(Errc::NonPositiveVariance, os.str());
    }
    if (params.N < 1) {
        std::ostringstream os;
        os << "N must be at least 1: N=" << params.N;
        throw ValidationError(Errc::ZeroPeriods, os.str());
    }
    return params;
}

void validate_regime(const ModelParams& params, Regime regime) {
    validate(params);
    if (regime == Regime::NoDisclosure && params.N != 2) {
        std::ostringstream os;
        os << "no-disclosure equilibrium is only available for N=2: N=" << params.N;
        throw ValidationError(Errc::UnsupportedRegime, os.str());
    }
}

const char* regime_name(Regime regime) {
    return regime == Regime::Disclosure ? "disclosure" : "no-disclosure";
}

Regime regime_from_string(const std::string& text) {
    if (text == "disclosure") return Regime::Disclosure;
    if (text == "no-disclosure" || text == "no_disclosure")
        return Regime::NoDisclosure;
    throw ValidationError(Errc::UnsupportedRegime,
                          "unknown regime '" + text +
                              "' (expected disclosure or no-disclosure)");
}

}  // namespace seqauction
