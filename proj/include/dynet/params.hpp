#pragma once

#include <string>

#include "dynet/errors.hpp"

namespace dynet {

/// Neighbour-selection rule: uniform over living nodes (U) or proportional
/// to social index (P).
enum class Version { U, P };

inline const char* to_string(Version v) { return v == Version::U ? "U" : "P"; }

/// The four rates of the model plus the version switch.
///
/// lambda: per-node birth rate; mu: per-node death rate; alpha: edge-creation
/// rate per unit of social index; beta: per-edge death rate.
struct ModelParams {
    double lambda = 1.0;
    double mu = 0.0;
    double alpha = 1.0;
    double beta = 1.0;
    Version version = Version::U;

    /// Combined hazard seen by an existing edge (edge death or partner death).
    double gamma() const { return beta + mu; }
};

enum class ParamIssue {
    ok,
    negative_rate,            // some rate < 0
    subcritical_population,   // lambda <= mu: population does not grow
    zero_gamma,               // beta + mu = 0: dynamics legal, analytics unavailable
};

inline ParamIssue validate(const ModelParams& p) {
    if (p.lambda < 0 || p.mu < 0 || p.alpha < 0 || p.beta < 0) return ParamIssue::negative_rate;
    if (p.lambda <= p.mu) return ParamIssue::subcritical_population;
    if (p.beta + p.mu == 0) return ParamIssue::zero_gamma;
    return ParamIssue::ok;
}

inline std::string describe(ParamIssue issue) {
    switch (issue) {
        case ParamIssue::ok: return "ok";
        case ParamIssue::negative_rate: return "NegativeRate: all rates must be >= 0";
        case ParamIssue::subcritical_population:
            return "SubcriticalPopulation: lambda must exceed mu";
        case ParamIssue::zero_gamma:
            return "ZeroGamma: beta + mu = 0; closed-form results are unavailable";
    }
    return "unknown";
}

/// Throws InvalidConfig unless the params support the requested use.
/// Dynamics tolerate gamma = 0; the analytic formulas do not.
inline void require_valid(const ModelParams& p, bool need_gamma = true) {
    ParamIssue issue = validate(p);
    if (issue == ParamIssue::ok) return;
    if (issue == ParamIssue::zero_gamma && !need_gamma) return;
    throw InvalidConfig(describe(issue));
}

}  // namespace dynet
