#pragma once

#include "regvar.hpp"
#include "weyl.hpp"

#include <functional>
#include <string>
#include <vector>

namespace wk {

/// K_nu = nu^(1-nu) Gamma(nu) / ((1-nu)^nu Gamma(1-nu)); 1 at nu = 0 and nu = 1.
double kasahara_constant(double nu);

/// One-term model m(mu rho) ~ K_nu (-mu)^(-nu) f(rho) as rho tends to `end`.
struct AsymptoteModel {
    enum class Validity { ExactFamily, Fitted, Unavailable };
    End end = End::Infinity;
    double alpha = NAN; // index of R o W^-1 at the dual end of the coefficients
    double nu = NAN;
    double K = NAN;
    std::function<double(double)> F; // F(x) = 1 / (x (W o R^-1)(x))
    std::function<double(double)> f; // generalized inverse of F
    Validity validity = Validity::Unavailable;
    std::string reason;
    Trail trail;

    cplx predict(cplx mu, double rho) const;
};

const char* to_string(AsymptoteModel::Validity v);

AsymptoteModel kasahara_model(const Problem& p, End end, const VariationOptions& vopt = {});

struct AsymptoteRow {
    double rho;
    cplx mu;
    cplx m;
    cplx model;
    double deviation; // |m (-mu)^nu / (K f(rho)) - 1|
    double enclosure; // enclosure of m, relative to |model|
};

struct AsymptoteReport {
    End end = End::Infinity;
    std::vector<AsymptoteRow> rows;
    std::vector<std::pair<double, double>> per_decade; // (decade start, max deviation), ordered toward the end
    bool shrinking = false; // per-decade maxima non-increasing over the last two decades
    double final_deviation = NAN;
};

AsymptoteReport verify_asymptote(const Problem& p, const AsymptoteModel& model, const std::vector<double>& rho,
                                 const WeylOptions& opt = {});

enum class RatioKind { ReIm, ImRe };
enum class Bound { Bounded, Unbounded, Inconclusive };

const char* to_string(RatioKind k);
const char* to_string(Bound b);

struct RatioOptions {
    double reach_infinity = 1e6;
    double reach_zero = 1e-6;
    int per_decade = 8;
    int outer_decades = 2;
    double slope_unbounded = 0.05;
    double slope_bounded = 0.005;
    double unbounded_factor = 10.0; // outer max over window median
    double bounded_factor = 3.0;
};

struct RatioSample {
    double y;
    cplx m;
    double ratio;
    double enclosure;
};

struct RatioReport {
    End end = End::Infinity;
    RatioKind which = RatioKind::ReIm;
    double y_lo = 0.0, y_hi = 0.0;
    std::vector<RatioSample> samples; // ordered toward the end
    double sup = 0.0;
    double median = 0.0;
    double outer_max = 0.0;
    double slope = 0.0; // d ln(ratio) / d ln(distance toward the end), outer decades
    Bound raw = Bound::Inconclusive;
    Bound prediction = Bound::Inconclusive; // coefficient side
    std::string prediction_reason;
    Bound resolved = Bound::Inconclusive;
    bool disagreement = false;
    Trail trail;
};

/// Samples on y in the window of `end` (y -> infinity or y -> 0) and the ratio of `which`.
std::vector<RatioSample> ratio_samples(const Problem& p, End end, const RatioOptions& ropt, const WeylOptions& opt);

RatioReport ratio_criterion(const Problem& p, End end, RatioKind which, const RatioOptions& ropt = {},
                            const WeylOptions& opt = {}, const VariationOptions& vopt = {});

/// Assemble a report from samples already taken (shared by both directions).
RatioReport ratio_from_samples(const Problem& p, End end, RatioKind which, const std::vector<RatioSample>& base,
                               const RatioOptions& ropt, const VariationOptions& vopt);

/// Coefficient-side prediction of the ratio behaviour; also used by the HELP and similarity routes.
Bound ratio_prediction(const Problem& p, End end, RatioKind which, const VariationOptions& vopt, std::string* reason);

struct EndpointShortcut {
    enum class Case { WIntegrable, RIntegrable, Defer };
    Case which = Case::Defer;
    Trail trail;
};

const char* to_string(EndpointShortcut::Case c);

/// Forced small-y behaviour when W or R is bounded at b.
EndpointShortcut bounded_endpoint_shortcut(const Problem& p);

} // namespace wk
