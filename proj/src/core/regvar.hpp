#pragma once

#include "monotone.hpp"

#include <array>
#include <string>
#include <vector>

namespace wk {

struct VariationOptions {
    double reach_infinity = 1e12; // outermost sample toward infinity
    double reach_zero = 1e-12;    // outermost sample toward zero
    int decades = 6;
    int per_decade = 40;
    int outer_decades = 2;        // window used for limsup / index estimates
    double regular_spread = 0.05; // max spread of local index estimates for "regular"
    double slow_index = 0.1;      // local index below this and decreasing means "slow"
    double pi_yes = 0.95;         // S(1/2) threshold for "positively increasing"
    double pi_no = 0.02;          // max |S(t) - 1| for "not positively increasing"
};

struct RatioRow {
    double x;
    double t;
    double ratio; // g(x t) / g(x)
};

struct VariationVerdict {
    enum class Kind { Regular, Slow, Rapid, Inconclusive };
    End end = End::Infinity;
    Kind kind = Kind::Inconclusive;
    double alpha = 0.0;
    bool symbolic = false;
    std::vector<RatioRow> table;
    std::string note;
};

const char* to_string(VariationVerdict::Kind k);

struct PIVerdict {
    End end = End::Infinity;
    Tri verdict = Tri::Unknown; // Unknown reads as "inconclusive"
    std::array<double, 3> t{0.5, 0.25, 0.125};
    std::array<double, 3> S{NAN, NAN, NAN};
    double C = NAN;
    double beta = NAN;
    std::vector<double> decade_trend; // max of g(x/2)/g(x) per decade, moving toward the end
    bool symbolic = false;
    std::string reason;
};

struct KaramataRow {
    double x;
    double ratio;
};

struct KaramataReport {
    End end = End::Infinity;
    double gamma = 1.0;
    double alpha = 0.0;
    std::vector<KaramataRow> rows;
    double final_decade_deviation = NAN; // max |ratio - 1| over the last decade
    bool divergent = false;              // gamma + alpha = 0: ratio is integral / (x^gamma f)
    bool converges = false;
};

VariationVerdict classify_variation(const MonotoneMap& g, End end, const VariationOptions& opt = {});
PIVerdict positively_increasing(const MonotoneMap& g, End end, const VariationOptions& opt = {});
KaramataReport karamata_integral_check(const Profile& f, double gamma, double alpha, End end, double reach = 0.0);

/// Geometric sampling grid of the window toward `end`, ordered toward the end.
std::vector<double> variation_window(const MonotoneMap& g, End end, const VariationOptions& opt, int per_decade);

} // namespace wk
