#pragma once

#include "help.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wk {

/// Even coefficients on (-b, b) given by their restriction to (0, b).
struct IndefiniteProblem {
    Problem half;
    bool even = true;
    double coupling = 1.0; // c of the extension family A_c

    static IndefiniteProblem from_json(const nlohmann::json& j);
};

struct SimilarityOptions {
    RatioOptions ratio;
    WeylOptions weyl;
    VariationOptions variation;
    C0Options c0;
    std::vector<double> stieltjes_grid; // negative reals; empty = default
};

struct SimilarityVerdict {
    Tri similar = Tri::Unknown;
    Bound regular_at_infinity = Bound::Inconclusive; // sup over y in (1, inf)
    Bound regular_at_zero = Bound::Inconclusive;     // sup over y in (0, 1), before the kernel caveat
    Bound regular_at_zero_reported = Bound::Inconclusive;
    double C_infinity = NAN, C_zero = NAN, C = NAN;
    RatioReport at_infinity, at_zero;
    Tri kernel_trivial = Tri::Unknown;
    std::string kernel_note;
    bool stieltjes_pass = false;
    Trail trail;
};

const char* to_string_similar(Tri t);

/// Boundary condition used by the similarity routes: Dirichlet at a regular or limit-circle b.
Problem similarity_problem(const Problem& p);

/// Evidence that 0 is not an eigenvalue: w not integrable (q = 0) or c0 not in L2(w).
Tri kernel_trivial(const Problem& p, std::string* note, const C0Options& copt = {});

SimilarityVerdict similarity_check(const IndefiniteProblem& ip, const SimilarityOptions& so = {});

struct SimCoefficientVerdict {
    Tri similar = Tri::Unknown;
    std::string route;
    std::vector<PIVerdict> pi;
    Trail trail;
};

SimCoefficientVerdict similarity_coefficient_check(const IndefiniteProblem& ip, const VariationOptions& vopt = {});

struct PotentialSimilarity {
    Tri similar = Tri::Unknown;
    std::string route;
    std::vector<PIVerdict> pi;
    std::optional<double> l;         // inverse-square index when the tail has one
    Tri l_classification = Tri::Unknown;
    Tri c0_in_L2w = Tri::Unknown;
    Tri inv_c0_in_L2 = Tri::Unknown;
    C0Tail tail;
    Trail trail;
};

PotentialSimilarity similarity_with_potential(const IndefiniteProblem& ip, const VariationOptions& vopt = {},
                                              const C0Options& copt = {});

struct ProbeOptions {
    double re_lo = -5.0, re_hi = 5.0;
    double im_lo = 0.1, im_hi = 5.0;
    int n_re = 21, n_im = 20; // odd n_re puts a column on the imaginary axis
    WeylOptions weyl;
};

struct ProbePoint {
    cplx z;
    cplx m_plus;  // m(z)
    cplx m_minus; // m(-z)
    cplx D;
};

struct ProbeRoot {
    cplx start;
    cplx z;
    double residual; // |D| / scale
    int iterations;
    bool accepted;
    std::string note;
};

struct SpectrumProbeReport {
    double coupling = 1.0;
    double scale = 1.0;
    std::vector<ProbePoint> grid;
    std::vector<ProbeRoot> candidates;
    std::vector<cplx> zeros;
    Trail trail;
};

/// Zeros of D(z) = c m(z) + m(-z) in the upper half-plane are nonreal eigenvalues of A_c.
SpectrumProbeReport nonreal_spectrum_probe(const IndefiniteProblem& ip, const ProbeOptions& po = {});

struct LrgReport {
    SimilarityVerdict similarity;
    Bound ratio_sup = Bound::Inconclusive; // sup over all y > 0 of Im m / Re m
    std::optional<HelpVerdict> swapped_help;
    bool agree = true;
    Trail trail;
};

LrgReport lrg_equivalence_report(const IndefiniteProblem& ip, const SimilarityOptions& so = {});

struct FPVerdict {
    enum class WellPosed { Yes, Undetermined };
    WellPosed well_posed = WellPosed::Undetermined;
    std::string route;
    Tri similar = Tri::Unknown;
    Tri kernel_trivial = Tri::Unknown;
    std::string kernel_note;
    Trail trail;
};

const char* to_string(FPVerdict::WellPosed w);

FPVerdict fp_wellposedness(const IndefiniteProblem& ip, const SimilarityOptions& so = {});

} // namespace wk
