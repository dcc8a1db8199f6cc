#ifndef DEFECTLAB_ASDEFECT_HPP
#define DEFECTLAB_ASDEFECT_HPP

#include <optional>
#include <string>
#include <vector>

#include "defectlab/cuts.hpp"
#include "defectlab/hahn.hpp"

namespace defectlab {

// One Artin-Schreier equation X^p - X = a over the field described by
// a.field(). The root theta is implicit.
struct ASInstance {
    HahnSeries a;

    const FieldDesc& field() const { return a.field(); }
};

enum class ReductionStatus {
    TerminatedNonneg,            // residual value reached >= 0
    TerminatedValueObstruction,  // leading exponent not in p * (admitted exponents)
    TerminatedResidueObstruction,// leading coefficient has no p-th root in K's residue field
    BudgetExhausted,
};

// One p-th-power strip: the leading monomial m of the residual is replaced
// by its p-th root, i.e. a <- a - m + m^{1/p}, shifting the implicit root
// by the correction. gap_value = v(theta - sum of corrections so far),
// computed from the residual by the two-branch root-value formula.
struct ReductionStep {
    HahnSeries correction;
    HahnSeries residual;
    ExtValue gap_value;
};

struct ReductionTrace {
    std::vector<ReductionStep> steps;
    ReductionStatus status = ReductionStatus::BudgetExhausted;

    std::vector<GroupElement> gap_values() const;
};

// Precision ran out mid-reduction; carries what was computed so far.
class ReductionPrecisionError : public PrecisionError {
public:
    ReductionPrecisionError(const std::string& msg, ReductionTrace partial)
        : PrecisionError(msg), partial_(std::move(partial)) {}
    const ReductionTrace& partial() const { return partial_; }

private:
    ReductionTrace partial_;
};

// v(theta) for the root of X^p - X = a: va/p if va <= 0, va if va >= 0.
// The result lives in the divisible hull of the exponent group.
ExtValue as_root_value(const HahnSeries& a);

// The root with v(theta) = va > 0 (the one Hensel's Lemma provides),
// computed by the contraction theta <- theta^p - a, to the target
// precision. The other roots differ by elements of F_p.
HahnSeries as_root_positive(const HahnSeries& a, const Precision& target);

// Strip p-th powers off the leading end of a while its value is negative,
// recording the pseudo Cauchy sequence of corrections.
ReductionTrace as_reduce(const ASInstance& inst, int budget);

// Root extraction on top of the same loop: returns sum of corrections plus
// (when the residual terminates with nonnegative value) the henselian tail
// root. Precision exhaustion is a normal stop here, capping the root's
// precision rather than throwing.
struct RootApprox {
    HahnSeries root;
    ReductionTrace trace;
};
RootApprox as_root_approx(const ASInstance& inst, int budget,
                          const Precision& tail_target = Precision::exact());

// ---------------------------------------------------------------------------
// Distance certificates.

enum class DistancePattern {
    GeometricShift, // values gamma - c/p^n, cofinal below gamma: cut gamma^-
    SubgroupEdge,   // value prefixes geometric below a convex-subgroup edge: H_j^- shifted
    Unresolved,
};

struct DistanceEstimate {
    DistancePattern pattern = DistancePattern::Unresolved;
    std::optional<Cut> cut;   // over the divisible hull; set unless Unresolved
    std::optional<GroupElement> limit; // fitted limit (hull element)
    int fit_start = 0;        // index of the first value the pattern covers
    int subgroup_index = 0;   // rank for GeometricShift, j for SubgroupEdge

    bool resolved() const { return pattern != DistancePattern::Unresolved; }
};

// Fit the certified pattern families against a strictly increasing value
// sequence (>= 3 values required). Anything that does not fit exactly is
// Unresolved, never guessed.
DistanceEstimate distance_estimate(const std::vector<GroupElement>& values, int p);
DistanceEstimate distance_estimate(const ReductionTrace& trace, int p);

// ---------------------------------------------------------------------------
// Classification.

enum class ExtKind { SplitHenselian, ResidualDegreeP, Ramified, Defect };
enum class Dependence { Dependent, Independent, Unresolved };

struct Classification {
    ExtKind kind = ExtKind::SplitHenselian;
    int e = 1, f = 1, g = 1, d = 1; // exactly one equals p
    std::optional<DistanceEstimate> distance; // Defect only
    Dependence dependence = Dependence::Unresolved;
    ReductionTrace trace;
};

std::string to_string(ExtKind k);
std::string to_string(Dependence d);
std::string to_string(ReductionStatus s);

// Run the reduction and map its terminal status to the extension kind.
// A budget-exhausted trace is reported as Defect together with the distance
// certificate; defect is never "decided", only certified this way.
Classification classify(const ASInstance& inst, int budget);

// z ~_K y: v(z-y) lies strictly above the distance cut.
bool similar(const HahnSeries& z, const HahnSeries& y, const Cut& dist);

// ---------------------------------------------------------------------------
// Deformation f_{a,b}(Y) = Y^p - b^{p-1} Y - a, g_{a,b}(X) = X^p - X - a/b^p.

struct DeformationQuery {
    HahnSeries a;   // = eta^p, element of K
    HahnSeries b;   // nonzero element of K
    HahnSeries eta; // p-th root of a in the ambient series model, not in K
    // Approximants c_i in K with strictly increasing v(eta - c_i),
    // certifying both eta's distance and eta not lying in K.
    std::vector<HahnSeries> approximants;
    DistanceEstimate epsilon; // certified dist(eta, K)
};

struct DeformResult {
    bool condition_holds = false;      // (p-1) vb + v(eta) > p * epsilon
    Classification classification;
    bool similarity_verified = false;  // b*theta ~_K eta checked on all approximants
    std::optional<Cut> theta_distance; // dist(theta, K) when certified
    std::vector<ExtValue> gap_values;  // v(theta - c_i/b) along the approximants
};

DeformResult deform(const DeformationQuery& q, int budget);

// Generator change theta' = i*theta + c: the instance with
// a' = i*a + (c^p - c).
ASInstance generator_change(const ASInstance& inst, int i, const HahnSeries& c);

// ---------------------------------------------------------------------------
// Newton probe.

struct NewtonStep {
    HahnSeries point;
    ExtValue value; // v g(c_n)
};

// Iterate c <- c - g(c)/g'(c) with exact series arithmetic. Requires
// v g(c) > 2 v g'(c). Stops early on an exact root or when precision runs
// out. `work` bounds the precision of the division at each step.
std::vector<NewtonStep> newton_improve(const std::vector<HahnSeries>& g, const HahnSeries& c,
                                       int steps, const Precision& work);

// ---------------------------------------------------------------------------
// Extremality probes.

struct PPolynomial {
    enum class Form {
        WpForm,    // f(X) = a - (X^p - X)
        PPowerForm // f(X_1..X_n) = b - sum b_i X_i^p
    };
    Form form = Form::PPowerForm;
    HahnSeries constant;                  // a resp. b
    std::vector<HahnSeries> multipliers;  // b_i; empty means the single X^p
};

struct ProbeResult {
    enum class Outcome { MaxFound, IncreasingWitness, Inconclusive };
    Outcome outcome = Outcome::Inconclusive;
    std::vector<HahnSeries> witness;   // maximizing assignment (MaxFound)
    std::optional<ExtValue> max_value; // MaxFound
    std::vector<ExtValue> values;      // IncreasingWitness / recorded values
    std::string note;
};

// Probe whether v im_K(f) attains a maximum. For the Wp form this rides on
// as_reduce; for the p-power form it runs p-th-root stripping relative to
// K^p. `supplied_witnesses`, when given, are evaluated and verified instead
// of running the mechanical search (used for tower-built scenarios whose
// best approximants are not single monomials).
ProbeResult extremality_probe(const PPolynomial& f, int budget,
                              const std::vector<HahnSeries>* supplied_witnesses = nullptr);

} // namespace defectlab

#endif
