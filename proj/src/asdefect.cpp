#include "defectlab/asdefect.hpp"

namespace defectlab {

namespace {

std::vector<Rat> vec_scale(const std::vector<Rat>& a, const Rat& q) {
    std::vector<Rat> r = a;
    for (Rat& x : r) x *= q;
    return r;
}

GroupElement hull_element(const GroupDesc& g, const std::vector<Rat>& entries) {
    return GroupElement(g.divisible_hull(), entries);
}

bool value_negative(const GroupElement& v) {
    for (const Rat& q : v.entries()) {
        if (q < 0) return true;
        if (q > 0) return false;
    }
    return false;
}

} // namespace

std::vector<GroupElement> ReductionTrace::gap_values() const {
    std::vector<GroupElement> v;
    v.reserve(steps.size());
    for (const auto& s : steps) {
        if (s.gap_value.is_infinity()) break;
        v.push_back(s.gap_value.finite());
    }
    return v;
}

ExtValue as_root_value(const HahnSeries& a) {
    ExtValue va = valuation(a);
    if (va.is_infinity()) return va;
    GroupElement h = hull_element(a.field().group(), va.finite().entries());
    if (value_negative(va.finite())) return scale(h, Rat(1, a.field().p()));
    return h;
}

HahnSeries as_root_positive(const HahnSeries& a, const Precision& target) {
    ExtValue va = valuation(a);
    if (va.is_infinity()) return HahnSeries::zero(a.field());
    if (value_negative(va.finite()) || va.finite().is_zero())
        throw PreconditionError("as_root_positive requires va > 0, got va = " + va.to_string());
    Precision goal = min_precision(target, a.precision());
    if (goal.is_exact())
        throw PreconditionError("as_root_positive needs a finite target precision");
    // theta <- theta^p - a contracts at rate p * v(theta); iterates freeze
    // below the goal.
    HahnSeries x = truncate(-a, goal);
    while (true) {
        HahnSeries next = truncate(frobenius(x) - a, goal);
        if (identical(next, x)) return x;
        x = next;
    }
}

namespace {

// Shared stripping loop. On precision exhaustion either throws (the
// as_reduce contract) or returns the partial trace with *stopped set.
ReductionTrace reduce_loop(const ASInstance& inst, int budget, bool throw_on_precision,
                           bool* precision_stopped) {
    if (budget < 1) throw PreconditionError("reduction budget must be >= 1");
    const FieldDesc& K = inst.field();
    const FiniteField& F = K.coeff();
    ReductionTrace trace;
    HahnSeries residual = inst.a;
    if (precision_stopped) *precision_stopped = false;
    for (int n = 0; n < budget; ++n) {
        ExtValue v;
        try {
            v = valuation(residual);
        } catch (const PrecisionError& e) {
            if (precision_stopped) *precision_stopped = true;
            if (throw_on_precision)
                throw ReductionPrecisionError(
                    std::string(e.what()) + " (entering reduction step " + std::to_string(n + 1) +
                        ")",
                    trace);
            return trace;
        }
        if (v.is_infinity() || !value_negative(v.finite())) {
            trace.status = ReductionStatus::TerminatedNonneg;
            return trace;
        }
        auto [e, c] = leading_term(residual);
        GroupElement e_over_p = scale(hull_element(K.group(), e.entries()), Rat(1, K.p()));
        if (!contains(K.admitted(), e_over_p)) {
            trace.status = ReductionStatus::TerminatedValueObstruction;
            return trace;
        }
        Coeff root_coeff = F.pth_root(c);
        if (!K.admits_coeff(root_coeff)) {
            trace.status = ReductionStatus::TerminatedResidueObstruction;
            return trace;
        }
        HahnSeries m = HahnSeries::monomial(K, e, c);
        HahnSeries correction =
            HahnSeries::monomial(K, GroupElement(K.group(), e_over_p.entries()), root_coeff);
        residual = residual - m + correction;
        ExtValue gap;
        try {
            gap = as_root_value(residual);
        } catch (const PrecisionError& err) {
            if (precision_stopped) *precision_stopped = true;
            if (throw_on_precision)
                throw ReductionPrecisionError(
                    std::string(err.what()) + " (after reduction step " + std::to_string(n + 1) +
                        ")",
                    trace);
            return trace;
        }
        trace.steps.push_back(ReductionStep{correction, residual, gap});
    }
    trace.status = ReductionStatus::BudgetExhausted;
    return trace;
}

} // namespace

ReductionTrace as_reduce(const ASInstance& inst, int budget) {
    return reduce_loop(inst, budget, /*throw_on_precision=*/true, nullptr);
}

RootApprox as_root_approx(const ASInstance& inst, int budget, const Precision& tail_target) {
    const FieldDesc& K = inst.field();
    const FiniteField& F = K.coeff();
    bool precision_stopped = false;
    ReductionTrace trace = reduce_loop(inst, budget, false, &precision_stopped);
    HahnSeries root = HahnSeries::zero(K);
    for (const auto& s : trace.steps) root = root + s.correction;
    const HahnSeries& residual = trace.steps.empty() ? inst.a : trace.steps.back().residual;

    if (precision_stopped) {
        // The unknown residual tail has value >= pi, so the unknown part of
        // the root sits at exponents >= pi/p.
        Precision cap = scale_precision(residual.precision(), Rat(1, K.p()));
        return {truncate(root, cap), std::move(trace)};
    }
    if (trace.status == ReductionStatus::BudgetExhausted) {
        ExtValue v = valuation(residual);
        Precision cap(vec_scale(v.finite().entries(), Rat(1, K.p())));
        return {truncate(root, cap), std::move(trace)};
    }
    if (trace.status != ReductionStatus::TerminatedNonneg)
        throw PreconditionError("no root in the series model: reduction hit " +
                                to_string(trace.status));

    HahnSeries rem = residual;
    ExtValue v = valuation(rem);
    if (!v.is_infinity() && v.finite().is_zero()) {
        // Peel the residue by brute force over the coefficient field.
        Coeff rho = residue(rem);
        bool found = false;
        for (std::uint64_t r = 0; r < F.order(); ++r) {
            Coeff cand{r};
            if (F.sub(F.frobenius(cand), cand) == rho) {
                HahnSeries cst = HahnSeries::constant(K, cand);
                root = root + cst;
                rem = rem - (frobenius(cst) - cst);
                found = true;
                break;
            }
        }
        if (!found)
            throw Error("no-root", "residue equation X^p - X = " + F.to_string(rho) +
                                       " has no root in the coefficient field; raise m");
        v = valuation(rem);
    }
    if (v.is_infinity()) return {root, std::move(trace)};
    return {root + as_root_positive(rem, tail_target), std::move(trace)};
}

// ---------------------------------------------------------------------------
// Distance certificates.

namespace {

// Exact geometric fit of length-j prefixes from index `start` on:
// differences positive and shrinking by exactly 1/p. Returns the limit.
std::optional<std::vector<Rat>> fit_geometric(const std::vector<GroupElement>& w, size_t start,
                                              int j, int p) {
    if (w.size() < start + 3) return std::nullopt;
    auto prefix = [&](size_t n) {
        const auto& e = w[n].entries();
        return std::vector<Rat>(e.begin(), e.begin() + j);
    };
    auto minus = [](const std::vector<Rat>& a, const std::vector<Rat>& b) {
        std::vector<Rat> r = a;
        for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
        return r;
    };
    auto positive = [](const std::vector<Rat>& d) {
        for (const Rat& q : d) {
            if (q > 0) return true;
            if (q < 0) return false;
        }
        return false;
    };
    std::vector<Rat> d = minus(prefix(start + 1), prefix(start));
    if (!positive(d)) return std::nullopt;
    for (size_t n = start + 1; n + 1 < w.size(); ++n) {
        std::vector<Rat> dn = minus(prefix(n + 1), prefix(n));
        if (dn != vec_scale(d, Rat(1, p))) return std::nullopt;
        d = dn;
    }
    // limit = w_s + d_s * (1 + 1/p + ...) = w_s + d_s * p/(p-1).
    std::vector<Rat> gamma = prefix(start);
    std::vector<Rat> tail = vec_scale(minus(prefix(start + 1), prefix(start)), Rat(p, p - 1));
    for (size_t i = 0; i < gamma.size(); ++i) gamma[i] += tail[i];
    return gamma;
}

} // namespace

DistanceEstimate distance_estimate(const std::vector<GroupElement>& values, int p) {
    if (values.size() < 3)
        throw InsufficientDataError("distance estimation needs at least 3 trace values, got " +
                                    std::to_string(values.size()));
    for (size_t n = 0; n + 1 < values.size(); ++n)
        if (compare(values[n], values[n + 1]) != Ordering::LT)
            throw PreconditionError("trace values must be strictly increasing");
    const GroupDesc hull = values.front().desc().divisible_hull();
    int rank = hull.rank();
    size_t max_start = values.size() - 3;
    for (int j = rank; j >= 1; --j) {
        for (size_t s = 0; s <= max_start; ++s) {
            auto gamma = fit_geometric(values, s, j, p);
            if (!gamma) continue;
            std::vector<Rat> full(static_cast<size_t>(rank), Rat(0));
            for (int i = 0; i < j; ++i)
                full[static_cast<size_t>(i)] = (*gamma)[static_cast<size_t>(i)];
            GroupElement limit(hull, full);
            DistanceEstimate est;
            est.pattern =
                (j == rank) ? DistancePattern::GeometricShift : DistancePattern::SubgroupEdge;
            est.cut = Cut::principal(limit, ConvexSubgroup{j}, CutSide::Minus);
            est.limit = limit;
            est.fit_start = static_cast<int>(s);
            est.subgroup_index = j;
            return est;
        }
    }
    return DistanceEstimate{};
}

DistanceEstimate distance_estimate(const ReductionTrace& trace, int p) {
    std::vector<GroupElement> hull_vals;
    for (const GroupElement& v : trace.gap_values())
        hull_vals.push_back(hull_element(v.desc(), v.entries()));
    return distance_estimate(hull_vals, p);
}

// ---------------------------------------------------------------------------
// Classification.

std::string to_string(ExtKind k) {
    switch (k) {
    case ExtKind::SplitHenselian: return "SPLIT_HENSELIAN";
    case ExtKind::ResidualDegreeP: return "RESIDUAL_DEGREE_P";
    case ExtKind::Ramified: return "RAMIFIED";
    case ExtKind::Defect: return "DEFECT";
    }
    return "?";
}

std::string to_string(Dependence d) {
    switch (d) {
    case Dependence::Dependent: return "DEPENDENT";
    case Dependence::Independent: return "INDEPENDENT";
    case Dependence::Unresolved: return "UNRESOLVED";
    }
    return "?";
}

std::string to_string(ReductionStatus s) {
    switch (s) {
    case ReductionStatus::TerminatedNonneg: return "TERMINATED_NONNEG";
    case ReductionStatus::TerminatedValueObstruction: return "TERMINATED_VALUE_OBSTRUCTION";
    case ReductionStatus::TerminatedResidueObstruction: return "TERMINATED_RESIDUE_OBSTRUCTION";
    case ReductionStatus::BudgetExhausted: return "BUDGET_EXHAUSTED";
    }
    return "?";
}

namespace {

bool residue_poly_has_root(const FieldDesc& K, Coeff rho, int degree) {
    const FiniteField& F = K.coeff();
    for (std::uint64_t r = 0; r < F.order(); ++r) {
        Coeff cand{r};
        if (!F.in_subfield(cand, degree)) continue;
        if (F.sub(F.frobenius(cand), cand) == rho) return true;
    }
    return false;
}

} // namespace

Classification classify(const ASInstance& inst, int budget) {
    const FieldDesc& K = inst.field();
    int p = K.p();
    Classification out;
    out.trace = as_reduce(inst, budget);
    const HahnSeries& residual = out.trace.steps.empty() ? inst.a : out.trace.steps.back().residual;
    switch (out.trace.status) {
    case ReductionStatus::TerminatedNonneg: {
        ExtValue v = valuation(residual);
        if (v.is_infinity() || !v.finite().is_zero()) {
            out.kind = ExtKind::SplitHenselian;
            out.g = p;
        } else {
            Coeff rho = residue(residual);
            bool splits = K.admits_coeff(rho) && residue_poly_has_root(K, rho, K.residue_degree());
            out.kind = splits ? ExtKind::SplitHenselian : ExtKind::ResidualDegreeP;
            (splits ? out.g : out.f) = p;
        }
        break;
    }
    case ReductionStatus::TerminatedValueObstruction:
        out.kind = ExtKind::Ramified;
        out.e = p;
        break;
    case ReductionStatus::TerminatedResidueObstruction:
        out.kind = ExtKind::ResidualDegreeP;
        out.f = p;
        break;
    case ReductionStatus::BudgetExhausted: {
        out.kind = ExtKind::Defect;
        out.d = p;
        DistanceEstimate est = distance_estimate(out.trace, p);
        out.distance = est;
        out.dependence = !est.resolved() ? Dependence::Unresolved
                         : is_idempotent(*est.cut) ? Dependence::Independent
                                                   : Dependence::Dependent;
        break;
    }
    }
    return out;
}

bool similar(const HahnSeries& z, const HahnSeries& y, const Cut& dist) {
    ExtValue v = valuation(z - y); // PrecisionError if indistinguishable
    return value_vs_cut(
               v.is_infinity() ? v : ExtValue(hull_element(z.field().group(),
                                                           v.finite().entries())),
               dist) == CutPosition::InRight;
}

// ---------------------------------------------------------------------------
// Deformation.

namespace {

bool eta_pth_power_matches(const DeformationQuery& q) {
    HahnSeries diff = frobenius(q.eta) - q.a;
    try {
        return valuation(diff).is_infinity();
    } catch (const PrecisionError&) {
        return true; // indistinguishable from zero at precision
    }
}

void validate_query(const DeformationQuery& q) {
    if (!(q.a.field() == q.b.field()) || !(q.a.field() == q.eta.field()))
        throw DescriptorError("deformation query parts live over different fields");
    if (valuation(q.b).is_infinity()) throw PreconditionError("deformation requires b != 0");
    if (!eta_pth_power_matches(q)) throw PreconditionError("eta^p does not match a");
    if (!q.epsilon.resolved() || !q.epsilon.cut)
        throw UndecidableError("distance of eta is unresolved; condition undecidable");
    // eta must lie outside K: either the mechanical p-th root fails, or the
    // approximants certify strictly increasing values inside the distance.
    bool mechanical_outside = false;
    try {
        (void)pth_root(q.a);
    } catch (const DivisibilityError&) {
        mechanical_outside = true;
    }
    if (!mechanical_outside && q.approximants.size() < 3)
        throw PreconditionError("eta lies in the series model of K; approximants certifying "
                                "eta outside K are required");
    std::optional<GroupElement> prev;
    for (const HahnSeries& c : q.approximants) {
        ExtValue v = valuation(q.eta - c);
        if (v.is_infinity())
            throw PreconditionError("an approximant equals eta; eta lies in K");
        GroupElement h = hull_element(q.eta.field().group(), v.finite().entries());
        if (prev && compare(*prev, h) != Ordering::LT)
            throw PreconditionError("approximant values must strictly increase");
        if (element_vs_cut(h, *q.epsilon.cut) != CutPosition::InLeft)
            throw PreconditionError("approximant value escapes the certified distance");
        prev = h;
    }
}

} // namespace

DeformResult deform(const DeformationQuery& q, int budget) {
    validate_query(q);
    const FieldDesc& K = q.a.field();
    int p = K.p();

    GroupElement vb = hull_element(K.group(), valuation(q.b).finite().entries());
    GroupElement veta = hull_element(K.group(), valuation(q.eta).finite().entries());

    DeformResult out;
    GroupElement condition_lhs = add(scale(vb, Rat(p - 1)), veta);
    Cut p_epsilon = cut_nfold(p, *q.epsilon.cut);
    out.condition_holds = element_vs_cut(condition_lhs, p_epsilon) == CutPosition::InRight;

    // Working precision: the coarsest among the query's series.
    Precision work = q.a.precision();
    work = min_precision(work, q.b.precision());
    work = min_precision(work, q.eta.precision());
    for (const HahnSeries& c : q.approximants) work = min_precision(work, c.precision());

    // g_{a,b} = X^p - X - a/b^p.
    HahnSeries bp = frobenius(q.b);
    Precision inv_target =
        work.is_exact() ? work : shift_precision(work, vec_scale(vb.entries(), Rat(-p)));
    HahnSeries a_def = q.a * invert(bp, inv_target);
    ASInstance inst{a_def};

    ExtValue va_def = valuation(a_def);
    if (va_def.is_infinity() || !value_negative(va_def.finite())) {
        // v(a/b^p) >= 0: defectless by the nonneg classification.
        out.classification = classify(inst, budget);
        out.similarity_verified = false;
        if (!va_def.is_infinity() && !va_def.finite().is_zero()) {
            Precision tgt = work.is_exact()
                                ? Precision(vec_scale(va_def.finite().entries(), Rat(2 * p)))
                                : work;
            HahnSeries theta = as_root_positive(a_def, tgt);
            try {
                out.similarity_verified = similar(q.b * theta, q.eta, *q.epsilon.cut);
            } catch (const PrecisionError&) {
                out.similarity_verified = false;
            }
        }
        return out;
    }

    RootApprox ra = as_root_approx(inst, budget);
    const HahnSeries& theta = ra.root;
    HahnSeries b_theta = q.b * theta;

    bool sim_main;
    try {
        sim_main = similar(b_theta, q.eta, *q.epsilon.cut);
    } catch (const PrecisionError&) {
        throw UndecidableError("cannot settle b*theta ~ eta at the available precision");
    }
    bool per_approx_ok = true;
    for (const HahnSeries& c : q.approximants) {
        ExtValue lhs = valuation(b_theta - c);
        ExtValue rhs = valuation(q.eta - c);
        if (compare(lhs, rhs) != Ordering::EQ) per_approx_ok = false;
    }
    out.similarity_verified = sim_main && per_approx_ok;

    if (out.condition_holds && out.similarity_verified) {
        // Certified dependent branch: theta is approximated by c_i / b and
        // its distance is epsilon shifted down by vb.
        HahnSeries binv = invert(q.b, work);
        std::vector<GroupElement> vals;
        ReductionTrace dep_trace;
        for (const HahnSeries& c : q.approximants) {
            HahnSeries approx = c * binv;
            ExtValue gv = valuation(theta - approx);
            out.gap_values.push_back(gv);
            if (!gv.is_infinity())
                vals.push_back(hull_element(K.group(), gv.finite().entries()));
            dep_trace.steps.push_back(ReductionStep{approx, theta - approx, gv});
        }
        dep_trace.status = ReductionStatus::BudgetExhausted;

        Cut shifted = cut_shift(*q.epsilon.cut, negate(vb));
        DistanceEstimate est;
        if (vals.size() >= 3) est = distance_estimate(vals, p);
        if (est.resolved() && !cut_eq(*est.cut, shifted))
            throw Error("internal", "trace distance disagrees with the shift law");
        if (!est.resolved()) {
            // Inherit the certificate from epsilon through the shift law.
            est.pattern = q.epsilon.pattern;
            est.cut = shifted;
            est.subgroup_index = q.epsilon.subgroup_index;
            if (q.epsilon.limit)
                est.limit = add(lift(*q.epsilon.limit, shifted.group()), negate(vb));
        }

        Classification cls;
        cls.kind = ExtKind::Defect;
        cls.d = p;
        cls.distance = est;
        cls.dependence =
            is_idempotent(*est.cut) ? Dependence::Independent : Dependence::Dependent;
        cls.trace = std::move(dep_trace);
        out.theta_distance = *est.cut;
        out.classification = std::move(cls);
    } else {
        // No certificate: report the classification relative to the series
        // model of K.
        out.classification = classify(inst, budget);
    }
    return out;
}

ASInstance generator_change(const ASInstance& inst, int i, const HahnSeries& c) {
    const FieldDesc& K = inst.field();
    if (i < 1 || i > K.p() - 1)
        throw PreconditionError("generator multiplier must lie in 1..p-1");
    HahnSeries a2 = scalar_mul(K.coeff().from_int(i), inst.a) + (frobenius(c) - c);
    return ASInstance{a2};
}

// ---------------------------------------------------------------------------
// Newton probe.

namespace {

HahnSeries poly_eval(const std::vector<HahnSeries>& g, const HahnSeries& x) {
    if (g.empty()) throw PreconditionError("empty polynomial");
    HahnSeries r = g.back();
    for (size_t k = g.size() - 1; k-- > 0;) r = r * x + g[k];
    return r;
}

std::vector<HahnSeries> poly_derivative(const std::vector<HahnSeries>& g) {
    std::vector<HahnSeries> d;
    const FiniteField& F = g.front().field().coeff();
    for (size_t k = 1; k < g.size(); ++k)
        d.push_back(scalar_mul(F.from_int(static_cast<long long>(k)), g[k]));
    if (d.empty()) d.push_back(HahnSeries::zero(g.front().field()));
    return d;
}

} // namespace

std::vector<NewtonStep> newton_improve(const std::vector<HahnSeries>& g, const HahnSeries& c,
                                       int steps, const Precision& work) {
    if (steps < 1) throw PreconditionError("newton_improve requires steps >= 1");
    std::vector<HahnSeries> dg = poly_derivative(g);
    HahnSeries x = truncate(c, work);
    std::vector<NewtonStep> out;
    ExtValue fx = valuation(poly_eval(g, x));
    if (fx.is_infinity()) {
        out.push_back(NewtonStep{x, fx});
        return out; // exact root: immediate fixpoint
    }
    ExtValue dfx = valuation(poly_eval(dg, x));
    if (dfx.is_infinity()) throw NewtonDomainError("derivative vanishes at the starting point");
    {
        const GroupDesc& gd = x.field().group();
        GroupElement lhs = hull_element(gd, fx.finite().entries());
        GroupElement rhs2 = scale(hull_element(gd, dfx.finite().entries()), Rat(2));
        if (compare(lhs, rhs2) != Ordering::GT)
            throw NewtonDomainError("requires v g(c) > 2 v g'(c): got " + fx.to_string() +
                                    " vs 2 * " + dfx.to_string());
    }
    out.push_back(NewtonStep{x, fx});
    for (int n = 0; n < steps; ++n) {
        HahnSeries fval = poly_eval(g, x);
        ExtValue vf;
        try {
            vf = valuation(fval);
        } catch (const PrecisionError&) {
            break;
        }
        if (vf.is_infinity()) break; // already recorded as exact root
        HahnSeries dval = poly_eval(dg, x);
        try {
            x = truncate(x - fval * invert(dval, work), work);
        } catch (const PrecisionError&) {
            break;
        }
        ExtValue vnext;
        try {
            vnext = valuation(poly_eval(g, x));
        } catch (const PrecisionError&) {
            break;
        }
        out.push_back(NewtonStep{x, vnext});
        if (vnext.is_infinity()) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Extremality probes.

namespace {

ProbeResult probe_from_witnesses(const PPolynomial& f, const std::vector<HahnSeries>& ws) {
    const FieldDesc& K = f.constant.field();
    ProbeResult out;
    std::optional<GroupElement> prev;
    for (const HahnSeries& w : ws) {
        HahnSeries val =
            (f.form == PPolynomial::Form::WpForm)
                ? f.constant - (frobenius(w) - w)
                : f.constant - (f.multipliers.empty() ? frobenius(w)
                                                      : f.multipliers.front() * frobenius(w));
        ExtValue v = valuation(val);
        out.values.push_back(v);
        if (v.is_infinity()) {
            out.outcome = ProbeResult::Outcome::MaxFound;
            out.witness = {w};
            out.max_value = v;
            return out;
        }
        GroupElement h = GroupElement(K.group().divisible_hull(), v.finite().entries());
        if (prev && compare(*prev, h) != Ordering::LT) {
            out.outcome = ProbeResult::Outcome::Inconclusive;
            out.note = "supplied witness values are not strictly increasing";
            return out;
        }
        prev = h;
    }
    if (out.values.size() < 2) {
        out.outcome = ProbeResult::Outcome::Inconclusive;
        out.note = "too few witnesses";
        return out;
    }
    out.outcome = ProbeResult::Outcome::IncreasingWitness;
    return out;
}

ProbeResult finish_witness(ProbeResult out, const char* note_if_short) {
    if (out.values.size() >= 2) out.outcome = ProbeResult::Outcome::IncreasingWitness;
    else {
        out.outcome = ProbeResult::Outcome::Inconclusive;
        out.note = note_if_short;
    }
    return out;
}

// Henselian regime of the Wp probe: values p-fold at every contraction
// step, or the root is exact and the maximum is infinity.
ProbeResult probe_wp_positive(const PPolynomial& f, int budget, ProbeResult out,
                              HahnSeries witness, HahnSeries residual) {
    const FieldDesc& K = f.constant.field();
    HahnSeries d = -residual;
    while (static_cast<int>(out.values.size()) <= budget) {
        HahnSeries fval = residual - (frobenius(d) - d);
        ExtValue v;
        try {
            v = valuation(fval);
        } catch (const PrecisionError&) {
            return finish_witness(std::move(out), "precision exhausted");
        }
        out.values.push_back(v);
        if (v.is_infinity()) {
            out.outcome = ProbeResult::Outcome::MaxFound;
            out.witness = {witness - d};
            out.max_value = v;
            return out;
        }
        d = frobenius(d) - residual;
        (void)K;
    }
    return finish_witness(std::move(out), "budget too small");
}

ProbeResult probe_wp_form(const PPolynomial& f, int budget) {
    const FieldDesc& K = f.constant.field();
    const FiniteField& F = K.coeff();
    ProbeResult out;
    HahnSeries witness = HahnSeries::zero(K);
    HahnSeries residual = f.constant;
    while (static_cast<int>(out.values.size()) <= budget) {
        ExtValue v;
        try {
            v = valuation(residual);
        } catch (const PrecisionError&) {
            return finish_witness(std::move(out), "precision exhausted");
        }
        if (v.is_infinity()) {
            out.values.push_back(v);
            out.outcome = ProbeResult::Outcome::MaxFound;
            out.witness = {witness};
            out.max_value = v;
            return out;
        }
        if (!value_negative(v.finite()) && !v.finite().is_zero())
            return probe_wp_positive(f, budget, std::move(out), witness, residual);
        out.values.push_back(v);
        if (v.finite().is_zero()) {
            Coeff rho = residue(residual);
            bool splits = K.admits_coeff(rho) && residue_poly_has_root(K, rho, K.residue_degree());
            if (!splits) {
                // v f(c) caps at 0: any c either keeps the residue mismatch
                // or drops below via its own p-th power.
                out.outcome = ProbeResult::Outcome::MaxFound;
                out.witness = {witness};
                out.max_value = v;
                return out;
            }
            for (std::uint64_t r = 0; r < F.order(); ++r) {
                Coeff cand{r};
                if (F.in_subfield(cand, K.residue_degree()) &&
                    F.sub(F.frobenius(cand), cand) == rho) {
                    HahnSeries cst = HahnSeries::constant(K, cand);
                    witness = witness - cst;
                    residual = residual - (frobenius(cst) - cst);
                    break;
                }
            }
            continue;
        }
        // Negative leading exponent: strip one p-th power if K allows it.
        auto [e, c] = leading_term(residual);
        GroupElement e_over_p = scale(hull_element(K.group(), e.entries()), Rat(1, K.p()));
        Coeff rc = F.pth_root(c);
        if (!contains(K.admitted(), e_over_p) || !K.admits_coeff(rc)) {
            // The leading term is unreachable by p-th powers from K, and a
            // linear cancellation costs a p-th power strictly below it.
            out.outcome = ProbeResult::Outcome::MaxFound;
            out.witness = {witness};
            out.max_value = v;
            return out;
        }
        HahnSeries corr =
            HahnSeries::monomial(K, GroupElement(K.group(), e_over_p.entries()), rc);
        witness = witness - corr;
        residual = residual - HahnSeries::monomial(K, e, c) + corr;
    }
    return finish_witness(std::move(out), "budget too small");
}

ProbeResult probe_ppower_form(const PPolynomial& f, int budget) {
    const FieldDesc& K = f.constant.field();
    const FiniteField& F = K.coeff();
    std::vector<HahnSeries> multipliers = f.multipliers;
    if (multipliers.empty()) multipliers.push_back(HahnSeries::constant(K, F.one()));
    std::vector<HahnSeries> witness(multipliers.size(), HahnSeries::zero(K));
    HahnSeries residual = f.constant;
    ProbeResult out;
    while (static_cast<int>(out.values.size()) <= budget) {
        ExtValue v;
        try {
            v = valuation(residual);
        } catch (const PrecisionError&) {
            return finish_witness(std::move(out), "precision exhausted");
        }
        out.values.push_back(v);
        if (v.is_infinity()) {
            out.outcome = ProbeResult::Outcome::MaxFound;
            out.witness = witness;
            out.max_value = v;
            return out;
        }
        auto [e, c] = leading_term(residual);
        std::optional<size_t> chosen;
        HahnSeries increment = HahnSeries::zero(K);
        int candidates = 0;
        for (size_t i = 0; i < multipliers.size(); ++i) {
            if (valuation(multipliers[i]).is_infinity()) continue;
            auto [be, bc] = leading_term(multipliers[i]);
            std::vector<Rat> de = e.entries();
            for (size_t k = 0; k < de.size(); ++k) de[k] -= be.entries()[k];
            GroupElement quot_over_p = scale(hull_element(K.group(), de), Rat(1, K.p()));
            if (!contains(K.admitted(), quot_over_p)) continue;
            Coeff qroot = F.pth_root(F.mul(c, F.inv(bc)));
            if (!K.admits_coeff(qroot)) continue;
            ++candidates;
            if (!chosen) {
                chosen = i;
                increment =
                    HahnSeries::monomial(K, GroupElement(K.group(), quot_over_p.entries()), qroot);
            }
        }
        if (candidates == 0) {
            out.outcome = ProbeResult::Outcome::MaxFound;
            out.witness = witness;
            out.max_value = v;
            return out;
        }
        if (candidates > 1) {
            out.outcome = ProbeResult::Outcome::Inconclusive;
            out.note = "multiple strip candidates; greedy stripping is not certified here";
            return out;
        }
        witness[*chosen] = witness[*chosen] + increment;
        residual = residual - multipliers[*chosen] * frobenius(increment);
    }
    return finish_witness(std::move(out), "budget too small");
}

} // namespace

ProbeResult extremality_probe(const PPolynomial& f, int budget,
                              const std::vector<HahnSeries>* supplied_witnesses) {
    if (supplied_witnesses) return probe_from_witnesses(f, *supplied_witnesses);
    if (f.form == PPolynomial::Form::WpForm) return probe_wp_form(f, budget);
    return probe_ppower_form(f, budget);
}

} // namespace defectlab
