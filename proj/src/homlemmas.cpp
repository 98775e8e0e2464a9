#include "exactcat/homlemmas.hpp"

#include <optional>
#include <string>

namespace exactcat {

namespace {

std::string arrow_text(const Hom& h) {
    return h.source().describe() + " -> " + h.target().describe();
}

ContextPushout context_pushout_checked(const ExactStructure& s, const Hom& i, const Hom& f) {
    try {
        return s.context.pushout(i, f);
    } catch (const outside_context& e) {
        throw lemma_hypothesis(std::string("the pushout does not exist in the context: ") + e.what());
    }
}

CokernelPair context_cokernel_checked(const ExactStructure& s, const Hom& m) {
    try {
        return s.context.cokernel(m);
    } catch (const outside_context& e) {
        throw lemma_hypothesis(std::string("the cokernel does not exist in the context: ") + e.what());
    }
}

/// One unknown X: src -> tgt subject to X*a_k = b_k for pairs (a_k, b_k).
std::optional<Hom> solve_postcomposition(const FgAb& src, const FgAb& tgt,
                                         const std::vector<std::pair<Hom, Hom>>& eqs) {
    std::vector<MorphismVar> vars{{src, tgt}};
    std::vector<MorphismEquation> mes;
    mes.reserve(eqs.size());
    for (const auto& [a, b] : eqs) {
        MorphismEquation e;
        e.terms.push_back({0, Mat::identity(tgt.generators()), a.action()});
        e.rhs = b.action();
        e.modulus = tgt;
        mes.push_back(std::move(e));
    }
    auto sol = solve_morphism_equations(vars, mes);
    if (!sol) return std::nullopt;
    return Hom(src, tgt, (*sol)[0]);
}

/// q is a cokernel of m in the structure's context: q annihilates m and the
/// induced map from the context cokernel is an isomorphism.
bool is_cokernel_of(const ExactStructure& s, const Hom& m, const Hom& q) {
    if (!is_zero_hom(compose(q, m))) return false;
    std::optional<Hom> proj;
    try {
        proj = s.context.cokernel(m).proj;
    } catch (const outside_context&) {
        return false;
    }
    std::optional<Hom> w = try_lift_through_cokernel(*proj, q);
    return w.has_value() && classify(*w).is_iso;
}

}  // namespace

// ---- diagram types -------------------------------------------------------------

ConflationMorphism conflation_morphism(const Conflation& source, const Conflation& target,
                                       const Hom& f, const Hom& g, const Hom& h) {
    if (!(f.source() == source.inflation.source()) || !(f.target() == target.inflation.source()) ||
        !(g.source() == source.inflation.target()) || !(g.target() == target.inflation.target()) ||
        !(h.source() == source.deflation.target()) || !(h.target() == target.deflation.target()))
        throw lemma_hypothesis("conflation morphism: the verticals do not fit the two rows");
    if (!hom_equal(compose(g, source.inflation), compose(target.inflation, f)))
        throw lemma_hypothesis("conflation morphism: the inflation square does not commute");
    if (!hom_equal(compose(h, source.deflation), compose(target.deflation, g)))
        throw lemma_hypothesis("conflation morphism: the deflation square does not commute");
    return {source, target, f, g, h};
}

PushoutSquare pushout_square(const Hom& i, const Hom& f, const Hom& i_prime, const Hom& g) {
    if (!(i.source() == f.source()) || !(g.source() == i.target()) ||
        !(i_prime.source() == f.target()) || !(g.target() == i_prime.target()))
        throw lemma_hypothesis("pushout square: the four maps do not close up");
    if (!hom_equal(compose(g, i), compose(i_prime, f)))
        throw lemma_hypothesis("pushout square: the square does not commute");
    return {i, f, i_prime, g};
}

bool is_pushout_square(const ExactStructure& s, const PushoutSquare& sq) {
    ContextPushout po = context_pushout_checked(s, sq.i, sq.f);
    std::optional<Hom> med = solve_postcomposition(
        po.object, sq.g.target(), {{po.from_i_target, sq.g}, {po.from_f_target, sq.i_prime}});
    return med.has_value() && classify(*med).is_iso;
}

// ---- pushouts of conflations ------------------------------------------------------

CompletedPushout pushout_completion(const ExactStructure& s, const Conflation& c, const Hom& f) {
    if (!(f.source() == c.inflation.source()))
        throw lemma_hypothesis("pushout completion: f must start at the conflation's left object");
    if (!is_conflation(s, c.inflation, c.deflation))
        throw lemma_hypothesis("pushout completion needs a conflation of " + s.name);
    ContextPushout po = context_pushout_checked(s, c.inflation, f);
    const Hom& i2 = po.from_f_target;  // A' -> P
    const Hom& g = po.from_i_target;   // B -> P
    if (!s.is_inflation(i2))
        throw not_a_member("membership failure: the pushed-forward morphism " + arrow_text(i2) +
                           " is not a member of " + s.name);
    // The induced map onto the common quotient: unique because the pushout
    // legs are jointly epimorphic.
    std::optional<Hom> d2 = solve_postcomposition(
        po.object, c.deflation.target(),
        {{g, c.deflation}, {i2, zero_hom(i2.source(), c.deflation.target())}});
    if (!d2)
        throw lemma_falsified("no induced map onto the common quotient for " + arrow_text(c.inflation));
    if (!is_cokernel_of(s, i2, *d2))
        throw lemma_falsified("the induced map is not a cokernel of the pushed-forward inflation");
    Conflation out{i2, *d2};
    if (!is_conflation(s, out.inflation, out.deflation))
        throw lemma_falsified("the completed row is not a conflation of " + s.name);
    return {out, pushout_square(c.inflation, f, i2, g)};
}

bool recognize_pushout(const ExactStructure& s, const PushoutSquare& sq, const Hom& d) {
    if (!(d.source() == sq.i.target()))
        throw lemma_hypothesis("pushout recognition: the cokernel datum must start at the upper right object");
    if (!classify(sq.i).is_mono || !classify(sq.i_prime).is_mono)
        throw lemma_hypothesis("pushout recognition: both horizontal maps must be monomorphisms");
    if (!is_cokernel_of(s, sq.i, d))
        throw lemma_hypothesis("pushout recognition: the given map is not a cokernel of the top row");
    std::optional<Hom> d2 = solve_postcomposition(
        sq.g.target(), d.target(),
        {{sq.g, d}, {sq.i_prime, zero_hom(sq.i_prime.source(), d.target())}});
    bool criterion = d2.has_value() && is_cokernel_of(s, sq.i_prime, *d2);
    bool universal = is_pushout_square(s, sq);
    if (criterion != universal)
        throw lemma_falsified("the cokernel criterion and the universal property disagree on the square at " +
                              arrow_text(sq.i));
    return universal;
}

bool recognize_deflation_square(const ExactStructure& s, const PushoutSquare& sq, const Hom& j) {
    if (!(j.target() == sq.i.source()))
        throw lemma_hypothesis("deflation square recognition: the ladder arrow must land in the upper left object");
    bool top_coker = is_cokernel_of(s, j, sq.i);
    bool bottom_coker = is_cokernel_of(s, compose(sq.f, j), sq.i_prime);
    bool universal = is_pushout_square(s, sq);
    if (top_coker && bottom_coker && !universal)
        throw lemma_falsified("an epi-over-cokernel square fails the pushout universal property at " +
                              arrow_text(sq.i));
    return universal;
}

// ---- factorization lemmas -----------------------------------------------------------

NineFactorization nine_factorization(const ExactStructure& s, const ConflationMorphism& m) {
    if (!is_conflation(s, m.source.inflation, m.source.deflation) ||
        !is_conflation(s, m.target.inflation, m.target.deflation))
        throw lemma_hypothesis("nine factorization needs conflations of " + s.name);
    CompletedPushout up = pushout_completion(s, m.source, m.f);
    const Conflation& mid = up.conflation;  // j: A' -> D, p: D -> C
    const Hom& u = up.square.g;             // B -> D
    // v mediates the cospan (g, i') through the pushout.
    std::optional<Hom> v = solve_postcomposition(
        u.target(), m.g.target(), {{u, m.g}, {mid.inflation, m.target.inflation}});
    if (!v)
        throw lemma_falsified("the pushout does not mediate onto the lower conflation");
    if (!hom_equal(compose(*v, u), m.g))
        throw lemma_falsified("the vertical composite through the pushout does not recover g");
    ConflationMorphism upper = conflation_morphism(
        m.source, mid, m.f, u, identity_hom(m.source.deflation.target()));
    ConflationMorphism lower = conflation_morphism(
        mid, m.target, identity_hom(m.f.target()), *v, m.h);
    PushoutSquare lr = pushout_square(mid.deflation, *v, m.target.deflation, m.h);
    if (!recognize_pushout(s, up.square, m.source.deflation))
        throw lemma_falsified("the upper left square fails pushout recognition");
    if (!recognize_deflation_square(s, lr, mid.inflation))
        throw lemma_falsified("the lower right square fails pushout recognition");
    return {mid, upper, lower, up.square, lr};
}

ShortFiveResult short_five_inverse(const ExactStructure& s, const ConflationMorphism& m) {
    if (!is_conflation(s, m.source.inflation, m.source.deflation) ||
        !is_conflation(s, m.target.inflation, m.target.deflation))
        throw lemma_hypothesis("short five needs conflations of " + s.name);
    MorphismClass cf = classify(m.f);
    MorphismClass ch = classify(m.h);
    if (!cf.is_iso || !ch.is_iso)
        throw lemma_hypothesis("short five needs isomorphisms on the outer verticals");
    const FgAb& b = m.source.inflation.target();
    const FgAb& bp = m.target.inflation.target();
    // Push i' out along i*f^{-1}; the two legs are g' and alpha.
    Hom if_inv = compose(m.source.inflation, *cf.inverse);  // A' -> B
    ContextPushout po = context_pushout_checked(s, m.target.inflation, if_inv);
    const Hom& gp = po.from_i_target;     // B' -> D
    const Hom& alpha = po.from_f_target;  // B -> D
    if (!s.is_inflation(alpha))
        throw not_a_member("membership failure: the pushed-forward morphism " + arrow_text(alpha) +
                           " is not a member of " + s.name);
    std::optional<Hom> beta = solve_postcomposition(
        po.object, m.target.deflation.target(),
        {{gp, m.target.deflation}, {alpha, zero_hom(b, m.target.deflation.target())}});
    if (!beta)
        throw lemma_falsified("no induced cokernel map beta on the pushout");
    if (!is_cokernel_of(s, alpha, *beta))
        throw lemma_falsified("beta is not a cokernel of alpha");
    std::optional<Hom> gamma = try_lift_through_cokernel(m.source.deflation, compose(gp, m.g) - alpha);
    if (!gamma)
        throw lemma_falsified("g'g - alpha does not lift through the top deflation");
    if (!hom_equal(compose(compose(*beta, *gamma), *ch.inverse),
                   identity_hom(m.target.deflation.target())))
        throw lemma_falsified("the trace identity beta gamma h^{-1} = 1 fails");
    Hom complement = identity_hom(po.object) - compose(*gamma, compose(*ch.inverse, *beta));
    std::optional<Hom> delta = try_restrict_through_kernel(alpha, complement);
    if (!delta)
        throw lemma_falsified("1 - gamma h^{-1} beta does not restrict through alpha");
    if (!hom_equal(compose(*delta, alpha), identity_hom(b)))
        throw lemma_falsified("the trace identity delta alpha = 1 fails");
    if (!is_zero_hom(compose(*delta, *gamma)))
        throw lemma_falsified("the trace identity delta gamma = 0 fails");
    Hom inverse = compose(*delta, gp);
    if (!hom_equal(compose(inverse, m.g), identity_hom(b)) ||
        !hom_equal(compose(m.g, inverse), identity_hom(bp)))
        throw lemma_falsified("the constructed inverse of the middle vertical is not two-sided");
    return {inverse, {alpha, *beta, *gamma, *delta}};
}

Conflation double_conflation(const ExactStructure& s, const DoubleConflationData& dd) {
    if (s.side != StructureSide::right)
        throw lemma_hypothesis("splicing conflations needs a right-side structure; " + s.name +
                               " distinguishes deflations");
    const Hom& i = dd.top.inflation;
    const Hom& d = dd.top.deflation;
    const Hom& ip = dd.bottom.inflation;
    const Hom& dp = dd.bottom.deflation;
    if (!(i.source() == ip.source()))
        throw lemma_hypothesis("double conflation: the rows must share their left object");
    if (!(dd.j.source() == d.target()) || !(dd.j_prime.source() == dp.target()) ||
        !(dd.g.source() == i.target()) || !(dd.g.target() == ip.target()) ||
        !(dd.h.source() == d.target()) || !(dd.h.target() == dp.target()) ||
        !(dd.f.source() == dd.j.target()) || !(dd.f.target() == dd.j_prime.target()))
        throw lemma_hypothesis("double conflation: the diagram does not close up");
    if (!hom_equal(compose(dd.g, i), ip))
        throw lemma_hypothesis("double conflation: the left square does not commute");
    if (!hom_equal(compose(dd.h, d), compose(dp, dd.g)))
        throw lemma_hypothesis("double conflation: the middle square does not commute");
    if (!hom_equal(compose(dd.f, dd.j), compose(dd.j_prime, dd.h)))
        throw lemma_hypothesis("double conflation: the right square does not commute");
    if (!is_conflation(s, i, d) || !is_conflation(s, ip, dp))
        throw lemma_hypothesis("double conflation needs two conflations of " + s.name);
    if (!s.is_inflation(dd.j) || !s.is_inflation(dd.j_prime))
        throw lemma_hypothesis("double conflation: j and j' must be members of " + s.name);
    if (!is_pushout_square(s, pushout_square(dd.j, dd.h, dd.j_prime, dd.f)))
        throw lemma_hypothesis("double conflation: the right square is not a pushout");
    // The middle square is a pushout by the epi-over-cokernel recognizer, so
    // the pasted rectangle makes [j'd', -f] a cokernel of [g; jd].
    if (!recognize_deflation_square(s, pushout_square(d, dd.g, dp, dd.h), i))
        throw lemma_falsified("the middle deflation square is not a pushout");
    Biproduct bd = biproduct(ip.target(), dd.j.target());  // B' (+) D
    Hom infl = into_biproduct(bd, dd.g, compose(dd.j, d));
    Hom defl = from_biproduct(bd, compose(dd.j_prime, dp), -dd.f);
    if (!is_zero_hom(compose(defl, infl)))
        throw lemma_falsified("the spliced composite is not zero");
    if (!is_cokernel_of(s, infl, defl))
        throw lemma_falsified("[j'd', -f] is not a cokernel of [g; jd]");
    // Membership: [g; d] is the pushout of i' along i, then compose with the
    // member 1 (+) j.
    Biproduct bc = biproduct(ip.target(), d.target());  // B' (+) C
    Hom gd = into_biproduct(bc, dd.g, d);
    if (!is_pushout_square(s, pushout_square(ip, i, gd, bc.in1)))
        throw lemma_falsified("the auxiliary biproduct square is not a pushout");
    if (!s.is_inflation(gd))
        throw not_a_member("membership failure: [g; d] " + arrow_text(gd) + " is not a member of " +
                           s.name);
    Hom diag = compose(bd.in1, bc.pr1) + compose(bd.in2, compose(dd.j, bc.pr2));
    if (!s.is_inflation(diag))
        throw not_a_member("membership failure: 1 (+) j " + arrow_text(diag) + " is not a member of " +
                           s.name);
    if (!hom_equal(compose(diag, gd), infl))
        throw lemma_falsified("the factorization [g; jd] = (1 (+) j)[g; d] fails");
    if (!s.is_inflation(infl))
        throw not_a_member("membership failure: [g; jd] " + arrow_text(infl) + " is not a member of " +
                           s.name);
    Conflation out{infl, defl};
    if (!is_conflation(s, out.inflation, out.deflation))
        throw lemma_falsified("the spliced sequence fails conflation verification");
    return out;
}

Conflation biproduct_conflation(const ExactStructure& s, const FgAb& a, const FgAb& b) {
    if (!s.has_r0star)
        throw lemma_hypothesis("the split sequence needs a structure accepting 0 -> B as a member; " +
                               s.name + " is not certified for that");
    FgAb z = FgAb::zero();
    Conflation ca{identity_hom(a), zero_hom(a, z)};
    Conflation cb{zero_hom(z, b), identity_hom(b)};
    Conflation sum = direct_sum_conflations(s, ca, cb);
    if (!is_conflation(s, sum.inflation, sum.deflation))
        throw lemma_falsified("the direct sum of the two trivial conflations fails verification");
    // The nominal presentation A >-> A (+) B ->> B is the isomorphic image of
    // that sum.
    Biproduct bi = biproduct(a, b);
    Conflation out{bi.in1, bi.pr2};
    if (!s.is_inflation(out.inflation))
        throw not_a_member("membership failure: " + arrow_text(out.inflation) +
                           " is not a member of " + s.name);
    if (!is_conflation(s, out.inflation, out.deflation))
        throw lemma_falsified("the split sequence fails conflation verification");
    return out;
}

PushoutCharacterizations pushout_characterizations(const ExactStructure& s, const PushoutSquare& sq) {
    if (s.side != StructureSide::right || !s.has_r0star)
        throw lemma_hypothesis("the pushout characterizations need a right-side structure accepting "
                               "0 -> B; " + s.name + " is not certified for that");
    if (!s.is_inflation(sq.i) || !s.is_inflation(sq.i_prime))
        throw lemma_hypothesis("the pushout characterizations need member horizontal maps");
    PushoutCharacterizations r;
    r.po = is_pushout_square(s, sq);
    Biproduct ba = biproduct(sq.i.target(), sq.f.target());  // B (+) A'
    Hom bracket = into_biproduct(ba, sq.i, sq.f);
    Hom cobracket = from_biproduct(ba, sq.g, -sq.i_prime);
    r.confl = is_conflation(s, bracket, cobracket);
    // Limits are ambient, so the pullback reading needs no context data.
    Hom med = pullback_mediate(pullback(sq.g, sq.i_prime), sq.i, sq.f);
    r.po_and_pb = r.po && classify(med).is_iso;
    if (r.po != r.confl || r.confl != r.po_and_pb)
        throw lemma_falsified("the three pushout characterizations disagree on the square at " +
                              arrow_text(sq.i));
    return r;
}

Hom bracket_inflation(const ExactStructure& s, const Hom& f, const Hom& f_prime) {
    if (s.side != StructureSide::right || !s.has_r0star)
        throw lemma_hypothesis("bracket inflation needs a right-side structure accepting 0 -> B; " +
                               s.name + " is not certified for that");
    if (!(f.source() == f_prime.source()))
        throw lemma_hypothesis("bracket inflation: the two maps must share their source");
    if (!s.is_inflation(f))
        throw lemma_hypothesis("bracket inflation: " + arrow_text(f) + " is not a member of " + s.name);
    ContextPushout po = context_pushout_checked(s, f, f_prime);
    if (!s.is_inflation(po.from_f_target))
        throw not_a_member("membership failure: the pushed-forward leg " + arrow_text(po.from_f_target) +
                           " is not a member of " + s.name);
    PushoutSquare sq = pushout_square(f, f_prime, po.from_f_target, po.from_i_target);
    PushoutCharacterizations ch = pushout_characterizations(s, sq);
    if (!ch.po || !ch.confl)
        throw lemma_falsified("the genuine pushout square fails its characterizations");
    Hom bracket = into_biproduct(biproduct(f.target(), f_prime.target()), f, f_prime);
    if (!s.is_inflation(bracket))
        throw lemma_falsified("[f; f'] fails membership although its conflation verified");
    return bracket;
}

std::pair<Conflation, Conflation> summand_conflations(const ExactStructure& s, const Conflation& c,
                                                      const Biproduct& source_sum,
                                                      const Biproduct& middle_sum,
                                                      const Biproduct& target_sum) {
    if (!s.strongly_right || !s.has_r0star)
        throw lemma_hypothesis("summand splitting needs a strongly right structure accepting 0 -> B; " +
                               s.name + " is not certified for that");
    if (!(c.inflation.source() == source_sum.object) || !(c.inflation.target() == middle_sum.object) ||
        !(c.deflation.target() == target_sum.object))
        throw lemma_hypothesis("summand splitting: the decompositions do not match the conflation");
    if (!is_conflation(s, c.inflation, c.deflation))
        throw lemma_hypothesis("summand splitting needs a conflation of " + s.name);
    bool blocks = is_zero_hom(compose(middle_sum.pr2, compose(c.inflation, source_sum.in1))) &&
                  is_zero_hom(compose(middle_sum.pr1, compose(c.inflation, source_sum.in2))) &&
                  is_zero_hom(compose(target_sum.pr2, compose(c.deflation, middle_sum.in1))) &&
                  is_zero_hom(compose(target_sum.pr1, compose(c.deflation, middle_sum.in2)));
    if (!blocks)
        throw lemma_hypothesis("summand splitting: the conflation is not block diagonal");
    // The biproduct inclusions are split-sequence inflations, so composing
    // with them keeps membership and cancelling the projection recovers each
    // block.
    if (!s.is_inflation(source_sum.in1) || !s.is_inflation(source_sum.in2))
        throw not_a_member("membership failure: a biproduct inclusion is not a member of " + s.name);
    Hom i1 = compose(middle_sum.pr1, compose(c.inflation, source_sum.in1));
    Hom i2 = compose(middle_sum.pr2, compose(c.inflation, source_sum.in2));
    Hom d1 = compose(target_sum.pr1, compose(c.deflation, middle_sum.in1));
    Hom d2 = compose(target_sum.pr2, compose(c.deflation, middle_sum.in2));
    Hom step1 = compose(c.inflation, source_sum.in1);
    Hom step2 = compose(c.inflation, source_sum.in2);
    if (!hom_equal(step1, compose(middle_sum.in1, i1)) || !hom_equal(step2, compose(middle_sum.in2, i2)))
        throw lemma_falsified("the block extraction identities fail");
    if (!s.is_inflation(step1) || !s.is_inflation(step2))
        throw not_a_member("membership failure: a composite with a biproduct inclusion is not a member of " +
                           s.name);
    if (!s.is_inflation(i1))
        throw not_a_member("membership failure: the first block " + arrow_text(i1) +
                           " is not a member of " + s.name);
    if (!s.is_inflation(i2))
        throw not_a_member("membership failure: the second block " + arrow_text(i2) +
                           " is not a member of " + s.name);
    if (!is_cokernel_of(s, i1, d1) || !is_cokernel_of(s, i2, d2))
        throw lemma_falsified("a block deflation is not a cokernel of its inflation");
    Conflation c1{i1, d1};
    Conflation c2{i2, d2};
    if (!is_conflation(s, c1.inflation, c1.deflation) || !is_conflation(s, c2.inflation, c2.deflation))
        throw lemma_falsified("a block row fails conflation verification");
    return {c1, c2};
}

KerInflationResult ker_inflation_lemma(const ExactStructure& s, const Conflation& top,
                                       const Conflation& bottom, const Hom& g, const Hom& h) {
    if (!s.strongly_right)
        throw lemma_hypothesis("the kernel-identity lemma needs a strongly right structure; " + s.name +
                               " is not certified for that");
    const Hom& i = top.inflation;
    const Hom& d = top.deflation;
    const Hom& ip = bottom.inflation;
    const Hom& dp = bottom.deflation;
    if (!(i.source() == ip.source()))
        throw lemma_hypothesis("kernel-identity lemma: the rows must share their left object");
    if (!(g.source() == i.target()) || !(g.target() == ip.target()) ||
        !(h.source() == d.target()) || !(h.target() == dp.target()))
        throw lemma_hypothesis("kernel-identity lemma: the verticals do not fit the rows");
    if (!hom_equal(compose(g, i), ip))
        throw lemma_hypothesis("kernel-identity lemma: the left square does not commute");
    if (!hom_equal(compose(h, d), compose(dp, g)))
        throw lemma_hypothesis("kernel-identity lemma: the right square does not commute");
    if (!is_conflation(s, i, d) || !is_conflation(s, ip, dp))
        throw lemma_hypothesis("the kernel-identity lemma needs conflations of " + s.name);
    if (!s.is_inflation(h))
        throw lemma_hypothesis("kernel-identity lemma: the right vertical must be a member of " + s.name);
    // Cokernel claim: coker(g) = h'*d' for h' a cokernel of h.
    CokernelPair hck = context_cokernel_checked(s, h);
    Hom hd = compose(hck.proj, dp);
    if (!is_zero_hom(compose(hd, g)))
        throw lemma_falsified("h'd' does not annihilate the middle vertical");
    if (!is_cokernel_of(s, g, hd))
        throw lemma_falsified("h'd' is not a cokernel of the middle vertical");
    // Membership chain: [g; d] via the auxiliary pushout square, 1 (+) h as a
    // direct sum, their composite [1; d']g by composition, then cancel the
    // projection.
    if (!recognize_deflation_square(s, pushout_square(d, g, dp, h), i))
        throw lemma_falsified("the deflation square of the rows is not a pushout");
    Biproduct bc = biproduct(ip.target(), d.target());  // B' (+) C
    Hom gd = into_biproduct(bc, g, d);
    if (!is_pushout_square(s, pushout_square(ip, i, gd, bc.in1)))
        throw lemma_falsified("the auxiliary biproduct square is not a pushout");
    if (!s.is_inflation(gd))
        throw not_a_member("membership failure: [g; d] " + arrow_text(gd) + " is not a member of " +
                           s.name);
    Biproduct bc2 = biproduct(ip.target(), h.target());  // B' (+) C'
    Hom diag = compose(bc2.in1, bc.pr1) + compose(bc2.in2, compose(h, bc.pr2));
    if (!s.is_inflation(diag))
        throw not_a_member("membership failure: 1 (+) h " + arrow_text(diag) + " is not a member of " +
                           s.name);
    Hom comp = compose(diag, gd);
    if (!hom_equal(comp, into_biproduct(bc2, g, compose(dp, g))))
        throw lemma_falsified("the factorization [1; d']g = (1 (+) h)[g; d] fails");
    if (!s.is_inflation(comp))
        throw not_a_member("membership failure: the composite " + arrow_text(comp) +
                           " is not a member of " + s.name);
    if (!hom_equal(compose(bc2.pr1, comp), g))
        throw lemma_falsified("projecting the composite does not recover the middle vertical");
    return {s.is_inflation(g), hd};
}

Conflation three_by_three(const ExactStructure& s, const ThreeByThreeInput& in) {
    if (!s.strongly_right)
        throw lemma_hypothesis("the three-by-three lemma needs a strongly right structure; " + s.name +
                               " is not certified for that");
    const Hom& f = in.col_a.inflation;
    const Hom& fp = in.col_a.deflation;
    const Hom& g = in.col_b.inflation;
    const Hom& gp = in.col_b.deflation;
    const Hom& h = in.col_c.inflation;
    const Hom& hp = in.col_c.deflation;
    const Hom& i = in.row1.inflation;
    const Hom& d = in.row1.deflation;
    const Hom& ip = in.row2.inflation;
    const Hom& dp = in.row2.deflation;
    if (!(i.source() == f.source()) || !(i.target() == g.source()) || !(d.target() == h.source()) ||
        !(ip.source() == f.target()) || !(ip.target() == g.target()) || !(dp.target() == h.target()))
        throw lemma_hypothesis("three-by-three: the grid does not close up");
    if (!hom_equal(compose(g, i), compose(ip, f)))
        throw lemma_hypothesis("three-by-three: the upper left square does not commute");
    if (!hom_equal(compose(h, d), compose(dp, g)))
        throw lemma_hypothesis("three-by-three: the upper right square does not commute");
    for (const Conflation* c : {&in.col_a, &in.col_b, &in.col_c, &in.row1, &in.row2})
        if (!is_conflation(s, c->inflation, c->deflation))
            throw lemma_hypothesis("three-by-three: every given row and column must be a conflation of " +
                                   s.name);
    // Factor (f, g, h) through the pushout row.
    NineFactorization nf = nine_factorization(s, conflation_morphism(in.row1, in.row2, f, g, h));
    const Hom& j = nf.middle.inflation;  // A' -> D
    const Hom& u = nf.upper.g;           // B -> D
    const Hom& v = nf.lower.g;           // D -> B'
    if (!s.is_inflation(u))
        throw not_a_member("membership failure: the pushed-forward column inflation " + arrow_text(u) +
                           " is not a member of " + s.name);
    KerInflationResult kil = ker_inflation_lemma(s, nf.middle, in.row2, v, h);
    if (!kil.g_is_member)
        throw lemma_falsified("the comparison map out of the pushout row fails membership");
    // u' is induced by the upper left pushout and is a cokernel of u.
    std::optional<Hom> up = solve_postcomposition(
        u.target(), fp.target(), {{j, fp}, {u, zero_hom(u.source(), fp.target())}});
    if (!up)
        throw lemma_falsified("no induced map u' onto the third-row left object");
    if (!is_cokernel_of(s, u, *up))
        throw lemma_falsified("u' is not a cokernel of the pushed-forward column inflation");
    // i'' is induced by that cokernel; the square over it is a pushout.
    std::optional<Hom> ipp = try_lift_through_cokernel(*up, compose(gp, v));
    if (!ipp)
        throw lemma_falsified("g'v does not lift through u'");
    if (!recognize_deflation_square(s, pushout_square(*up, v, gp, *ipp), u))
        throw lemma_falsified("the square inducing the third-row inflation is not a pushout");
    if (!s.is_inflation(*ipp))
        throw not_a_member("membership failure: the third-row inflation " + arrow_text(*ipp) +
                           " is not a member of " + s.name);
    if (!hom_equal(compose(*ipp, fp), compose(gp, ip)))
        throw lemma_falsified("the third-row inflation square does not commute");
    // v' = h'd' is a cokernel of v; d'' is induced from the pushout over i''.
    Hom vp = compose(hp, dp);
    if (!is_zero_hom(compose(vp, v)))
        throw lemma_falsified("h'd' does not annihilate the comparison map");
    if (!is_cokernel_of(s, v, vp))
        throw lemma_falsified("h'd' is not a cokernel of the comparison map");
    std::optional<Hom> dpp = solve_postcomposition(
        gp.target(), hp.target(), {{gp, vp}, {*ipp, zero_hom(ipp->source(), hp.target())}});
    if (!dpp)
        throw lemma_falsified("no induced map d'' onto the third-row right object");
    if (!is_cokernel_of(s, *ipp, *dpp))
        throw lemma_falsified("d'' is not a cokernel of the third-row inflation");
    if (!hom_equal(compose(*dpp, gp), vp))
        throw lemma_falsified("the third-row deflation square d''g' = h'd' fails");
    Conflation out{*ipp, *dpp};
    if (!is_conflation(s, out.inflation, out.deflation))
        throw lemma_falsified("the constructed third row is not a conflation of " + s.name);
    return out;
}

// ---- weakly idempotent complete consequences --------------------------------------------

DeflSumReport defl_sum_reduction(const ExactStructure& s, const Hom& f, const Hom& g) {
    if (s.side != StructureSide::right || !s.has_r0star)
        throw lemma_hypothesis("deflation sum reduction pads with split sequences and needs a "
                               "right-side structure accepting them; " + s.name +
                               " is not certified for that");
    if (!(f.target() == g.source()))
        throw lemma_hypothesis("deflation sum reduction: f must land in the source of g");
    const FgAb& a = f.source();
    const FgAb& b = g.source();
    const FgAb& c = g.target();
    Biproduct ba = biproduct(b, a);
    Hom bracket = from_biproduct(ba, g, compose(g, f));
    DeflSumReport rep{s.is_deflation(bracket), s.is_deflation(g)};
    Hom g0 = from_biproduct(ba, g, zero_hom(a, c));
    Hom shear_pos = compose(ba.in1, ba.pr1) + compose(ba.in1, compose(f, ba.pr2)) +
                    compose(ba.in2, ba.pr2);
    Hom shear_neg = compose(ba.in1, ba.pr1) + compose(ba.in2, ba.pr2) -
                    compose(ba.in1, compose(f, ba.pr2));
    if (rep.bracket_is_deflation) {
        // Shear the kernel row of [g, gf] into one over [g, 0], split off the
        // A coordinate through the section it contains and rebuild a
        // conflation over g alone.
        KernelPair kb = kernel(bracket);
        Hom u = compose(ba.pr1, kb.incl);
        Hom r = compose(ba.pr2, kb.incl);
        Hom incl2 = into_biproduct(ba, u + compose(f, r), r);
        if (!hom_equal(incl2, compose(shear_pos, kb.incl)))
            throw lemma_falsified("shearing the kernel inclusion fails");
        if (!is_conflation(s, kb.incl, bracket))
            throw lemma_falsified("the kernel row of [g, gf] is not a conflation");
        if (!is_conflation(s, incl2, g0))
            throw lemma_falsified("the sheared row over [g, 0] is not a conflation");
        std::optional<Hom> sec = try_restrict_through_kernel(incl2, ba.in2);
        if (!sec)
            throw lemma_falsified("the A coordinate does not restrict through the sheared kernel");
        if (!hom_equal(compose(r, *sec), identity_hom(a)))
            throw lemma_falsified("the restricted coordinate map is not a section");
        CokernelPair cp = context_cokernel_checked(s, *sec);
        std::optional<Hom> v =
            try_lift_through_cokernel(cp.proj, identity_hom(kb.object) - compose(*sec, r));
        if (!v)
            throw lemma_falsified("the idempotent complement does not lift through the section's cokernel");
        Hom u2 = compose(ba.pr1, incl2);  // u' = u + fr
        Hom w = compose(u2, *v);          // D -> B
        if (!hom_equal(compose(w, cp.proj), u2))
            throw lemma_falsified("the split-off map does not reproduce u'");
        Biproduct da = biproduct(cp.object, a);
        Hom pr_iso = into_biproduct(da, cp.proj, r);  // [p; r]: K -> D (+) A
        if (!classify(pr_iso).is_iso)
            throw lemma_falsified("[p; r] is not an isomorphism");
        Hom padded = compose(ba.in1, compose(w, da.pr1)) + compose(ba.in2, da.pr2);  // w (+) 1
        if (!hom_equal(compose(padded, pr_iso), incl2))
            throw lemma_falsified("transporting the sheared row along [p; r] fails");
        if (!is_conflation(s, padded, g0))
            throw lemma_falsified("the transported row over [g, 0] is not a conflation");
        if (!is_pushout_square(s, pushout_square(padded, da.pr1, w, ba.pr1)))
            throw lemma_falsified("the projection square over the split-off map is not a pushout");
        if (!s.is_inflation(w))
            throw not_a_member("membership failure: the split-off map " + arrow_text(w) +
                               " is not a member of " + s.name);
        if (!is_conflation(s, w, g))
            throw lemma_falsified("the rebuilt row over g is not a conflation");
        if (!rep.g_is_deflation)
            throw lemma_falsified("[g, gf] is a deflation but g fails the derived membership");
    }
    if (rep.g_is_deflation) {
        // Pad the kernel row of g with the identity on A and shear it onto
        // [g, gf].
        KernelPair kg = kernel(g);
        if (!is_conflation(s, kg.incl, g))
            throw lemma_falsified("the kernel row of g is not a conflation");
        Biproduct da = biproduct(kg.object, a);
        Hom padded = compose(ba.in1, compose(kg.incl, da.pr1)) + compose(ba.in2, da.pr2);
        if (!is_pushout_square(s, pushout_square(kg.incl, da.in1, padded, ba.in1)))
            throw lemma_falsified("the padding square is not a pushout");
        if (!s.is_inflation(padded))
            throw not_a_member("membership failure: r' (+) 1 " + arrow_text(padded) +
                               " is not a member of " + s.name);
        if (!is_conflation(s, padded, g0))
            throw lemma_falsified("the padded row over [g, 0] is not a conflation");
        Hom sheared = compose(shear_neg, padded);
        if (!is_conflation(s, sheared, bracket))
            throw lemma_falsified("the sheared row over [g, gf] is not a conflation");
        if (!rep.bracket_is_deflation)
            throw lemma_falsified("g is a deflation but [g, gf] fails the derived membership");
    }
    if (rep.bracket_is_deflation != rep.g_is_deflation)
        throw lemma_falsified("the two deflation verdicts disagree for " + arrow_text(g));
    return rep;
}

AxiomReport obscure_equivalence(const ExactStructure& s, int samples, std::uint64_t seed,
                                const ObjectBounds& bounds) {
    if (!s.strongly_right)
        throw lemma_hypothesis("the cancellation equivalence needs a strongly right structure; " +
                               s.name + " is not certified for that");
    AxiomReport rep;
    rep.structure = s.name;
    rep.axiom = "obscure";
    rep.pass = true;
    rep.samples_requested = samples;
    rep.seed = seed;
    Rng rng(seed);
    for (int k = 0; k < samples; ++k) {
        ++rep.samples_run;
        if (k % 2 == 0) {
            // Cancellation: p*i a member forces i to be one.
            Hom km = s.sample_inflation(rng, bounds);
            Hom t = random_hom(km.source(), s.sample_object(rng, bounds), rng);
            Biproduct bi = biproduct(km.target(), t.target());
            Hom i = into_biproduct(bi, km, t);
            if (!s.is_inflation(i)) {
                rep.pass = false;
                std::string why = "the projection composite " + arrow_text(km) +
                                  " is a member but " + arrow_text(i) + " is not";
                rep.note = "counterexample found at sample " + std::to_string(k + 1) + ": " + why;
                rep.witness = make_witness(s, "obscure", {i, bi.pr1}, why);
                return rep;
            }
        } else {
            // Bracket reading: [f; gf] is a member exactly when f is.
            FgAb a0 = s.sample_object(rng, bounds);
            Hom fmap = rng.chance(50) ? s.sample_inflation_from(a0, rng, bounds)
                                      : random_hom(a0, s.sample_object(rng, bounds), rng);
            Hom gmap = random_hom(fmap.target(), s.sample_object(rng, bounds), rng);
            Biproduct bi = biproduct(fmap.target(), gmap.target());
            Hom bracket = into_biproduct(bi, fmap, compose(gmap, fmap));
            if (s.is_inflation(bracket) != s.is_inflation(fmap)) {
                rep.pass = false;
                std::string why = "[f; gf] membership disagrees with f for " + arrow_text(fmap);
                rep.note = "counterexample found at sample " + std::to_string(k + 1) + ": " + why;
                rep.witness = make_witness(s, "obscure", {fmap, bracket}, why);
                return rep;
            }
        }
    }
    rep.note = "no counterexample found in " + std::to_string(rep.samples_run) + " samples";
    return rep;
}

bool injective_test(const ExactStructure& s, const FgAb& i_obj, int probe_samples,
                    std::uint64_t seed, const ObjectBounds& bounds) {
    if (!s.context.contains(i_obj))
        throw lemma_hypothesis("injectivity probe: " + i_obj.describe() +
                               " lies outside the context of " + s.name);
    Rng rng(seed);
    for (int k = 0; k < probe_samples; ++k) {
        Hom infl = s.sample_inflation(rng, bounds);
        Hom u = random_hom(infl.source(), i_obj, rng);
        if (!solve_postcomposition(infl.target(), i_obj, {{infl, u}}))
            return false;  // definitive: u does not extend along a member
    }
    return true;  // sampling verdict
}

bool hom_epi_characterization(const ExactStructure& s, const Hom& f,
                              const std::vector<FgAb>& injectives) {
    for (const FgAb& i_obj : injectives) {
        if (!s.context.contains(i_obj))
            throw lemma_hypothesis("hom characterization: " + i_obj.describe() +
                                   " lies outside the context of " + s.name);
        HomGroup hom_b = hom_group(f.target(), i_obj);
        HomGroup hom_a = hom_group(f.source(), i_obj);
        if (!classify(hom_restriction_map(f, hom_b, hom_a)).is_epi) return false;
    }
    return true;
}

}  // namespace exactcat
