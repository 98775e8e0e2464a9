#include "exactcat/fgab.hpp"

#include <algorithm>
#include <sstream>

namespace exactcat {

struct FgAb::Data {
    int generators = 0;
    Mat relations;
    SmithDecomposition snf;
    std::vector<Int> coordinate_factors;
    std::vector<Int> invariant_factors;
};

FgAb::FgAb(int generators, Mat relations) {
    if (relations.rows() != generators)
        throw dimension_error("relation matrix must have one row per generator");
    auto d = std::make_shared<Data>();
    d->generators = generators;
    d->relations = std::move(relations);
    d->snf = smith_normal_form(d->relations);
    d->coordinate_factors.reserve(generators);
    for (int i = 0; i < generators; ++i) d->coordinate_factors.push_back(d->snf.diag(i));
    for (const Int& f : d->coordinate_factors)
        if (f != 1) d->invariant_factors.push_back(f);
    data_ = std::move(d);
}

FgAb::FgAb() : FgAb(0, Mat()) {}

FgAb FgAb::free(int rank) { return FgAb(rank, Mat::zero(rank, 0)); }

FgAb FgAb::cyclic(const Int& n) { return from_factors({n}); }

FgAb FgAb::from_factors(const std::vector<Int>& factors) {
    const int m = static_cast<int>(factors.size());
    int torsion = 0;
    for (const Int& f : factors) {
        if (f < 0) throw error("invariant factors must be nonnegative");
        if (f != 0) ++torsion;
    }
    Mat rel(m, torsion);
    int c = 0;
    for (int i = 0; i < m; ++i)
        if (factors[i] != 0) rel.at(i, c++) = factors[i];
    return FgAb(m, std::move(rel));
}

int FgAb::generators() const { return data_->generators; }
const Mat& FgAb::relations() const { return data_->relations; }
const SmithDecomposition& FgAb::relations_snf() const { return data_->snf; }
const std::vector<Int>& FgAb::invariant_factors() const { return data_->invariant_factors; }
const std::vector<Int>& FgAb::coordinate_factors() const { return data_->coordinate_factors; }

bool FgAb::is_zero_object() const { return data_->invariant_factors.empty(); }

bool FgAb::same_presentation(const FgAb& other) const {
    if (data_ == other.data_) return true;
    return data_->generators == other.data_->generators && data_->relations == other.data_->relations;
}

bool FgAb::isomorphic(const FgAb& other) const {
    return data_->invariant_factors == other.data_->invariant_factors;
}

bool FgAb::column_span_contains(const Mat& m) const {
    if (m.rows() != data_->generators)
        throw dimension_error("column_span_contains: row count mismatch");
    return in_column_span(data_->snf, m);
}

std::string FgAb::describe() const {
    if (is_zero_object()) return "0";
    std::ostringstream os;
    int rank = 0;
    bool first = true;
    for (const Int& f : data_->invariant_factors) {
        if (f == 0) {
            ++rank;
            continue;
        }
        os << (first ? "" : " + ") << "Z/" << f;
        first = false;
    }
    if (rank == 1) os << (first ? "" : " + ") << "Z";
    if (rank > 1) os << (first ? "" : " + ") << "Z^" << rank;
    return os.str();
}

// ---- Hom --------------------------------------------------------------------

Hom::Hom(FgAb source, FgAb target, Mat action)
    : source_(std::move(source)), target_(std::move(target)), action_(std::move(action)) {
    if (action_.rows() != target_.generators() || action_.cols() != source_.generators())
        throw dimension_error("morphism action has wrong shape");
    if (source_.relations().cols() > 0 && !target_.column_span_contains(action_ * source_.relations()))
        throw not_well_defined("morphism does not respect the source relations");
}

Hom identity_hom(const FgAb& a) { return Hom(a, a, Mat::identity(a.generators())); }

Hom zero_hom(const FgAb& source, const FgAb& target) {
    return Hom(source, target, Mat::zero(target.generators(), source.generators()));
}

Hom compose(const Hom& g, const Hom& f) {
    if (!f.target().same_presentation(g.source()))
        throw object_mismatch("compose: middle objects do not match");
    return Hom(f.source(), g.target(), g.action() * f.action());
}

Hom operator+(const Hom& f, const Hom& g) {
    if (!f.source().same_presentation(g.source()) || !f.target().same_presentation(g.target()))
        throw object_mismatch("hom sum: endpoint mismatch");
    return Hom(f.source(), f.target(), f.action() + g.action());
}

Hom operator-(const Hom& f, const Hom& g) { return f + (-g); }

Hom operator-(const Hom& f) { return Hom(f.source(), f.target(), f.action().negated()); }

bool hom_equal(const Hom& f, const Hom& g) {
    if (!f.source().same_presentation(g.source()) || !f.target().same_presentation(g.target()))
        throw object_mismatch("hom_equal: endpoint mismatch");
    if (f.action() == g.action()) return true;
    return f.target().column_span_contains(f.action() - g.action());
}

bool is_zero_hom(const Hom& f) {
    if (f.action().is_zero()) return true;
    return f.target().column_span_contains(f.action());
}

// ---- canonical form ---------------------------------------------------------

CanonicalForm canonical_form(const FgAb& a) {
    const auto& factors = a.invariant_factors();
    const auto& coord = a.coordinate_factors();
    const auto& snf = a.relations_snf();
    FgAb obj = FgAb::from_factors(factors);
    const int m = a.generators();
    const int mc = static_cast<int>(factors.size());
    Mat to_act(mc, m), from_act(m, mc);
    int r = 0;
    for (int i = 0; i < m; ++i) {
        if (coord[i] == 1) continue;
        for (int j = 0; j < m; ++j) {
            to_act.at(r, j) = snf.u.at(i, j);
            from_act.at(j, r) = snf.u_inv.at(j, i);
        }
        ++r;
    }
    return {obj, Hom(a, obj, std::move(to_act)), Hom(obj, a, std::move(from_act))};
}

// ---- kernels, cokernels, biproducts -----------------------------------------

namespace {

Mat kernel_basis_of(const Mat& m) {
    SmithDecomposition s = smith_normal_form(m);
    return s.v.col_range(s.rank, s.v.cols());
}

}  // namespace

KernelPair kernel(const Hom& f) {
    const FgAb& a = f.source();
    const FgAb& b = f.target();
    // x-parts of solutions to f.action * x = relations(b) * y give the kernel
    // sublattice of the source; its own relations come from the same trick.
    Mat kb = kernel_basis_of(hstack(f.action(), b.relations()));
    Mat w = kb.row_range(0, a.generators());
    Mat kb2 = kernel_basis_of(hstack(w, a.relations()));
    Mat rel = kb2.row_range(0, w.cols());
    FgAb raw(w.cols(), std::move(rel));
    CanonicalForm can = canonical_form(raw);
    Hom incl(can.object, a, w * can.from.action());
    return {can.object, std::move(incl)};
}

FgAb quotient_object(const FgAb& a, const Mat& extra) {
    if (extra.rows() != a.generators())
        throw dimension_error("extra relations must have one row per generator");
    Mat ext = hstack(a.relations(), extra);
    SmithDecomposition s = smith_normal_form(ext);
    // Reduced generating set of the extended relation lattice; keeps relation
    // matrices at most `generators` columns wide under iterated quotients.
    Mat reduced = s.u_inv * s.d.col_range(0, s.rank);
    return FgAb(a.generators(), std::move(reduced));
}

CokernelPair cokernel(const Hom& f) {
    const FgAb& b = f.target();
    FgAb c = quotient_object(b, f.action());
    Hom proj(b, c, Mat::identity(b.generators()));
    return {c, std::move(proj)};
}

Biproduct biproduct(const FgAb& a, const FgAb& b) {
    FgAb sum(a.generators() + b.generators(), block_diag(a.relations(), b.relations()));
    const int ga = a.generators(), gb = b.generators();
    Mat in1(ga + gb, ga), in2(ga + gb, gb), pr1(ga, ga + gb), pr2(gb, ga + gb);
    for (int i = 0; i < ga; ++i) {
        in1.at(i, i) = 1;
        pr1.at(i, i) = 1;
    }
    for (int i = 0; i < gb; ++i) {
        in2.at(ga + i, i) = 1;
        pr2.at(i, ga + i) = 1;
    }
    return {sum, Hom(a, sum, std::move(in1)), Hom(b, sum, std::move(in2)),
            Hom(sum, a, std::move(pr1)), Hom(sum, b, std::move(pr2))};
}

Hom into_biproduct(const Biproduct& bi, const Hom& f, const Hom& g) {
    if (!f.source().same_presentation(g.source()))
        throw object_mismatch("into_biproduct: components need a common source");
    return compose(bi.in1, f) + compose(bi.in2, g);
}

Hom from_biproduct(const Biproduct& bi, const Hom& f, const Hom& g) {
    if (!f.target().same_presentation(g.target()))
        throw object_mismatch("from_biproduct: components need a common target");
    return compose(f, bi.pr1) + compose(g, bi.pr2);
}

// ---- pushout / pullback -----------------------------------------------------

PushoutResult pushout(const Hom& i, const Hom& f) {
    if (!i.source().same_presentation(f.source()))
        throw object_mismatch("pushout: legs need a common source");
    Biproduct mid = biproduct(i.target(), f.target());
    Hom bracket = into_biproduct(mid, i, -f);
    CokernelPair ck = cokernel(bracket);
    Hom g = compose(ck.proj, mid.in1);
    Hom ip = compose(ck.proj, mid.in2);
    return {ck.object, std::move(g), std::move(ip), i, f, std::move(mid), std::move(ck.proj)};
}

Hom pushout_mediate(const PushoutResult& po, const Hom& x, const Hom& y) {
    if (!hom_equal(compose(x, po.i), compose(y, po.f)))
        throw error("pushout_mediate: cospan does not commute with the span");
    return lift_through_cokernel(po.proj, from_biproduct(po.mid, x, y));
}

PullbackResult pullback(const Hom& d, const Hom& h) {
    if (!d.target().same_presentation(h.target()))
        throw object_mismatch("pullback: legs need a common target");
    Biproduct mid = biproduct(d.source(), h.source());
    Hom cobracket = from_biproduct(mid, d, -h);
    KernelPair k = kernel(cobracket);
    Hom to_b = compose(mid.pr1, k.incl);
    Hom to_c = compose(mid.pr2, k.incl);
    return {k.object, std::move(to_b), std::move(to_c), d, h, std::move(mid), std::move(k.incl)};
}

Hom pullback_mediate(const PullbackResult& pb, const Hom& x, const Hom& y) {
    if (!hom_equal(compose(pb.d, x), compose(pb.h, y)))
        throw error("pullback_mediate: span does not commute with the cospan");
    return restrict_through_kernel(pb.incl, into_biproduct(pb.mid, x, y));
}

// ---- morphism equation solver -----------------------------------------------

namespace {

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int ia = 0; ia < a.rows(); ++ia)
        for (int ja = 0; ja < a.cols(); ++ja) {
            const Int& x = a.at(ia, ja);
            if (x == 0) continue;
            for (int ib = 0; ib < b.rows(); ++ib)
                for (int jb = 0; jb < b.cols(); ++jb)
                    out.at(ia * b.rows() + ib, ja * b.cols() + jb) = x * b.at(ib, jb);
        }
    return out;
}

Mat vec(const Mat& x) {  // column stacking
    Mat out(x.rows() * x.cols(), 1);
    for (int j = 0; j < x.cols(); ++j)
        for (int i = 0; i < x.rows(); ++i) out.at(j * x.rows() + i, 0) = x.at(i, j);
    return out;
}

Mat unvec(const Mat& v, int rows, int cols, int offset) {
    Mat out(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) out.at(i, j) = v.at(offset + j * rows + i, 0);
    return out;
}

void add_block(Mat& m, int r0, int c0, const Mat& block) {
    for (int i = 0; i < block.rows(); ++i)
        for (int j = 0; j < block.cols(); ++j) m.at(r0 + i, c0 + j) += block.at(i, j);
}

}  // namespace

std::optional<std::vector<Mat>> solve_morphism_equations(const std::vector<MorphismVar>& vars,
                                                         const std::vector<MorphismEquation>& eqs_in) {
    // Everything is rewritten in invariant-factor coordinates: unknowns become
    // canonical-to-canonical matrices and every modulus becomes diagonal,
    // which keeps the vectorized system small and sparse.
    std::vector<CanonicalForm> var_src, var_tgt;
    var_src.reserve(vars.size());
    var_tgt.reserve(vars.size());
    for (const auto& v : vars) {
        var_src.push_back(canonical_form(v.source));
        var_tgt.push_back(canonical_form(v.target));
    }

    struct CompiledEq {
        std::vector<MorphismTerm> terms;
        Mat rhs;
        Mat mod_rel;
    };
    std::vector<CompiledEq> eqs;

    auto compile = [&](const MorphismEquation& e) {
        CanonicalForm mod = canonical_form(e.modulus);
        CompiledEq out;
        if (e.rhs.rows() != e.modulus.generators())
            throw dimension_error("morphism equation: rhs rows must match modulus generators");
        out.rhs = mod.to.action() * e.rhs;
        out.mod_rel = mod.object.relations();
        for (const auto& t : e.terms) {
            if (t.var < 0 || t.var >= static_cast<int>(vars.size()))
                throw error("morphism equation references an unknown variable");
            if (t.left.rows() != e.rhs.rows() || t.right.cols() != e.rhs.cols() ||
                t.left.cols() != vars[t.var].target.generators() ||
                t.right.rows() != vars[t.var].source.generators())
                throw dimension_error("morphism equation term has inconsistent shape");
            out.terms.push_back({t.var, mod.to.action() * t.left * var_tgt[t.var].from.action(),
                                 var_src[t.var].to.action() * t.right});
        }
        eqs.push_back(std::move(out));
    };

    for (const auto& e : eqs_in) compile(e);
    // Well-definedness of each unknown in canonical coordinates.
    for (std::size_t k = 0; k < vars.size(); ++k) {
        const Mat& src_rel = var_src[k].object.relations();
        if (src_rel.cols() == 0) continue;
        CompiledEq wd;
        wd.rhs = Mat::zero(var_tgt[k].object.generators(), src_rel.cols());
        wd.mod_rel = var_tgt[k].object.relations();
        wd.terms.push_back({static_cast<int>(k), Mat::identity(var_tgt[k].object.generators()), src_rel});
        eqs.push_back(std::move(wd));
    }

    std::vector<int> var_off(vars.size());
    int ncols = 0;
    for (std::size_t k = 0; k < vars.size(); ++k) {
        var_off[k] = ncols;
        ncols += var_tgt[k].object.generators() * var_src[k].object.generators();
    }
    std::vector<int> slack_off(eqs.size());
    int nrows = 0;
    for (std::size_t e = 0; e < eqs.size(); ++e) {
        slack_off[e] = ncols;
        ncols += eqs[e].mod_rel.cols() * eqs[e].rhs.cols();
        nrows += eqs[e].rhs.rows() * eqs[e].rhs.cols();
    }

    Mat m(nrows, ncols), rhs(nrows, 1);
    int row0 = 0;
    for (std::size_t e = 0; e < eqs.size(); ++e) {
        const auto& eq = eqs[e];
        for (const auto& t : eq.terms)
            add_block(m, row0, var_off[t.var], kron(t.right.transposed(), t.left));
        if (eq.mod_rel.cols() > 0)
            add_block(m, row0, slack_off[e], kron(Mat::identity(eq.rhs.cols()), eq.mod_rel));
        add_block(rhs, row0, 0, vec(eq.rhs));
        row0 += eq.rhs.rows() * eq.rhs.cols();
    }

    IntegerSolution sol = solve_integer(m, rhs);
    if (!sol.solution) return std::nullopt;
    std::vector<Mat> out;
    out.reserve(vars.size());
    for (std::size_t k = 0; k < vars.size(); ++k) {
        int gt = var_tgt[k].object.generators(), gs = var_src[k].object.generators();
        Mat xc = unvec(*sol.solution, gt, gs, var_off[k]);
        out.push_back(var_tgt[k].from.action() * xc * var_src[k].to.action());
    }
    return out;
}

// ---- factorization solvers --------------------------------------------------

std::optional<Hom> try_lift_through_cokernel(const Hom& d, const Hom& v) {
    if (!d.source().same_presentation(v.source()))
        throw object_mismatch("lift_through_cokernel: sources do not match");
    if (d.action().is_identity()) {
        // Cokernel projections here act as the identity on generators, so the
        // candidate lift is v's own action; only well-definedness can fail.
        const Mat& rel = d.target().relations();
        if (rel.cols() > 0 && !v.target().column_span_contains(v.action() * rel)) return std::nullopt;
        return Hom(d.target(), v.target(), v.action());
    }
    std::vector<MorphismVar> vars{{d.target(), v.target()}};
    MorphismEquation eq;
    eq.terms.push_back({0, Mat::identity(v.target().generators()), d.action()});
    eq.rhs = v.action();
    eq.modulus = v.target();
    auto sol = solve_morphism_equations(vars, {eq});
    if (!sol) return std::nullopt;
    return Hom(d.target(), v.target(), (*sol)[0]);
}

Hom lift_through_cokernel(const Hom& d, const Hom& v) {
    auto w = try_lift_through_cokernel(d, v);
    if (!w) throw error("not liftable: morphism does not factor through the cokernel");
    return *w;
}

std::optional<Hom> try_restrict_through_kernel(const Hom& incl, const Hom& u) {
    if (!incl.target().same_presentation(u.target()))
        throw object_mismatch("restrict_through_kernel: targets do not match");
    std::vector<MorphismVar> vars{{u.source(), incl.source()}};
    MorphismEquation eq;
    eq.terms.push_back({0, incl.action(), Mat::identity(u.source().generators())});
    eq.rhs = u.action();
    eq.modulus = u.target();
    auto sol = solve_morphism_equations(vars, {eq});
    if (!sol) return std::nullopt;
    return Hom(u.source(), incl.source(), (*sol)[0]);
}

Hom restrict_through_kernel(const Hom& incl, const Hom& u) {
    auto r = try_restrict_through_kernel(incl, u);
    if (!r) throw error("not restrictable: morphism does not factor through the kernel");
    return *r;
}

MorphismClass classify(const Hom& f) {
    MorphismClass out;
    out.is_mono = kernel(f).object.is_zero_object();
    out.is_epi = cokernel(f).object.is_zero_object();
    out.is_iso = out.is_mono && out.is_epi;
    if (!out.is_iso) return out;
    std::vector<MorphismVar> vars{{f.target(), f.source()}};
    MorphismEquation left, right;
    left.terms.push_back({0, Mat::identity(f.source().generators()), f.action()});
    left.rhs = Mat::identity(f.source().generators());
    left.modulus = f.source();
    right.terms.push_back({0, f.action(), Mat::identity(f.target().generators())});
    right.rhs = Mat::identity(f.target().generators());
    right.modulus = f.target();
    auto sol = solve_morphism_equations(vars, {left, right});
    if (!sol)
        throw error("classify: morphism is bijective but no integer inverse was found");
    out.inverse = Hom(f.target(), f.source(), (*sol)[0]);
    return out;
}

std::optional<Hom> find_left_inverse(const Hom& f) {
    std::vector<MorphismVar> vars{{f.target(), f.source()}};
    MorphismEquation eq;
    eq.terms.push_back({0, Mat::identity(f.source().generators()), f.action()});
    eq.rhs = Mat::identity(f.source().generators());
    eq.modulus = f.source();
    auto sol = solve_morphism_equations(vars, {eq});
    if (!sol) return std::nullopt;
    return Hom(f.target(), f.source(), (*sol)[0]);
}

std::optional<Hom> find_right_inverse(const Hom& f) {
    std::vector<MorphismVar> vars{{f.target(), f.source()}};
    MorphismEquation eq;
    eq.terms.push_back({0, f.action(), Mat::identity(f.target().generators())});
    eq.rhs = Mat::identity(f.target().generators());
    eq.modulus = f.target();
    auto sol = solve_morphism_equations(vars, {eq});
    if (!sol) return std::nullopt;
    return Hom(f.target(), f.source(), (*sol)[0]);
}

// ---- hom groups -------------------------------------------------------------

HomGroup hom_group(const FgAb& a, const FgAb& b) {
    const int ga = a.generators(), gb = b.generators();
    const int ka = a.relations().cols(), kb = b.relations().cols();

    // Pairs (X, Y) with X * rel(a) = rel(b) * Y; the X-parts generate the
    // lattice of well-defined action matrices.
    Mat constraint = hstack(kron(a.relations().transposed(), Mat::identity(gb)),
                            kron(Mat::identity(ka), b.relations()).negated());
    Mat kbasis = kernel_basis_of(constraint);

    std::vector<Mat> gens;
    for (int c = 0; c < kbasis.cols(); ++c) {
        Mat x(gb, ga);
        for (int j = 0; j < ga; ++j)
            for (int i = 0; i < gb; ++i) x.at(i, j) = kbasis.at(j * gb + i, c);
        gens.push_back(std::move(x));
    }

    std::vector<Mat> zeros;
    for (int c = 0; c < ga; ++c)
        for (int r = 0; r < kb; ++r) {
            Mat z(gb, ga);
            for (int i = 0; i < gb; ++i) z.at(i, c) = b.relations().at(i, r);
            zeros.push_back(std::move(z));
        }

    const int l = static_cast<int>(gens.size());
    Mat stacked(gb * ga, l + static_cast<int>(zeros.size()));
    for (int c = 0; c < l; ++c) {
        Mat v = vec(gens[c]);
        for (int i = 0; i < v.rows(); ++i) stacked.at(i, c) = v.at(i, 0);
    }
    for (std::size_t c = 0; c < zeros.size(); ++c) {
        Mat v = vec(zeros[c]);
        for (int i = 0; i < v.rows(); ++i) stacked.at(i, l + static_cast<int>(c)) = v.at(i, 0);
    }
    Mat rel = kernel_basis_of(stacked).row_range(0, l);

    FgAb raw(l, std::move(rel));
    CanonicalForm can = canonical_form(raw);
    return {can.object, raw, std::move(gens), std::move(zeros),
            can.to, can.from, a, b};
}

Hom HomGroup::element(const Mat& coords) const {
    if (coords.rows() != group.generators() || coords.cols() != 1)
        throw dimension_error("hom group element: bad coordinate shape");
    Mat raw_coords = from_group.action() * coords;
    Mat action = Mat::zero(target.generators(), source.generators());
    for (std::size_t i = 0; i < raw_generators.size(); ++i)
        action = action + raw_coords.at(static_cast<int>(i), 0) * raw_generators[i];
    return Hom(source, target, std::move(action));
}

Hom hom_restriction_map(const Hom& f, const HomGroup& hom_b, const HomGroup& hom_a) {
    if (!hom_b.source.same_presentation(f.target()) || !hom_a.source.same_presentation(f.source()) ||
        !hom_b.target.same_presentation(hom_a.target))
        throw object_mismatch("hom_restriction_map: hom groups do not match the morphism");
    const int la = static_cast<int>(hom_a.raw_generators.size());
    const int lb = static_cast<int>(hom_b.raw_generators.size());
    const int rows = hom_a.target.generators() * hom_a.source.generators();

    Mat basis(rows, la + static_cast<int>(hom_a.zero_generators.size()));
    for (int c = 0; c < la; ++c) {
        Mat v = vec(hom_a.raw_generators[c]);
        for (int i = 0; i < rows; ++i) basis.at(i, c) = v.at(i, 0);
    }
    for (std::size_t c = 0; c < hom_a.zero_generators.size(); ++c) {
        Mat v = vec(hom_a.zero_generators[c]);
        for (int i = 0; i < rows; ++i) basis.at(i, la + static_cast<int>(c)) = v.at(i, 0);
    }

    Mat images(rows, lb);
    for (int c = 0; c < lb; ++c) {
        Mat v = vec(hom_b.raw_generators[c] * f.action());
        for (int i = 0; i < rows; ++i) images.at(i, c) = v.at(i, 0);
    }

    IntegerSolution sol = solve_integer(basis, images);
    if (!sol.solution)
        throw error("hom_restriction_map: restricted generator is not a well-defined morphism");
    Mat coords = sol.solution->row_range(0, la);
    Hom raw_map(hom_b.raw, hom_a.raw, std::move(coords));
    return compose(hom_a.to_group, compose(raw_map, hom_b.from_group));
}

// ---- random generation ------------------------------------------------------

namespace {

Mat random_shear(int n, Rng& rng) {
    Mat p = Mat::identity(n);
    if (n >= 2) {
        int i = static_cast<int>(rng.pick(0, n - 1));
        int j = static_cast<int>(rng.pick(0, n - 2));
        if (j >= i) ++j;
        long c = rng.pick(-2, 2);
        if (c == 0) c = 1;
        p.at(i, j) = c;
    }
    return p;
}

}  // namespace

FgAb random_object_where(const ObjectBounds& bounds, Rng& rng,
                         const std::function<bool(const Int&)>& factor_ok) {
    int rank = static_cast<int>(rng.pick(0, bounds.max_rank));
    int torsion = static_cast<int>(rng.pick(0, bounds.max_torsion));
    std::vector<Int> factors;
    for (int t = 0; t < torsion; ++t) {
        for (int attempt = 0; attempt < 64; ++attempt) {
            Int d = rng.pick_int(2, bounds.max_exponent);
            if (!factor_ok || factor_ok(d)) {
                factors.push_back(d);
                break;
            }
        }
    }
    for (int r = 0; r < rank; ++r) factors.push_back(0);
    FgAb canonical = FgAb::from_factors(factors);
    if (canonical.generators() == 0 || rng.chance(50)) return canonical;
    // Disguise the presentation with a unimodular change of generators.
    Mat p = random_shear(canonical.generators(), rng);
    if (rng.chance(50)) p = random_shear(canonical.generators(), rng) * p;
    return FgAb(canonical.generators(), p * canonical.relations());
}

FgAb random_object(const ObjectBounds& bounds, Rng& rng) {
    return random_object_where(bounds, rng, nullptr);
}

Hom random_hom(const FgAb& a, const FgAb& b, Rng& rng) {
    CanonicalForm ca = canonical_form(a);
    CanonicalForm cb = canonical_form(b);
    const auto& fa = a.invariant_factors();
    const auto& fb = b.invariant_factors();
    Mat m(cb.object.generators(), ca.object.generators());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            const Int& dt = fb[i];
            const Int& ds = fa[j];
            if (dt == 0 && ds != 0) continue;  // no nonzero map Z/n -> Z
            if (dt == 0) {
                m.at(i, j) = rng.pick_int(-3, 3);
            } else {
                Int step = ds == 0 ? Int(1) : dt / gcd(dt, ds);
                m.at(i, j) = rng.pick_int(-2, 2) * step;
            }
        }
    return compose(cb.from, compose(Hom(ca.object, cb.object, std::move(m)), ca.to));
}

Hom random_automorphism(const FgAb& a, Rng& rng) {
    CanonicalForm ca = canonical_form(a);
    const auto& f = a.invariant_factors();
    const int n = ca.object.generators();
    Mat m = Mat::identity(n);
    const int ops = static_cast<int>(rng.pick(1, 3));
    for (int s = 0; s < ops && n >= 2; ++s) {
        // Shear: coordinate i picks up a multiple of coordinate j. Legal
        // whenever factor(i) divides factor(j) in the order-with-0-last sense,
        // which holds for every i < j in canonical coordinates.
        int i = static_cast<int>(rng.pick(0, n - 2));
        int j = static_cast<int>(rng.pick(i + 1, n - 1));
        long c = rng.pick(-2, 2);
        if (c == 0) c = 1;
        Mat shear = Mat::identity(n);
        shear.at(i, j) = c;
        m = shear * m;
    }
    for (int i = 0; i < n; ++i) {
        // Unit scaling per coordinate.
        if (f[i] == 0) {
            if (rng.chance(30)) {
                for (int j = 0; j < n; ++j) m.at(i, j) = -m.at(i, j);
            }
        } else if (f[i] > 2 && rng.chance(50)) {
            Int u = 1;
            for (int attempt = 0; attempt < 16; ++attempt) {
                Int cand = rng.pick_int(1, static_cast<long>(f[i]) - 1);
                if (gcd(cand, f[i]) == 1) {
                    u = cand;
                    break;
                }
            }
            for (int j = 0; j < n; ++j) m.at(i, j) = u * m.at(i, j);
        }
    }
    return compose(ca.from, compose(Hom(ca.object, ca.object, std::move(m)), ca.to));
}

// ---- fixtures ---------------------------------------------------------------

FgAb parse_object_fixture(const std::string& line) {
    auto pos = line.find("fgab:");
    if (pos == std::string::npos) throw parse_error("object fixture must start with 'fgab:'");
    auto lb = line.find('[', pos);
    auto rb = line.find(']', pos);
    if (lb == std::string::npos || rb == std::string::npos || rb < lb)
        throw parse_error("object fixture needs a [..] factor list");
    std::string body = line.substr(lb + 1, rb - lb - 1);
    for (char& ch : body)
        if (ch == ',') ch = ' ';
    std::istringstream is(body);
    std::vector<Int> factors;
    std::string tok;
    while (is >> tok) {
        try {
            factors.push_back(Int(tok));
        } catch (const std::exception&) {
            throw parse_error("bad factor '" + tok + "' in object fixture");
        }
        if (factors.back() < 0) throw parse_error("factors must be nonnegative");
    }
    return FgAb::from_factors(factors);
}

std::string object_fixture(const FgAb& a) {
    std::ostringstream os;
    os << "fgab: [";
    const auto& f = a.invariant_factors();
    for (std::size_t i = 0; i < f.size(); ++i) os << (i ? ", " : "") << f[i];
    os << "]";
    return os.str();
}

Hom parse_hom_fixture(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::vector<std::string> object_lines;
    std::string rest;
    while (std::getline(is, line)) {
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));
        if (trimmed.empty()) continue;
        if (object_lines.size() < 2) {
            object_lines.push_back(trimmed);
        } else {
            rest += line + "\n";
        }
    }
    if (object_lines.size() < 2) throw parse_error("morphism fixture needs source and target lines");
    FgAb source = parse_object_fixture(object_lines[0]);
    FgAb target = parse_object_fixture(object_lines[1]);
    return Hom(source, target, Mat::from_text(rest));
}

std::string hom_fixture(const Hom& f) {
    // The object lines carry invariant factors only, so the action must be
    // written in invariant-factor coordinates for the round trip to parse.
    CanonicalForm cs = canonical_form(f.source());
    CanonicalForm ct = canonical_form(f.target());
    std::ostringstream os;
    os << object_fixture(f.source()) << "\n" << object_fixture(f.target()) << "\n"
       << (ct.to.action() * f.action() * cs.from.action()).to_text();
    return os.str();
}

}  // namespace exactcat
