#include "exactcat/complexes.hpp"

#include <json.hpp>

#include <algorithm>
#include <utility>

#include "exactcat/intlin.hpp"

namespace exactcat {

using nlohmann::json;

namespace {

std::string degree_text(int n) { return "degree " + std::to_string(n); }

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

/// i is a kernel of d: d*i = 0 and the comparison into the computed kernel
/// is an isomorphism.
bool is_kernel_of(const Hom& d, const Hom& i) {
    if (!is_zero_hom(compose(d, i))) return false;
    KernelPair k = kernel(d);
    std::optional<Hom> u = try_restrict_through_kernel(k.incl, i);
    return u.has_value() && classify(*u).is_iso;
}

/// q is a cokernel of m in the structure's context.
bool context_cokernel_of(const ExactStructure& s, const Hom& m, const Hom& q) {
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

// ---- complexes and chain maps -------------------------------------------------

ChainComplex::ChainComplex(int lo, std::vector<FgAb> objects, std::vector<Hom> differentials)
    : lo_(lo), objects_(std::move(objects)), diffs_(std::move(differentials)) {
    if (objects_.empty()) {
        if (!diffs_.empty())
            throw chain_error("a complex with no objects cannot carry differentials");
        lo_ = 0;
        return;
    }
    if (diffs_.size() + 1 != objects_.size())
        throw chain_error("a complex over [lo, hi] takes exactly hi - lo differentials");
    for (std::size_t k = 0; k < diffs_.size(); ++k) {
        if (!diffs_[k].source().same_presentation(objects_[k]) ||
            !diffs_[k].target().same_presentation(objects_[k + 1]))
            throw chain_error("the differential at " + degree_text(lo_ + static_cast<int>(k)) +
                              " does not match the adjacent objects");
    }
    for (std::size_t k = 0; k + 1 < diffs_.size(); ++k) {
        if (!is_zero_hom(compose(diffs_[k + 1], diffs_[k])))
            throw chain_error("d*d != 0 at " + degree_text(lo_ + static_cast<int>(k)));
    }
}

ChainComplex ChainComplex::concentrated(const FgAb& a, int degree) {
    return ChainComplex(degree, {a}, {});
}

FgAb ChainComplex::object(int n) const {
    if (in_support(n)) return objects_[static_cast<std::size_t>(n - lo_)];
    return FgAb::zero();
}

Hom ChainComplex::differential(int n) const {
    if (n >= lo() && n < hi()) return diffs_[static_cast<std::size_t>(n - lo_)];
    return zero_hom(object(n), object(n + 1));
}

std::string ChainComplex::describe() const {
    if (empty()) return "0 (the zero complex)";
    std::string out = "0 -> ";
    for (const FgAb& o : objects_) out += o.describe() + " -> ";
    out += "0 (degrees " + std::to_string(lo()) + ".." + std::to_string(hi()) + ")";
    return out;
}

bool chain_equal(const ChainComplex& c1, const ChainComplex& c2) {
    if (c1.empty() && c2.empty()) return true;
    int lo = std::min(c1.empty() ? c2.lo() : c1.lo(), c2.empty() ? c1.lo() : c2.lo());
    int hi = std::max(c1.empty() ? c2.hi() : c1.hi(), c2.empty() ? c1.hi() : c2.hi());
    for (int n = lo; n <= hi; ++n)
        if (!c1.object(n).same_presentation(c2.object(n))) return false;
    for (int n = lo - 1; n <= hi; ++n)
        if (!hom_equal(c1.differential(n), c2.differential(n))) return false;
    return true;
}

ChainMap::ChainMap(ChainComplex source, ChainComplex target, std::map<int, Hom> components)
    : source_(std::move(source)), target_(std::move(target)), comps_(std::move(components)) {
    for (const auto& [n, h] : comps_) {
        if (!h.source().same_presentation(source_.object(n)) ||
            !h.target().same_presentation(target_.object(n)))
            throw chain_error("the chain map component at " + degree_text(n) +
                              " does not fit the endpoint objects");
    }
    int lo = std::min(source_.lo(), target_.lo()) - 1;
    int hi = std::max(source_.hi(), target_.hi());
    for (int n = lo; n <= hi; ++n) {
        if (!hom_equal(compose(target_.differential(n), component(n)),
                       compose(component(n + 1), source_.differential(n))))
            throw chain_error("the chain map does not commute with the differentials at " +
                              degree_text(n));
    }
}

Hom ChainMap::component(int n) const {
    auto it = comps_.find(n);
    if (it != comps_.end()) return it->second;
    return zero_hom(source_.object(n), target_.object(n));
}

ChainMap identity_chain_map(const ChainComplex& c) {
    std::map<int, Hom> comps;
    for (int n = c.lo(); n <= c.hi(); ++n) comps.emplace(n, identity_hom(c.object(n)));
    return ChainMap(c, c, std::move(comps));
}

ChainMap zero_chain_map(const ChainComplex& source, const ChainComplex& target) {
    return ChainMap(source, target, {});
}

// ---- acyclicity ----------------------------------------------------------------

AcyclicityWitness::AcyclicityWitness(ChainComplex complex, std::vector<DegreeFactorization> entries)
    : complex_(std::move(complex)), entries_(std::move(entries)) {
    if (complex_.empty()) {
        if (!entries_.empty())
            throw chain_error("the zero complex takes no factorization entries");
        return;
    }
    if (static_cast<int>(entries_.size()) != complex_.hi() - complex_.lo() + 2)
        throw chain_error("an acyclicity witness covers every degree from lo to hi+1");
    int expect = complex_.lo();
    for (const DegreeFactorization& e : entries_) {
        if (e.degree != expect)
            throw chain_error("witness entries must be sorted by degree with no gaps");
        if (!e.p.source().same_presentation(complex_.object(e.degree - 1)) ||
            !e.p.target().same_presentation(e.z) || !e.i.source().same_presentation(e.z) ||
            !e.i.target().same_presentation(complex_.object(e.degree)))
            throw chain_error("the witness entry at " + degree_text(e.degree) +
                              " does not fit the complex");
        if (!hom_equal(compose(e.i, e.p), complex_.differential(e.degree - 1)))
            throw chain_error("the witness factorization at " + degree_text(e.degree) +
                              " does not reproduce the differential");
        ++expect;
    }
}

FgAb AcyclicityWitness::z(int n) const {
    if (!complex_.empty() && n >= complex_.lo() && n <= complex_.hi() + 1)
        return entries_[static_cast<std::size_t>(n - complex_.lo())].z;
    return FgAb::zero();
}

Hom AcyclicityWitness::p(int n) const {
    if (!complex_.empty() && n >= complex_.lo() && n <= complex_.hi() + 1)
        return entries_[static_cast<std::size_t>(n - complex_.lo())].p;
    return zero_hom(complex_.object(n - 1), FgAb::zero());
}

Hom AcyclicityWitness::i(int n) const {
    if (!complex_.empty() && n >= complex_.lo() && n <= complex_.hi() + 1)
        return entries_[static_cast<std::size_t>(n - complex_.lo())].i;
    return zero_hom(FgAb::zero(), complex_.object(n));
}

std::optional<std::string> witness_failure(const ExactStructure& s, const AcyclicityWitness& w) {
    if (s.side != StructureSide::right)
        throw lemma_hypothesis("acyclicity runs over a right-side structure; " + s.name +
                               " distinguishes deflations");
    const ChainComplex& c = w.complex();
    if (c.empty()) return std::nullopt;
    for (int n = c.lo(); n <= c.hi() + 1; ++n) {
        if (!s.is_inflation(w.i(n)))
            return degree_text(n) + ": the inclusion of the kernel object is not a member of " +
                   s.name;
        if (!s.is_deflation(w.p(n)))
            return degree_text(n) + ": the factor map onto the kernel object is not a member of " +
                   s.name;
        if (!is_kernel_of(c.differential(n), w.i(n)))
            return degree_text(n) + ": the inclusion is not a kernel of the next differential";
        if (!context_cokernel_of(s, c.differential(n - 2), w.p(n)))
            return degree_text(n) +
                   ": the factor map is not a cokernel of the differential two degrees below";
    }
    return std::nullopt;
}

AcyclicityResult is_acyclic(const ChainComplex& c, const ExactStructure& s) {
    if (s.side != StructureSide::right)
        throw lemma_hypothesis("acyclicity runs over a right-side structure; " + s.name +
                               " distinguishes deflations");
    if (c.empty()) return {AcyclicityWitness(c, {}), 0, ""};
    std::vector<DegreeFactorization> entries;
    for (int n = c.lo(); n <= c.hi() + 1; ++n) {
        KernelPair k = kernel(c.differential(n));
        std::optional<Hom> p = try_restrict_through_kernel(k.incl, c.differential(n - 1));
        if (!p)
            return {std::nullopt, n, "the previous differential does not factor through the kernel"};
        if (!classify(*p).is_epi) {
            FgAb h = canonical_form(cokernel(*p).object).object;
            return {std::nullopt, n, "nonzero homology " + h.describe()};
        }
        if (!s.is_inflation(k.incl))
            return {std::nullopt, n, "the kernel inclusion is not a member of " + s.name};
        if (!s.is_deflation(*p))
            return {std::nullopt, n, "the factor map onto the kernel is not a member of " + s.name};
        entries.push_back({n, k.object, *p, k.incl});
    }
    return {AcyclicityWitness(c, std::move(entries)), 0, ""};
}

// ---- cones, shifts, sums ------------------------------------------------------

ChainComplex mapping_cone(const ChainMap& f) {
    const ChainComplex& a = f.source();
    const ChainComplex& b = f.target();
    if (a.empty() && b.empty()) return {};
    int lo = a.empty() ? b.lo() : (b.empty() ? a.lo() - 1 : std::min(a.lo() - 1, b.lo()));
    int hi = a.empty() ? b.hi() : (b.empty() ? a.hi() - 1 : std::max(a.hi() - 1, b.hi()));
    std::vector<Biproduct> grades;
    std::vector<FgAb> objects;
    for (int n = lo; n <= hi + 1; ++n) grades.push_back(biproduct(a.object(n + 1), b.object(n)));
    for (int n = lo; n <= hi; ++n) objects.push_back(grades[static_cast<std::size_t>(n - lo)].object);
    std::vector<Hom> diffs;
    for (int n = lo; n < hi; ++n) {
        const Biproduct& cn = grades[static_cast<std::size_t>(n - lo)];
        const Biproduct& cn1 = grades[static_cast<std::size_t>(n + 1 - lo)];
        Hom d = compose(cn1.in1, compose(-a.differential(n + 1), cn.pr1)) +
                compose(cn1.in2, compose(f.component(n + 1), cn.pr1)) +
                compose(cn1.in2, compose(b.differential(n), cn.pr2));
        diffs.push_back(std::move(d));
    }
    return ChainComplex(lo, std::move(objects), std::move(diffs));
}

AcyclicityWitness cone_acyclicity(const ChainMap& f, const AcyclicityWitness& wa,
                                  const AcyclicityWitness& wb, const ExactStructure& s) {
    if (s.side != StructureSide::right)
        throw lemma_hypothesis("the cone construction needs a right-side structure; " + s.name +
                               " distinguishes deflations");
    if (!chain_equal(wa.complex(), f.source()) || !chain_equal(wb.complex(), f.target()))
        throw lemma_hypothesis("the witnesses do not belong to the chain map's endpoints");
    if (auto bad = witness_failure(s, wa))
        throw lemma_hypothesis("the source witness does not certify its complex: " + *bad);
    if (auto bad = witness_failure(s, wb))
        throw lemma_hypothesis("the target witness does not certify its complex: " + *bad);
    const ChainComplex& a = f.source();
    const ChainComplex& b = f.target();
    ChainComplex cone = mapping_cone(f);
    if (cone.empty()) return AcyclicityWitness(cone, {});
    const int clo = cone.lo(), chi = cone.hi();

    // Comparison maps on kernel objects and the pushed-out rows: the source
    // witness conflation z_A(m) >-> A^m ->> z_A(m+1) goes out along -kappa_m,
    // and the pushout object becomes the cone's kernel object at degree m.
    std::map<int, Hom> kappa;
    std::map<int, CompletedPushout> completed;
    for (int m = clo - 1; m <= chi + 2; ++m) {
        std::optional<Hom> k = try_restrict_through_kernel(wb.i(m), compose(f.component(m), wa.i(m)));
        if (!k)
            throw lemma_hypothesis(degree_text(m) +
                                   ": the chain map does not restrict to the kernel objects");
        kappa.emplace(m, *k);
        try {
            completed.emplace(m, pushout_completion(s, Conflation{wa.i(m), wa.p(m + 1)}, -*k));
        } catch (const lemma_falsified&) {
            throw;
        } catch (const error& e) {
            throw lemma_hypothesis(degree_text(m) + ": " + e.what());
        }
    }

    // Mediating comparison from each pushed-out row into the target complex:
    // g restricts to i_B on the kernel leg and to -f on the complex leg.
    std::map<int, Hom> med;
    for (int m = clo - 1; m <= chi + 1; ++m) {
        const CompletedPushout& cp = completed.at(m);
        std::optional<Hom> g =
            solve_postcomposition(cp.conflation.inflation.target(), b.object(m),
                                  {{cp.square.g, -f.component(m)},
                                   {cp.conflation.inflation, wb.i(m)}});
        if (!g)
            throw lemma_hypothesis(degree_text(m) +
                                   ": no comparison from the pushout row into the target complex");
        med.emplace(m, *g);
    }

    // Degreewise splice: the pushed-out row over the target witness row, with
    // the next completed pushout as the right-hand square.
    std::map<int, Conflation> spliced;
    for (int n = clo - 1; n <= chi + 1; ++n) {
        DoubleConflationData dd{completed.at(n).conflation,
                                Conflation{wb.i(n), wb.p(n + 1)},
                                wa.i(n + 1),
                                completed.at(n + 1).conflation.inflation,
                                med.at(n),
                                -kappa.at(n + 1),
                                completed.at(n + 1).square.g};
        try {
            spliced.emplace(n, double_conflation(s, dd));
        } catch (const lemma_falsified&) {
            throw;
        } catch (const error& e) {
            throw lemma_hypothesis(degree_text(n) + ": " + e.what());
        }
    }

    // The splice presents degree n as B^n (+) A^(n+1); swap into the cone's
    // A^(n+1) (+) B^n presentation on both sides.
    std::vector<DegreeFactorization> entries;
    for (int n = clo; n <= chi + 1; ++n) {
        Biproduct bd_prev = biproduct(b.object(n - 1), a.object(n));
        Biproduct bc_prev = biproduct(a.object(n), b.object(n - 1));
        Hom unswap_prev = compose(bd_prev.in1, bc_prev.pr2) + compose(bd_prev.in2, bc_prev.pr1);
        Biproduct bd_here = biproduct(b.object(n), a.object(n + 1));
        Biproduct bc_here = biproduct(a.object(n + 1), b.object(n));
        Hom swap_here = compose(bc_here.in1, bd_here.pr2) + compose(bc_here.in2, bd_here.pr1);
        Hom incl = compose(swap_here, spliced.at(n).inflation);
        Hom proj = compose(spliced.at(n - 1).deflation, unswap_prev);
        entries.push_back({n, incl.source(), std::move(proj), std::move(incl)});
    }
    AcyclicityWitness out(cone, std::move(entries));
    if (auto bad = witness_failure(s, out))
        throw lemma_falsified("the assembled cone witness fails: " + *bad);
    return out;
}

Hom Homotopy::component(int n, const ChainComplex& source, const ChainComplex& target) const {
    auto it = components.find(n);
    if (it != components.end()) return it->second;
    return zero_hom(source.object(n), target.object(n - 1));
}

std::optional<Homotopy> nullhomotopy(const ChainMap& f) {
    const ChainComplex& a = f.source();
    const ChainComplex& b = f.target();
    std::vector<MorphismVar> vars;
    std::map<int, int> index;
    if (!a.empty() && !b.empty()) {
        int vlo = std::max(a.lo(), b.lo() + 1);
        int vhi = std::min(a.hi(), b.hi() + 1);
        for (int n = vlo; n <= vhi; ++n) {
            index.emplace(n, static_cast<int>(vars.size()));
            vars.push_back({a.object(n), b.object(n - 1)});
        }
    }
    std::vector<MorphismEquation> eqs;
    if (!a.empty() && !b.empty()) {
        int elo = std::max(a.lo(), b.lo());
        int ehi = std::min(a.hi(), b.hi());
        for (int n = elo; n <= ehi; ++n) {
            MorphismEquation e;
            e.modulus = b.object(n);
            e.rhs = f.component(n).action();
            if (auto it = index.find(n); it != index.end())
                e.terms.push_back({it->second, b.differential(n - 1).action(),
                                   Mat::identity(a.object(n).generators())});
            if (auto it = index.find(n + 1); it != index.end())
                e.terms.push_back({it->second, Mat::identity(b.object(n).generators()),
                                   a.differential(n).action()});
            if (e.terms.empty()) {
                if (!is_zero_hom(f.component(n))) return std::nullopt;
                continue;
            }
            eqs.push_back(std::move(e));
        }
    }
    Homotopy h;
    if (!eqs.empty()) {
        auto sol = solve_morphism_equations(vars, eqs);
        if (!sol) return std::nullopt;
        for (const auto& [n, k] : index)
            h.components.emplace(n,
                                 Hom(a.object(n), b.object(n - 1), (*sol)[static_cast<std::size_t>(k)]));
    }
    int lo = std::min(a.lo(), b.lo());
    int hi = std::max(a.hi(), b.hi()) + 1;
    for (int n = lo; n <= hi; ++n) {
        Hom reproduced = compose(b.differential(n - 1), h.component(n, a, b)) +
                         compose(h.component(n + 1, a, b), a.differential(n));
        if (!hom_equal(reproduced, f.component(n)))
            throw lemma_falsified("the solved homotopy does not reproduce the chain map at " +
                                  degree_text(n));
    }
    return h;
}

ChainComplex shift(const ChainComplex& c, int k) {
    if (c.empty()) return c;
    std::vector<FgAb> objects;
    std::vector<Hom> diffs;
    for (int n = c.lo(); n <= c.hi(); ++n) objects.push_back(c.object(n));
    for (int n = c.lo(); n < c.hi(); ++n) {
        Hom d = c.differential(n);
        diffs.push_back(k % 2 == 0 ? d : -d);
    }
    return ChainComplex(c.lo() - k, std::move(objects), std::move(diffs));
}

ChainComplex sum(const ChainComplex& c1, const ChainComplex& c2) {
    if (c1.empty()) return c2;
    if (c2.empty()) return c1;
    int lo = std::min(c1.lo(), c2.lo());
    int hi = std::max(c1.hi(), c2.hi());
    std::vector<FgAb> objects;
    for (int n = lo; n <= hi; ++n) objects.push_back(biproduct(c1.object(n), c2.object(n)).object);
    std::vector<Hom> diffs;
    for (int n = lo; n < hi; ++n) {
        Mat act = block_diag(c1.differential(n).action(), c2.differential(n).action());
        diffs.emplace_back(objects[static_cast<std::size_t>(n - lo)],
                           objects[static_cast<std::size_t>(n + 1 - lo)], std::move(act));
    }
    return ChainComplex(lo, std::move(objects), std::move(diffs));
}

// ---- fixtures ------------------------------------------------------------------

std::string complex_to_json(const ChainComplex& c) {
    json j;
    j["support"] = json::array({c.lo(), c.hi()});
    json objs = json::array();
    json diffs = json::array();
    std::vector<CanonicalForm> cans;
    for (int n = c.lo(); n <= c.hi(); ++n) {
        cans.push_back(canonical_form(c.object(n)));
        json fl = json::array();
        for (const Int& f : cans.back().object.invariant_factors()) fl.push_back(f.str());
        objs.push_back(std::move(fl));
    }
    for (int n = c.lo(); n < c.hi(); ++n) {
        const CanonicalForm& src = cans[static_cast<std::size_t>(n - c.lo())];
        const CanonicalForm& tgt = cans[static_cast<std::size_t>(n + 1 - c.lo())];
        Mat act = tgt.to.action() * c.differential(n).action() * src.from.action();
        json m;
        m["rows"] = act.rows();
        m["cols"] = act.cols();
        json rows = json::array();
        for (int r = 0; r < act.rows(); ++r) {
            json row = json::array();
            for (int cc = 0; cc < act.cols(); ++cc) row.push_back(act.at(r, cc).str());
            rows.push_back(std::move(row));
        }
        m["matrix"] = std::move(rows);
        diffs.push_back(std::move(m));
    }
    j["objects"] = std::move(objs);
    j["differentials"] = std::move(diffs);
    return j.dump(2) + "\n";
}

ChainComplex complex_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw parse_error(std::string("bad complex json: ") + e.what());
    }
    try {
        const json& support = j.at("support");
        if (!support.is_array() || support.size() != 2)
            throw parse_error("support must be a [lo, hi] pair");
        int lo = support[0].get<int>();
        int hi = support[1].get<int>();
        std::vector<FgAb> objects;
        for (const json& fl : j.at("objects")) {
            std::vector<Int> fs;
            for (const json& f : fl) {
                fs.emplace_back(f.get<std::string>());
                if (fs.back() < 0) throw parse_error("negative invariant factor");
            }
            objects.push_back(FgAb::from_factors(fs));
        }
        if (hi - lo + 1 != static_cast<int>(objects.size()) && !(objects.empty() && hi < lo))
            throw parse_error("support does not match the object count");
        std::vector<Hom> diffs;
        const json& body = j.at("differentials");
        for (std::size_t k = 0; k < body.size(); ++k) {
            const json& m = body[k];
            int rows = m.at("rows").get<int>();
            int cols = m.at("cols").get<int>();
            if (rows < 0 || cols < 0) throw parse_error("negative matrix shape");
            const json& entries = m.at("matrix");
            if (static_cast<int>(entries.size()) != rows)
                throw parse_error("matrix row count mismatch");
            Mat act(rows, cols);
            for (int r = 0; r < rows; ++r) {
                if (static_cast<int>(entries[r].size()) != cols)
                    throw parse_error("matrix column count mismatch");
                for (int c = 0; c < cols; ++c) act.at(r, c) = Int(entries[r][c].get<std::string>());
            }
            if (k + 1 >= objects.size()) throw parse_error("more differentials than object gaps");
            diffs.emplace_back(objects[k], objects[k + 1], std::move(act));
        }
        return ChainComplex(lo, std::move(objects), std::move(diffs));
    } catch (const parse_error&) {
        throw;
    } catch (const std::exception& e) {
        throw parse_error(std::string("bad complex json: ") + e.what());
    }
}

// ---- sampling ------------------------------------------------------------------

AcyclicityWitness random_acyclic(const ExactStructure& s, int lo, int hi, Rng& rng,
                                 const ObjectBounds& bounds) {
    if (s.side != StructureSide::right)
        throw lemma_hypothesis("acyclic sampling needs a right-side structure; " + s.name +
                               " distinguishes deflations");
    if (hi < lo) return AcyclicityWitness(ChainComplex(), {});
    FgAb z = FgAb::zero();
    std::vector<DegreeFactorization> entries;
    std::vector<FgAb> objects;
    std::vector<Hom> incls;   // i(n): z(n) >-> A^n
    std::vector<Hom> projs;   // p(n+1): A^n ->> z(n+1)
    for (int n = lo; n <= hi; ++n) {
        Hom i = n == hi ? identity_hom(z) : s.sample_inflation_from(z, rng, bounds);
        Conflation row = conflation_of(s, i);
        objects.push_back(i.target());
        incls.push_back(i);
        projs.push_back(row.deflation);
        z = row.deflation.target();
    }
    std::vector<Hom> diffs;
    for (int n = lo; n < hi; ++n) {
        std::size_t k = static_cast<std::size_t>(n - lo);
        diffs.push_back(compose(incls[k + 1], projs[k]));
    }
    ChainComplex c(lo, objects, std::move(diffs));
    for (int n = lo; n <= hi + 1; ++n) {
        std::size_t k = static_cast<std::size_t>(n - lo);
        Hom p = n == lo ? zero_hom(FgAb::zero(), incls[0].source()) : projs[k - 1];
        Hom i = n == hi + 1 ? zero_hom(z, FgAb::zero()) : incls[k];
        entries.push_back({n, i.source(), std::move(p), std::move(i)});
    }
    return AcyclicityWitness(std::move(c), std::move(entries));
}

ChainMap random_nullhomotopic_map(const ChainComplex& a, const ChainComplex& b, Rng& rng) {
    std::map<int, Hom> hs;
    if (!a.empty() && !b.empty()) {
        for (int n = std::max(a.lo(), b.lo() + 1); n <= std::min(a.hi(), b.hi() + 1); ++n)
            hs.emplace(n, random_hom(a.object(n), b.object(n - 1), rng));
    }
    auto h = [&](int n) {
        auto it = hs.find(n);
        if (it != hs.end()) return it->second;
        return zero_hom(a.object(n), b.object(n - 1));
    };
    std::map<int, Hom> comps;
    if (!a.empty() && !b.empty()) {
        for (int n = std::max(a.lo(), b.lo()); n <= std::min(a.hi(), b.hi()); ++n)
            comps.emplace(n, compose(b.differential(n - 1), h(n)) + compose(h(n + 1), a.differential(n)));
    }
    return ChainMap(a, b, std::move(comps));
}

}  // namespace exactcat
