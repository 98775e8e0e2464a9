// The additive category of finitely generated abelian groups, presented:
// an object is Z^m modulo the column span of a relation matrix, a morphism
// is a matrix on generators that is well defined modulo relations. Kernels,
// cokernels, biproducts, pushouts, pullbacks and the factorization solvers
// here are the raw material every diagram argument downstream is built from.
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "exactcat/intlin.hpp"
#include "exactcat/rng.hpp"

namespace exactcat {

class object_mismatch : public error {
public:
    explicit object_mismatch(const std::string& msg) : error(msg) {}
};

class not_well_defined : public error {
public:
    explicit not_well_defined(const std::string& msg) : error(msg) {}
};

/// Finitely generated abelian group Z^generators / colspan(relations).
/// Immutable; cheap to copy (shared payload). Equality is equality of
/// presentations; `isomorphic` compares invariant factors instead.
class FgAb {
public:
    FgAb();  // the zero group: 0 generators
    FgAb(int generators, Mat relations);

    static FgAb zero() { return FgAb(); }
    static FgAb free(int rank);
    static FgAb cyclic(const Int& n);  // Z/n, with Z/0 = Z
    /// Canonical presentation from a factor list; 0 entries are free summands.
    static FgAb from_factors(const std::vector<Int>& factors);

    int generators() const;
    const Mat& relations() const;
    const SmithDecomposition& relations_snf() const;

    /// Invariant factors with the trivial 1-factors dropped: torsion factors
    /// in divisibility order, then one 0 per free summand.
    const std::vector<Int>& invariant_factors() const;
    /// Factor attached to each of the `generators()` diagonalized coordinates,
    /// including trivial ones (1 = coordinate dies, 0 = free).
    const std::vector<Int>& coordinate_factors() const;

    bool is_zero_object() const;
    bool same_presentation(const FgAb& other) const;
    bool operator==(const FgAb& other) const { return same_presentation(other); }
    bool isomorphic(const FgAb& other) const;

    /// True iff every column of m is a relation (lies in colspan(relations)).
    bool column_span_contains(const Mat& m) const;

    std::string describe() const;  // "Z^2 + Z/2 + Z/6"-style, for messages

private:
    struct Data;
    std::shared_ptr<const Data> data_;
};

/// Morphism of FgAb on generators. Construction verifies well-definedness:
/// action * source.relations must lie columnwise in colspan(target.relations).
class Hom {
public:
    Hom(FgAb source, FgAb target, Mat action);

    const FgAb& source() const { return source_; }
    const FgAb& target() const { return target_; }
    const Mat& action() const { return action_; }

private:
    FgAb source_, target_;
    Mat action_;
};

Hom identity_hom(const FgAb& a);
Hom zero_hom(const FgAb& source, const FgAb& target);
Hom compose(const Hom& g, const Hom& f);  // g after f
Hom operator+(const Hom& f, const Hom& g);
Hom operator-(const Hom& f, const Hom& g);
Hom operator-(const Hom& f);

/// f == g as homomorphisms (difference factors through target relations).
bool hom_equal(const Hom& f, const Hom& g);
bool is_zero_hom(const Hom& f);

// ---- canonical form ---------------------------------------------------------

/// A in invariant-factor coordinates: `object` is from_factors(invariant
/// factors of A), `to`: A->object and `from`: object->A are mutually inverse
/// isomorphisms (from*to = 1 up to relations, to*from = 1 exactly).
struct CanonicalForm {
    FgAb object;
    Hom to, from;
};

CanonicalForm canonical_form(const FgAb& a);

// ---- limits and colimits ----------------------------------------------------

struct KernelPair {
    FgAb object;  // canonical presentation
    Hom incl;     // object -> source(f)
};

struct CokernelPair {
    FgAb object;  // same generators as target(f), relations extended + reduced
    Hom proj;     // target(f) -> object, identity on generators
};

KernelPair kernel(const Hom& f);
CokernelPair cokernel(const Hom& f);

/// Same generators as `a`, relations extended by the columns of `extra`,
/// re-presented minimally. The identity action is well defined onto the
/// result; cokernels and colimit modifications are built from this.
FgAb quotient_object(const FgAb& a, const Mat& extra);

struct Biproduct {
    FgAb object;
    Hom in1, in2;  // A -> A(+)B, B -> A(+)B
    Hom pr1, pr2;  // A(+)B -> A, A(+)B -> B
};

Biproduct biproduct(const FgAb& a, const FgAb& b);

/// [f; g]: X -> A(+)B with components f: X->A, g: X->B.
Hom into_biproduct(const Biproduct& bi, const Hom& f, const Hom& g);
/// [f, g]: A(+)B -> X with components f: A->X, g: B->X.
Hom from_biproduct(const Biproduct& bi, const Hom& f, const Hom& g);

/// Pushout of i: A->B along f: A->A', defined as the cokernel of
/// [i; -f]: A -> B(+)A'. Keeps the ingredients so mediating morphisms can be
/// solved for later.
struct PushoutResult {
    FgAb object;
    Hom from_i_target;  // g: B -> P
    Hom from_f_target;  // i': A' -> P
    Hom i, f;
    Biproduct mid;
    Hom proj;  // B(+)A' -> P, cokernel projection
};

PushoutResult pushout(const Hom& i, const Hom& f);

/// Mediating morphism for a cospan x: B->E, y: A'->E with x*i = y*f.
Hom pushout_mediate(const PushoutResult& po, const Hom& x, const Hom& y);

/// Pullback of d: B->C along h: C'->C, defined as the kernel of
/// [d, -h]: B(+)C' -> C.
struct PullbackResult {
    FgAb object;
    Hom to_d_source;  // Q -> B
    Hom to_h_source;  // Q -> C'
    Hom d, h;
    Biproduct mid;
    Hom incl;  // Q -> B(+)C', kernel inclusion
};

PullbackResult pullback(const Hom& d, const Hom& h);

/// Mediating morphism for a span x: E->B, y: E->C' with d*x = h*y.
Hom pullback_mediate(const PullbackResult& pb, const Hom& x, const Hom& y);

// ---- factorization solvers --------------------------------------------------

/// w with w*d = v, where d is (up to the caller's bookkeeping) a cokernel
/// projection. Unique when d is epi. Empty when v does not factor.
std::optional<Hom> try_lift_through_cokernel(const Hom& d, const Hom& v);
Hom lift_through_cokernel(const Hom& d, const Hom& v);  // throws on failure

/// u_restricted with incl*u_restricted = u, for incl a kernel-style mono.
std::optional<Hom> try_restrict_through_kernel(const Hom& incl, const Hom& u);
Hom restrict_through_kernel(const Hom& incl, const Hom& u);

struct MorphismClass {
    bool is_mono = false;
    bool is_epi = false;
    bool is_iso = false;
    std::optional<Hom> inverse;  // two-sided, verified, present iff is_iso
};

MorphismClass classify(const Hom& f);

/// f has a left inverse r (r*f = 1); empty if f is not a section.
std::optional<Hom> find_left_inverse(const Hom& f);
/// f has a right inverse s (f*s = 1); empty if f is not a retraction.
std::optional<Hom> find_right_inverse(const Hom& f);

// ---- linear solving over diagrams -------------------------------------------

/// Unknown morphism X: source -> target (target.generators x source.generators
/// matrix). Well-definedness of every unknown is an implicit constraint.
struct MorphismVar {
    FgAb source, target;
};

/// One additive term `left * X_var * right` of an equation. `left` must be
/// the action of a well-defined morphism target(var) -> modulus; otherwise the
/// solver may miss solutions (it works in invariant-factor coordinates).
struct MorphismTerm {
    int var;
    Mat left, right;
};

/// sum of terms == rhs, columnwise modulo the relations of `modulus`.
struct MorphismEquation {
    std::vector<MorphismTerm> terms;
    Mat rhs;
    FgAb modulus;
};

/// Simultaneous integer solve of all equations; kron-vectorized into one
/// solve_integer call. Returns the matrices for each unknown, or empty.
std::optional<std::vector<Mat>> solve_morphism_equations(
    const std::vector<MorphismVar>& vars, const std::vector<MorphismEquation>& eqs);

// ---- hom groups -------------------------------------------------------------

///// Hom(A, B) as a finitely generated abelian group: `group` is canonical;
/// `raw_generators[i]` is the action matrix of the i-th generator of the raw
/// presentation and `zero_generators` spans the action matrices of the zero
/// morphism; `element` realizes a coordinate vector of `group` as a Hom.
struct HomGroup {
    FgAb group;
    FgAb raw;                           // group before canonicalization
    std::vector<Mat> raw_generators;
    std::vector<Mat> zero_generators;
    Hom to_group, from_group;           // raw <-> canonical
    FgAb source, target;

    Hom element(const Mat& coords) const;  // coords: group.generators() x 1
};

HomGroup hom_group(const FgAb& a, const FgAb& b);

/// The induced map Hom(B, I) -> Hom(A, I), g |-> g*f, as a morphism of the two
/// canonical hom groups.
Hom hom_restriction_map(const Hom& f, const HomGroup& hom_b, const HomGroup& hom_a);

// ---- random generation ------------------------------------------------------

struct ObjectBounds {
    int max_rank = 2;
    int max_torsion = 2;
    long max_exponent = 16;
};

/// Random object within bounds. Half the draws keep the canonical diagonal
/// presentation, half disguise it by a small unimodular change of generators.
FgAb random_object(const ObjectBounds& bounds, Rng& rng);

/// Random object whose torsion factors all satisfy `factor_ok`.
FgAb random_object_where(const ObjectBounds& bounds, Rng& rng,
                         const std::function<bool(const Int&)>& factor_ok);

/// Random well-defined morphism, generated in invariant-factor coordinates
/// (where Hom(Z/a, Z/b) = multiples of b/gcd(a,b)) and transported back.
Hom random_hom(const FgAb& a, const FgAb& b, Rng& rng);

/// Random automorphism: shears and units in invariant coordinates.
Hom random_automorphism(const FgAb& a, Rng& rng);

// ---- fixtures ---------------------------------------------------------------

/// "fgab: [d1, d2, ..., 0]" -> canonical object with those factors.
FgAb parse_object_fixture(const std::string& line);
std::string object_fixture(const FgAb& a);

/// Morphism fixture: an object line for the source, one for the target, then
/// the action in matrix text format, all in invariant-factor coordinates
/// (emission transports the action there, since the object lines only carry
/// invariant factors).
Hom parse_hom_fixture(const std::string& text);
std::string hom_fixture(const Hom& f);

}  // namespace exactcat
