// Bounded cochain complexes of finitely generated abelian groups over a
// one-sided exact structure. Acyclicity is witnessed, not just decided: a
// witness factors every differential through an explicit conflation, and the
// cone construction consumes witnesses so that the splice producing the
// cone's witness runs entirely on structure members (kernel comparisons,
// pushout completions, double conflations), never on an ambient shortcut.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "exactcat/homlemmas.hpp"

namespace exactcat {

class chain_error : public error {
public:
    explicit chain_error(const std::string& msg) : error(msg) {}
};

// ---- complexes and chain maps -------------------------------------------------

/// Bounded cochain complex: objects sit in degrees [lo, hi] and d^n maps
/// degree n to degree n+1. Degrees outside the support hold the zero group;
/// the accessors synthesize those entries, so object(n) and differential(n)
/// are total and consecutive differentials always compose. The constructor
/// rejects any pair with d^(n+1) * d^n != 0.
class ChainComplex {
public:
    ChainComplex() = default;  // the zero complex, empty support
    ChainComplex(int lo, std::vector<FgAb> objects, std::vector<Hom> differentials);

    static ChainComplex concentrated(const FgAb& a, int degree);

    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(objects_.size()) - 1; }
    bool empty() const { return objects_.empty(); }
    bool in_support(int n) const { return n >= lo() && n <= hi(); }

    FgAb object(int n) const;       // zero group outside the support
    Hom differential(int n) const;  // d^n: object(n) -> object(n+1), zero outside

    std::string describe() const;

private:
    int lo_ = 0;
    std::vector<FgAb> objects_;
    std::vector<Hom> diffs_;  // diffs_[k]: objects_[k] -> objects_[k+1]
};

/// Degreewise equality of presentations and differentials over the union of
/// the supports.
bool chain_equal(const ChainComplex& c1, const ChainComplex& c2);

/// Degreewise morphism of complexes; the constructor checks each provided
/// component against the endpoint presentations and verifies commutation
/// with the differentials in every degree.
class ChainMap {
public:
    ChainMap(ChainComplex source, ChainComplex target, std::map<int, Hom> components);

    const ChainComplex& source() const { return source_; }
    const ChainComplex& target() const { return target_; }
    Hom component(int n) const;  // zero map outside the stored degrees

private:
    ChainComplex source_, target_;
    std::map<int, Hom> comps_;
};

ChainMap identity_chain_map(const ChainComplex& c);
ChainMap zero_chain_map(const ChainComplex& source, const ChainComplex& target);

// ---- acyclicity ----------------------------------------------------------------

/// Factorization d^(n-1) = i * p through z: p is the deflation onto z from
/// degree n-1 and i the inflation of z into degree n.
struct DegreeFactorization {
    int degree;
    FgAb z;
    Hom p;  // object(degree-1) ->> z
    Hom i;  // z >-> object(degree)
};

/// Witness that a complex is acyclic: one factorization per degree in
/// [lo, hi+1], with z(n) the kernel object at degree n. The constructor
/// checks shapes and the composite identity i(n)*p(n) = d^(n-1); the
/// structure-dependent conditions (memberships, kernel and cokernel
/// universality) live in witness_failure.
class AcyclicityWitness {
public:
    AcyclicityWitness(ChainComplex complex, std::vector<DegreeFactorization> entries);

    const ChainComplex& complex() const { return complex_; }

    FgAb z(int n) const;  // zero group outside [lo, hi+1]
    Hom p(int n) const;   // object(n-1) ->> z(n)
    Hom i(int n) const;   // z(n) >-> object(n)

private:
    ChainComplex complex_;
    std::vector<DegreeFactorization> entries_;  // degrees lo .. hi+1 in order
};

/// First reason the witness fails to certify acyclicity in s, or empty when
/// it certifies: checks per degree that i is a member and a kernel of d^n,
/// and that p is a member and a cokernel of d^(n-2).
std::optional<std::string> witness_failure(const ExactStructure& s, const AcyclicityWitness& w);

struct AcyclicityResult {
    std::optional<AcyclicityWitness> witness;
    int failing_degree = 0;   // meaningful when witness is empty
    std::string reason;       // likewise

    bool acyclic() const { return witness.has_value(); }
};

/// Decide acyclicity over a right-side structure by factoring each
/// differential through the kernel at the next degree: the factor map must
/// be a deflation and the kernel inclusion an inflation. Stops at the first
/// failing degree and reports the obstruction (for plain non-exactness, the
/// homology there).
AcyclicityResult is_acyclic(const ChainComplex& c, const ExactStructure& s);

// ---- cones, shifts, sums ------------------------------------------------------

/// Mapping cone: degree n is object A^(n+1) (+) B^n with differential
/// [-d_A, 0; f, d_B]; the d*d = 0 identity is reverified on the result.
ChainComplex mapping_cone(const ChainMap& f);

/// Witness that the cone of a map between acyclic complexes is acyclic.
/// Degreewise: the comparison map on kernel objects is restricted through
/// the target's inflation, the source's witness conflation is pushed out
/// along its negative to produce the cone's kernel object, and the two rows
/// are spliced by a double conflation whose right square is the completed
/// pushout. The assembled witness is returned after its composite identities
/// are checked; hypothesis failures are reported with their degree.
AcyclicityWitness cone_acyclicity(const ChainMap& f, const AcyclicityWitness& wa,
                                  const AcyclicityWitness& wb, const ExactStructure& s);

/// Degreewise homotopy data: components h^n: A^n -> B^(n-1).
struct Homotopy {
    std::map<int, Hom> components;

    Hom component(int n, const ChainComplex& source, const ChainComplex& target) const;
};

/// Solve f^n = d_B^(n-1) h^n + h^(n+1) d_A^n for all degrees as one integer
/// system; empty when f is not null-homotopic. A returned homotopy satisfies
/// the identity exactly in every degree (reverified).
std::optional<Homotopy> nullhomotopy(const ChainMap& f);

/// Shift by k: degree n of the result is degree n+k of c, with the
/// differential scaled by (-1)^k. The sign convention is fixed here once;
/// shift(c, 1) matches the top-left block of the mapping cone.
ChainComplex shift(const ChainComplex& c, int k);

/// Degreewise biproduct with block-diagonal differentials.
ChainComplex sum(const ChainComplex& c1, const ChainComplex& c2);

// ---- fixtures ------------------------------------------------------------------

/// JSON fixture {support, objects, differentials}; objects are canonicalized
/// to invariant-factor form and the differentials transported accordingly,
/// so serialization is stable under reserialization.
std::string complex_to_json(const ChainComplex& c);

/// Parse a fixture; any malformed input, including data that fails the
/// complex axioms, raises parse_error.
ChainComplex complex_from_json(const std::string& text);

// ---- sampling ------------------------------------------------------------------

/// Random acyclic complex over degrees [lo, hi], spliced from sampled
/// conflations (the final inflation is the identity so the complex closes
/// up); returned with its witness.
AcyclicityWitness random_acyclic(const ExactStructure& s, int lo, int hi, Rng& rng,
                                 const ObjectBounds& bounds = {});

/// Chain map built from random homotopy components, f = d h + h d; always
/// commutes by construction (and is null-homotopic by design).
ChainMap random_nullhomotopic_map(const ChainComplex& a, const ChainComplex& b, Rng& rng);

}  // namespace exactcat
