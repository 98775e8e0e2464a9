// One-sided exact structures on finitely generated abelian groups: a
// structure distinguishes a class of inflations (right side) or deflations
// (left side) inside a context that fixes how cokernels and pushouts are
// formed. The axiom checkers run named fixtures first and seeded random
// instances second, and every failure carries a replayable witness.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "exactcat/fgab.hpp"
#include "exactcat/rng.hpp"

namespace exactcat {

class not_a_member : public error {
public:
    explicit not_a_member(const std::string& msg) : error(msg) {}
};

class outside_context : public error {
public:
    explicit outside_context(const std::string& msg) : error(msg) {}
};

class not_a_section : public error {
public:
    explicit not_a_section(const std::string& msg) : error(msg) {}
};

// ---- contexts ----------------------------------------------------------------

/// The modified-colimit quotient: each invariant factor divisible by p^2 is
/// reduced to p times its prime-to-p part. `proj` has identity action and is
/// the unit of the reflection onto groups with no element of order p^2.
struct Reflection {
    FgAb object;
    Hom proj;
};

Reflection isbell_reflect(const FgAb& g, long p);

/// Pushout square completion as a context forms it: legs only. (The ambient
/// context also exposes the full PushoutResult via fgab when needed.)
struct ContextPushout {
    FgAb object;
    Hom from_i_target;  // B -> P
    Hom from_f_target;  // A' -> P
};

/// Where diagrams live: the full category (p = 0) or the subcategory of
/// groups with no element of order p^2. Limits are always formed ambiently;
/// colimits in the latter are the ambient ones followed by the reflection.
struct CategoryContext {
    std::string name;  // "ambient" or "isbell:<p>"
    long p = 0;

    bool contains(const FgAb& a) const;
    CokernelPair cokernel(const Hom& f) const;
    ContextPushout pushout(const Hom& i, const Hom& f) const;
};

CategoryContext ambient_context();
CategoryContext isbell_context(long p);  // rejects non-prime p

/// Ambient cokernel followed by the reflection at p. Endpoints of f must
/// have no element of order p^2.
CokernelPair isbell_cokernel(const Hom& f, long p);

// ---- structures ---------------------------------------------------------------

enum class StructureSide { right, left };

/// Registered counterexample (or regression) instance for one axiom: exactly
/// the morphisms the corresponding instance checker expects.
struct AxiomFixture {
    std::string axiom;
    std::vector<Hom> morphisms;
    std::string note;
};

/// Immutable structure descriptor. Membership predicates are pure; samplers
/// only ever produce members of their class, so axiom checks never reject an
/// instance for a malformed hypothesis.
struct ExactStructure {
    std::string name;
    StructureSide side = StructureSide::right;
    CategoryContext context;

    std::function<bool(const Hom&)> is_inflation;
    std::function<bool(const Hom&)> is_deflation;

    std::function<FgAb(Rng&, const ObjectBounds&)> sample_object;
    std::function<Hom(Rng&, const ObjectBounds&)> sample_inflation;
    std::function<Hom(const FgAb&, Rng&, const ObjectBounds&)> sample_inflation_from;
    std::function<Hom(Rng&, const ObjectBounds&)> sample_deflation;
    std::function<Hom(const FgAb&, Rng&, const ObjectBounds&)> sample_deflation_onto;

    std::vector<AxiomFixture> fixtures;

    // Certified closure flags consumed by the lemma layer (gates, not proofs:
    // each is backed by the structure's axiom suite).
    bool has_r0star = false;      // 0 -> A is a member for every object
    bool strongly_right = false;  // right side with has_r0star
    bool strongly_left = false;
};

ExactStructure split_structure();
ExactStructure max_structure();
ExactStructure isbell_structure(long p);  // left structure; rejects non-prime p
ExactStructure all_isos_structure();

/// Members of `base` whose source, middle and context cokernel object all
/// satisfy the predicate. `accepts` defaults to "every invariant factor
/// passes factor_ok"; `factor_ok` also drives the restricted samplers.
struct ObjectPredicate {
    std::string name;
    std::function<bool(const Int&)> factor_ok;
    std::function<bool(const FgAb&)> accepts;
};

ObjectPredicate factorwise_predicate(std::string name, std::function<bool(const Int&)> factor_ok);
ObjectPredicate torsion_free_predicate();

ExactStructure extension_closed_substructure(const ExactStructure& base, const ObjectPredicate& pred);

/// Structures addressable from the command line: "split", "max",
/// "isbell:<p>", "all-isos", "ext-closed:torsion-free".
ExactStructure structure_by_name(const std::string& name);

// ---- conflations ---------------------------------------------------------------

/// Kernel-cokernel pair whose distinguished half is a member.
struct Conflation {
    Hom inflation;  // A -> B
    Hom deflation;  // B -> C
};

/// Complete a member to a conflation: an inflation gets its context cokernel,
/// a deflation gets its kernel. The structure's native side is tried first;
/// a morphism in neither class throws not_a_member.
Conflation conflation_of(const ExactStructure& s, const Hom& m);

/// d*i = 0, i is a kernel of d, d is a context cokernel of i, and the
/// distinguished half is a member. Never throws on mathematical failure.
bool is_conflation(const ExactStructure& s, const Hom& i, const Hom& d);

/// Componentwise biproduct of two conflations. Returned unverified so closure
/// failures surface as test failures, not exceptions.
Conflation direct_sum_conflations(const ExactStructure& s, const Conflation& c1, const Conflation& c2);

// ---- axiom checking -------------------------------------------------------------

/// Replayable failing instance: objects are stored by invariant factors and
/// every morphism is transported to those canonical presentations before
/// serialization (membership and the axiom verdicts are iso-invariant).
struct Witness {
    std::string structure;
    std::string axiom;
    std::vector<FgAb> objects;
    struct Arrow {
        int source = 0, target = 0;  // indices into objects
        Mat action;
    };
    std::vector<Arrow> morphisms;
    std::string note;
};

std::string witness_to_json(const Witness& w);
Witness witness_from_json(const std::string& text);

/// Package a failing instance: deduplicates objects up to equal presentation,
/// replaces each by its canonical form and transports the morphisms along.
Witness make_witness(const ExactStructure& s, const std::string& axiom,
                     const std::vector<Hom>& ms, const std::string& note);

/// Sampling verdict for one axiom. Pass means "no counterexample found in
/// samples_run instances plus fixtures_run fixtures", never a proof.
struct AxiomReport {
    std::string structure;
    std::string axiom;
    bool pass = false;
    int samples_requested = 0;
    int samples_run = 0;
    int fixtures_run = 0;
    std::uint64_t seed = 0;
    std::optional<Witness> witness;
    std::string note;
};

/// Valid axiom names: R0, R0*, R1, R2, R3 and the duals L0, L0*, L1, L2, L3.
/// Fixtures registered for the axiom run first, then `samples` seeded random
/// instances; the check stops at the first failure.
AxiomReport check_axiom(const ExactStructure& s, const std::string& axiom, int samples,
                        std::uint64_t seed, const ObjectBounds& bounds = {});

const std::vector<std::string>& all_axioms();

/// One concrete instance of an axiom, on explicit morphisms (the same checks
/// the fixtures and samples run). Empty result = the instance passes;
/// otherwise the failure note. Throws parse_error on malformed instances.
std::optional<std::string> axiom_instance_failure(const ExactStructure& s, const std::string& axiom,
                                                  const std::vector<Hom>& ms);

/// Re-run the instance a witness records against its named structure.
std::optional<std::string> replay_witness(const Witness& w);

/// Per-axiom verdicts the source example asserts for the named structure.
/// Axioms absent from the map carry no assertion.
std::map<std::string, bool> paper_expectations(const std::string& structure_name);

/// The three recorded failures of the right-side axioms in the order-p^2-free
/// subcategory, machine-checked at construction: R1 = (*p, *p) on Z, R2 =
/// pushout of *p along Z -> Z/p, R3 = [p; pi]: Z -> Z (+) Z/p against diag(1, 0).
struct IsbellCounterexamples {
    AxiomFixture r1, r2, r3;
};

IsbellCounterexamples isbell_counterexamples(long p);

/// Sampling pre-check that `pred` objects are closed under extensions in
/// `base`: every sampled conflation with both end objects accepted has an
/// accepted middle. Violations are reported, not thrown.
AxiomReport extension_closure_report(const ExactStructure& base, const ObjectPredicate& pred,
                                     int samples, std::uint64_t seed, const ObjectBounds& bounds = {});

// ---- weak idempotent completeness ------------------------------------------------

/// Split data of a section s: A -> B. r retracts s, p is the cokernel of s,
/// v satisfies v*p = 1 - s*r, and [r; p]: B -> A(+)C and [s, v]: A(+)C -> B are
/// verified mutually inverse.
struct SectionDecomposition {
    Hom s, r;
    FgAb complement;
    Hom p, v;
    Biproduct sum;      // source(s) (+) complement
    Hom to_sum;         // [r; p]
    Hom from_sum;       // [s, v]
};

SectionDecomposition section_decomposition(const Hom& s);

/// Seeded suite for the section/retraction equivalences: every sampled
/// section has a cokernel and decomposes, every sampled retraction has a
/// kernel, and in the mono/epi structure sections are inflations and
/// retractions are deflations.
AxiomReport wic_equivalence_check(int samples, std::uint64_t seed, const ObjectBounds& bounds = {});

}  // namespace exactcat
