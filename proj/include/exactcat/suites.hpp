// Named seeded verification suites over one structure: each runs `samples`
// randomized instances of one lemma, re-checking the conclusions with the
// independent fgab-level tools (classify, is_conflation, is_acyclic) on top
// of the constructions' own internal verification. Shared by the command
// line and the acceptance tests so both exercise identical distributions.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exactcat/complexes.hpp"
#include "exactcat/exactstruct.hpp"
#include "exactcat/homlemmas.hpp"

namespace exactcat {

/// Outcome of one suite run. Pass is a sampling verdict; a failure always
/// carries a replayable witness (the `axiom` field holds the suite name).
struct SuiteReport {
    std::string suite;
    std::string structure;
    bool pass = false;
    int samples_requested = 0;
    int samples_run = 0;
    std::uint64_t seed = 0;
    std::optional<Witness> witness;
    std::string note;
};

/// Suite names accepted by run_lemma_suite, sorted.
const std::vector<std::string>& all_lemma_suites();

/// Run one named suite. Unknown names throw parse_error; a structure the
/// suite's hypotheses rule out (wrong side, missing certification) throws
/// lemma_hypothesis. Grid-shaped suites (nine, three-by-three) cap the
/// sampled corner objects at one free and one torsion factor each, since
/// their diagrams compose four to eight corners into a single object.
SuiteReport run_lemma_suite(const std::string& name, const ExactStructure& s, int samples,
                            std::uint64_t seed, const ObjectBounds& bounds = {});

/// Re-run the instance a suite witness records, against the witness's named
/// structure. Returns the failure note, or nullopt when the instance now
/// passes. For pushout-equiv the replay re-checks the equivalence of the
/// three readings (the lemma's claim); for cone-acyclic the instance lives
/// in the witness note as complex fixtures. Throws parse_error on unknown
/// suite names or malformed payloads.
std::optional<std::string> replay_lemma_witness(const Witness& w);

}  // namespace exactcat
