// Suite bodies sample instances with the structure's own generators, run the
// lemma construction, then re-check the conclusion with independent tools
// (classify, is_conflation, is_acyclic). A failure is packaged exactly like
// an axiom witness so the replay command can re-execute it; cone instances
// do not fit the morphism-list shape and ride in the note as complex
// fixtures instead.
#include "exactcat/suites.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <utility>

namespace exactcat {

using nlohmann::json;

namespace {

Hom inverse_of(const Hom& u) {
    MorphismClass c = classify(u);
    if (!c.is_iso)
        throw lemma_hypothesis("a comparison map expected to be invertible is not");
    return *c.inverse;
}

Hom conjugated(const Hom& left, const Hom& mid, const Hom& right_inv) {
    return compose(left, compose(mid, right_inv));
}

// Grid suites compose four to eight sampled corners into one object, so each
// corner is capped at one free and one torsion factor with a small exponent
// to keep instance sizes in line with the single-object suites.
ObjectBounds corner_bounds(const ObjectBounds& b) {
    ObjectBounds c = b;
    if (c.max_rank > 1) c.max_rank = 1;
    if (c.max_torsion > 1) c.max_torsion = 1;
    if (c.max_exponent > 9) c.max_exponent = 9;
    return c;
}

void fail_with(SuiteReport& rep, const ExactStructure& s, const std::vector<Hom>& ms,
               const std::string& why) {
    rep.pass = false;
    rep.note = "counterexample found at sample " + std::to_string(rep.samples_run) + ": " + why;
    rep.witness = make_witness(s, rep.suite, ms, why);
}

json mat_to_json(const Mat& m) {
    json out;
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).str());
        rows.push_back(std::move(row));
    }
    out["matrix"] = std::move(rows);
    return out;
}

Mat mat_from_json(const json& j) {
    int rows = j.at("rows").get<int>();
    int cols = j.at("cols").get<int>();
    if (rows < 0 || cols < 0) throw parse_error("negative matrix shape");
    const json& entries = j.at("matrix");
    if (!entries.is_array() || static_cast<int>(entries.size()) != rows)
        throw parse_error("matrix row count mismatch");
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(entries[i].size()) != cols)
            throw parse_error("matrix column count mismatch");
        for (int j2 = 0; j2 < cols; ++j2)
            m.at(i, j2) = Int(entries[i][j2].get<std::string>());
    }
    return m;
}

ChainMap scalar_endo(const ChainComplex& c, long m) {
    std::map<int, Hom> comps;
    for (int n = c.lo(); n <= c.hi(); ++n) {
        int g = c.object(n).generators();
        Mat act(g, g);
        for (int i = 0; i < g; ++i) act.at(i, i) = m;
        comps.emplace(n, Hom(c.object(n), c.object(n), std::move(act)));
    }
    return ChainMap(c, c, std::move(comps));
}

// ---- the ten suite bodies ------------------------------------------------------

void run_five(SuiteReport& rep, const ExactStructure& s, const ObjectBounds& bounds) {
    Rng rng(rep.seed);
    for (int k = 0; k < rep.samples_requested; ++k) {
        ++rep.samples_run;
        Conflation c = conflation_of(s, s.sample_inflation(rng, bounds));
        Hom u = random_automorphism(c.inflation.target(), rng);
        Hom f = random_automorphism(c.inflation.source(), rng);
        Hom h = random_automorphism(c.deflation.target(), rng);
        Conflation tw{conjugated(u, c.inflation, inverse_of(f)),
                      conjugated(h, c.deflation, inverse_of(u))};
        std::vector<Hom> ms{c.inflation, c.deflation, tw.inflation, tw.deflation, f, u, h};
        try {
            ShortFiveResult res = short_five_inverse(s, conflation_morphism(c, tw, f, u, h));
            bool ok = hom_equal(res.inverse, inverse_of(u)) &&
                      hom_equal(compose(res.trace.delta, res.trace.alpha),
                                identity_hom(c.inflation.target())) &&
                      is_zero_hom(compose(res.trace.delta, res.trace.gamma));
            if (!ok) {
                fail_with(rep, s, ms,
                          "the constructed inverse disagrees with the classified inverse");
                return;
            }
        } catch (const lemma_falsified& e) {
            fail_with(rep, s, ms, e.what());
            return;
        }
    }
}

void run_nine(SuiteReport& rep, const ExactStructure& s, const ObjectBounds& bounds) {
    ObjectBounds cb = corner_bounds(bounds);
    Rng rng(rep.seed);
    for (int k = 0; k < rep.samples_requested; ++k) {
        ++rep.samples_run;
        FgAb pa = s.sample_object(rng, cb);
        FgAb qa = s.sample_object(rng, cb);
        FgAb pb = s.sample_object(rng, cb);
        FgAb qb = s.sample_object(rng, cb);
        Biproduct bs = biproduct(pa, qa);
        Biproduct bt = biproduct(pb, qb);
        Hom u = random_automorphism(bs.object, rng);
        Hom up = random_automorphism(bt.object, rng);
        Conflation src{compose(u, bs.in1), compose(bs.pr2, inverse_of(u))};
        Conflation tgt{compose(up, bt.in1), compose(bt.pr2, inverse_of(up))};
        Hom f = random_hom(pa, pb, rng);
        Hom t = random_hom(qa, pb, rng);
        Hom h = random_hom(qa, qb, rng);
        Hom block = compose(bt.in1, compose(f, bs.pr1) + compose(t, bs.pr2)) +
                    compose(bt.in2, compose(h, bs.pr2));
        Hom g = compose(up, compose(block, inverse_of(u)));
        std::vector<Hom> ms{src.inflation, src.deflation, tgt.inflation, tgt.deflation, f, g, h};
        try {
            NineFactorization out = nine_factorization(s, conflation_morphism(src, tgt, f, g, h));
            bool ok = hom_equal(compose(out.lower.g, out.upper.g), g) &&
                      is_conflation(s, out.middle.inflation, out.middle.deflation);
            if (!ok) {
                fail_with(rep, s, ms, "the factorization does not reproduce the morphism");
                return;
            }
        } catch (const lemma_falsified& e) {
            fail_with(rep, s, ms, e.what());
            return;
        }
    }
}

void run_double(SuiteReport& rep, const ExactStructure& s, const ObjectBounds& bounds) {
    Rng rng(rep.seed);
    for (int k = 0; k < rep.samples_requested; ++k) {
        ++rep.samples_run;
        Conflation top = conflation_of(s, s.sample_inflation(rng, bounds));
        Hom g = s.sample_inflation_from(top.inflation.target(), rng, bounds);
        Conflation bottom = conflation_of(s, compose(g, top.inflation));
        std::optional<Hom> h =
            try_lift_through_cokernel(top.deflation, compose(bottom.deflation, g));
        if (!h) {
            fail_with(rep, s, {top.inflation, top.deflation, bottom.inflation, bottom.deflation},
                      "no comparison between the two quotients");
            return;
        }
        Hom j = s.sample_inflation_from(top.deflation.target(), rng, bounds);
        ContextPushout po = s.context.pushout(j, *h);
        DoubleConflationData dd{top, bottom, j, po.from_f_target, g, *h, po.from_i_target};
        std::vector<Hom> ms{top.inflation,    top.deflation, bottom.inflation,
                            bottom.deflation, j,             po.from_f_target,
                            g,                *h,            po.from_i_target};
        try {
            Conflation out = double_conflation(s, dd);
            if (!is_conflation(s, out.inflation, out.deflation)) {
                fail_with(rep, s, ms, "the spliced row is not a conflation");
                return;
            }
        } catch (const lemma_falsified& e) {
            fail_with(rep, s, ms, e.what());
            return;
        }
    }
}

void run_three_by_three(SuiteReport& rep, const ExactStructure& s, const ObjectBounds& bounds) {
    ObjectBounds cb = corner_bounds(bounds);
    Rng rng(rep.seed);
    for (int k = 0; k < rep.samples_requested; ++k) {
        ++rep.samples_run;
        FgAb pp = s.sample_object(rng, cb);
        FgAb qq = s.sample_object(rng, cb);
        FgAb rr = s.sample_object(rng, cb);
        FgAb ss = s.sample_object(rng, cb);
        Biproduct r1 = biproduct(pp, qq);
        Biproduct r3 = biproduct(rr, ss);
        Biproduct ca = biproduct(pp, rr);
        Biproduct cc = biproduct(qq, ss);
        Biproduct bb = biproduct(r1.object, r3.object);
        Hom i2 = compose(bb.in1, compose(r1.in1, ca.pr1)) +
                 compose(bb.in2, compose(r3.in1, ca.pr2));
        Hom d2 = compose(cc.in1, compose(r1.pr2, bb.pr1)) +
                 compose(cc.in2, compose(r3.pr2, bb.pr2));
        Hom ua = random_automorphism(pp, rng);
        Hom ub = random_automorphism(r1.object, rng);
        Hom uc = random_automorphism(qq, rng);
        Hom uap = random_automorphism(ca.object, rng);
        Hom ubp = random_automorphism(bb.object, rng);
        Hom ucp = random_automorphism(cc.object, rng);
        Hom uapp = random_automorphism(rr, rng);
        Hom ubpp = random_automorphism(r3.object, rng);
        Hom ucpp = random_automorphism(ss, rng);
        ThreeByThreeInput in{Conflation{conjugated(uap, ca.in1, inverse_of(ua)),
                                        conjugated(uapp, ca.pr2, inverse_of(uap))},
                             Conflation{conjugated(ubp, bb.in1, inverse_of(ub)),
                                        conjugated(ubpp, bb.pr2, inverse_of(ubp))},
                             Conflation{conjugated(ucp, cc.in1, inverse_of(uc)),
                                        conjugated(ucpp, cc.pr2, inverse_of(ucp))},
                             Conflation{conjugated(ub, r1.in1, inverse_of(ua)),
                                        conjugated(uc, r1.pr2, inverse_of(ub))},
                             Conflation{conjugated(ubp, i2, inverse_of(uap)),
                                        conjugated(ucp, d2, inverse_of(ubp))}};
        std::vector<Hom> ms{in.col_a.inflation, in.col_a.deflation, in.col_b.inflation,
                            in.col_b.deflation, in.col_c.inflation, in.col_c.deflation,
                            in.row1.inflation,  in.row1.deflation,  in.row2.inflation,
                            in.row2.deflation};
        try {
            Conflation out = three_by_three(s, in);
            bool ok = is_conflation(s, out.inflation, out.deflation) &&
                      hom_equal(compose(out.deflation, in.col_b.deflation),
                                compose(in.col_c.deflation, in.row2.deflation)) &&
                      hom_equal(compose(out.inflation, in.col_a.deflation),
                                compose(in.col_b.deflation, in.row2.inflation));
            if (!ok) {
                fail_with(rep, s, ms, "the constructed third row fails verification");
                return;
            }
        } catch (const lemma_falsified& e) {
            fail_with(rep, s, ms, e.what());
            return;
        }
    }
}

void run_pushout_equiv(SuiteReport& rep, const ExactStructure& s, const ObjectBounds& bounds) {
    Rng rng(rep.seed);
    for (int k = 0; k < rep.samples_requested; ++k) {
        ++rep.samples_run;
        Hom i = s.sample_inflation(rng, bounds);
        FgAb ap = s.sample_object(rng, bounds);
        Hom f = random_hom(i.source(), ap, rng);
        ContextPushout cpo = s.context.pushout(i, f);
        PushoutSquare genuine = pushout_square(i, f, cpo.from_f_target, cpo.from_i_target);
        PushoutCharacterizations gc = pushout_characterizations(s, genuine);
        std::vector<Hom> gms{i, f, cpo.from_f_target, cpo.from_i_target};
        if (gc.po != gc.confl || gc.confl != gc.po_and_pb) {
            fail_with(rep, s, gms, "the three pushout readings disagree");
            return;
        }
        if (!gc.po) {
            fail_with(rep, s, gms, "a square built as a context pushout is not recognized");
            return;
        }
        // The deterministic falsifier: pad the pushout corner with a fresh
        // free summand, which breaks universality but keeps the legs members.
        Biproduct pad = biproduct(cpo.object, FgAb::free(1));
        PushoutSquare padded = pushout_square(i, f, compose(pad.in1, cpo.from_f_target),
                                              compose(pad.in1, cpo.from_i_target));
        PushoutCharacterizations pc = pushout_characterizations(s, padded);
        std::vector<Hom> pms{i, f, padded.i_prime, padded.g};
        if (pc.po != pc.confl || pc.confl != pc.po_and_pb) {
            fail_with(rep, s, pms, "the three pushout readings disagree");
            return;
        }
        if (pc.po) {
            fail_with(rep, s, pms, "a padded square passes the pushout readings");
            return;
        }
    }
}

void run_defl_sum(SuiteReport& rep, const ExactStructure& s, const ObjectBounds& bounds) {
    Rng rng(rep.seed);
    for (int k = 0; k < rep.samples_requested; ++k) {
        ++rep.samples_run;
        auto draw = [&]() -> std::pair<Hom, Hom> {
            if (k % 2 == 1) {
                Hom g = s.sample_deflation(rng, bounds);
                Hom f = random_hom(s.sample_object(rng, bounds), g.source(), rng);
                return {std::move(f), std::move(g)};
            }
            FgAb a = s.sample_object(rng, bounds);
            FgAb b = s.sample_object(rng, bounds);
            FgAb c = s.sample_object(rng, bounds);
            Hom f = random_hom(a, b, rng);
            Hom g = random_hom(b, c, rng);
            return {std::move(f), std::move(g)};
        };
        auto [f, g] = draw();
        std::vector<Hom> ms{f, g};
        try {
            DeflSumReport out = defl_sum_reduction(s, f, g);
            if (out.bracket_is_deflation != out.g_is_deflation) {
                fail_with(rep, s, ms, "the bracket and component verdicts disagree");
                return;
            }
            if (k % 2 == 1 && !out.g_is_deflation) {
                fail_with(rep, s, ms, "a sampled deflation is not certified by the reduction");
                return;
            }
        } catch (const lemma_falsified& e) {
            fail_with(rep, s, ms, e.what());
            return;
        }
    }
}

void run_obscure(SuiteReport& rep, const ExactStructure& s, const ObjectBounds& bounds) {
    AxiomReport ar = obscure_equivalence(s, rep.samples_requested, rep.seed, bounds);
    rep.pass = ar.pass;
    rep.samples_run = ar.samples_run;
    rep.witness = ar.witness;
    rep.note = ar.note;
}

json chain_map_note(const ChainMap& f) {
    json note;
    note["source"] = json::parse(complex_to_json(f.source()));
    note["target"] = json::parse(complex_to_json(f.target()));
    json comps = json::object();
    int lo = std::min(f.source().lo(), f.target().lo());
    int hi = std::max(f.source().hi(), f.target().hi());
    for (int n = lo; n <= hi; ++n) {
        Hom c = f.component(n);
        if (is_zero_hom(c)) continue;
        CanonicalForm cs = canonical_form(c.source());
        CanonicalForm ct = canonical_form(c.target());
        comps[std::to_string(n)] = mat_to_json(ct.to.action() * c.action() * cs.from.action());
    }
    note["components"] = std::move(comps);
    return note;
}

void run_cone_acyclic(SuiteReport& rep, const ExactStructure& s, const ObjectBounds& bounds) {
    Rng rng(rep.seed);
    for (int k = 0; k < rep.samples_requested; ++k) {
        ++rep.samples_run;
        int alo = static_cast<int>(rng.pick(-2, 1));
        AcyclicityWitness wa =
            random_acyclic(s, alo, alo + static_cast<int>(rng.pick(0, 3)), rng, bounds);
        AcyclicityWitness wb = wa;
        std::optional<ChainMap> f;
        switch (k % 3) {
            case 0:
                f = identity_chain_map(wa.complex());
                break;
            case 1:
                f = scalar_endo(wa.complex(), rng.pick(-3, 3));
                break;
            default: {
                int blo = alo + static_cast<int>(rng.pick(-1, 1));
                wb = random_acyclic(s, blo, blo + static_cast<int>(rng.pick(0, 3)), rng, bounds);
                f = random_nullhomotopic_map(wa.complex(), wb.complex(), rng);
                break;
            }
        }
        auto fail_cone = [&](const std::string& why) {
            rep.pass = false;
            rep.note =
                "counterexample found at sample " + std::to_string(rep.samples_run) + ": " + why;
            Witness w;
            w.structure = s.name;
            w.axiom = rep.suite;
            w.note = chain_map_note(*f).dump();
            rep.witness = std::move(w);
        };
        try {
            AcyclicityWitness out = cone_acyclicity(*f, wa, wb, s);
            std::optional<std::string> bad = witness_failure(s, out);
            if (bad) {
                fail_cone("the assembled witness fails: " + *bad);
                return;
            }
            if (!chain_equal(out.complex(), mapping_cone(*f))) {
                fail_cone("the witness does not live on the mapping cone");
                return;
            }
            if (!is_acyclic(out.complex(), s).acyclic()) {
                fail_cone("the independent acyclicity decision rejects the cone");
                return;
            }
        } catch (const lemma_falsified& e) {
            fail_cone(e.what());
            return;
        }
    }
}

void run_section_decomp(SuiteReport& rep, const ExactStructure& s, const ObjectBounds& bounds) {
    Rng rng(rep.seed);
    for (int k = 0; k < rep.samples_requested; ++k) {
        ++rep.samples_run;
        FgAb a0 = s.sample_object(rng, bounds);
        FgAb c0 = s.sample_object(rng, bounds);
        Biproduct bi = biproduct(a0, c0);
        Hom u = random_automorphism(bi.object, rng);
        Hom w0 = random_automorphism(a0, rng);
        Hom sec = conjugated(u, bi.in1, inverse_of(w0));
        std::vector<Hom> ms{sec};
        try {
            SectionDecomposition dec = section_decomposition(sec);
            FgAb mid = sec.target();
            bool ok = hom_equal(compose(dec.r, dec.s), identity_hom(a0)) &&
                      hom_equal(compose(dec.v, dec.p),
                                identity_hom(mid) - compose(dec.s, dec.r)) &&
                      hom_equal(compose(dec.from_sum, dec.to_sum), identity_hom(mid)) &&
                      hom_equal(compose(dec.to_sum, dec.from_sum),
                                identity_hom(dec.sum.object));
            // Sections are members of every certified right-side structure.
            if (ok && s.side == StructureSide::right && s.has_r0star)
                ok = s.is_inflation(sec);
            if (!ok) {
                fail_with(rep, s, ms, "a section fails the decomposition identities");
                return;
            }
        } catch (const lemma_falsified& e) {
            fail_with(rep, s, ms, e.what());
            return;
        } catch (const not_a_section& e) {
            fail_with(rep, s, ms, e.what());
            return;
        }
    }
}

// Pinned negative probes run with fixed seeds: a probabilistic miss under an
// unlucky user seed would read as a falsified lemma otherwise.
constexpr std::uint64_t probe_seed_free = 938;
constexpr std::uint64_t probe_seed_torsion = 939;

void run_injective(SuiteReport& rep, const ExactStructure& s, const ObjectBounds& bounds) {
    Rng rng(rep.seed);
    ++rep.samples_run;
    if (!injective_test(s, FgAb::zero(), 20, rep.seed, bounds)) {
        fail_with(rep, s, {identity_hom(FgAb::zero())},
                  "the zero object fails the extension probe");
        return;
    }
    if (s.name == "split") {
        for (int k = 1; k < rep.samples_requested; ++k) {
            ++rep.samples_run;
            FgAb i_obj = s.sample_object(rng, bounds);
            if (!injective_test(s, i_obj, 12, rep.seed + static_cast<std::uint64_t>(k), bounds)) {
                fail_with(rep, s, {identity_hom(i_obj)},
                          "an object fails the split extension probe");
                return;
            }
            FgAb a = s.sample_object(rng, bounds);
            Hom f = random_hom(a, s.sample_object(rng, bounds), rng);
            if (hom_epi_characterization(s, f, {a}) != s.is_inflation(f)) {
                fail_with(rep, s, {f}, "hom restriction disagrees with membership");
                return;
            }
        }
        return;
    }
    if (s.name == "max") {
        ++rep.samples_run;
        if (injective_test(s, FgAb::free(1), 60, probe_seed_free, bounds)) {
            fail_with(rep, s, {identity_hom(FgAb::free(1))},
                      "the probe finds Z injective against all monomorphisms");
            return;
        }
        ++rep.samples_run;
        if (injective_test(s, FgAb::cyclic(2), 60, probe_seed_torsion, bounds)) {
            fail_with(rep, s, {identity_hom(FgAb::cyclic(2))},
                      "the probe finds Z/2 injective against all monomorphisms");
            return;
        }
        return;
    }
    rep.note = "only the zero-object claim applies to " + s.name;
}

}  // namespace

const std::vector<std::string>& all_lemma_suites() {
    static const std::vector<std::string> names = {
        "cone-acyclic", "defl-sum",   "double",         "five",           "injective",
        "nine",         "obscure",    "pushout-equiv",  "section-decomp", "three-by-three"};
    return names;
}

SuiteReport run_lemma_suite(const std::string& name, const ExactStructure& s, int samples,
                            std::uint64_t seed, const ObjectBounds& bounds) {
    const auto& names = all_lemma_suites();
    if (std::find(names.begin(), names.end(), name) == names.end())
        throw parse_error("unknown lemma suite: " + name);
    if (samples < 1) throw parse_error("samples must be positive");
    SuiteReport rep;
    rep.suite = name;
    rep.structure = s.name;
    rep.pass = true;
    rep.samples_requested = samples;
    rep.seed = seed;
    if (name == "five") run_five(rep, s, bounds);
    else if (name == "nine") run_nine(rep, s, bounds);
    else if (name == "double") run_double(rep, s, bounds);
    else if (name == "three-by-three") run_three_by_three(rep, s, bounds);
    else if (name == "pushout-equiv") run_pushout_equiv(rep, s, bounds);
    else if (name == "defl-sum") run_defl_sum(rep, s, bounds);
    else if (name == "obscure") run_obscure(rep, s, bounds);
    else if (name == "cone-acyclic") run_cone_acyclic(rep, s, bounds);
    else if (name == "section-decomp") run_section_decomp(rep, s, bounds);
    else run_injective(rep, s, bounds);
    if (rep.pass && rep.note.empty())
        rep.note = "no counterexample found in " + std::to_string(rep.samples_run) + " instances";
    return rep;
}

namespace {

std::vector<Hom> rebuild_morphisms(const Witness& w) {
    std::vector<Hom> ms;
    for (const Witness::Arrow& a : w.morphisms) {
        if (a.source < 0 || a.target < 0 ||
            a.source >= static_cast<int>(w.objects.size()) ||
            a.target >= static_cast<int>(w.objects.size()))
            throw parse_error("witness morphism indexes a missing object");
        ms.emplace_back(w.objects[a.source], w.objects[a.target], a.action);
    }
    return ms;
}

void need(const Witness& w, std::size_t n) {
    if (w.morphisms.size() != n)
        throw parse_error(w.axiom + " witness needs " + std::to_string(n) + " morphisms, got " +
                          std::to_string(w.morphisms.size()));
}

std::optional<std::string> replay_cone(const ExactStructure& s, const Witness& w) {
    json note;
    try {
        note = json::parse(w.note);
    } catch (const json::exception& e) {
        throw parse_error(std::string("bad cone witness note: ") + e.what());
    }
    try {
        ChainComplex a = complex_from_json(note.at("source").dump());
        ChainComplex b = complex_from_json(note.at("target").dump());
        std::map<int, Hom> comps;
        for (const auto& item : note.at("components").items()) {
            int n = std::stoi(item.key());
            comps.emplace(n, Hom(a.object(n), b.object(n), mat_from_json(item.value())));
        }
        ChainMap f(a, b, std::move(comps));
        AcyclicityResult ra = is_acyclic(a, s);
        if (!ra.acyclic()) return "the source complex is not acyclic in " + s.name;
        AcyclicityResult rb = is_acyclic(b, s);
        if (!rb.acyclic()) return "the target complex is not acyclic in " + s.name;
        AcyclicityWitness out = cone_acyclicity(f, *ra.witness, *rb.witness, s);
        std::optional<std::string> bad = witness_failure(s, out);
        if (bad) return "the assembled witness fails: " + *bad;
        if (!chain_equal(out.complex(), mapping_cone(f)))
            return "the witness does not live on the mapping cone";
        if (!is_acyclic(out.complex(), s).acyclic())
            return "the independent acyclicity decision rejects the cone";
        return std::nullopt;
    } catch (const lemma_falsified& e) {
        return std::string(e.what());
    } catch (const chain_error& e) {
        throw parse_error(std::string("bad cone witness note: ") + e.what());
    } catch (const json::exception& e) {
        throw parse_error(std::string("bad cone witness note: ") + e.what());
    }
}

}  // namespace

std::optional<std::string> replay_lemma_witness(const Witness& w) {
    const auto& names = all_lemma_suites();
    if (std::find(names.begin(), names.end(), w.axiom) == names.end())
        throw parse_error("unknown lemma suite: " + w.axiom);
    ExactStructure s = structure_by_name(w.structure);
    if (w.axiom == "cone-acyclic") return replay_cone(s, w);
    std::vector<Hom> ms = rebuild_morphisms(w);
    try {
        if (w.axiom == "five") {
            need(w, 7);
            ShortFiveResult res = short_five_inverse(
                s, conflation_morphism({ms[0], ms[1]}, {ms[2], ms[3]}, ms[4], ms[5], ms[6]));
            bool ok = hom_equal(res.inverse, inverse_of(ms[5])) &&
                      hom_equal(compose(res.trace.delta, res.trace.alpha),
                                identity_hom(ms[0].target())) &&
                      is_zero_hom(compose(res.trace.delta, res.trace.gamma));
            if (!ok) return "the constructed inverse disagrees with the classified inverse";
            return std::nullopt;
        }
        if (w.axiom == "nine") {
            need(w, 7);
            NineFactorization out = nine_factorization(
                s, conflation_morphism({ms[0], ms[1]}, {ms[2], ms[3]}, ms[4], ms[5], ms[6]));
            bool ok = hom_equal(compose(out.lower.g, out.upper.g), ms[5]) &&
                      is_conflation(s, out.middle.inflation, out.middle.deflation);
            if (!ok) return "the factorization does not reproduce the morphism";
            return std::nullopt;
        }
        if (w.axiom == "double") {
            need(w, 9);
            DoubleConflationData dd{{ms[0], ms[1]}, {ms[2], ms[3]}, ms[4], ms[5],
                                    ms[6],          ms[7],          ms[8]};
            Conflation out = double_conflation(s, dd);
            if (!is_conflation(s, out.inflation, out.deflation))
                return "the spliced row is not a conflation";
            return std::nullopt;
        }
        if (w.axiom == "three-by-three") {
            need(w, 10);
            ThreeByThreeInput in{{ms[0], ms[1]}, {ms[2], ms[3]}, {ms[4], ms[5]},
                                 {ms[6], ms[7]}, {ms[8], ms[9]}};
            Conflation out = three_by_three(s, in);
            bool ok = is_conflation(s, out.inflation, out.deflation) &&
                      hom_equal(compose(out.deflation, in.col_b.deflation),
                                compose(in.col_c.deflation, in.row2.deflation)) &&
                      hom_equal(compose(out.inflation, in.col_a.deflation),
                                compose(in.col_b.deflation, in.row2.inflation));
            if (!ok) return "the constructed third row fails verification";
            return std::nullopt;
        }
        if (w.axiom == "pushout-equiv") {
            need(w, 4);
            PushoutCharacterizations pc =
                pushout_characterizations(s, pushout_square(ms[0], ms[1], ms[2], ms[3]));
            if (pc.po != pc.confl || pc.confl != pc.po_and_pb)
                return "the three pushout readings disagree";
            return std::nullopt;
        }
        if (w.axiom == "defl-sum") {
            need(w, 2);
            DeflSumReport out = defl_sum_reduction(s, ms[0], ms[1]);
            if (out.bracket_is_deflation != out.g_is_deflation)
                return "the bracket and component verdicts disagree";
            return std::nullopt;
        }
        if (w.axiom == "obscure") {
            need(w, 2);
            // Two recorded shapes; the note names the bracket one.
            if (w.note.find("[f; gf]") != std::string::npos) {
                if (s.is_inflation(ms[0]) != s.is_inflation(ms[1]))
                    return "[f; gf] membership disagrees with f";
                return std::nullopt;
            }
            if (s.is_inflation(compose(ms[1], ms[0])) && !s.is_inflation(ms[0]))
                return "the projection composite is a member but the bracket is not";
            return std::nullopt;
        }
        if (w.axiom == "section-decomp") {
            need(w, 1);
            SectionDecomposition dec = section_decomposition(ms[0]);
            FgAb mid = ms[0].target();
            bool ok = hom_equal(compose(dec.r, dec.s), identity_hom(ms[0].source())) &&
                      hom_equal(compose(dec.v, dec.p),
                                identity_hom(mid) - compose(dec.s, dec.r)) &&
                      hom_equal(compose(dec.from_sum, dec.to_sum), identity_hom(mid)) &&
                      hom_equal(compose(dec.to_sum, dec.from_sum),
                                identity_hom(dec.sum.object));
            if (ok && s.side == StructureSide::right && s.has_r0star)
                ok = s.is_inflation(ms[0]);
            if (!ok) return "a section fails the decomposition identities";
            return std::nullopt;
        }
        // injective
        need(w, 1);
        if (w.note.find("hom restriction") != std::string::npos) {
            if (hom_epi_characterization(s, ms[0], {ms[0].source()}) != s.is_inflation(ms[0]))
                return "hom restriction disagrees with membership";
            return std::nullopt;
        }
        FgAb i_obj = ms[0].source();
        if (i_obj.is_zero_object() || s.name == "split") {
            if (!injective_test(s, i_obj, 20, probe_seed_free))
                return "the extension probe fails on " + i_obj.describe();
            return std::nullopt;
        }
        if (s.name == "max") {
            if (injective_test(s, i_obj, 60,
                               i_obj.invariant_factors() == std::vector<Int>{0}
                                   ? probe_seed_free
                                   : probe_seed_torsion))
                return "the probe finds " + i_obj.describe() + " injective";
            return std::nullopt;
        }
        return std::nullopt;
    } catch (const lemma_falsified& e) {
        return std::string(e.what());
    } catch (const not_a_section& e) {
        return std::string(e.what());
    }
}

}  // namespace exactcat
