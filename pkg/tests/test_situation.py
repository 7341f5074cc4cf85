"""Situation assembly and the completeness/confidence scoring rules."""

import itertools
import math
import random

import pytest

from msastix import (
    assemble_campaign,
    assemble_situations,
    attach_opinion,
    build_msa,
    build_target,
    build_threat_actor,
    decode_bundle,
    diamond_roles,
    encode_bundle,
    extension_definition,
    score,
    score_report_json,
)
from msastix.errors import UnvalidatedBundleError
from msastix.situation import (
    ASSUMED_CONFIDENCE,
    Situation,
    VERTEX_NAMES,
    VertexRef,
)

import helpers


def brute_force_score(present_confidences):
    """Independent implementation of the scoring definition.

    Input: mapping vertex -> confidence for present vertices only.
    Completeness counts presence in quarters; confidence is
    exp(mean(log(c/100))) over all four vertices when complete, else 0.
    """
    completeness = len(present_confidences) / 4
    if len(present_confidences) < 4:
        return completeness, 0.0
    values = [c / 100 for c in present_confidences.values()]
    if any(v == 0.0 for v in values):
        return completeness, 0.0
    confidence = math.exp(sum(math.log(v) for v in values) / 4)
    return completeness, confidence


def make_situation(present_confidences) -> Situation:
    vertices = {v: None for v in VERTEX_NAMES}
    for vertex, conf in present_confidences.items():
        vertices[vertex] = VertexRef(f"{vertex}-id", conf)
    gaps = tuple(v for v in VERTEX_NAMES if vertices[v] is None)
    return Situation(campaign_id="campaign--test", vertices=vertices,
                     gaps=gaps)


class TestAssemble:
    def test_full_diamond(self):
        objects = helpers.golden_objects()
        situations = assemble_situations(objects)
        assert len(situations) == 1
        situation = situations[0]
        assert situation.gaps == ()
        confs = {v: situation.vertices[v].confidence for v in VERTEX_NAMES}
        assert confs == {"actor": 80, "infrastructure": 60, "msa": 90,
                         "target": 100}
        assert not any(ref.assumed for ref in situation.vertices.values())

    def test_partial_diamond_gaps(self):
        actor = build_threat_actor("A", "team", 1, "x", confidence=70)
        msa = build_msa("supportive", "x", confidence=80)
        diamond, rels = assemble_campaign(actor=actor, msa=msa)
        situations = assemble_situations([actor, msa, diamond, *rels])
        assert situations[0].gaps == ("infrastructure", "target")

    def test_two_campaigns_sharing_an_actor(self):
        # oracle: manual graph walk over the fixture
        actor = build_threat_actor("A", "team", 1, "x")
        t1, t2 = build_target("org-1"), build_target("org-2")
        d1, r1 = assemble_campaign(actor=actor, target=t1)
        d2, r2 = assemble_campaign(actor=actor, target=t2)
        objects = [actor, t1, t2, d1, *r1, d2, *r2]
        situations = assemble_situations(objects)
        assert len(situations) == 2
        assert {s.campaign_id for s in situations} == {
            d1.campaign_id, d2.campaign_id}
        assert all(s.vertices["actor"].object_id == actor.id
                   for s in situations)
        walked = {}
        for rel in r1 + r2:
            if rel.relationship_type == "targets":
                walked[rel.source_ref] = rel.target_ref
        for situation in situations:
            assert situation.vertices["target"].object_id == \
                walked[situation.campaign_id]

    def test_campaigns_sorted_by_id(self):
        objs = []
        diamonds = []
        for key in ("zz", "aa", "mm"):
            target = build_target(f"org-{key}")
            diamond, rels = assemble_campaign(target=target, key=key)
            diamonds.append(diamond)
            objs.extend([target, diamond, *rels])
        situations = assemble_situations(objs)
        assert [s.campaign_id for s in situations] == \
            sorted(d.campaign_id for d in diamonds)

    def test_dangling_bundle_rejected(self):
        actor = build_threat_actor("A", "team", 1, "x")
        diamond, rels = assemble_campaign(actor=actor)
        with pytest.raises(UnvalidatedBundleError):
            assemble_situations([diamond, *rels])  # actor object missing

    def test_missing_confidence_assumed_at_50(self):
        target = build_target("org")  # no confidence property
        diamond, rels = assemble_campaign(target=target)
        situation = assemble_situations([target, diamond, *rels])[0]
        ref = situation.vertices["target"]
        assert ref.confidence == ASSUMED_CONFIDENCE
        assert ref.assumed

    def test_wire_round_trip_preserves_situations(self):
        objects = helpers.golden_objects()
        direct = assemble_situations(objects)
        decoded, _ = decode_bundle(encode_bundle(objects))
        assert assemble_situations(decoded) == direct


class TestScore:
    def test_all_perfect(self):
        result = score(make_situation(
            {v: 100 for v in VERTEX_NAMES}))
        assert result.completeness == 1.0
        assert result.confidence == 1.0
        assert result.gap_report == ()

    def test_worked_case(self):
        result = score(make_situation({
            "actor": 80, "infrastructure": 60, "msa": 90, "target": 100}))
        assert abs(result.confidence - 0.8108) <= 1e-4
        assert abs(result.confidence - 0.8107200928842206) < 1e-12

    def test_half_diamond_zero_confidence(self):
        result = score(make_situation({"actor": 100, "msa": 100}))
        assert result.completeness == 0.5
        assert result.confidence == 0.0
        missing = [e.vertex for e in result.gap_report if e.kind == "missing"]
        assert missing == ["infrastructure", "target"]
        fields = {e.vertex: e.missing_fields for e in result.gap_report}
        assert "infrastructure_type" in fields["infrastructure"]
        assert "current" in fields["target"]

    def test_assumed_confidence_flagged_in_gap_report(self):
        vertices = {v: VertexRef(f"{v}-id", 50, assumed=(v == "msa"))
                    for v in VERTEX_NAMES}
        situation = Situation("campaign--x", vertices, ())
        entries = [e for e in score(situation).gap_report
                   if e.kind == "assumed-confidence"]
        assert [e.vertex for e in entries] == ["msa"]

    def test_oracle_equivalence_exhaustive(self):
        # all 16 presence subsets x confidences from {0,25,50,75,100}^4
        grid = (0, 25, 50, 75, 100)
        cases = 0
        for mask in range(16):
            present = [VERTEX_NAMES[i] for i in range(4) if mask & (1 << i)]
            for confs in itertools.product(grid, repeat=4):
                chosen = {v: confs[i] for i, v in enumerate(VERTEX_NAMES)
                          if v in present}
                result = score(make_situation(chosen))
                completeness, confidence = brute_force_score(chosen)
                assert result.completeness == completeness
                assert abs(result.confidence - confidence) < 1e-9
                cases += 1
        assert cases == 16 * 625

    def test_monotone_in_added_vertex(self):
        rng = random.Random(31)
        for _ in range(200):
            present = {v: rng.choice((0, 25, 50, 75, 100))
                       for v in VERTEX_NAMES if rng.random() < 0.6}
            base = score(make_situation(present))
            absent = [v for v in VERTEX_NAMES if v not in present]
            if not absent:
                continue
            extended = dict(present)
            extended[rng.choice(absent)] = rng.choice((0, 25, 50, 75, 100))
            assert score(make_situation(extended)).completeness \
                >= base.completeness

    def test_monotone_in_single_confidence(self):
        rng = random.Random(32)
        for _ in range(200):
            confs = {v: rng.randint(0, 99) for v in VERTEX_NAMES}
            base = score(make_situation(confs))
            vertex = rng.choice(VERTEX_NAMES)
            raised = dict(confs)
            raised[vertex] = rng.randint(confs[vertex] + 1, 100)
            assert score(make_situation(raised)).confidence \
                >= base.confidence

    def test_permutation_symmetry(self):
        rng = random.Random(33)
        for _ in range(100):
            values = [rng.randint(0, 100) for _ in range(4)]
            scores = set()
            for perm in itertools.permutations(values):
                confs = dict(zip(VERTEX_NAMES, perm))
                scores.add(round(score(make_situation(confs)).confidence, 12))
            assert len(scores) == 1

    def test_boundary_conditions(self):
        # confidence 1 iff complete with all 100
        assert score(make_situation(
            {v: 100 for v in VERTEX_NAMES})).confidence == 1.0
        almost = {v: 100 for v in VERTEX_NAMES}
        almost["msa"] = 99
        assert score(make_situation(almost)).confidence < 1.0
        # confidence 0 iff incomplete or a zero confidence
        zeroed = {v: 100 for v in VERTEX_NAMES}
        zeroed["actor"] = 0
        assert score(make_situation(zeroed)).confidence == 0.0
        assert score(make_situation({})).confidence == 0.0


class TestRolesAndReports:
    def test_full_diamond_roles(self):
        roles = diamond_roles(make_situation({v: 50 for v in VERTEX_NAMES}))
        assert roles == {"actor": "Attacker", "target": "Victim",
                         "infrastructure": "Medium", "msa": "Capability"}

    def test_actor_only_roles(self):
        assert diamond_roles(make_situation({"actor": 50})) == {
            "actor": "Attacker"}

    def test_empty_situation_roles(self):
        assert diamond_roles(make_situation({})) == {}

    def test_report_json_shape_and_stability(self):
        situation = make_situation({"actor": 80, "msa": 90})
        result = score(situation)
        text = score_report_json(situation, result)
        assert text == score_report_json(situation, result)
        assert text.startswith('{"campaign_id":"campaign--test"')
        assert '"completeness":0.5' in text
        assert '"confidence":0.0' in text
        assert '"vertex":"infrastructure"' in text

    def test_opinion_does_not_disturb_situations(self):
        objects = helpers.golden_objects()
        msa = objects[3]
        objects.append(attach_opinion([msa], "disagree"))
        assert len(assemble_situations(objects)) == 1

    def test_extension_definition_ignored_by_walker(self):
        target = build_target("org")
        diamond, rels = assemble_campaign(target=target)
        situations = assemble_situations(
            [extension_definition(), target, diamond, *rels])
        assert len(situations) == 1
