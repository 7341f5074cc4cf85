"""Shared builders for the test suite: the golden diamond bundle, corruption
helpers, and a seeded random generator of valid object sets."""

from __future__ import annotations

import json
import random
from dataclasses import replace
from datetime import datetime, timezone

from msastix import (
    AptProfile,
    LogicalInfra,
    MemeticProfile,
    PhysicalInfra,
    TransgressiveProfile,
    assemble_campaign,
    attach_opinion,
    build_infrastructure,
    build_msa,
    build_target,
    build_threat_actor,
    encode_bundle,
    extension_definition,
    to_wire_dict,
)
from msastix.base import format_timestamp
from msastix.taxii.store import TLP_MARKING_IDS

GOLDEN_CREATED = "2024-05-01T00:00:00.000Z"
PRODUCER = "cert-example"


def with_labels(obj, labels):
    common = replace(obj.common, raw_properties={
        **obj.common.raw_properties, "labels": list(labels)})
    return replace(obj, common=common)


def golden_objects():
    """A bundle exercising every attribute of all four families and both
    MSA profiles (plus a supportive MSA, campaign wiring, and an opinion)."""
    actor = build_threat_actor(
        "APT-X", "government", 7, "regional destabilisation",
        AptProfile(affiliation="state Z", support_type="direct",
                   human_resources=400),
        mitre_id="G0096",
        confidence=80, created=GOLDEN_CREATED, key=f"{PRODUCER}/apt-x")
    infra = build_infrastructure(
        "botnet--narrative",
        logical=LogicalInfra(mainbots=("@seed-a", "@seed-b"), c2="DM relay",
                             platform="microblog", toolkit="headless browser"),
        physical=PhysicalInfra(device="VPS fleet", location="region Q"),
        confidence=60, created=GOLDEN_CREATED, key=f"{PRODUCER}/net-1")
    memetic = build_msa(
        "memetic", "narrative seeding",
        bot_numbers=1200,
        bot_roles=("generator", "short-term-supporter"),
        bot_actions=("post", "share", "like"),
        c2="covert channel over DMs",
        supportive_ai="language generation",
        memetic=MemeticProfile(
            start_date="2024-02-01T00:00:00.000Z",
            end_date="2024-04-01T00:00:00.000Z",
            platform="microblog", topic="elections",
            keywords=("vote", "fraud"), mcf="short video", scf="image macro",
            landing_page="https://example.test/landing",
            engagement_level="viral", impressions=500000,
            impressions_pro=750000),
        technique_refs=("T0049",),
        confidence=90, created=GOLDEN_CREATED, key=f"{PRODUCER}/wave-1")
    transgressive = build_msa(
        "transgressive", "credential capture via trusted personas",
        bot_numbers=35,
        bot_roles=("generator",),
        bot_actions=("message",),
        transgressive=TransgressiveProfile(
            first_observation="2024-03-05T08:30:00.000Z",
            intrusion_type="social spearphishing",
            ckc_stage="delivery",
            ioc=("sha256:9f2b1c", "lure.example.test")),
        technique_refs=("T0086.002",),
        confidence=70, created=GOLDEN_CREATED, key=f"{PRODUCER}/intrusion-1")
    supportive = build_msa(
        "supportive", "relay tasking to field accounts",
        bot_numbers=40,
        bot_roles=("long-term-supporter",),
        bot_actions=("follow", "repost"),
        c2="status-update steganography",
        supportive_ai="image generation",
        confidence=65, created=GOLDEN_CREATED, key=f"{PRODUCER}/relay-1")
    target = build_target(
        "electoral commission", ("media houses", "regional observers"),
        confidence=100, created=GOLDEN_CREATED, key=f"{PRODUCER}/t-1")
    diamond, rels = assemble_campaign(
        actor=actor, infra=infra, msa=memetic, target=target,
        created=GOLDEN_CREATED, key=f"{PRODUCER}/c-1")
    opinion = attach_opinion(
        [memetic], "strongly-disagree", "mischaracterised domestic discourse",
        created=GOLDEN_CREATED, key=f"{PRODUCER}/o-1")
    return [extension_definition(), actor, infra, memetic, transgressive,
            supportive, target, diamond, *rels, opinion]


def golden_bundle_text() -> str:
    return encode_bundle(golden_objects())


def golden_wire_dicts() -> list:
    return [to_wire_dict(obj) for obj in golden_objects()]


def bundle_text_from_dicts(dicts) -> str:
    return json.dumps({
        "type": "bundle",
        "id": "bundle--00000000-0000-4000-8000-000000000000",
        "objects": dicts,
    })


def find_wire(dicts, obj_type, predicate=None) -> dict:
    for d in dicts:
        if d["type"] == obj_type and (predicate is None or predicate(d)):
            return d
    raise AssertionError(f"no {obj_type} object matching predicate")


def ext_map(wire: dict) -> dict:
    from msastix import EXTENSION_ID
    return wire["extensions"][EXTENSION_ID]


# --- random valid object sets -------------------------------------------------

_WORDS = ("ridge", "ember", "quill", "vector", "lattice", "orchid", "cinder",
          "meridian", "sable", "halcyon", "krait", "tundra", "vesper", "onyx")

_INFRA_TYPES = ("hosting", "phishing", "staging", "reconnaissance",
                "anonymization", "command-and-control",
                "botnet--generic", "botnet--narrative",
                "amplification--flooding", "amplification--narrative")

_ENGAGEMENTS = ("viral", "organic", "amplified", "dormant")

_CKC = ("reconnaissance", "weaponization", "delivery", "exploitation",
        "installation", "command-and-control", "actions-on-objectives")

_CAPACITIES = ("individual", "club", "contest", "team", "organization",
               "government")

_ROLES = ("generator", "short-term-supporter", "long-term-supporter")

_OPINIONS = ("strongly-disagree", "disagree", "neutral", "agree",
             "strongly-agree")


def _word(rng: random.Random) -> str:
    return rng.choice(_WORDS)


def _ts(rng: random.Random) -> str:
    epoch = rng.randint(1_500_000_000, 1_750_000_000)
    millis = rng.randint(0, 999) / 1000
    return format_timestamp(
        datetime.fromtimestamp(epoch + millis, tz=timezone.utc))


def _conf(rng: random.Random):
    return rng.randint(0, 100) if rng.random() < 0.6 else None


def _markings(rng: random.Random):
    if rng.random() < 0.3:
        return (TLP_MARKING_IDS[rng.choice(("clear", "green", "amber", "red"))],)
    return ()


def _maybe_labels(rng: random.Random, obj):
    if rng.random() < 0.3:
        return with_labels(obj, rng.sample(
            ("malicious", "suspicious", "astroturfing", "psyop"), k=2))
    return obj


def random_actor(rng: random.Random):
    apt = None
    if rng.random() < 0.5:
        apt = AptProfile(affiliation=_word(rng), support_type=_word(rng),
                         human_resources=rng.randint(0, 5000))
    return _maybe_labels(rng, build_threat_actor(
        f"{_word(rng)}-{rng.randint(1, 99)}", rng.choice(_CAPACITIES),
        rng.randint(0, 30), f"pursue {_word(rng)}",
        apt,
        mitre_id=f"G{rng.randint(1, 999):04d}" if rng.random() < 0.4 else None,
        confidence=_conf(rng), marking_refs=_markings(rng),
        created=_ts(rng)))


def random_infrastructure(rng: random.Random):
    logical = physical = None
    pick = rng.random()
    if pick < 0.7:
        logical = LogicalInfra(
            mainbots=tuple(f"@{_word(rng)}{i}" for i in range(rng.randint(1, 4))),
            c2=f"{_word(rng)} relay", platform=_word(rng), toolkit=_word(rng))
    if pick > 0.3:
        physical = PhysicalInfra(device=_word(rng), location=_word(rng))
    return _maybe_labels(rng, build_infrastructure(
        rng.choice(_INFRA_TYPES), logical, physical,
        confidence=_conf(rng), marking_refs=_markings(rng), created=_ts(rng)))


def random_msa(rng: random.Random):
    msa_class = rng.choice(("memetic", "transgressive", "supportive"))
    memetic = transgressive = None
    if msa_class == "memetic":
        start = _ts(rng)
        end = None
        if rng.random() < 0.5:
            end = format_timestamp(datetime.fromtimestamp(
                1_760_000_000 + rng.randint(0, 10_000), tz=timezone.utc))
        memetic = MemeticProfile(
            start_date=start, end_date=end, platform=_word(rng),
            topic=_word(rng),
            keywords=tuple(_word(rng) for _ in range(rng.randint(0, 3))),
            mcf=_word(rng),
            scf=_word(rng) if rng.random() < 0.5 else None,
            landing_page=f"https://{_word(rng)}.example" if rng.random() < 0.5
            else None,
            engagement_level=rng.choice(_ENGAGEMENTS),
            impressions=rng.randint(0, 10**7),
            impressions_pro=rng.randint(0, 10**7) if rng.random() < 0.5
            else None)
    elif msa_class == "transgressive":
        transgressive = TransgressiveProfile(
            first_observation=_ts(rng),
            intrusion_type=f"{_word(rng)} violation",
            ckc_stage=rng.choice(_CKC),
            ioc=tuple(f"ioc:{_word(rng)}{i}"
                      for i in range(rng.randint(0, 3))))
    return _maybe_labels(rng, build_msa(
        msa_class, f"drive {_word(rng)}",
        bot_numbers=rng.randint(0, 100_000),
        bot_roles=rng.sample(_ROLES, k=rng.randint(0, 3)),
        bot_actions=tuple(rng.sample(("post", "share", "like", "follow",
                                      "message"), k=rng.randint(0, 3))),
        c2=f"{_word(rng)} channel" if rng.random() < 0.4 else None,
        supportive_ai=_word(rng) if rng.random() < 0.4 else None,
        memetic=memetic, transgressive=transgressive,
        technique_refs=tuple(
            f"T{rng.randint(1, 150):04d}" + (f".{rng.randint(1, 3):03d}"
                                             if rng.random() < 0.4 else "")
            for _ in range(rng.randint(0, 3))),
        confidence=_conf(rng), marking_refs=_markings(rng), created=_ts(rng)))


def random_target(rng: random.Random):
    return _maybe_labels(rng, build_target(
        f"{_word(rng)} institution",
        tuple(f"{_word(rng)} sector" for _ in range(rng.randint(0, 3))),
        confidence=_conf(rng), marking_refs=_markings(rng), created=_ts(rng)))


def random_objects(rng: random.Random) -> list:
    """One randomized, fully valid object set (records only, no foreign
    envelopes, so decoding must produce zero warnings)."""
    objects = []
    if rng.random() < 0.5:
        objects.append(extension_definition())
    actors = [random_actor(rng) for _ in range(rng.randint(0, 2))]
    infras = [random_infrastructure(rng) for _ in range(rng.randint(0, 2))]
    msas = [random_msa(rng) for _ in range(rng.randint(0, 2))]
    targets = [random_target(rng) for _ in range(rng.randint(0, 2))]
    objects.extend(actors + infras + msas + targets)
    vertices = {
        "actor": actors[0] if actors else None,
        "infra": infras[0] if infras else None,
        "msa": msas[0] if msas else None,
        "target": targets[0] if targets else None,
    }
    present = {k: v for k, v in vertices.items() if v is not None}
    if present and rng.random() < 0.7:
        diamond, rels = assemble_campaign(created=_ts(rng), **present)
        objects.append(diamond)
        objects.extend(rels)
        if rng.random() < 0.4:
            objects.append(attach_opinion(
                [diamond], rng.choice(_OPINIONS),
                f"{_word(rng)} assessment" if rng.random() < 0.5 else None,
                created=_ts(rng)))
    rng.shuffle(objects)
    return objects
