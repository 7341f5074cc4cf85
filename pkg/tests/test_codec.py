"""Codec behaviour: ids, canonical form, round-trips, tolerant decoding."""

import json
import random

import pytest

from msastix import (
    EXTENSION_ID,
    StixEnvelope,
    build_msa,
    build_target,
    decode_bundle,
    encode_bundle,
    extension_definition,
    make_id,
    to_wire_dict,
)
from msastix.base import STIX_ID_RE, canonical_timestamp
from msastix.codec import decode_object, make_bundle
from msastix.errors import (
    BadIdGrammarError,
    BadTypeTokenError,
    ConfidenceOutOfRangeError,
    InvalidObjectError,
    MalformedJsonError,
)

import helpers


class TestMakeId:
    def test_deterministic_key_gives_identical_ids(self):
        a = make_id("threat-actor", "producerX/APT-X")
        b = make_id("threat-actor", "producerX/APT-X")
        assert a == b

    def test_random_ids_distinct_and_grammatical(self):
        a = make_id("msa")
        b = make_id("msa")
        assert a != b
        assert STIX_ID_RE.match(a) and STIX_ID_RE.match(b)

    def test_bad_type_token(self):
        with pytest.raises(BadTypeTokenError):
            make_id("Threat Actor", "x")

    def test_key_scoped_by_type(self):
        assert make_id("msa", "k") != make_id("target", "k")


class TestTimestamps:
    @pytest.mark.parametrize("raw,expected", [
        ("2024-02-01T00:00:00Z", "2024-02-01T00:00:00.000Z"),
        ("2024-02-01T00:00:00.5Z", "2024-02-01T00:00:00.500Z"),
        ("2024-02-01T00:00:00.123456Z", "2024-02-01T00:00:00.123Z"),
        ("2024-02-01T00:00:00+00:00", "2024-02-01T00:00:00.000Z"),
    ])
    def test_canonicalization(self, raw, expected):
        assert canonical_timestamp(raw) == expected

    @pytest.mark.parametrize("raw", ["2024-02-01", "yesterday",
                                     "2024-02-01T00:00:00+05:00"])
    def test_rejects_non_utc_and_garbage(self, raw):
        with pytest.raises(ValueError):
            canonical_timestamp(raw)


class TestEncode:
    def test_empty_bundle_shape(self):
        text = encode_bundle([])
        data = json.loads(text)
        assert set(data) == {"id", "objects", "type"}
        assert data["objects"] == []
        assert data["type"] == "bundle"
        assert STIX_ID_RE.match(data["id"])
        # canonical: sorted keys, compact separators, no trailing whitespace
        assert text == f'{{"id":"{data["id"]}","objects":[],"type":"bundle"}}'

    def test_memetic_msa_carries_extension(self):
        msa = build_msa(
            "memetic", "narrative seeding", bot_numbers=3,
            memetic=helpers.golden_objects()[3].memetic)
        wire = to_wire_dict(msa)
        ext = wire["extensions"][EXTENSION_ID]
        assert ext["extension_type"] == "new-sdo"
        assert ext["msa_class"] == "memetic"
        assert ext["memetic"]["engagement_level"] == "viral"
        assert ext["memetic"]["impressions_pro"] == 750000
        # snake_case table fields, nothing family-specific at top level
        assert "msa_class" not in wire

    def test_bundle_id_deterministic_from_objects(self):
        objs = helpers.golden_objects()
        assert encode_bundle(objs) == encode_bundle(list(objs))

    def test_keys_sorted_lexicographically(self):
        text = encode_bundle(helpers.golden_objects())
        data = json.loads(text)
        for obj in data["objects"]:
            assert list(obj) == sorted(obj)

    def test_duplicate_pair_rejected(self):
        target = build_target("org", created="2024-01-01T00:00:00.000Z",
                              key="k")
        with pytest.raises(InvalidObjectError):
            encode_bundle([target, target])

    def test_invalid_confidence_rejected(self):
        import dataclasses
        target = build_target("org")
        broken = dataclasses.replace(
            target, common=dataclasses.replace(target.common, confidence=180))
        with pytest.raises(InvalidObjectError):
            encode_bundle([broken])


class TestDecode:
    def test_round_trip_of_golden(self):
        objs = helpers.golden_objects()
        decoded, warnings = decode_bundle(encode_bundle(objs))
        assert warnings == []
        assert decoded == objs

    def test_reencode_byte_identical(self):
        text = helpers.golden_bundle_text()
        decoded, _ = decode_bundle(text)
        assert encode_bundle(decoded) == text

    def test_malformed_json(self):
        with pytest.raises(MalformedJsonError):
            decode_bundle("{not json")

    def test_non_bundle_top_level(self):
        with pytest.raises(MalformedJsonError):
            decode_bundle(json.dumps({"type": "msa", "id": make_id("msa")}))

    def test_bad_id_grammar(self):
        text = helpers.bundle_text_from_dicts(
            [{"type": "msa", "id": "msa--nope"}])
        with pytest.raises(BadIdGrammarError):
            decode_bundle(text)

    def test_confidence_out_of_range(self):
        wire = helpers.golden_wire_dicts()[1]
        wire["confidence"] = 180
        with pytest.raises(ConfidenceOutOfRangeError):
            decode_bundle(helpers.bundle_text_from_dicts([wire]))

    def test_foreign_type_preserved_with_warning(self):
        foreign = {
            "type": "x-custom-thing",
            "id": make_id("x-custom-thing", "one"),
            "spec_version": "2.1",
            "created": "2024-01-01T00:00:00.000Z",
            "modified": "2024-01-01T00:00:00.000Z",
            "payload": {"深": "值"},
        }
        objs, warnings = decode_bundle(
            helpers.bundle_text_from_dicts([foreign]))
        assert len(objs) == 1
        assert isinstance(objs[0], StixEnvelope)
        assert [w.code for w in warnings] == ["FOREIGN_TYPE"]
        assert objs[0].raw_properties["payload"] == {"深": "值"}

    def test_unknown_property_on_known_type_warned_and_kept(self):
        wire = helpers.golden_wire_dicts()[1]
        wire["x_vendor_score"] = 7
        objs, warnings = decode_bundle(helpers.bundle_text_from_dicts([wire]))
        assert [w.code for w in warnings] == ["UNKNOWN_PROPERTY"]
        assert "x_vendor_score" in encode_bundle(objs)

    def test_common_passthrough_properties_do_not_warn(self):
        wire = helpers.golden_wire_dicts()[1]
        wire["labels"] = ["suspicious"]
        wire["description"] = "observed in the wild"
        _, warnings = decode_bundle(helpers.bundle_text_from_dicts([wire]))
        assert warnings == []

    def test_foreign_preservation_loses_no_pairs(self):
        foreign = {
            "type": "indicator",
            "id": make_id("indicator", "one"),
            "spec_version": "2.1",
            "pattern": "[url:value = 'x']",
            "nested": {"a": [1, 2, {"b": None}]},
        }
        wire = helpers.golden_wire_dicts()[3]
        wire["x_extra"] = True
        wire["extensions"][EXTENSION_ID]["x_ext_extra"] = [1]
        wire["extensions"]["extension-definition--11111111-2222-3333-4444-555555555555"] = {
            "extension_type": "property-extension", "other": 1}
        text = helpers.bundle_text_from_dicts([foreign, wire])
        objs, _ = decode_bundle(text)
        reencoded = json.loads(encode_bundle(objs))

        def pairs(value, prefix=""):
            if isinstance(value, dict):
                for k, v in value.items():
                    yield from pairs(v, f"{prefix}/{k}")
            elif isinstance(value, list):
                for i, v in enumerate(value):
                    yield from pairs(v, f"{prefix}[{i}]")
            else:
                yield (prefix, value)

        original_pairs = set(pairs(json.loads(text)["objects"]))
        reencoded_pairs = set(pairs(reencoded["objects"]))
        assert original_pairs <= reencoded_pairs

    def test_strict_mode_raises_on_warnings(self):
        foreign = {"type": "x-thing", "id": make_id("x-thing", "one")}
        text = helpers.bundle_text_from_dicts([foreign])
        decode_bundle(text)  # tolerant default accepts
        with pytest.raises(InvalidObjectError):
            decode_bundle(text, strict=True)

    def test_sloppy_timestamp_normalized_on_known_types(self):
        wire = helpers.golden_wire_dicts()[1]
        wire["created"] = "2024-05-01T00:00:00Z"
        objs, warnings = decode_bundle(helpers.bundle_text_from_dicts([wire]))
        assert warnings == []
        assert objs[0].common.created == "2024-05-01T00:00:00.000Z"

    def test_decode_object_requires_mapping(self):
        with pytest.raises(MalformedJsonError):
            decode_object(["not", "a", "dict"])


class TestExtensionDefinition:
    def test_stable_id_across_calls(self):
        a, b = extension_definition(), extension_definition()
        assert a.id == b.id == EXTENSION_ID
        assert a.type == "extension-definition"
        assert a.raw_properties["name"] == "msa-extension"
        assert a.raw_properties["version"] == "1.0"

    def test_round_trip(self):
        ext = extension_definition()
        decoded, warnings = decode_bundle(encode_bundle([ext]))
        assert warnings == []
        assert decoded == [ext]

    def test_missing_extension_definition_is_validator_warning(self):
        from msastix import validate_bundle
        objs = [o for o in helpers.golden_objects()
                if not isinstance(o, StixEnvelope)]
        codes = [f.code for f in validate_bundle(objs)]
        assert codes == ["MISSING_EXTENSION_DEFINITION"]


class TestRandomizedRoundTrip:
    def test_random_sets_round_trip(self):
        rng = random.Random(991)
        for _ in range(150):
            objs = helpers.random_objects(rng)
            text = encode_bundle(objs)
            decoded, warnings = decode_bundle(text)
            assert warnings == []
            assert decoded == objs
            assert encode_bundle(decoded) == text

    def test_bundle_round_trip_preserves_bundle_id(self):
        objs = helpers.golden_objects()
        bundle = make_bundle(objs)
        text = encode_bundle(bundle)
        assert json.loads(text)["id"] == bundle.id
