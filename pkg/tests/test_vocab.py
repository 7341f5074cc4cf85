"""Namespaced vocabulary resolution."""

import pytest

from msastix import NamespacedTerm, VocabRegistry, default_registry
from msastix.errors import AmbiguousTermError, UnknownTermError
from msastix.vocab import dump_registry, load_registry, resolve_vocab_term


@pytest.fixture
def registry():
    return default_registry()


class TestResolve:
    def test_ambiguous_amplification(self, registry):
        with pytest.raises(AmbiguousTermError) as exc_info:
            resolve_vocab_term(registry, "infrastructure-type", "amplification")
        candidates = exc_info.value.candidates
        assert [str(t) for t in candidates] == [
            "amplification@flooding", "amplification@narrative"]

    def test_hint_resolves(self, registry):
        term = resolve_vocab_term(registry, "infrastructure-type",
                                  "amplification", "narrative")
        assert term == NamespacedTerm(
            "amplification", "narrative", term.definition)
        assert term.qualified == "amplification--narrative"

    def test_embedded_hint_resolves(self, registry):
        term = resolve_vocab_term(registry, "infrastructure-type",
                                  "amplification--flooding")
        assert term.namespace == "flooding"

    def test_singleton_resolution(self, registry):
        term = resolve_vocab_term(registry, "infrastructure-type", "hosting")
        assert str(term) == "hosting@generic"

    def test_unknown_term(self, registry):
        with pytest.raises(UnknownTermError):
            resolve_vocab_term(registry, "infrastructure-type", "teleportation")

    def test_unknown_vocab(self, registry):
        with pytest.raises(UnknownTermError):
            resolve_vocab_term(registry, "no-such-vocab", "hosting")

    def test_hint_to_missing_namespace(self, registry):
        with pytest.raises(UnknownTermError):
            resolve_vocab_term(registry, "infrastructure-type",
                               "hosting", "narrative")

    def test_total_over_registry(self, registry):
        # every surface either resolves, is unknown, or is ambiguous with
        # the full candidate list; never a silent namespace pick
        for vocab_name in registry.names():
            surfaces = {t.surface for t in registry.terms(vocab_name)}
            for surface in surfaces | {"definitely-not-registered"}:
                try:
                    term = resolve_vocab_term(registry, vocab_name, surface)
                    assert term.surface == surface
                except AmbiguousTermError as exc:
                    assert len(exc.candidates) > 1
                    assert all(t.surface == surface for t in exc.candidates)
                except UnknownTermError:
                    assert surface not in surfaces


class TestRegistry:
    def test_malware_type_ships_open(self, registry):
        assert registry.is_open("malware-type")

    def test_with_terms_extends(self, registry):
        extended = registry.with_terms("malware-type", [
            NamespacedTerm("socialbot-dropper", "msa", "x")])
        assert not extended.is_open("malware-type")
        term = resolve_vocab_term(extended, "malware-type", "socialbot-dropper")
        assert term.namespace == "msa"
        # original registry untouched
        assert registry.is_open("malware-type")

    def test_ambiguous_surfaces(self, registry):
        assert registry.ambiguous_surfaces("infrastructure-type") == (
            "amplification", "botnet")

    def test_file_round_trip(self, registry, tmp_path):
        path = tmp_path / "registry.json"
        path.write_text(dump_registry(registry), encoding="utf-8")
        loaded = load_registry(str(path))
        assert loaded.vocabularies == registry.vocabularies

    def test_duplicate_pair_rejected(self, tmp_path):
        path = tmp_path / "registry.json"
        path.write_text(
            '{"v": [{"surface": "a", "namespace": "n", "definition": ""},'
            ' {"surface": "a", "namespace": "n", "definition": "again"}]}',
            encoding="utf-8")
        with pytest.raises(ValueError):
            load_registry(str(path))
