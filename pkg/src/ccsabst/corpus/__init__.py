"""Checked-in encodings, formulas and abstraction scripts, each with a
manifest of expected results.

Entry layout: ``corpus/<id>/`` holding one or more ``.ccs`` sources
(``model.ccs`` is the default), an optional ``props.mu``, any number of
``.abst`` scripts, and a ``manifest`` file of lines

    key = value [TAG]

where TAG records the provenance of the expectation.  Key shapes:

    <src>.states                  state count of <src>.ccs
    <src>.minimized_states        strong-bisimulation quotient size
    <src>.check.<prop>            model-checking verdict
    <src>.fragment.<prop>         formula fragment tag
    <src>.sim.<A>.<B>             weak-simulation verdict between roots
    script.<stem>.source          .ccs file the script starts from
    script.<stem>.final_states    state count after replay
    script.<stem>.check.<prop>    verdict on the replayed family
    script.<stem>.certified       every step passes verify_step
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field
from pathlib import Path as FsPath

from ..core import DEFAULT_MAX_STATES, Family, build_lts
from ..errors import CcsError
from ..logic import check, classify
from ..parsing import Script, SourceFile, parse_ccs, parse_mu, parse_script
from ..simulation import strong_quotient_size, weakly_simulated_by


@dataclass(frozen=True)
class ManifestEntry:
    key: str
    value: str
    tag: str  # PAPER | TRIVIAL | DERIVED


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    sources: dict[str, str]  # stem -> .ccs text
    props: str  # .mu text, may be empty
    scripts: dict[str, str]  # stem -> .abst text
    manifest: tuple[ManifestEntry, ...]

    def family(self, stem: str = "model") -> SourceFile:
        if stem not in self.sources:
            raise CcsError(f"corpus entry {self.id} has no source {stem}.ccs")
        return parse_ccs(self.sources[stem])

    def formulas(self, stem: str = "model"):
        sets = self.family(stem).sets if stem in self.sources else {}
        return parse_mu(self.props, sets) if self.props else {}

    def script(self, stem: str) -> Script:
        if stem not in self.scripts:
            raise CcsError(f"corpus entry {self.id} has no script {stem}.abst")
        return parse_script(self.scripts[stem])


def _root() -> FsPath:
    return FsPath(str(importlib.resources.files(__package__)))


def list_ids() -> list[str]:
    return sorted(
        p.name for p in _root().iterdir() if p.is_dir() and (p / "manifest").exists()
    )


def _parse_manifest(text: str) -> tuple[ManifestEntry, ...]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, rest = line.partition("=")
        if not eq:
            raise CcsError(f"manifest line {lineno}: missing '='")
        rest = rest.strip()
        if not (rest.endswith("]") and "[" in rest):
            raise CcsError(f"manifest line {lineno}: missing provenance tag")
        value, _, tag = rest.rpartition("[")
        out.append(ManifestEntry(key.strip(), value.strip(), tag.rstrip("]")))
    return tuple(out)


def load(id: str) -> CorpusEntry:
    path = _root() / id
    if not (path / "manifest").exists():
        raise CcsError(f"unknown corpus entry: {id}")
    sources = {
        p.stem: p.read_text() for p in sorted(path.glob("*.ccs"))
    }
    scripts = {
        p.stem: p.read_text() for p in sorted(path.glob("*.abst"))
    }
    props_file = path / "props.mu"
    props = props_file.read_text() if props_file.exists() else ""
    manifest = _parse_manifest((path / "manifest").read_text())
    return CorpusEntry(id, sources, props, scripts, manifest)


@dataclass(frozen=True)
class DiffLine:
    key: str
    expected: str
    actual: str

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


def run(id: str, max_states: int = DEFAULT_MAX_STATES) -> list[DiffLine]:
    """Replay every expectation of the entry's manifest and report the
    actual outcomes next to the expected ones."""
    entry = load(id)
    lts_cache: dict[str, object] = {}
    fam_cache: dict[str, SourceFile] = {}

    def src(stem: str) -> SourceFile:
        if stem not in fam_cache:
            fam_cache[stem] = entry.family(stem)
        return fam_cache[stem]

    def lts_of(stem: str):
        if stem not in lts_cache:
            lts_cache[stem] = build_lts(src(stem).family, max_states)
        return lts_cache[stem]

    # replay each script once; certify when the manifest expects it
    script_keys = {e.key for e in entry.manifest}
    replays: dict[str, tuple[Family, str]] = {}
    for stem in entry.scripts:
        source_exp = next(
            (e.value for e in entry.manifest if e.key == f"script.{stem}.source"),
            "model.ccs",
        )
        start = src(source_exp.removesuffix(".ccs")).family
        certify = f"script.{stem}.certified" in script_keys
        from ..abstraction import run_script

        try:
            final, log = run_script(
                start, entry.script(stem), certify=certify, max_states=max_states
            )
            certified = "true" if all(r.certified == "certified" for r in log) and certify else (
                "skipped" if not certify else "false"
            )
        except Exception as exc:  # report the failure in the diff
            replays[stem] = (None, f"error: {exc}")
            continue
        replays[stem] = (final, certified)

    out: list[DiffLine] = []
    for e in entry.manifest:
        parts = e.key.split(".")
        try:
            if parts[0] == "script":
                stem = parts[1]
                final, certified = replays[stem]
                if final is None:
                    out.append(DiffLine(e.key, e.value, certified))
                    continue
                kind = parts[2]
                if kind == "source":
                    out.append(DiffLine(e.key, e.value, e.value))
                elif kind == "final_states":
                    actual = build_lts(final, max_states).num_states
                    out.append(DiffLine(e.key, e.value, str(actual)))
                elif kind == "check":
                    phi = entry.formulas()[parts[3]]
                    actual = check(build_lts(final, max_states), phi)
                    out.append(DiffLine(e.key, e.value, str(actual).lower()))
                elif kind == "certified":
                    out.append(DiffLine(e.key, e.value, certified))
                else:
                    out.append(DiffLine(e.key, e.value, "error: unknown key"))
                continue
            stem, kind = parts[0], parts[1]
            if kind == "states":
                out.append(DiffLine(e.key, e.value, str(lts_of(stem).num_states)))
            elif kind == "minimized_states":
                out.append(
                    DiffLine(e.key, e.value, str(strong_quotient_size(lts_of(stem))))
                )
            elif kind == "check":
                phi = parse_mu(entry.props, src(stem).sets)[parts[2]]
                out.append(
                    DiffLine(e.key, e.value, str(check(lts_of(stem), phi)).lower())
                )
            elif kind == "fragment":
                phi = parse_mu(entry.props, src(stem).sets)[parts[2]]
                out.append(DiffLine(e.key, e.value, classify(phi)))
            elif kind == "sim":
                left = src(stem).family.with_root(parts[2])
                right = src(stem).family.with_root(parts[3])
                holds, _ = weakly_simulated_by(
                    build_lts(left, max_states), build_lts(right, max_states)
                )
                out.append(DiffLine(e.key, e.value, str(holds).lower()))
            else:
                out.append(DiffLine(e.key, e.value, "error: unknown key"))
        except Exception as exc:
            out.append(DiffLine(e.key, e.value, f"error: {exc}"))
    return out
