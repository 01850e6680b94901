"""Finite group presentations and their text format.

Text format::

    # comment
    generators: a1 a2 b1 b2
    relator: a1 a2 a1^-1 a2^-1

A structured document (JSON object with a ``presentation`` key holding
``generators`` and ``relators`` as word strings) is accepted too, so the
output of ``gen --format doc`` can be piped anywhere a presentation is read.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .words import Alphabet, Word, WordError, cyclic_reduce


class PresentationError(ValueError):
    pass


@dataclass
class Presentation:
    alphabet: Alphabet
    relators: list = field(default_factory=list)

    def __post_init__(self):
        rels = []
        for r in self.relators:
            _, core = cyclic_reduce(tuple(r))
            if not core:
                raise PresentationError("empty relator")
            rels.append(core)
        self.relators = rels

    @property
    def generators(self) -> tuple:
        return self.alphabet.names

    def to_text(self, powers: bool = False) -> str:
        lines = ["generators: " + " ".join(self.alphabet.names)]
        lines += ["relator: " + self.alphabet.format(r, powers=powers) for r in self.relators]
        return "\n".join(lines) + "\n"

    def to_doc(self) -> dict:
        return {
            "generators": list(self.alphabet.names),
            "relators": [self.alphabet.format(r, powers=True) for r in self.relators],
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "Presentation":
        alphabet = Alphabet(doc["generators"])
        return cls(alphabet, [alphabet.parse(r) for r in doc["relators"]])

    def total_length(self) -> int:
        return sum(len(r) for r in self.relators)


def parse_presentation(text: str) -> Presentation:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(stripped)
        except json.JSONDecodeError as err:
            raise PresentationError(f"malformed document: {err}") from None
        if "presentation" in doc:
            doc = doc["presentation"]
        try:
            return Presentation.from_doc(doc)
        except (KeyError, WordError) as err:
            raise PresentationError(f"malformed presentation document: {err}") from None

    alphabet = None
    relators: list[Word] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise PresentationError(f"line {lineno}: expected 'key: value'")
        key = key.strip()
        try:
            if key == "generators":
                if alphabet is not None:
                    raise PresentationError(f"line {lineno}: generators declared twice")
                alphabet = Alphabet(rest.split())
            elif key == "relator":
                if alphabet is None:
                    raise PresentationError(f"line {lineno}: relator before generators")
                relators.append(alphabet.parse(rest))
            else:
                raise PresentationError(f"line {lineno}: unknown key {key!r}")
        except WordError as err:
            raise PresentationError(f"line {lineno}: {err}") from None
    if alphabet is None:
        raise PresentationError("no generators line")
    return Presentation(alphabet, relators)
