"""Fault injection: single-coefficient perturbations of case-file polynomials."""
from __future__ import annotations

import copy
import re
from dataclasses import dataclass
from typing import Iterator

from ..polycore import RingDescriptor, format_monomial
from .cases import CaseFile

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

# payload keys whose string leaves are structural polynomial data
DATA_KEYS = frozenset({"relations", "derivation", "embedding", "images", "inverse",
                       "source_derivation", "morphism", "base"})


@dataclass(frozen=True)
class Mutation:
    case: CaseFile
    path: tuple
    monomial: str

    def describe(self) -> str:
        return f"{self.case.id}:{'/'.join(map(str, self.path))} += {self.monomial}"


def monomials_of(text: str) -> list[str]:
    """Monomials of a polynomial string, every identifier treated as a Laurent variable."""
    names = sorted(set(_IDENT.findall(text)))
    R = RingDescriptor.make(names, names)
    f = R.parse(text)
    return [format_monomial(R, m) or "1" for m in sorted(f.terms)] or ["1"]


def _leaves(obj, path=()):
    if isinstance(obj, str):
        yield path, obj
    elif isinstance(obj, dict):
        for k, v in obj.items():
            yield from _leaves(v, path + (k,))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _leaves(v, path + (i,))


def _set(obj, path, value) -> None:
    for k in path[:-1]:
        obj = obj[k]
    obj[path[-1]] = value


def coefficient_mutations(case: CaseFile) -> Iterator[Mutation]:
    """Every (polynomial, monomial) pair whose coefficient can be bumped by one."""
    for path, text in _leaves(case.payload):
        if path[0] == "base":        # variable names, not polynomials
            continue
        if any(isinstance(k, str) and k in DATA_KEYS for k in path):
            for m in monomials_of(text):
                yield Mutation(case, path, m)


def apply(mut: Mutation) -> CaseFile:
    payload = copy.deepcopy(mut.case.payload)
    text = payload
    for k in mut.path:
        text = text[k]
    _set(payload, mut.path, f"({text}) + {mut.monomial}")
    c = mut.case
    return CaseFile(c.id, c.kind, payload, c.expected, c.citation, c.flags)
