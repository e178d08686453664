"""Extension semantics over :class:`~argmed.aaf.ArgumentationFramework`.

Preferred extensions are enumerated with a labelling search (arguments are
labelled IN, OUT, MUST_OUT, UNDEC or left blank and the search branches on
blank ones). :func:`brute_force_preferred` computes the same thing by
checking every subset and serves as the test oracle; the two share no code.

Every set-valued result is sorted: members by id, lists of extensions by
their sorted member tuple.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import _kernels
from .aaf import ArgumentationFramework, ArgumentId
from .errors import TooLarge

ORACLE_CAP = 16


@dataclass(frozen=True, order=True)
class Extension:
    members: tuple[ArgumentId, ...]

    def __init__(self, members: Iterable[ArgumentId] = ()):
        object.__setattr__(self, "members", tuple(sorted(set(members))))

    def __contains__(self, arg_id: object) -> bool:
        return arg_id in self.members

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __repr__(self) -> str:
        return "{" + ", ".join(self.members) + "}"

    def as_set(self) -> frozenset[ArgumentId]:
        return frozenset(self.members)


def _sorted_extensions(sets: Iterable[Iterable[ArgumentId]]) -> list[Extension]:
    return sorted({Extension(s) for s in sets})


class Label(str, enum.Enum):
    IN = "in"
    OUT = "out"
    UNDEC = "undec"


Labelling = dict[ArgumentId, Label]


# -- basic predicates ------------------------------------------------------

def is_conflict_free(fw: ArgumentationFramework, s: Iterable[ArgumentId]) -> bool:
    s = fw.check_ids(s)
    return not any(fw.has_attack(a, b) for a in s for b in s)


def defends(fw: ArgumentationFramework, s: Iterable[ArgumentId], a: ArgumentId) -> bool:
    s = fw.check_ids(s)
    return all(
        any(fw.has_attack(c, b) for c in s)
        for b in fw.attackers(a)
    )


def is_admissible(fw: ArgumentationFramework, s: Iterable[ArgumentId]) -> bool:
    s = fw.check_ids(s)
    return is_conflict_free(fw, s) and all(defends(fw, s, a) for a in s)


def characteristic(fw: ArgumentationFramework, s: Iterable[ArgumentId]) -> frozenset[ArgumentId]:
    """Everything defended by ``s``."""
    s = fw.check_ids(s)
    return frozenset(a for a in fw.ids if defends(fw, s, a))


# -- grounded --------------------------------------------------------------

def grounded_extension(fw: ArgumentationFramework) -> Extension:
    attackers = fw.attacker_map()
    targets = fw.target_map()
    accepted: set[ArgumentId] = set()
    defeated: set[ArgumentId] = set()
    # an argument joins once every attacker is defeated; unattacked ones join first
    frontier = [a for a in fw.ids if not attackers[a]]
    while frontier:
        accepted.update(frontier)
        newly_defeated = {t for a in frontier for t in targets[a]} - defeated
        defeated |= newly_defeated
        candidates = {t for d in newly_defeated for t in targets[d]}
        frontier = sorted(
            c for c in candidates
            if c not in accepted and c not in defeated and attackers[c] <= defeated
        )
    return Extension(accepted)


def grounded_labelling(fw: ArgumentationFramework) -> Labelling:
    return labelling_of(fw, grounded_extension(fw))


def labelling_of(fw: ArgumentationFramework, ext: Iterable[ArgumentId]) -> Labelling:
    members = fw.check_ids(ext)
    out = {b for a in members for b in fw.targets(a)}
    lab: Labelling = {}
    for a in fw.ids:
        if a in members:
            lab[a] = Label.IN
        elif a in out:
            lab[a] = Label.OUT
        else:
            lab[a] = Label.UNDEC
    return lab


# -- preferred (labelling search) -----------------------------------------

_BLANK, _IN, _OUT, _MUST_OUT, _UNDEC = range(5)


class _PreferredSearch:
    def __init__(self, fw: ArgumentationFramework):
        self.ids = fw.ids
        index = {a: i for i, a in enumerate(self.ids)}
        self.attackers = [set() for _ in self.ids]
        self.targets = [set() for _ in self.ids]
        for a, b in fw.attacks:
            self.attackers[index[b]].add(index[a])
            self.targets[index[a]].add(index[b])
        self.found: list[frozenset[int]] = []

    def run(self) -> list[frozenset[int]]:
        lab = [_BLANK] * len(self.ids)
        for i in range(len(lab)):
            if i in self.attackers[i]:
                lab[i] = _UNDEC
        self._search(lab)
        return self.found

    def _dead(self, lab: list[int]) -> bool:
        # a MUST_OUT argument needs an attacker that can still turn IN
        return any(
            lab[i] == _MUST_OUT and not any(lab[j] == _BLANK for j in self.attackers[i])
            for i in range(len(lab))
        )

    def _covered(self, lab: list[int]) -> bool:
        reach = {i for i, l in enumerate(lab) if l in (_IN, _BLANK)}
        return any(reach <= e for e in self.found)

    def _pick(self, lab: list[int]) -> int:
        # blank argument with the most blank-or-must-out targets; ties by index
        best, score = -1, -1
        for i, l in enumerate(lab):
            if l != _BLANK:
                continue
            sc = sum(1 for t in self.targets[i] if lab[t] in (_BLANK, _MUST_OUT))
            if sc > score:
                best, score = i, sc
        return best

    def _search(self, lab: list[int]) -> None:
        if self._dead(lab) or self._covered(lab):
            return
        if _BLANK not in lab:
            if _MUST_OUT in lab:
                return
            ins = frozenset(i for i, l in enumerate(lab) if l == _IN)
            self.found = [e for e in self.found if not e < ins]
            if not any(ins <= e for e in self.found):
                self.found.append(ins)
            return
        x = self._pick(lab)
        with_x = list(lab)
        with_x[x] = _IN
        for t in self.targets[x]:
            with_x[t] = _OUT
        for a in self.attackers[x]:
            if with_x[a] != _OUT:
                with_x[a] = _MUST_OUT
        self._search(with_x)
        without = list(lab)
        without[x] = _UNDEC
        self._search(without)


def preferred_extensions(fw: ArgumentationFramework) -> list[Extension]:
    search = _PreferredSearch(fw)
    found = search.run()
    return _sorted_extensions({search.ids[i] for i in e} for e in found)


def is_acceptable_credulous(fw: ArgumentationFramework, a: ArgumentId) -> bool:
    fw.argument(a)
    return any(a in e for e in preferred_extensions(fw))


def is_acceptable_skeptical(fw: ArgumentationFramework, a: ArgumentId) -> bool:
    fw.argument(a)
    return all(a in e for e in preferred_extensions(fw))


# -- complete / stable (testing aids) -------------------------------------

def complete_extensions(fw: ArgumentationFramework) -> list[Extension]:
    """Admissible fixed points of the characteristic function. Exhaustive."""
    return [
        e for e in admissible_sets(fw)
        if characteristic(fw, e.members) == e.as_set()
    ]


def stable_extensions(fw: ArgumentationFramework) -> list[Extension]:
    out = []
    for e in conflict_free_sets(fw):
        hit = {b for a in e for b in fw.targets(a)}
        if hit | e.as_set() == set(fw.ids):
            out.append(e)
    return out


# -- exhaustive oracle -----------------------------------------------------

def _bit_encoding(fw: ArgumentationFramework):
    ids = fw.ids
    index = {a: i for i, a in enumerate(ids)}
    att_in = np.zeros(len(ids), dtype=np.int64)
    att_out = np.zeros(len(ids), dtype=np.int64)
    for a, b in fw.attacks:
        att_in[index[b]] |= 1 << index[a]
        att_out[index[a]] |= 1 << index[b]
    return ids, att_in, att_out


def _check_cap(fw: ArgumentationFramework, cap: int) -> None:
    if len(fw) > cap:
        raise TooLarge(f"{len(fw)} arguments exceeds the exhaustive-search cap of {cap}")


def _decode(ids: list[ArgumentId], flags: np.ndarray) -> list[Extension]:
    n = len(ids)
    return _sorted_extensions(
        [ids[i] for i in _kernels.mask_members(int(m), n)]
        for m in np.flatnonzero(flags)
    )


def subset_tables(fw: ArgumentationFramework, cap: int = ORACLE_CAP, backend: str | None = None):
    """``(ids, conflict_free, admissible)`` flag tables over all ``2**n`` subsets."""
    _check_cap(fw, cap)
    ids, att_in, att_out = _bit_encoding(fw)
    cf, adm = _kernels.subset_tables(att_in, att_out, len(ids), backend)
    return ids, cf, adm


def conflict_free_sets(fw: ArgumentationFramework, cap: int = ORACLE_CAP, backend: str | None = None) -> list[Extension]:
    ids, cf, _ = subset_tables(fw, cap, backend)
    return _decode(ids, cf)


def admissible_sets(fw: ArgumentationFramework, cap: int = ORACLE_CAP, backend: str | None = None) -> list[Extension]:
    ids, _, adm = subset_tables(fw, cap, backend)
    return _decode(ids, adm)


def brute_force_preferred(fw: ArgumentationFramework, cap: int = ORACLE_CAP, backend: str | None = None) -> list[Extension]:
    """Every subset-maximal admissible set, found by checking all ``2**n`` subsets."""
    ids, _, adm = subset_tables(fw, cap, backend)
    return _decode(ids, _kernels.maximal(adm, len(ids), backend))
