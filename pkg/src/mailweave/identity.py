"""Entity resolution: addresses into persons, domains into institutions.

Resolution is a deterministic union-find over address keys. The output
partition does not depend on message order, and enabling more merge
rules can only shrink the number of persons.
"""

from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable

from mailweave.addresses import RawAddress, fold_name
from mailweave.ingest import EmailMessage


class InstitutionKind(str, Enum):
    CORP = "Corp"
    UNI = "Uni"
    ORG = "Org"
    NA = "NA"


@dataclass
class Person:
    """A resolved poster: one or more address keys behaving as one actor."""

    person_id: str
    addresses: frozenset[str]
    canonical_name: str | None = None

    def __post_init__(self):
        assert self.person_id in self.addresses


@dataclass
class Institution:
    institution_id: str
    name: str
    kind: InstitutionKind = InstitutionKind.NA
    domains: frozenset[str] = field(default_factory=frozenset)


class Rule(str, Enum):
    EXACT_ADDRESS = "exact_address"
    NAME_AND_DOMAIN = "name_and_domain"
    FULL_NAME_GLOBAL = "full_name_global"


@dataclass
class ResolutionRules:
    """Ordered merge rules; exact_address is always applied first."""

    rules: tuple[Rule, ...] = (Rule.EXACT_ADDRESS, Rule.NAME_AND_DOMAIN)
    fold_case: bool = True
    strip_diacritics: bool = True
    sort_tokens: bool = True

    def __post_init__(self):
        ordered = [Rule.EXACT_ADDRESS]
        ordered += [Rule(r) for r in self.rules if Rule(r) != Rule.EXACT_ADDRESS]
        self.rules = tuple(ordered)

    def fold(self, name: str) -> str:
        return fold_name(
            name,
            fold_case=self.fold_case,
            strip_diacritics=self.strip_diacritics,
            sort_tokens=self.sort_tokens,
        )

    @classmethod
    def from_names(cls, names: Iterable[str]) -> "ResolutionRules":
        return cls(rules=tuple(Rule(n) for n in names))


class _UnionFind:
    def __init__(self, items: Iterable[str]):
        self.parent = {x: x for x in items}

    def find(self, x: str) -> str:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        # Smaller key becomes the root so group ids are order-independent.
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra


def resolve_persons(messages: Iterable[EmailMessage], rules: ResolutionRules | None = None) -> list[Person]:
    """Partition every observed sender address key into Persons.

    Merge passes, in order: identical key (implicit); identical folded
    display name sharing a domain; identical folded multi-token full name
    across domains (only when enabled). person_id is the smallest address
    key of each group, which makes ids stable under reordering.
    """
    rules = rules or ResolutionRules()
    observed: dict[str, RawAddress] = {}
    names_by_key: dict[str, Counter] = defaultdict(Counter)
    for msg in messages:
        addr = msg.sender
        observed.setdefault(addr.key, addr)
        if addr.display_name:
            names_by_key[addr.key][addr.display_name] += 1

    uf = _UnionFind(sorted(observed))

    def folded_names(key: str) -> set[str]:
        return {rules.fold(n) for n in names_by_key.get(key, ())}

    if Rule.NAME_AND_DOMAIN in rules.rules:
        by_name_domain: dict[tuple[str, str], list[str]] = defaultdict(list)
        for key, addr in sorted(observed.items()):
            for name in sorted(folded_names(key)):
                if name:
                    by_name_domain[(name, addr.domain)].append(key)
        for group in by_name_domain.values():
            for other in group[1:]:
                uf.union(group[0], other)

    if Rule.FULL_NAME_GLOBAL in rules.rules:
        by_name: dict[str, list[str]] = defaultdict(list)
        for key in sorted(observed):
            for name in sorted(folded_names(key)):
                if len(name.split()) >= 2:
                    by_name[name].append(key)
        for group in by_name.values():
            for other in group[1:]:
                uf.union(group[0], other)

    groups: dict[str, set[str]] = defaultdict(set)
    for key in observed:
        groups[uf.find(key)].add(key)

    persons = []
    for members in groups.values():
        person_id = min(members)
        name_votes = Counter()
        for key in members:
            name_votes.update(names_by_key.get(key, ()))
        canonical = None
        if name_votes:
            # Most frequent display name; ties broken lexicographically.
            canonical = min(sorted(name_votes), key=lambda n: (-name_votes[n], n))
        persons.append(Person(person_id=person_id, addresses=frozenset(members), canonical_name=canonical))
    return sorted(persons, key=lambda p: p.person_id)


def map_institution(domain: str, registry: Iterable[Institution]) -> Institution:
    """Owning institution for a domain, by exact or parent-suffix match.

    Unregistered domains map to a synthetic NA institution named after
    the domain, so the function is total over lowercase domains.
    """
    best: Institution | None = None
    best_len = -1
    for inst in registry:
        for owned in inst.domains:
            if (domain == owned or domain.endswith("." + owned)) and len(owned) > best_len:
                best, best_len = inst, len(owned)
    if best is not None:
        return best
    return Institution(institution_id=domain, name=domain, kind=InstitutionKind.NA, domains=frozenset({domain}))


def load_registry(path: str | Path) -> list[Institution]:
    """Read the user-edited institution registry (one JSON object per line)."""
    registry = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        registry.append(
            Institution(
                institution_id=rec["id"],
                name=rec["name"],
                kind=InstitutionKind(rec.get("kind", "NA")),
                domains=frozenset(d.lower() for d in rec.get("domains", [])),
            )
        )
    seen: set[str] = set()
    for inst in registry:
        overlap = seen & inst.domains
        if overlap:
            raise ValueError(f"registry domains not disjoint: {sorted(overlap)}")
        seen |= inst.domains
    return registry


def save_registry(registry: Iterable[Institution], path: str | Path) -> None:
    lines = [
        json.dumps(
            {
                "id": inst.institution_id,
                "name": inst.name,
                "kind": inst.kind.value,
                "domains": sorted(inst.domains),
            },
            sort_keys=True,
        )
        for inst in registry
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
