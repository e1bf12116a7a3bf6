"""Email address normalization.

Addresses are kept at full host granularity: "x@metalab.unc.edu" stays
under metalab.unc.edu, never collapsed to unc.edu, because per-subdomain
activity is meaningful in list analytics.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from email.header import decode_header, make_header
from email.utils import parseaddr

from mailweave.errors import AddressError


@dataclass(frozen=True)
class RawAddress:
    """One parsed mailbox: optional display name plus addr-spec parts.

    ``key`` is the case-folded addr-spec and is the unit of identity
    everywhere else in the package.
    """

    display_name: str | None
    local_part: str
    domain: str
    key: str = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "key", self.local_part.casefold() + "@" + self.domain)


def _decode_display_name(name: str) -> str:
    """Decode RFC 2047 encoded words in a display name, best effort."""
    if "=?" not in name:
        return name
    try:
        return str(make_header(decode_header(name)))
    except Exception:
        return name


def normalize_address(raw: str) -> RawAddress:
    """Parse a From/To header string into a RawAddress.

    The display name is unquoted and RFC 2047 decoded; the domain is
    lowercased; the local part keeps its original case (the key folds it).

    Raises AddressError when no addr-spec with an '@' is present.
    """
    display, addr = parseaddr(raw)
    if "@" not in addr:
        raise AddressError(f"no addr-spec in {raw!r}")
    local, _, host = addr.rpartition("@")
    host = host.strip().strip(">").lower()
    local = local.strip().lstrip("<")
    if not local or not host:
        raise AddressError(f"empty local part or domain in {raw!r}")
    display = _decode_display_name(display).strip()
    return RawAddress(display_name=display or None, local_part=local, domain=host)


def domain_of(address: RawAddress) -> str:
    """Full lowercase host of the address; no public-suffix truncation."""
    return address.domain


def fold_name(
    name: str,
    *,
    fold_case: bool = True,
    strip_diacritics: bool = True,
    sort_tokens: bool = True,
) -> str:
    """Canonicalize a display name for identity comparison.

    Case-folds, optionally strips diacritics, and optionally compares
    tokens order-insensitively so "Doe, John" equals "John Doe".
    """
    text = name.replace(",", " ")
    if fold_case:
        text = text.casefold()
    if strip_diacritics:
        decomposed = unicodedata.normalize("NFKD", text)
        text = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    tokens = text.split()
    if sort_tokens:
        tokens = sorted(tokens)
    return " ".join(tokens)
