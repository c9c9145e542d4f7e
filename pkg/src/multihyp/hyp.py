"""Hypersubstitutions: extension to terms, composition, named members, pools."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import BoundsExceeded, FormatError, SignatureError
from .terms import (
    App,
    Signature,
    Term,
    Var,
    count_terms_up_to_depth,
    depth,
    format_term,
    fundamental_term,
    parse_term,
    random_term,
    substitute,
    terms_up_to_depth,
    variables,
)

__all__ = [
    "Hypersubstitution",
    "HypPool",
    "apply_hyp",
    "compose_hyp",
    "named_hyp",
    "identity_hyp",
    "enumerate_hyps",
    "random_hyp",
    "load_hyp",
    "load_pool_dir",
    "NAMED_HYPS",
]


@dataclass(frozen=True, eq=False)
class Hypersubstitution:
    """Maps each operation symbol to a term of the same arity.

    Equality and hashing look only at the image terms, never at ``name``.
    """

    sig: Signature
    images: tuple
    name: str = field(default=None, compare=False)

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if len(images) != len(self.sig):
            raise SignatureError(f"need {len(self.sig)} image terms, got {len(images)}")
        for (sym, arity), img in zip(self.sig.symbols, images):
            bad = [i for i in variables(img) if i > arity]
            if bad:
                raise SignatureError(
                    f"image of {sym}/{arity} uses x{bad[0]}, beyond its arity: {format_term(img)}"
                )
        object.__setattr__(self, "_by_symbol", dict(zip(self.sig.names, images)))

    @classmethod
    def from_mapping(cls, sig: Signature, mapping: Mapping[str, Term], name=None):
        missing = [s for s in sig.names if s not in mapping]
        if missing:
            raise SignatureError(f"hypersubstitution is not total: no image for {missing}")
        return cls(sig, tuple(mapping[s] for s in sig.names), name)

    def __getitem__(self, symbol: str) -> Term:
        return self._by_symbol[symbol]

    def items(self):
        return zip(self.sig.names, self.images)

    def __eq__(self, other):
        return (
            isinstance(other, Hypersubstitution)
            and self.sig == other.sig
            and self.images == other.images
        )

    def __hash__(self):
        return hash((self.sig, self.images))

    def label(self) -> str:
        return self.name or self.describe()

    def describe(self) -> str:
        return "; ".join(f"{s}->{format_term(t)}" for s, t in self.items())

    def to_text(self) -> str:
        return "".join(f"{s} -> {format_term(t)}\n" for s, t in self.items())

    def __repr__(self):
        tag = f" {self.name}" if self.name else ""
        return f"<Hypersubstitution{tag}: {self.describe()}>"


def apply_hyp(sigma: Hypersubstitution, t: Term) -> Term:
    """The extension sigma^ to terms: variables are fixed, f(t1..tn) becomes
    sigma(f) with the transformed arguments substituted for x1..xn."""
    memo = {}

    def go(s):
        if isinstance(s, Var):
            return s
        r = memo.get(s)
        if r is None:
            kids = {i: go(a) for i, a in enumerate(s.args, 1)}
            r = memo[s] = substitute(sigma[s.symbol], kids)
        return r

    return go(t)


def compose_hyp(s1: Hypersubstitution, s2: Hypersubstitution) -> Hypersubstitution:
    """``s1 o_h s2``: maps each f to ``apply_hyp(s1, s2(f))``."""
    if s1.sig != s2.sig:
        raise SignatureError("cannot compose hypersubstitutions over different signatures")
    return Hypersubstitution(s1.sig, tuple(apply_hyp(s1, img) for img in s2.images))


def identity_hyp(sig: Signature) -> Hypersubstitution:
    return Hypersubstitution(sig, tuple(fundamental_term(n, a) for n, a in sig.symbols), "id")


def _swap(sig):
    images = []
    for n, a in sig.symbols:
        if a != 2:
            raise SignatureError(f"'swap' needs binary symbols only; {n} has arity {a}")
        images.append(App(n, [Var(2), Var(1)]))
    return Hypersubstitution(sig, tuple(images), "swap")


NAMED_HYPS = {
    "id": identity_hyp,
    "swap": _swap,
    "proj-first": lambda sig: Hypersubstitution(sig, tuple(Var(1) for _ in sig.symbols), "proj-first"),
    "proj-last": lambda sig: Hypersubstitution(sig, tuple(Var(a) for _, a in sig.symbols), "proj-last"),
}

# Greek-letter spellings. "sigma_xy" (f -> f(x1,x2)) is the identity.
_ALIASES = {
    "sigma_id": "id",
    "sigma_xy": "id",
    "sigma_yx": "swap",
    "sigma_x": "proj-first",
    "sigma_x1": "proj-first",
    "sigma_tilde": "proj-last",
}


def named_hyp(name: str, sig: Signature) -> Hypersubstitution:
    key = _ALIASES.get(name, name)
    try:
        make = NAMED_HYPS[key]
    except KeyError:
        known = sorted(set(NAMED_HYPS) | set(_ALIASES))
        raise FormatError(f"unknown hypersubstitution name {name!r}; known: {', '.join(known)}") from None
    return make(sig)


def random_hyp(rng, sig: Signature, max_depth: int, leaf_prob: float = 0.4) -> Hypersubstitution:
    images = []
    for _, arity in sig.symbols:
        d = rng.randint(0, max_depth)
        images.append(random_term(rng, sig, d, arity, leaf_prob))
    return Hypersubstitution(sig, tuple(images))


# --------------------------------------------------------------------------
# pools


@dataclass(frozen=True)
class HypPool:
    """A finite ordered set of hypersubstitutions standing in for Hyp(tau)."""

    hyps: tuple

    def __post_init__(self):
        uniq = []
        seen = set()
        for h in self.hyps:
            if h not in seen:
                seen.add(h)
                uniq.append(h)
        object.__setattr__(self, "hyps", tuple(uniq))
        if uniq:
            sig = uniq[0].sig
            if any(h.sig != sig for h in uniq):
                raise SignatureError("pool members use different signatures")

    @property
    def sig(self) -> Signature:
        return self.hyps[0].sig

    def __iter__(self) -> Iterator[Hypersubstitution]:
        return iter(self.hyps)

    def __len__(self):
        return len(self.hyps)

    def __getitem__(self, i):
        return self.hyps[i]

    def __contains__(self, h):
        return h in self.hyps

    def index(self, h) -> int:
        return self.hyps.index(h)

    def contains_identity(self) -> bool:
        return bool(self.hyps) and identity_hyp(self.sig) in self.hyps

    def with_identity(self) -> "HypPool":
        if self.contains_identity():
            return self
        return HypPool((identity_hyp(self.sig),) + self.hyps)

    def is_closed(self) -> bool:
        """True iff the pool is closed under composition."""
        members = set(self.hyps)
        return all(compose_hyp(a, b) in members for a in self.hyps for b in self.hyps)

    def __repr__(self):
        return f"HypPool({len(self)} members)"


def _image_order(t: Term):
    return (depth(t), format_term(t))


def enumerate_hyps(sig: Signature, max_depth: int, limit: int = 100_000) -> HypPool:
    """All hypersubstitutions whose images have depth <= max_depth.

    Per symbol the candidate images are sorted by (depth, printed form); the
    pool is their product in signature order. ``limit`` caps the pool size.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    per_symbol = []
    total = 1
    for name, arity in sig.symbols:
        n = count_terms_up_to_depth(sig, max_depth, arity)
        total *= n
        if total > limit:
            raise BoundsExceeded(f"pool of depth {max_depth} would have more than {limit} members")
        cands = sorted(terms_up_to_depth(sig, max_depth, arity), key=_image_order)
        per_symbol.append(cands)
    hyps = []
    for combo in itertools.product(*per_symbol):
        h = Hypersubstitution(sig, combo)
        if h == identity_hyp(sig):
            h = identity_hyp(sig)
        hyps.append(h)
    return HypPool(tuple(hyps))


# --------------------------------------------------------------------------
# files


def hyp_from_text(text: str, sig: Signature, name=None) -> Hypersubstitution:
    """Parse ``<symbol> -> <term>`` lines."""
    mapping = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        sym, sep, rhs = line.partition("->")
        sym = sym.strip()
        if not sep:
            raise FormatError(f"line {lineno}: expected '<symbol> -> <term>', got {line!r}")
        if sym not in sig:
            raise FormatError(f"line {lineno}: unknown symbol {sym!r}")
        if sym in mapping:
            raise FormatError(f"line {lineno}: symbol {sym!r} mapped twice")
        mapping[sym] = parse_term(rhs.strip(), sig)
    return Hypersubstitution.from_mapping(sig, mapping, name)


def load_hyp(ref: str, sig: Signature) -> Hypersubstitution:
    """A named hypersubstitution (``id``, ``swap``, ...) or a path to a hyp file."""
    if os.path.isfile(ref):
        with open(ref, encoding="utf-8") as fh:
            return hyp_from_text(fh.read(), sig, os.path.basename(ref))
    return named_hyp(ref, sig)


def load_pool_dir(path: str, sig: Signature) -> HypPool:
    """Every regular file in ``path`` (sorted by name) is one hypersubstitution."""
    if not os.path.isdir(path):
        raise FormatError(f"pool directory {path!r} does not exist")
    hyps = []
    for entry in sorted(os.listdir(path)):
        full = os.path.join(path, entry)
        if os.path.isfile(full) and not entry.startswith("."):
            with open(full, encoding="utf-8") as fh:
                hyps.append(hyp_from_text(fh.read(), sig, entry))
    if not hyps:
        raise FormatError(f"pool directory {path!r} holds no hypersubstitution files")
    return HypPool(tuple(hyps))


def pool_from(items: Iterable, sig: Signature) -> HypPool:
    """Build a pool from names, paths or Hypersubstitution objects."""
    out = []
    for it in items:
        out.append(it if isinstance(it, Hypersubstitution) else load_hyp(it, sig))
    return HypPool(tuple(out))
