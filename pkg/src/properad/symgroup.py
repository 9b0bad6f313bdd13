"""Permutations in one-line notation, with block permutations and the connected ones.

Permutations are 1-indexed image tuples: ``Permutation((2, 3, 1))`` sends
1 to 2, 2 to 3 and 3 to 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

MAX_ENUMERATION_DEGREE = 8


@dataclass(frozen=True, order=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        imgs = tuple(int(i) for i in self.images)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise ValueError(f"not a permutation of 1..{len(imgs)}: {imgs}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """Parse ``"(1 3 2 4)"``, ``"1,3,2,4"`` or the compact ``"(1324)"``."""
        body = text.strip().strip("()[]")
        if "," in body or " " in body.strip():
            parts = [p for p in body.replace(",", " ").split() if p]
            return cls(tuple(int(p) for p in parts))
        return cls(tuple(int(c) for c in body))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, s: int) -> int:
        return self.images[s - 1]

    def __len__(self) -> int:
        return len(self.images)

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for s, t in enumerate(self.images, start=1):
            inv[t - 1] = s
        return Permutation(tuple(inv))

    def sign(self) -> int:
        return permutation_sign(self.images)

    def text(self) -> str:
        return "(" + " ".join(str(i) for i in self.images) + ")"

    def __str__(self) -> str:
        return self.text()


def permutation_sign(images: Sequence[int]) -> int:
    """Sign of a permutation given as any sequence of distinct comparable items."""
    seen = [False] * len(images)
    order = sorted(range(len(images)), key=lambda i: images[i])
    # order[k] = position holding the k-th smallest value; sign via cycle count
    sgn = 1
    for start in range(len(images)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sgn = -sgn
    return sgn


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Return p∘q, i.e. s ↦ p(q(s))."""
    if p.degree != q.degree:
        raise ValueError(f"degree mismatch: {p.degree} vs {q.degree}")
    return Permutation(tuple(p.images[t - 1] for t in q.images))


def _check_profile(profile: Sequence[int]) -> tuple[int, ...]:
    parts = tuple(int(x) for x in profile)
    if any(x < 1 for x in parts):
        raise ValueError(f"block profile parts must be positive: {parts}")
    return parts


def block_permutation(tau: Permutation, profile: Sequence[int]) -> Permutation:
    """Permutation of S_|profile| moving contiguous blocks according to tau.

    Block ``b`` (of size ``profile[b-1]``) is sent to the slot ``tau(b)``; the
    one-line image is the concatenation, over target slots k = 1..n, of the
    positions of the block ``tau^{-1}(k)``.  So ``tau=(21)``, profile ``(1,2)``
    gives ``(2,3,1)``.
    """
    parts = _check_profile(profile)
    if len(parts) != tau.degree:
        raise ValueError(f"profile has {len(parts)} parts but tau has degree {tau.degree}")
    starts = list(itertools.accumulate((0,) + parts[:-1]))
    inv = tau.inverse()
    images: list[int] = []
    for k in range(1, tau.degree + 1):
        b = inv(k) - 1
        images.extend(range(starts[b] + 1, starts[b] + parts[b] + 1))
    return Permutation(tuple(images))


def _block_index(profile: Sequence[int]) -> list[int]:
    out: list[int] = []
    for b, size in enumerate(profile):
        out.extend([b] * size)
    return out


def _connected_images(images: Sequence[int], kblock: Sequence[int], jblock: Sequence[int],
                      nk: int, nj: int) -> bool:
    # union-find over nj input blocks (0..nj-1) and nk output blocks (nj..nj+nk-1)
    parent = list(range(nj + nk))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = nj + nk
    for s, t in enumerate(images):
        a = find(jblock[s])
        b = find(nj + kblock[t - 1])
        if a != b:
            parent[a] = b
            comps -= 1
    return comps == 1


def is_connected(sigma: Permutation, kbar: Sequence[int], jbar: Sequence[int]) -> bool:
    """Whether sigma is (kbar, jbar)-connected.

    The inputs 1..N are gathered into blocks given by ``jbar`` and the outputs
    into blocks given by ``kbar``; each s links the block of s to the block of
    sigma(s).  sigma is connected when the resulting bipartite multigraph is.
    """
    kparts = _check_profile(kbar)
    jparts = _check_profile(jbar)
    n = sigma.degree
    if sum(kparts) != n or sum(jparts) != n:
        raise ValueError(f"profile totals {sum(kparts)}, {sum(jparts)} differ from degree {n}")
    return _connected_images(sigma.images, _block_index(kparts), _block_index(jparts),
                             len(kparts), len(jparts))


def enumerate_connected(kbar: Sequence[int], jbar: Sequence[int]) -> list[Permutation]:
    """All (kbar, jbar)-connected permutations, in lexicographic order."""
    kparts = _check_profile(kbar)
    jparts = _check_profile(jbar)
    n = sum(kparts)
    if n != sum(jparts):
        raise ValueError(f"|kbar|={n} differs from |jbar|={sum(jparts)}")
    if n > MAX_ENUMERATION_DEGREE:
        raise ValueError(f"enumeration capped at degree {MAX_ENUMERATION_DEGREE}")
    kb, jb = _block_index(kparts), _block_index(jparts)
    return [Permutation(p) for p in itertools.permutations(range(1, n + 1))
            if _connected_images(p, kb, jb, len(kparts), len(jparts))]


@lru_cache(maxsize=None)
def count_connected(kbar: tuple[int, ...], jbar: tuple[int, ...]) -> int:
    """Number of (kbar, jbar)-connected permutations (cached)."""
    kparts = _check_profile(kbar)
    jparts = _check_profile(jbar)
    n = sum(kparts)
    if n != sum(jparts):
        raise ValueError(f"|kbar|={n} differs from |jbar|={sum(jparts)}")
    if n > MAX_ENUMERATION_DEGREE:
        raise ValueError(f"enumeration capped at degree {MAX_ENUMERATION_DEGREE}")
    kb, jb = _block_index(kparts), _block_index(jparts)
    return sum(1 for p in itertools.permutations(range(1, n + 1))
               if _connected_images(p, kb, jb, len(kparts), len(jparts)))


def all_permutations(n: int) -> Iterable[Permutation]:
    for p in itertools.permutations(range(1, n + 1)):
        yield Permutation(p)
