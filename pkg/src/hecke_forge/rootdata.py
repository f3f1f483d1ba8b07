"""Root data, Weyl groups, reduced words, inversion sets and Bruhat order.

Roots are stored as integer vectors in the simple-root basis, paired with
their coroots in the simple-coroot basis; everything downstream is exact
integer linear algebra.  Weights live in the fundamental-weight basis when
the lattice is simply connected and in the simple-root basis when adjoint,
so that every pairing <lambda, alpha^vee> is an integer lookup.

Signed root indices: a nonzero integer ``r`` denotes the positive root
``pos_roots[|r|-1]`` with the sign of ``r``; the simple root ``alpha_i`` is
``r == i`` (1-based).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from .errors import GroupTooLarge, UnsupportedType

# Torsion indices per irreducible type; configuration data sourced from the
# standard tables, overridable via ``torsion_override``.
TORSION_INDEX = {"A": 1, "B": 2, "C": 1, "D": 2, "G": 2}

_SUPPORTED_RANKS = {"A": (1, 4), "B": (2, 4), "C": (2, 4), "D": (3, 4), "G": (2, 2)}

_M_FROM_PRODUCT = {0: 2, 1: 3, 2: 4, 3: 6}

DEFAULT_GROUP_CAP = 1200


def cartan_matrix(type_: str, rank: int):
    """Standard Cartan matrix, entries a[i][j] = <alpha_j, alpha_i^vee>."""
    a = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]

    def chain(i, j):
        a[i][j] = -1
        a[j][i] = -1

    if type_ == "A":
        for i in range(rank - 1):
            chain(i, i + 1)
    elif type_ == "B":
        for i in range(rank - 2):
            chain(i, i + 1)
        a[rank - 2][rank - 1] = -1
        a[rank - 1][rank - 2] = -2
    elif type_ == "C":
        for i in range(rank - 2):
            chain(i, i + 1)
        a[rank - 2][rank - 1] = -2
        a[rank - 1][rank - 2] = -1
    elif type_ == "D":
        for i in range(rank - 3):
            chain(i, i + 1)
        chain(rank - 3, rank - 2)
        chain(rank - 3, rank - 1)
    elif type_ == "G":
        a[0][1] = -1
        a[1][0] = -3
    else:
        raise UnsupportedType(f"unknown Dynkin type {type_!r}")
    return tuple(tuple(row) for row in a)


@dataclass(frozen=True)
class Root:
    """A positive root with exact coordinates in both simple bases."""

    alpha: tuple      # coordinates in the simple-root basis
    coalpha: tuple    # coroot coordinates in the simple-coroot basis

    @property
    def height(self):
        return sum(self.alpha)


@dataclass(eq=False)
class WeylElement:
    id: int
    word: tuple              # canonical (lexicographically least) reduced word
    mat: tuple               # action on the chosen weight basis, columns = images
    root_images: tuple       # signed positive-root index of w(alpha_p), per p
    length: int
    inversion_set: tuple = ()
    reduced_words: tuple = ()
    group: "WeylGroup" = field(default=None, repr=False)

    def __hash__(self):
        return hash((id(self.group), self.id))

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.group is other.group and self.id == other.id


class RootDatum:
    """Immutable root datum for a finite crystallographic root system."""

    def __init__(self, cartan, lattice="sc", label=None, torsion_override=None):
        cartan = tuple(tuple(int(x) for x in row) for row in cartan)
        n = len(cartan)
        for i, row in enumerate(cartan):
            if len(row) != n or row[i] != 2:
                raise UnsupportedType("Cartan matrix must be square with 2 on the diagonal")
            for j, x in enumerate(row):
                if i != j and x > 0:
                    raise UnsupportedType("off-diagonal Cartan entries must be <= 0")
                if i != j and (x == 0) != (cartan[j][i] == 0):
                    raise UnsupportedType("Cartan matrix zero pattern must be symmetric")
        if lattice not in ("sc", "ad"):
            raise UnsupportedType(f"unknown lattice {lattice!r} (expected 'sc' or 'ad')")
        self.cartan = cartan
        self.rank = n
        self.lattice = lattice
        self.label = label
        self.m = tuple(tuple(
            _M_FROM_PRODUCT.get(cartan[i][j] * cartan[j][i]) if i != j else 1
            for j in range(n)) for i in range(n))
        for row in self.m:
            if None in row:
                raise UnsupportedType("Cartan matrix is not of finite crystallographic type")
        self.pos_roots = self._enumerate_positive_roots()
        self.components = self._components()
        if torsion_override is not None:
            self.torsion_index = int(torsion_override)
        else:
            self.torsion_index = 1
            for nodes in self.components:
                letter = self._component_type(nodes)
                self.torsion_index *= TORSION_INDEX[letter]
        self._group = None

    # ------------------------------------------------------------------
    # construction helpers

    def _reflect_root(self, pair, i):
        c, g = pair
        t = sum(self.cartan[i][j] * c[j] for j in range(self.rank))
        c2 = list(c)
        c2[i] -= t
        u = sum(self.cartan[j][i] * g[j] for j in range(self.rank))
        g2 = list(g)
        g2[i] -= u
        return (tuple(c2), tuple(g2))

    def _enumerate_positive_roots(self):
        n = self.rank
        simple = []
        for i in range(n):
            e = tuple(1 if j == i else 0 for j in range(n))
            simple.append((e, e))
        seen = set(simple)
        frontier = list(simple)
        while frontier:
            nxt = []
            for pair in frontier:
                for i in range(n):
                    c2, g2 = self._reflect_root(pair, i)
                    if all(x >= 0 for x in c2) and (c2, g2) not in seen:
                        seen.add((c2, g2))
                        nxt.append((c2, g2))
            frontier = nxt
        others = sorted(
            (p for p in seen if p not in set(simple)),
            key=lambda p: (sum(p[0]), p[0]),
        )
        return tuple(Root(alpha=c, coalpha=g) for c, g in list(simple) + others)

    def _components(self):
        n = self.rank
        seen = [False] * n
        comps = []
        for start in range(n):
            if seen[start]:
                continue
            stack, nodes = [start], []
            seen[start] = True
            while stack:
                i = stack.pop()
                nodes.append(i)
                for j in range(n):
                    if not seen[j] and self.cartan[i][j] != 0:
                        seen[j] = True
                        stack.append(j)
            comps.append(tuple(sorted(nodes)))
        return tuple(comps)

    def _component_type(self, nodes):
        sub = tuple(tuple(self.cartan[i][j] for j in nodes) for i in nodes)
        k = len(nodes)
        for letter, (lo, hi) in _SUPPORTED_RANKS.items():
            if not lo <= k <= hi:
                continue
            ref = cartan_matrix(letter, k)
            for perm in permutations(range(k)):
                if all(ref[perm[i]][perm[j]] == sub[i][j] for i in range(k) for j in range(k)):
                    return letter
        raise UnsupportedType("component does not match a supported Dynkin type")

    # ------------------------------------------------------------------
    # weights

    @property
    def n_pos(self):
        return len(self.pos_roots)

    def root(self, r: int) -> Root:
        return self.pos_roots[abs(r) - 1]

    def simple_root_index(self, i: int) -> int:
        """Positive-root index (1-based signed convention) of alpha_i, i 1-based."""
        return i

    def root_weight(self, r: int):
        """Coordinates of the (signed) root ``r`` in the chosen weight basis."""
        root = self.root(r)
        sign = 1 if r > 0 else -1
        if self.lattice == "ad":
            return tuple(sign * x for x in root.alpha)
        return tuple(
            sign * sum(self.cartan[k][j] * root.alpha[j] for j in range(self.rank))
            for k in range(self.rank)
        )

    def pairing(self, lam, r: int):
        """<lambda, alpha^vee> for the signed root ``r``."""
        root = self.root(r)
        sign = 1 if r > 0 else -1
        if self.lattice == "sc":
            val = sum(g * x for g, x in zip(root.coalpha, lam))
        else:
            val = sum(
                lam[j] * sum(root.coalpha[i] * self.cartan[i][j] for i in range(self.rank))
                for j in range(self.rank)
            )
        return sign * val

    def reflect(self, lam, r: int):
        """s_alpha(lambda) = lambda - <lambda, alpha^vee> alpha."""
        t = self.pairing(lam, abs(r))
        alpha = self.root_weight(abs(r))
        return tuple(x - t * a for x, a in zip(lam, alpha))

    def fundamental_weight(self, i: int):
        """Basis weight: omega_i for 'sc', alpha_i for 'ad' (i 1-based)."""
        return tuple(1 if j == i - 1 else 0 for j in range(self.rank))

    @property
    def lattice_index(self):
        """|Lambda_w / Lambda_r| = det of the Cartan matrix."""
        n = self.rank
        mat = [[Fraction(x) for x in row] for row in self.cartan]
        det = Fraction(1)
        for c in range(n):
            piv = next((i for i in range(c, n) if mat[i][c]), None)
            if piv is None:
                return 0
            if piv != c:
                mat[c], mat[piv] = mat[piv], mat[c]
                det = -det
            det *= mat[c][c]
            inv = 1 / mat[c][c]
            mat[c] = [x * inv for x in mat[c]]
            for i in range(c + 1, n):
                f = mat[i][c]
                if f:
                    mat[i] = [x - f * y for x, y in zip(mat[i], mat[c])]
        assert det.denominator == 1
        return abs(int(det))

    def _simple_reflection_matrix(self, i):
        n = self.rank
        cols = []
        for c in range(n):
            col = [1 if r == c else 0 for r in range(n)]
            if self.lattice == "sc":
                if c == i:
                    alpha = self.root_weight(i + 1)
                    col = [col[r] - alpha[r] for r in range(n)]
            else:
                col[i] -= self.cartan[i][c]
            cols.append(col)
        return tuple(tuple(cols[c][r] for c in range(n)) for r in range(n))  # row-major

    def _reflection_matrix(self, r):
        n = self.rank
        alpha = self.root_weight(abs(r))
        rows = []
        for k in range(n):
            row = []
            for c in range(n):
                basis = tuple(1 if j == c else 0 for j in range(n))
                t = self.pairing(basis, abs(r))
                row.append((1 if k == c else 0) - t * alpha[k])
            rows.append(tuple(row))
        return tuple(rows)

    # ------------------------------------------------------------------

    def weyl_group(self, cap=DEFAULT_GROUP_CAP, exhaustive_words=None):
        if self._group is None:
            self._group = WeylGroup(self, cap=cap, exhaustive_words=exhaustive_words)
        return self._group

    def to_json(self):
        out = {"cartan": [list(r) for r in self.cartan], "lattice": self.lattice}
        if self.label:
            out["type"] = self.label
        return out

    def __repr__(self):
        return f"RootDatum({self.label or self.cartan}, lattice={self.lattice!r})"


def _mat_mul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


class WeylGroup:
    """Complete enumeration of W with reduced words and Bruhat order."""

    def __init__(self, datum, cap=DEFAULT_GROUP_CAP, exhaustive_words=None):
        self.datum = datum
        n = datum.rank
        if exhaustive_words is None:
            exhaustive_words = n <= 3
        npos = datum.n_pos
        ident_mat = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        ident_perm = tuple(range(1, npos + 1))

        # signed action of each simple reflection on positive roots
        simple_perms = []
        for i in range(n):
            perm = []
            for p in range(npos):
                c, g = datum._reflect_root(
                    (datum.pos_roots[p].alpha, datum.pos_roots[p].coalpha), i)
                if all(x >= 0 for x in c):
                    target, sign = (c, g), 1
                else:
                    target, sign = (tuple(-x for x in c), tuple(-x for x in g)), -1
                q = next(
                    k for k, root in enumerate(datum.pos_roots)
                    if (root.alpha, root.coalpha) == target
                )
                perm.append(sign * (q + 1))
            simple_perms.append(tuple(perm))
        self.simple_mats = [datum._simple_reflection_matrix(i) for i in range(n)]

        elements = [WeylElement(0, (), ident_mat, ident_perm, 0, group=self)]
        by_mat = {ident_mat: 0}
        frontier = [0]
        rmul = {0: [None] * n}
        while frontier:
            nxt = []
            for wid in frontier:
                w = elements[wid]
                for i in range(n):
                    # l(w s_i) > l(w) iff w(alpha_i) > 0
                    if w.root_images[i] < 0:
                        continue
                    mat = _mat_mul(w.mat, self.simple_mats[i])
                    found = by_mat.get(mat)
                    if found is None:
                        if len(elements) >= cap:
                            raise GroupTooLarge(
                                f"Weyl group exceeds the configured cap of {cap}")
                        perm = tuple(
                            w.root_images[abs(x) - 1] * (1 if x > 0 else -1)
                            for x in simple_perms[i]
                        )
                        elem = WeylElement(len(elements), w.word + (i + 1,), mat,
                                           perm, w.length + 1, group=self)
                        by_mat[mat] = elem.id
                        elements.append(elem)
                        rmul[elem.id] = [None] * n
                        rmul[wid][i] = elem.id
                        nxt.append(elem.id)
                    else:
                        rmul[wid][i] = found
            frontier = nxt
        # fill remaining right-multiplication entries (descents)
        for w in elements:
            for i in range(n):
                if rmul[w.id][i] is None:
                    mat = _mat_mul(w.mat, self.simple_mats[i])
                    rmul[w.id][i] = by_mat[mat]
        self.elements = elements
        self._by_mat = by_mat
        self._rmul = rmul
        self._inverse = [None] * len(elements)
        for w in elements:
            inv = 0
            for i in reversed(w.word):
                inv = rmul[inv][i - 1]
            self._inverse[w.id] = inv
        for w in elements:
            winv = elements[self._inverse[w.id]]
            w.inversion_set = tuple(
                p for p in range(npos) if winv.root_images[p] < 0)
            assert len(w.inversion_set) == w.length
        self._fill_reduced_words(exhaustive_words)
        self._bruhat_cache = {}

    # ------------------------------------------------------------------

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    @property
    def identity(self):
        return self.elements[0]

    def longest(self):
        return max(self.elements, key=lambda w: w.length)

    def right_mul(self, w, i):
        """w * s_i for a 1-based simple index."""
        return self.elements[self._rmul[w.id][i - 1]]

    def product(self, u, v):
        w = u
        for i in v.word:
            w = self.right_mul(w, i)
        return w

    def inverse(self, w):
        return self.elements[self._inverse[w.id]]

    def from_word(self, word):
        w = self.identity
        for i in word:
            w = self.right_mul(w, i)
        return w

    def reflection(self, r: int):
        """The reflection s_alpha for a signed root index."""
        mat = self.datum._reflection_matrix(abs(r))
        return self.elements[self._by_mat[mat]]

    def root_image(self, w, r: int):
        """Signed root index of w(alpha_r)."""
        img = w.root_images[abs(r) - 1]
        return img if r > 0 else -img

    def _fill_reduced_words(self, exhaustive):
        if not exhaustive:
            for w in self.elements:
                w.reduced_words = (w.word,)
            return
        memo = {0: ((),)}

        def words(wid):
            got = memo.get(wid)
            if got is not None:
                return got
            w = self.elements[wid]
            out = []
            for i in range(1, self.datum.rank + 1):
                shorter = self._rmul[wid][i - 1]
                if self.elements[shorter].length < w.length:
                    out.extend(word + (i,) for word in words(shorter))
            result = tuple(sorted(set(out)))
            memo[wid] = result
            return result

        for w in self.elements:
            w.reduced_words = words(w.id)

    # ------------------------------------------------------------------

    def left_descent(self, w):
        for i in range(1, self.datum.rank + 1):
            # l(s_i w) < l(w) iff w^{-1}(alpha_i) < 0
            if self.inverse(w).root_images[i - 1] < 0:
                return i
        return None

    def left_mul(self, i, w):
        return self.product(self.from_word((i,)), w)

    def bruhat_leq(self, v, w):
        """Bruhat order via the standard descent recursion (= subword property)."""
        key = (v.id, w.id)
        got = self._bruhat_cache.get(key)
        if got is not None:
            return got
        if v.length == 0:
            out = True
        elif v.length > w.length:
            out = False
        else:
            i = self.left_descent(w)
            sw = self.left_mul(i, w)
            sv = self.left_mul(i, v)
            if sv.length < v.length:
                out = self.bruhat_leq(sv, sw)
            else:
                out = self.bruhat_leq(v, sw)
        self._bruhat_cache[key] = out
        return out


# ----------------------------------------------------------------------
# spec-level operations

def build_root_datum(type_, rank=None, lattice="sc", torsion_override=None):
    """Build a datum from a Dynkin letter + rank, a label like ``"B2"``,
    ``"A1xA1"``, or a JSON descriptor (dict or string)."""
    if isinstance(type_, dict):
        return _from_descriptor(type_, torsion_override)
    if isinstance(type_, str) and (type_.startswith("{") or type_.startswith("[")):
        return _from_descriptor(json.loads(type_), torsion_override)
    if isinstance(type_, str) and rank is None:
        return _from_label(type_, lattice, torsion_override)
    letter = type_.upper()
    if letter not in _SUPPORTED_RANKS:
        raise UnsupportedType(f"unsupported Dynkin type {type_!r}")
    lo, hi = _SUPPORTED_RANKS[letter]
    if not lo <= rank <= hi:
        raise UnsupportedType(f"type {letter} rank {rank} outside supported range [{lo},{hi}]")
    return RootDatum(cartan_matrix(letter, rank), lattice=lattice,
                     label=f"{letter}{rank}", torsion_override=torsion_override)


def _from_label(label, lattice, torsion_override):
    parts = label.upper().split("X")
    blocks = []
    for part in parts:
        letter, rank = part[0], int(part[1:])
        if letter not in _SUPPORTED_RANKS:
            raise UnsupportedType(f"unsupported Dynkin type {letter!r}")
        lo, hi = _SUPPORTED_RANKS[letter]
        if not lo <= rank <= hi:
            raise UnsupportedType(f"type {letter} rank {rank} outside supported range [{lo},{hi}]")
        blocks.append(cartan_matrix(letter, rank))
    n = sum(len(b) for b in blocks)
    cartan = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                cartan[off + i][off + j] = x
        off += len(b)
    return RootDatum(cartan, lattice=lattice, label="x".join(parts),
                     torsion_override=torsion_override)


def _from_descriptor(data, torsion_override):
    lattice = data.get("lattice", "sc")
    if "cartan" in data:
        return RootDatum(data["cartan"], lattice=lattice,
                         torsion_override=torsion_override)
    return build_root_datum(data["type"], data.get("rank"), lattice,
                            torsion_override=torsion_override)


def weyl_group(datum, cap=DEFAULT_GROUP_CAP):
    return datum.weyl_group(cap=cap)


def reflect(datum, lam, r):
    return datum.reflect(lam, r)


def bruhat_leq(v, w):
    if v.group is not w.group:
        raise ValueError("elements from different groups")
    return v.group.bruhat_leq(v, w)
