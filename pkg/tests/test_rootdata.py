from itertools import combinations

import pytest

from hecke_forge.errors import GroupTooLarge, UnsupportedType
from hecke_forge.rootdata import (
    build_root_datum, bruhat_leq, cartan_matrix, reflect, weyl_group,
)


def test_a2_basic_data(a2):
    assert a2.n_pos == 3
    assert a2.lattice_index == 3
    assert a2.torsion_index == 1


def test_a1_simple_root_is_twice_omega(a1):
    omega = a1.fundamental_weight(1)
    assert a1.root_weight(1) == (2,)
    assert a1.pairing(omega, 1) == 1


def test_g2_positive_roots_via_independent_closure(g2):
    # independent oracle: orbit closure on simple-root coordinates only
    cartan = cartan_matrix("G", 2)
    roots = {(1, 0), (0, 1)}
    frontier = set(roots)
    while frontier:
        nxt = set()
        for c in frontier:
            for i in range(2):
                t = sum(cartan[i][j] * c[j] for j in range(2))
                img = list(c)
                img[i] -= t
                img = tuple(img)
                if all(x >= 0 for x in img) and img not in roots:
                    roots.add(img)
                    nxt.add(img)
        frontier = nxt
    assert len(roots) == 6
    assert {r.alpha for r in g2.pos_roots} == roots
    assert g2.m[0][1] == 6


def test_weyl_group_sizes(a1, a2, b2, g2):
    assert len(weyl_group(a1)) == 2
    assert len(weyl_group(a2)) == 6
    assert len(weyl_group(b2)) == 8
    assert len(weyl_group(g2)) == 12
    assert len(weyl_group(build_root_datum("A1xA1"))) == 4


def test_a2_longest_element_words(a2):
    W = weyl_group(a2)
    w0 = W.longest()
    assert w0.length == 3
    assert w0.reduced_words == ((1, 2, 1), (2, 1, 2))


def test_a1_inversion_set(a1):
    W = weyl_group(a1)
    s = W.from_word((1,))
    assert s.inversion_set == (0,)
    assert W.identity.inversion_set == ()


def test_b2_m_matrix(b2):
    assert b2.m[0][1] == 4


def test_reflect_examples(a1, a2):
    omega = a1.fundamental_weight(1)
    assert reflect(a1, omega, 1) == (-1,)
    assert reflect(a1, reflect(a1, omega, 1), 1) == omega
    # <omega_2, alpha_1^vee> = 0 so s_1 fixes omega_2
    w2 = a2.fundamental_weight(2)
    assert a2.pairing(w2, 1) == 0
    assert reflect(a2, w2, 1) == w2


def test_reflect_fixes_orthogonal_weights(a2):
    for lam in [(1, 0), (0, 1), (2, -1)]:
        for r in range(1, a2.n_pos + 1):
            if a2.pairing(lam, r) == 0:
                assert reflect(a2, lam, r) == lam


def _subword_oracle(W, v, w):
    """Bruhat order via the raw subword property on one reduced word of w."""
    word = w.word
    for k in range(len(word) + 1):
        for positions in combinations(range(len(word)), k):
            sub = tuple(word[p] for p in positions)
            u = W.from_word(sub)
            if u is v and u.length == len(sub):
                return True
    return False


def test_bruhat_examples_and_oracle(a2):
    W = weyl_group(a2)
    e = W.identity
    s1 = W.from_word((1,))
    s12 = W.from_word((1, 2))
    s21 = W.from_word((2, 1))
    for w in W:
        assert bruhat_leq(e, w)
    assert bruhat_leq(s1, s12)
    assert not bruhat_leq(s12, s21)
    # exhaustive cross-check against the subword definition
    for v in W:
        for w in W:
            assert bruhat_leq(v, w) == _subword_oracle(W, v, w), (v.word, w.word)


def test_bruhat_partial_order(b2):
    W = weyl_group(b2)
    w0 = W.longest()
    for w in W:
        assert bruhat_leq(W.identity, w)
        assert bruhat_leq(w, w0)
        for v in W:
            if bruhat_leq(v, w) and bruhat_leq(w, v):
                assert v is w


def test_reduced_words_agree_and_lengths(b2):
    W = weyl_group(b2)
    for w in W:
        mats = {tuple(map(tuple, _word_matrix(W, word))) for word in w.reduced_words}
        assert mats == {w.mat}
        for word in w.reduced_words:
            assert len(word) == w.length
        for i in range(1, 3):
            assert abs(W.right_mul(w, i).length - w.length) == 1


def _word_matrix(W, word):
    mat = None
    for i in word:
        s = W.simple_mats[i - 1]
        if mat is None:
            mat = s
        else:
            n = len(mat)
            mat = tuple(tuple(sum(mat[r][k] * s[k][c] for k in range(n))
                              for c in range(n)) for r in range(n))
    if mat is None:
        n = W.datum.rank
        mat = tuple(tuple(1 if r == c else 0 for c in range(n)) for r in range(n))
    return mat


def test_inversion_set_matches_word_accumulation(g2):
    W = weyl_group(g2)
    datum = g2
    for w in W:
        word = w.word
        acc = set()
        prefix = W.identity
        for i in word:
            # alpha = prefix(alpha_i) as a signed positive root
            img = W.root_image(prefix, i)
            assert img > 0
            acc.add(img - 1)
            prefix = W.product(prefix, W.from_word((i,)))
        assert set(w.inversion_set) == acc
        assert len(w.inversion_set) == w.length
    assert set(W.longest().inversion_set) == set(range(datum.n_pos))


def test_unsupported_types():
    with pytest.raises(UnsupportedType):
        build_root_datum("E", 6)
    with pytest.raises(UnsupportedType):
        build_root_datum("G", 3)
    with pytest.raises(UnsupportedType):
        build_root_datum("A", 9)


def test_group_cap():
    datum = build_root_datum("B4")
    with pytest.raises(GroupTooLarge):
        datum.weyl_group(cap=100)


def test_json_descriptors():
    d = build_root_datum({"type": "A", "rank": 2, "lattice": "sc"})
    assert d.n_pos == 3
    d2 = build_root_datum('{"cartan": [[2,-1],[-1,2]], "lattice": "sc"}')
    assert d2.n_pos == 3 and d2.torsion_index == 1
    d3 = build_root_datum({"cartan": [[2, -2], [-1, 2]], "lattice": "ad"})
    assert d3.n_pos == 4  # B2 pattern


def test_torsion_override_and_adjoint():
    d = build_root_datum("B", 2, torsion_override=5)
    assert d.torsion_index == 5
    ad = build_root_datum("A", 2, lattice="ad")
    assert ad.n_pos == 3
    # adjoint basis: weights are root-lattice coordinates
    assert ad.root_weight(1) == (1, 0)
    assert ad.pairing((1, 0), 1) == 2
