import random

import pytest

from echotk import aglgroup as ag


def test_compose_identity_and_translations():
    e = ag.AglElem(2, 1, 2, 2, 1, 3, 0)
    assert ag.compose(ag.identity(2), e) == e
    assert ag.compose(e, ag.identity(2)) == e
    t1 = ag.AglElem(2, 1, 0, 1, 0, 0, 1)
    t2 = ag.AglElem(2, 0, 1, 1, 0, 0, 1)
    assert ag.compose(t1, t2) == ag.AglElem(2, 1, 1, 1, 0, 0, 1)


def test_compose_level_mismatch():
    with pytest.raises(ag.LevelMismatchError):
        ag.compose(ag.identity(2), ag.identity(3))


def test_inverses_random():
    rng = random.Random(0)
    pool = sorted(ag.full_agl(2).raw_elements())
    for _ in range(100):
        e = ag.AglElem(2, *rng.choice(pool))
        assert ag.compose(e, ag.inverse(e)) == ag.identity(2)
        assert ag.compose(ag.inverse(e), e) == ag.identity(2)


def test_embed_3x3_is_a_homomorphism():
    rng = random.Random(1)
    pool = sorted(ag.full_agl(3).raw_elements())

    def matmul3(x, y, mod=8):
        return tuple(
            tuple(sum(x[i][t] * y[t][j] for t in range(3)) % mod for j in range(3))
            for i in range(3)
        )

    for _ in range(1000):
        e = ag.AglElem(3, *rng.choice(pool))
        f = ag.AglElem(3, *rng.choice(pool))
        assert matmul3(ag.embed_3x3(e), ag.embed_3x3(f)) == ag.embed_3x3(ag.compose(e, f))


def test_pack_unpack_roundtrip():
    rng = random.Random(2)
    for k in (2, 3, 4):
        for _ in range(50):
            raw = tuple(rng.randrange(1 << k) for _ in range(6))
            assert ag.unpack(ag.pack(raw, k), k) == raw


def test_closure_examples():
    assert ag.h2().order == 384
    assert ag.full_agl(2).order == 1536
    assert ag.full_agl(1).order == 24
    assert ag.closure([ag.identity(2)]).order == 1


def test_group_order_formulas():
    # |AGL| = 24 * 64^(k-1), |GL| = 6 * 16^(k-1), checked by closure
    for k in (1, 2, 3):
        full = ag.full_agl(k)
        assert full.order == 24 * 64 ** (k - 1)
        assert full.matrix_image_size() == 6 * 16 ** (k - 1)


def test_is_kinetic():
    assert ag.is_kinetic(ag.h2())
    assert ag.is_kinetic(ag.full_agl(2))
    assert not ag.is_kinetic(ag.closure([ag.identity(2)]))


def test_build_hk_orders_and_index():
    assert ag.build_hk(2).order == 384
    assert ag.build_hk(3).order == 24576
    assert ag.build_hk(4).order == 1572864
    for k in (2, 3, 4):
        assert ag.AGL_ORDERS[k] // ag.build_hk(k).order == 4


def test_build_hk_surjectivity():
    for k in (2, 3, 4):
        rep = ag.build_hk(k)
        assert rep.matrix_image_size() == ag.GL_ORDERS[k]
        assert rep.mod2_image_size() == 24


def test_build_hk_reduction_tower():
    for k in (3, 4):
        assert ag.build_hk(k).reduce(k - 1).codes == ag.build_hk(k - 1).codes


def test_build_hk_generators_generate():
    for k in (2, 3):
        rep = ag.build_hk(k)
        assert ag.closure(rep.generators).codes == rep.codes


def test_hk_membership_predicate():
    h3 = ag.build_hk(3)
    rng = random.Random(3)
    pool = sorted(ag.full_agl(3).raw_elements())
    for _ in range(300):
        e = ag.AglElem(3, *rng.choice(pool))
        assert ag.hk_contains(e) == h3.contains(e)
    # works at levels beyond materialization
    assert ag.hk_contains(ag.AglElem(6, 0, 0, 1, 0, 0, 1))


def test_build_hk_materialization_cap():
    with pytest.raises(ag.ResourceBudgetError):
        ag.build_hk(5)


def test_classify_level2():
    classes = ag.classify_kinetic(2)
    assert len(classes) == 2
    assert classes[0].order == 1536
    assert classes[1].order == 384
    assert classes[1].representative.codes == ag.h2().codes
    assert all(ag.is_kinetic(c.representative) for c in classes)


def test_classify_budget():
    with pytest.raises(ag.ResourceBudgetError):
        ag.classify_kinetic(2, budget_seconds=1e-9)


def test_classify_rejects_other_levels():
    with pytest.raises(ValueError):
        ag.classify_kinetic(4)


def test_coset_structure():
    assert ag.coset_structure_check()
    # wrong order: the full group is not H_2
    assert not ag.coset_structure_check(h=ag.full_agl(2))


def test_coset_structure_rejects_random_order24_subgroups():
    # negative control: replace J by other 24-element matrix subgroups
    rng = random.Random(4)
    mats = sorted({raw[2:] for raw in ag.full_agl(2).raw_elements()})
    j = ag._matrix_closure(list(ag.J_GENERATORS), 2)
    tried = 0
    while tried < 5:
        g1, g2 = rng.choice(mats), rng.choice(mats)
        got = ag._matrix_closure([g1, g2], 2)
        if len(got) != 24 or got == j:
            continue
        tried += 1
        assert not ag.coset_structure_check(j_mats=got)


def test_kernel_generators_generate_the_kernel():
    gens = [g.raw for g in ag._kernel_generators(3)]
    got = ag._closure_raw(gens, 3)
    assert len(got) == 64
    assert all(ag._reduce_raw(e, 2) == (0, 0, 1, 0, 0, 1) for e in got)


def _all_subspaces_f2(n):
    """Every subspace of F_2^n, as a frozenset of vector codes, via RREFs."""
    from itertools import combinations, product

    out = set()
    for r in range(n + 1):
        for pivots in combinations(range(n), r):
            free_positions = []
            for i, p in enumerate(pivots):
                for c in range(p + 1, n):
                    if c not in pivots:
                        free_positions.append((i, c))
            for bits in product((0, 1), repeat=len(free_positions)):
                rows = []
                for i, p in enumerate(pivots):
                    row = [0] * n
                    row[p] = 1
                    rows.append(row)
                for (i, c), bit in zip(free_positions, bits):
                    rows[i][c] = bit
                span = {0}
                for row in rows:
                    code = int("".join(map(str, row)), 2)
                    span |= {x ^ code for x in span}
                out.add(frozenset(span))
    return out


def test_stable_submodule_enumeration_is_complete():
    # cross-check the lattice search against a filter over ALL subspaces
    found = set(ag._stable_kernel_submodules())
    level1 = sorted(ag.full_agl(1).raw_elements())

    def act(t, code):
        v0, v1, m00, m01, m10, m11 = t
        u0, u1 = (code >> 5) & 1, (code >> 4) & 1
        a00, a01, a10, a11 = (code >> 3) & 1, (code >> 2) & 1, (code >> 1) & 1, code & 1
        i00, i01, i10, i11 = m11, m01, m10, m00
        t00 = (m00 * a00 + m01 * a10) & 1
        t01 = (m00 * a01 + m01 * a11) & 1
        t10 = (m10 * a00 + m11 * a10) & 1
        t11 = (m10 * a01 + m11 * a11) & 1
        b00 = (t00 * i00 + t01 * i10) & 1
        b01 = (t00 * i01 + t01 * i11) & 1
        b10 = (t10 * i00 + t11 * i10) & 1
        b11 = (t10 * i01 + t11 * i11) & 1
        w0 = (m00 * u0 + m01 * u1 + b00 * v0 + b01 * v1) & 1
        w1 = (m10 * u0 + m11 * u1 + b10 * v0 + b11 * v1) & 1
        return (w0 << 5) | (w1 << 4) | (b00 << 3) | (b01 << 2) | (b10 << 1) | b11

    stable = {
        sub
        for sub in _all_subspaces_f2(6)
        if all(act(t, x) in sub for t in level1 for x in sub)
    }
    assert found == stable
    assert sorted(len(s) for s in found) == [1, 4, 8, 16, 16, 32, 64]


def test_h2_is_maximal_spot_check():
    # adjoining anything outside immediately generates the whole group
    rng = random.Random(8)
    outside = sorted(set(ag.full_agl(2).raw_elements()) - set(ag.h2().raw_elements()))
    for g in rng.sample(outside, 40):
        grown = ag.closure(list(ag.H2_GENERATORS) + [ag.AglElem(2, *g)])
        assert grown.order == 1536
