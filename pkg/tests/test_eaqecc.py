"""CSS parameter derivation, ebit formulas, distance verdicts, closed forms."""

from fractions import Fraction

import pytest

from eaqldpc.designs import DesignError, build_sts, verify_steiner
from eaqldpc.eaqecc import (
    BLOCK_BY_POINT,
    POINT_BY_BLOCK,
    DeletionRecord,
    assemble_params,
    css_from_parity_check,
    distance_verdict,
    expected_c,
    family_params,
    hillebrandt_bounds,
    net_rate_report,
    normalize_orientation,
    oriented_matrix,
)
from eaqldpc.gf2 import BitMatrix, rank_value


def test_orientation_aliases():
    assert normalize_orientation("II") == POINT_BY_BLOCK
    assert normalize_orientation("i") == BLOCK_BY_POINT
    assert normalize_orientation("point_by_block") == POINT_BY_BLOCK
    with pytest.raises(ValueError):
        normalize_orientation("sideways")


def test_css_pg32(cache):
    H = oriented_matrix(cache.geometry("PG", 3, 2).structure, POINT_BY_BLOCK)
    p = css_from_parity_check(H, POINT_BY_BLOCK)
    assert (p.n, p.k, p.c, p.rank_h) == (35, 14, 1, 11)


def test_css_fano_zero_k(fano):
    H = oriented_matrix(fano.structure, POINT_BY_BLOCK)
    with pytest.warns(UserWarning, match="degenerate code"):
        p = css_from_parity_check(H, POINT_BY_BLOCK)
    assert (p.n, p.k, p.c) == (7, 0, 1)


def test_css_ag216_type_i(cache):
    H = oriented_matrix(cache.geometry("AG", 2, 16).structure, BLOCK_BY_POINT)
    p = css_from_parity_check(H, BLOCK_BY_POINT)
    assert (p.n, p.k, p.c) == (256, 110, 16)


def test_css_rejects_zero_matrix():
    with pytest.raises(ValueError):
        css_from_parity_check(BitMatrix.zeros(3, 4), POINT_BY_BLOCK)


def test_k_identity_and_gram_bound(cache):
    for kind, m, q, orient in (
        ("PG", 3, 2, POINT_BY_BLOCK),
        ("AG", 2, 4, BLOCK_BY_POINT),
        ("EG", 3, 2, POINT_BY_BLOCK),
    ):
        H = oriented_matrix(cache.geometry(kind, m, q).structure, orient)
        p = css_from_parity_check(H, orient)
        assert p.k == p.n - 2 * p.rank_h + p.c
        assert p.c <= p.rank_h


def test_expected_c_sts13():
    S = build_sts(13)
    params = verify_steiner(S, 3)
    assert params.r == 6
    assert expected_c(params, POINT_BY_BLOCK) == 12  # r even: c = v - 1


def test_expected_c_sts_odd_r():
    params = verify_steiner(build_sts(7), 3)
    assert expected_c(params, POINT_BY_BLOCK) == 1


def test_expected_c_deletions(cache):
    pg52 = cache.geometry("PG", 5, 2)
    params = verify_steiner(pg52.structure, 3)
    spread = cache.spread("PG", 5, 2, 2)
    for j in range(0, 9):
        rec = DeletionRecord.from_spread(pg52.structure, spread, j, 3)
        assert expected_c(params, POINT_BY_BLOCK, rec) == j + 1
    rec9 = DeletionRecord.from_spread(pg52.structure, spread, 9, 3)
    assert rec9.covers_all_points
    assert expected_c(params, POINT_BY_BLOCK, rec9) == 8  # |S| = 9 odd: c = |S| - 1


def test_expected_c_even_replication_parts(cache):
    ag33 = cache.geometry("AG", 3, 3)
    params = verify_steiner(ag33.structure, 3)
    spread = cache.spread("AG", 3, 3, None)
    rec = DeletionRecord.from_spread(ag33.structure, spread, 1, 3)
    assert rec.part_replications == (4,)
    assert expected_c(params, POINT_BY_BLOCK, rec) == 9  # (9-1) + 1


def test_expected_c_mixed_parities_rejected():
    params = verify_steiner(build_sts(7), 3)
    rec = DeletionRecord(part_orders=(7, 9), part_replications=(3, 4), covers_all_points=False)
    with pytest.raises(DesignError):
        expected_c(params, POINT_BY_BLOCK, rec)


def test_expected_c_type_i_closed_forms():
    params = verify_steiner(build_sts(7), 3)  # any Steiner params; family drives the result
    assert expected_c(params, BLOCK_BY_POINT, family=("PG", 2, 16)) == 1
    assert expected_c(params, BLOCK_BY_POINT, family=("AG", 2, 16)) == 16
    assert expected_c(params, BLOCK_BY_POINT, family=("EG", 2, 8)) == 8
    lo, hi = expected_c(params, BLOCK_BY_POINT, family=("PG", 3, 2))
    assert lo == 1 and hi == 11  # bounded by the rank formula


def test_hillebrandt_bounds():
    assert hillebrandt_bounds(7, 3) == (4, 7)
    assert hillebrandt_bounds(9, 3) == (5, 9)
    lo, hi = hillebrandt_bounds(10, 9)
    assert lo <= 4 and hi == 10


def test_rank_within_hillebrandt():
    for v in (7, 9, 13, 15):
        S = build_sts(v)
        lo, hi = hillebrandt_bounds(v, 3)
        rk = rank_value(S.point_by_block())
        assert lo <= rk <= hi


def test_distance_verdict_pg32_enumeration(cache):
    design = cache.geometry("PG", 3, 2)
    _, verdict = cache.params("PG", 3, 2, POINT_BY_BLOCK)
    assert verdict.result.status == "exact" and verdict.result.upper == 4
    assert verdict.certified
    assert any(s.startswith("enumeration") for s in verdict.sources)
    assert any("dual_hyperoval" in s for s in verdict.sources)


def test_distance_verdict_ag33(cache):
    params, verdict = cache.params("AG", 3, 3, POINT_BY_BLOCK)
    assert verdict.result.upper == 6 and verdict.result.status == "exact"
    assert (params.n, params.k, params.c) == (117, 64, 1)


def test_distance_verdict_eg216_type_i(cache):
    params, verdict = cache.params("EG", 2, 16, BLOCK_BY_POINT)
    assert verdict.result.status == "exact" and verdict.result.upper == 17
    assert verdict.certified  # structural r+1 bound meets the hyperoval witness
    assert (params.n, params.k, params.c) == (255, 111, 16)


def test_distance_verdict_sts_window():
    S = build_sts(9)
    verdict = distance_verdict(S, POINT_BY_BLOCK)
    assert verdict.result.status == "exact"
    assert 4 <= verdict.result.upper <= 8


def test_family_params_examples():
    p = family_params("PG", "I", 2, 16)
    assert (p.n, p.k, p.d.upper, p.c) == (273, 110, 18, 1)
    p = family_params("AG", "II", 3, 5)
    assert (p.n, p.k, p.d.upper, p.c) == (775, 526, 10, 1)
    p = family_params("EG", "II", 3, 4)
    assert (p.n, p.k, p.d.upper, p.c) == (315, 235, 5, 20)
    p = family_params("AG", "I", 2, 8)
    assert (p.n, p.k, p.d.upper, p.c) == (64, 18, 10, 8)
    p = family_params("EG", "I", 2, 8)
    assert (p.n, p.k, p.d.upper, p.c) == (63, 19, 9, 8)


def test_family_params_uncovered():
    with pytest.raises(ValueError):
        family_params("PG", "I", 3, 2)  # Type I beyond planes has no closed c
    with pytest.raises(ValueError):
        family_params("EG", "II", 3, 3)  # q odd EG: rank not closed-form


def test_net_rate_report(cache):
    params, _ = cache.params("AG", 2, 16, BLOCK_BY_POINT)
    rep = net_rate_report(params)
    assert rep["net_rate"] == Fraction(110 - 16, 256)
    assert rep["net_rate_4dp"] == "0.3672"
    params2, _ = cache.params("PG", 4, 3, POINT_BY_BLOCK)
    assert f"{float(params2.rate):.4f}" == "0.9008"


def test_net_rate_zero_when_k_equals_c(fano):
    # scale-free sanity: k = c gives net rate 0
    from eaqldpc.eaqecc import EaqeccParams
    from eaqldpc.gf2 import DistanceResult

    p = EaqeccParams(
        n=10, k=2, c=2, d=DistanceResult("bounded", 1, 10), rank_h=5,
        orientation=POINT_BY_BLOCK, girth=6,
    )
    assert p.net_rate == 0


def test_positive_net_rate_pg_planes_type_i(cache):
    # Type I plane codes have positive net rate for t in 2..6
    for t in (2, 3, 4, 5, 6):
        p = family_params("PG", "I", 2, 2**t)
        assert p.net_rate > 0


def test_ag_plane_type_i_gram_block_structure(cache):
    """Reordering H^T H by parallel classes exposes zero diagonal blocks and
    all-one off-diagonal blocks (q even, m=2)."""
    from eaqldpc import gf2

    for q in (2, 4, 8, 16):
        design = cache.geometry("AG", 2, q)
        M = oriented_matrix(design.structure, BLOCK_BY_POINT)
        G = gf2.multiply(M, M.transpose())  # b x b, blocks ordered arbitrarily
        # group block indices by direction (parallel classes): two lines meet
        # in one point iff they are in different classes
        classes: dict[tuple, list[int]] = {}
        field = design.field
        for idx, blk in enumerate(design.structure.blocks):
            p0 = design.point_coords[blk[0]]
            p1 = design.point_coords[blk[1]]
            d = tuple(field.sub(a, b) for a, b in zip(p1, p0))
            d = field.normalize_projective(d)
            classes.setdefault(d, []).append(idx)
        assert len(classes) == q + 1
        for ci, idxs in classes.items():
            assert len(idxs) == q
        for ci, idxs in classes.items():
            for cj, jdxs in classes.items():
                for i in idxs:
                    row = G.row(i)
                    for j in jdxs:
                        bit = (row >> j) & 1
                        assert bit == (0 if ci == cj else 1)


def test_assemble_params_girth(cache):
    params, _ = cache.params("PG", 3, 2, POINT_BY_BLOCK)
    assert params.girth == 6
