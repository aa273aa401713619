"""Group-level API tests: description, sampling, verification, arithmetic."""

import pytest

from isotropy.errors import (DimensionMismatchError, MembershipError,
                             ParameterError, StructureError)
from isotropy.forms import (MultiSegreStructure, SegreStructure,
                            enumerate_structures, symmetric_form)
from isotropy.generators import gen_W
from isotropy.matrices import (ExactMatrix, cayley_orthogonal, diagonal,
                               identity, zeros)
from isotropy.rng import RandomSource
from isotropy.scalars import IMAG, ONE, ZERO, rat
from isotropy.solver import (CongruenceData, FreeParams, random_free_params,
                             solution_dimension, solve_congruence)
from isotropy.stabilizer import (describe_isotropy, from_toeplitz_coordinates,
                                 group_element_inv, group_element_mul,
                                 sample_isotropy_element,
                                 to_toeplitz_coordinates, verify_isotropy)


def _st(blocks, lam=IMAG):
    return SegreStructure(lam, blocks)


# ---------------------------------------------------------------------------
# descriptions
# ---------------------------------------------------------------------------


def test_describe_full_orthogonal_case():
    for n in (1, 2, 5):
        d = describe_isotropy(_st([(1, n)]))
        assert d.dimension == n * (n - 1) // 2
        assert d.reductive_part == (n,)
        assert d.unipotent_order_bound == 0
        assert d.nilpotency_class_bound == 1
        assert d.generator_recipes["diagonal_skews"] == []
        assert d.generator_recipes["couplings"] == []


def test_describe_rigid_block():
    d = describe_isotropy(_st([(2, 1)]))
    assert d.dimension == 0
    assert d.reductive_part == (1,)
    assert d.unipotent_order_bound == 1
    assert d.nilpotency_class_bound == 2


def test_describe_two_distinct_scalar_parts():
    multi = MultiSegreStructure([_st([(1, 1)], 0), _st([(1, 1)], 1)])
    d = describe_isotropy(multi)
    assert d.dimension == 0
    assert d.reductive_part == (1, 1)
    assert len(d.parts) == 2
    assert all(p.dimension == 0 for p in d.parts)


def test_describe_totals_are_part_sums():
    multi = MultiSegreStructure([_st([(3, 2), (1, 1)], 0), _st([(2, 2)], 1)])
    d = describe_isotropy(multi)
    assert d.dimension == sum(p.dimension for p in d.parts)
    assert d.dimension == (solution_dimension(_st([(3, 2), (1, 1)], 0))
                           + solution_dimension(_st([(2, 2)], 1)))
    assert d.reductive_part == (2, 1, 2)
    assert d.unipotent_order_bound == 2
    assert d.nilpotency_class_bound == 3


def test_recipe_slots_count_the_dimension():
    for n in range(1, 7):
        for st in enumerate_structures(n, IMAG):
            d = describe_isotropy(st)
            total = 0
            for seed in d.generator_recipes["orthogonal_seeds"]:
                total += seed["size"] * (seed["size"] - 1) // 2
            for sk in d.generator_recipes["diagonal_skews"]:
                total += sk["size"] * (sk["size"] - 1) // 2
            for cp in d.generator_recipes["couplings"]:
                total += cp["shape"][0] * cp["shape"][1]
            assert total == d.dimension == solution_dimension(st)


def test_describe_rejects_junk():
    with pytest.raises(StructureError):
        describe_isotropy([(2, 1)])


def test_duplicate_eigenvalues_rejected_at_construction():
    with pytest.raises(StructureError):
        MultiSegreStructure([_st([(2, 1)], 0), _st([(1, 1)], 0)])


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def test_sample_plain_rotation():
    st = _st([(1, 2)])
    z = ExactMatrix.from_rows([[0, 1], [-1, 0]])
    q = sample_isotropy_element(st, FreeParams.zero(st),
                                seeds=[cayley_orthogonal(z)])
    assert q == ExactMatrix.from_rows([[0, -1], [1, 0]])
    s = symmetric_form(st)
    assert q.transpose() * s * q == s


def test_sample_central_element():
    st = _st([(2, 1)])
    q = sample_isotropy_element(st, FreeParams.zero(st),
                                seeds=[ExactMatrix.from_rows([[-1]])])
    assert q == identity(2).scale(rat(-1))


def test_sample_nontrivial_sub_block():
    st = _st([(2, 1), (1, 1)])
    params = FreeParams(
        {(1, 0, 0): ExactMatrix.from_rows([[1]])},
        [identity(1), identity(1)],
        {(0, 1): zeros(1, 1)},
    )
    q = sample_isotropy_element(st, params)
    assert q != identity(3)
    ok, report = verify_isotropy(st, q)
    assert ok, report


def test_sample_random_members_across_structures():
    rnd = RandomSource(20240855)
    shapes = [[(1, 3)], [(2, 2)], [(3, 1)], [(2, 1), (1, 2)],
              [(3, 2), (1, 1)], [(4, 1), (2, 1)]]
    for blocks in shapes:
        st = _st(blocks)
        for _ in range(3):
            q = sample_isotropy_element(st, rnd=rnd)
            ok, report = verify_isotropy(st, q)
            assert ok, report


def test_sample_multi_is_block_diagonal():
    rnd = RandomSource(20240856)
    multi = MultiSegreStructure([_st([(2, 1)], 0), _st([(1, 2)], 1)])
    q = sample_isotropy_element(multi, rnd=rnd)
    ok, report = verify_isotropy(multi, q)
    assert ok, report
    for i in range(2):
        for j in range(2, 4):
            assert q[i, j] == ZERO
            assert q[j, i] == ZERO
    top = ExactMatrix.from_rows([[q[i, j] for j in range(2)]
                                 for i in range(2)])
    bottom = ExactMatrix.from_rows([[q[i, j] for j in range(2, 4)]
                                    for i in range(2, 4)])
    assert verify_isotropy(multi.parts[0], top)[0]
    assert verify_isotropy(multi.parts[1], bottom)[0]


def test_sample_requires_params_or_rng():
    with pytest.raises(ParameterError):
        sample_isotropy_element(_st([(2, 1)]))
    multi = MultiSegreStructure([_st([(1, 1)], 0), _st([(1, 1)], 1)])
    with pytest.raises(ParameterError):
        sample_isotropy_element(multi, params=[None])


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


def test_verify_identity_and_center():
    st = _st([(3, 1), (1, 1)])
    ok, report = verify_isotropy(st, identity(4))
    assert ok and "member" in report
    assert verify_isotropy(st, identity(4).scale(rat(-1)))[0]


def test_verify_reports_orthogonality_first():
    st = _st([(2, 1)])
    ok, report = verify_isotropy(st, identity(2).scale(rat(2)))
    assert not ok
    assert "orthogonality" in report


def test_verify_reports_congruence_for_orthogonal_non_member():
    st = _st([(2, 1)], 0)
    flip = diagonal([ONE, -ONE])
    assert symmetric_form(st)[0, 1] != ZERO
    ok, report = verify_isotropy(st, flip)
    assert not ok
    assert "congruence" in report


def test_verify_rejects_wrong_shape():
    with pytest.raises(DimensionMismatchError):
        verify_isotropy(_st([(2, 1)]), identity(3))


# ---------------------------------------------------------------------------
# coordinate round trips
# ---------------------------------------------------------------------------


def test_coordinate_maps_invert_each_other():
    rnd = RandomSource(20240857)
    for blocks in ([(3, 2)], [(2, 1), (1, 2)], [(4, 1), (2, 1)]):
        st = _st(blocks)
        data = CongruenceData.identity(st)
        x = solve_congruence(data, random_free_params(data, rnd))
        q = from_toeplitz_coordinates(st, x)
        assert to_toeplitz_coordinates(st, q) == x
        assert from_toeplitz_coordinates(st, to_toeplitz_coordinates(st, q)) == q


def test_to_toeplitz_rejects_non_members():
    st = _st([(2, 1)])
    with pytest.raises(MembershipError):
        to_toeplitz_coordinates(st, identity(2).scale(rat(3)))


# ---------------------------------------------------------------------------
# group arithmetic
# ---------------------------------------------------------------------------


def test_products_and_inverses_stay_members():
    rnd = RandomSource(20240858)
    st = _st([(3, 1), (2, 2)])
    q1 = sample_isotropy_element(st, rnd=rnd)
    q2 = sample_isotropy_element(st, rnd=rnd)
    prod = group_element_mul(st, [q1, q2])
    assert verify_isotropy(st, prod)[0]
    inv = group_element_inv(st, q1)
    assert inv == q1.transpose()
    assert group_element_mul(st, [q1, inv]) == identity(st.n)
    assert verify_isotropy(st, group_element_mul(st, [q1, group_element_inv(st, q2)]))[0]


def test_mul_rejects_non_member_input():
    st = _st([(2, 1)])
    with pytest.raises(MembershipError):
        group_element_mul(st, [identity(2), identity(2).scale(rat(2))])
    with pytest.raises(MembershipError):
        group_element_inv(st, identity(2).scale(rat(2)))


def test_mul_rejects_mixed_or_empty():
    st = _st([(2, 1)])
    form = solve_congruence(CongruenceData.identity(st),
                            FreeParams.zero(st))
    with pytest.raises(ParameterError):
        group_element_mul(st, [identity(2), form])
    with pytest.raises(ParameterError):
        group_element_mul(st, [])


def test_form_level_products_and_inverses():
    rnd = RandomSource(20240859)
    st = _st([(3, 2), (2, 1)])
    data = CongruenceData.identity(st)
    x1 = solve_congruence(data, random_free_params(data, rnd))
    x2 = solve_congruence(data, random_free_params(data, rnd))
    prod = group_element_mul(st, [x1, x2])
    assert prod == x1 * x2
    inv = group_element_inv(st, x1)
    assert inv == x1.flip_transpose()
    assert (x1 * inv).is_identity


def test_leading_diagonal_projection_is_homomorphism():
    rnd = RandomSource(20240860)
    st = _st([(3, 1), (2, 2), (1, 1)])
    data = CongruenceData.identity(st)
    for _ in range(4):
        x1 = solve_congruence(data, random_free_params(data, rnd))
        x2 = solve_congruence(data, random_free_params(data, rnd))
        prod = x1 * x2
        for r in range(st.part_count):
            lead1 = x1.coefficient(r, r, 0)
            lead2 = x2.coefficient(r, r, 0)
            assert prod.coefficient(r, r, 0) == lead1 * lead2
            assert lead1.transpose() * lead1 == identity(st.mults[r])


def test_orthogonal_conjugate_preserves_unipotent_shape():
    rnd = RandomSource(20240861)
    st = _st([(3, 1), (2, 2)])
    data = CongruenceData.identity(st)
    o_params = random_free_params(data, rnd)
    base = FreeParams.zero(st)
    o_form = solve_congruence(
        data, FreeParams(base.sub_blocks, o_params.diag_seeds, base.skews))
    skews = {(0, 1): rnd.skew(1), (0, 2): rnd.skew(1), (1, 1): rnd.skew(2)}
    v_form = gen_W(st, skews)
    conj = group_element_mul(
        st, [o_form, v_form, group_element_inv(st, o_form)])
    assert conj.has_identity_diagonal
    assert not conj.is_identity
