import itertools
import json

import numpy as np
import pytest

from prodsys import Bicharacter, FreeAbelian, FreeProduct, ProductSystem, build_truncation, fock
from prodsys.reps import (
    GeneratorAssignment,
    alpha_phi,
    check_covariance,
    check_faithfulness_criterion,
    check_representation,
    criterion_string,
    default_letters,
    evaluate_relation,
    extend_rep,
    faithfulness_product,
    fock_assignment,
    gen_cov_relations,
    gen_isometry_relations,
    gen_mult_relations,
)

N2 = FreeAbelian(2)
FP = FreeProduct(2)

COMMUTATION_23 = [
    "U_1V_1 = V_1U_1",
    "U_1V_2 = V_1U_2",
    "U_1V_3 = V_2U_1",
    "U_2V_1 = V_2U_2",
    "U_2V_2 = V_3U_1",
    "U_2V_3 = V_3U_2",
]
ADJOINT_23 = [
    "U_1^*V_1 = V_1U_1^* + V_2U_2^*",
    "U_1^*V_2 = V_3U_1^*",
    "U_1^*V_3 = 0",
    "U_2^*V_1 = 0",
    "U_2^*V_2 = V_1U_2^*",
    "U_2^*V_3 = V_2U_1^* + V_3U_2^*",
]


def shift(n):
    return np.eye(n, k=-1, dtype=complex)


def twisted_system(dims, phases):
    return ProductSystem(N2, dims, twist=Bicharacter(phases).bind(N2))


# -- relation emission --------------------------------------------------------

def test_commutation_relations_23(n2_23):
    assert gen_mult_relations(n2_23).to_display() == COMMUTATION_23


def test_adjoint_relations_23(n2_23):
    assert gen_cov_relations(n2_23).to_display() == ADJOINT_23


def test_trivial_dims_relations():
    system = ProductSystem(N2, (1, 1))
    assert gen_mult_relations(system).to_display() == ["UV = VU"]
    assert gen_cov_relations(system).to_display() == ["U^*V = VU^*"]
    assert gen_isometry_relations(system).to_display() == ["U^*U = I", "V^*V = I"]


def test_relations_over_N():
    system = ProductSystem.over_N(2)
    assert len(gen_mult_relations(system)) == 0
    assert len(gen_cov_relations(system)) == 0
    assert gen_isometry_relations(system).to_display() == ["V_1^*V_1 = I", "V_1^*V_2 = 0", "V_2^*V_1 = 0", "V_2^*V_2 = I"]


def test_free_product_relations(fp_22):
    assert len(gen_mult_relations(fp_22)) == 0
    cov = gen_cov_relations(fp_22)
    assert len(cov) == 4
    assert all(line.endswith("= 0") for line in cov.to_lines())


def test_twisted_commutation_phase():
    w = 0.7
    system = twisted_system((1, 1), [[0, 0], [w, 0]])
    (rel,) = gen_mult_relations(system)
    (c, word), = rel.rhs
    assert word == ((1, 0, False), (0, 0, False))
    assert abs(c - np.exp(-1j * w)) < 1e-12  # UV = conj(omega) VU
    (cov,) = gen_cov_relations(system)
    (c, word), = cov.rhs
    assert abs(c - np.exp(1j * w)) < 1e-12  # U*V = omega VU*


def test_twisted_relations_differ_by_predicted_phases(rng):
    P = rng.uniform(-np.pi, np.pi, size=(2, 2))
    plain = ProductSystem(N2, (2, 3))
    twisted = twisted_system((2, 3), P)
    mu = twisted.mu
    g, h = N2.generator(0), N2.generator(1)
    predicted = {"multiplication": mu(g, h) / mu(h, g), "covariance": mu(h, g) / mu(g, h)}
    for gen in (gen_mult_relations, gen_cov_relations, gen_isometry_relations):
        for a, b in zip(gen(plain), gen(twisted)):
            assert a.lhs == b.lhs and a.kind == b.kind
            assert [w for _, w in a.rhs] == [w for _, w in b.rhs]
            phase = predicted.get(a.kind, 1.0)
            for (ca, _), (cb, _) in zip(a.rhs, b.rhs):
                assert abs(cb - ca * phase) < 1e-12


def test_relation_serialisation(n2_23):
    rels = gen_cov_relations(n2_23)
    text = rels.to_text().splitlines()
    assert text[0] == "S[0,0]' S[1,0] = S[1,0] S[0,0]' + S[1,1] S[0,1]'"
    assert "S[0,0]' S[1,2] = 0" in text
    data = json.loads(rels.to_json())
    assert [d["text"] for d in data] == text
    first = data[0]
    assert first["kind"] == "covariance"
    assert first["lhs"][0] == {"generator": 0, "index": 0, "adjoint": True}
    assert first["rhs"][0]["coeff"] == [1.0, 0.0]
    assert json.loads(gen_mult_relations(n2_23).to_json())[1]["text"] == "S[0,0] S[1,1] = S[1,0] S[0,1]"


def test_relations_canonically_ordered(n2_23):
    rels = (gen_isometry_relations(n2_23) + gen_cov_relations(n2_23)).relations
    keys = [(r.kind, r.lhs) for r in rels]
    assert keys == sorted(keys)


def test_default_letters():
    assert default_letters(ProductSystem.over_N(3)) == ("V",)
    assert default_letters(ProductSystem(N2, (2, 3)))[:2] == ("U", "V")


# -- extension --------------------------------------------------------------------

def test_extend_rep_basics(trunc_n2_L2):
    a = fock_assignment(trunc_n2_L2)
    S = a.system
    np.testing.assert_array_equal(extend_rep(a, S.vacuum), np.eye(a.space_dim))
    for (g, i), img in a.images.items():
        np.testing.assert_array_equal(extend_rep(a, S.basis_vector(N2.generator(g), i)), img)


def test_extend_rep_matches_l_op(trunc_n2_L3, rng):
    tr = trunc_n2_L3
    a = fock_assignment(tr)
    for t in tr.members:
        v = tr.system.random_vector(t, rng)
        np.testing.assert_allclose(extend_rep(a, v), fock.l_op(tr, v).dense(), atol=1e-12)


def test_factorisation_independence_under_commutation(trunc_n2_L3, rng):
    tr = trunc_n2_L3
    a = fock_assignment(tr)
    for t in tr.members:
        letters = N2.generator_letters(t)
        v = tr.system.random_vector(t, rng)
        ref = extend_rep(a, v)
        for order in set(itertools.permutations(letters)):
            np.testing.assert_allclose(extend_rep(a, v, order=order), ref, atol=1e-12)


def test_factorisation_dependence_without_commutation(rng):
    system = ProductSystem(N2, (1, 1))
    U, V = rng.normal(size=(4, 4)), rng.normal(size=(4, 4))
    a = GeneratorAssignment(system, {(0, 0): U, (1, 0): V})
    rep = check_representation(a)
    assert not all(r.passed for r in rep if r.name.startswith("commutation"))
    v = system.basis_vector((1, 1), 0)
    assert np.abs(extend_rep(a, v, order=(0, 1)) - extend_rep(a, v, order=(1, 0))).max() > 1e-3


def test_extend_rep_errors(trunc_n2_L2):
    a = fock_assignment(trunc_n2_L2)
    v = a.system.basis_vector((1, 1), 0)
    with pytest.raises(ValueError):
        extend_rep(a, v, order=(0, 0))
    with pytest.raises(ValueError):
        extend_rep(a, v, strict=True)
    check_representation(a)
    extend_rep(a, v, strict=True)


def test_assignment_shape_validation(n2_23):
    with pytest.raises(ValueError):
        GeneratorAssignment(n2_23, {(0, 0): np.eye(2)})
    imgs = {(g, i): np.eye(3) for g, d in enumerate(n2_23.dims) for i in range(d)}
    imgs[(1, 2)] = np.eye(4)
    with pytest.raises(ValueError):
        GeneratorAssignment(n2_23, imgs)


# -- representation and covariance checks -----------------------------------------

@pytest.mark.parametrize("name", ["trunc_n2_L2", "trunc_fp_L2", "trunc_n2_L3"])
def test_fock_assignment_passes(name, request):
    a = fock_assignment(request.getfixturevalue(name))
    rep = check_representation(a)
    assert rep.passed and a.verified
    assert rep.max_deviation == 0
    cov = check_covariance(a)
    assert cov.passed and cov.max_deviation <= 1e-9


def test_twisted_fock_assignment_passes():
    system = twisted_system((2, 3), [[0.2, -1.0], [0.9, 0.4]])
    a = fock_assignment(build_truncation(system, 2))
    assert check_representation(a).passed
    cov = check_covariance(a)
    assert cov.passed and cov.max_deviation <= 1e-9


def test_every_emitted_relation_is_sound(trunc_n2_L2):
    a = fock_assignment(trunc_n2_L2)
    S = a.system
    for rel in gen_mult_relations(S) + gen_cov_relations(S) + gen_isometry_relations(S):
        dev, dim = evaluate_relation(a, rel)
        assert dev <= 1e-9 and dim > 0


def test_equal_isometries_fail_orthogonality():
    system = ProductSystem.over_N(2)
    S = shift(6)
    interior = np.diag([1, 1, 1, 1, 1, 0]).astype(complex)
    a = GeneratorAssignment(system, {(0, 0): S, (0, 1): S}, interior)
    rep = check_representation(a)
    iso = {r.name: r for r in rep if r.name.startswith("isometry")}
    assert iso["isometry: S[0,0]' S[0,0] = I"].passed
    bad = iso["isometry: S[0,0]' S[0,1] = 0"]
    assert not bad.passed and bad.max_deviation == 1.0
    assert not a.verified


def test_covariance_vacuous_over_N():
    system = ProductSystem.over_N(1)
    a = GeneratorAssignment(system, {(0, 0): shift(5)}, np.diag([1, 1, 1, 1, 0]).astype(complex))
    assert check_representation(a).passed
    cov = check_covariance(a)
    assert cov.passed and "automatic" in cov.records[0].name


def test_commuting_isometries_that_are_not_covariant():
    # both generators act as the same shift: they commute but U* and V do not
    system = ProductSystem(N2, (1, 1))
    S = shift(6)
    a = GeneratorAssignment(system, {(0, 0): S, (1, 0): S}, np.diag([1, 1, 1, 1, 1, 0]).astype(complex))
    assert check_representation(a).passed
    cov = check_covariance(a)
    assert not cov.passed
    assert cov.max_deviation == 1.0


# -- alpha_phi and faithfulness ---------------------------------------------------------

def test_alpha_phi(trunc_n2_L2, rng):
    tr = trunc_n2_L2
    a = fock_assignment(tr)
    A = rng.normal(size=(a.space_dim,) * 2)
    np.testing.assert_allclose(alpha_phi(a, (0, 0), A), A)
    for s in tr.members:
        np.testing.assert_allclose(alpha_phi(a, s), fock.alpha(tr, s, fock.identity(tr)).dense(), atol=1e-12)
        np.testing.assert_allclose(alpha_phi(a, s, A), fock.alpha(tr, s, fock.FockOperator(A, tr)).dense(), atol=1e-12)
    for s, t in itertools.product(tr.members, repeat=2):
        st = N2.multiply(s, t)
        lhs = alpha_phi(a, s, alpha_phi(a, t))
        np.testing.assert_allclose(lhs, alpha_phi(a, st), atol=1e-12)


def test_nica_covariance_for_trivial_system():
    system = ProductSystem(N2, (1, 1))
    tr = build_truncation(system, 4)
    a = fock_assignment(tr)
    for s, t in itertools.product(N2.elements_up_to(2), repeat=2):
        lhs = alpha_phi(a, s) @ alpha_phi(a, t)
        np.testing.assert_allclose(lhs, alpha_phi(a, N2.join(s, t)), atol=1e-12)


def test_criterion_strings():
    assert criterion_string(ProductSystem(N2, (2, 3))) == (
        "(I - U_1U_1^* - U_2U_2^*)(I - V_1V_1^* - V_2V_2^* - V_3V_3^*) \\ne 0"
    )
    assert criterion_string(ProductSystem.over_N(2)) == "\\sum V_kV_k^* < I"
    assert criterion_string(ProductSystem(N2, (1, 1))) == "(I - UU^*)(I - VV^*) \\ne 0"


@pytest.mark.parametrize("name", ["trunc_n2_L2", "trunc_fp_L2"])
def test_fock_faithfulness_with_vacuum_witness(name, request, rng):
    tr = request.getfixturevalue(name)
    a = fock_assignment(tr)
    nonid = list(tr.members[1:])
    for _ in range(20):
        S = [nonid[i] for i in rng.choice(len(nonid), size=int(rng.integers(1, len(nonid) + 1)), replace=False)]
        ok, witness = check_faithfulness_criterion(a, S)
        assert ok
        np.testing.assert_array_equal(witness, tr.vacuum())


def test_criterion_monotone(trunc_n2_L2, rng):
    a = fock_assignment(trunc_n2_L2)
    nonid = list(trunc_n2_L2.members[1:])
    S = []
    prev = np.inf
    for k in rng.permutation(len(nonid)):
        S.append(nonid[k])
        norm = np.linalg.norm(faithfulness_product(a, S), 2)
        assert norm <= prev + 1e-12
        prev = norm


def test_unitary_fails_criterion():
    a = GeneratorAssignment(ProductSystem.over_N(1), {(0, 0): np.eye(1)})
    ok, witness = check_faithfulness_criterion(a, [(1,)])
    assert not ok and witness is None


def test_identity_rejected_in_S(trunc_n2_L2):
    with pytest.raises(ValueError):
        check_faithfulness_criterion(fock_assignment(trunc_n2_L2), [(0, 0)])
